"""Pairings between torus homology classes and ordered-forest classes.

Convention used throughout: a permutation ``sigma`` acts on a configuration
by relabelling, ``(sigma . x)_i = x_{sigma(i)}``.  Under this action the
forest ``G`` evaluated on ``sigma . q_n`` sees the graph with an edge
``sigma(i) -> sigma(j)`` for every edge ``i -> j`` of ``G`` (see
:func:`sigma_apply`), and a nonzero pairing needs ``sigma`` to preserve the
order of both endpoints of every edge.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

from .forests import OrderedForest, enumerate_forests
from .linalg import bareiss_det, solve_rational

MAX_MATRIX_N = 7


@dataclass(frozen=True, order=True)
class Permutation:
    """A permutation of ``1..n`` given by its image list."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        images = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                images[a - 1] = b
        return cls(tuple(images))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.images, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """``(self o other)(i) = self(other(i))``."""
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def sign(self) -> int:
        seen = [False] * self.n
        s = 1
        for start in range(self.n):
            if seen[start]:
                continue
            length = 0
            i = start
            while not seen[i]:
                seen[i] = True
                i = self.images[i] - 1
                length += 1
            if length % 2 == 0:
                s = -s
        return s

    def extend(self, l: int) -> "Permutation":
        """Insert a new last element mapped to ``l``, shifting images >= l up."""
        n = self.n + 1
        if not 2 <= l <= n:
            raise ValueError(f"insertion value must lie in 2..{n}")
        images = tuple(v if v < l else v + 1 for v in self.images) + (l,)
        return Permutation(images)

    def label(self) -> str:
        return "".join(map(str, self.images)) if self.n < 10 else "-".join(map(str, self.images))

    def __str__(self):
        return "[" + " ".join(map(str, self.images)) + "]"


def permutations_fixing_one(n: int) -> list[Permutation]:
    """Permutations of ``1..n`` with ``sigma(1) = 1``, lexicographic by images."""
    if n < 1:
        raise ValueError("n must be positive")
    return [Permutation((1,) + p) for p in itertools.permutations(range(2, n + 1))]


def sigma_apply(sigma: Permutation, g: OrderedForest) -> tuple[list[tuple[int, int]], bool]:
    """Relabel ``g`` by ``sigma``; return the raw edge list and whether it is an ordered forest."""
    if sigma.n != g.n:
        raise ValueError("size mismatch")
    edges = [(sigma(i), sigma(j)) for i, j in g.edges]
    heads = [j for _, j in edges]
    ordered = all(i < j for i, j in edges) and len(set(heads)) == len(heads)
    return edges, ordered


def pairing_forest_qn(g: OrderedForest, sigma: Permutation) -> int:
    """Degree of ``alpha_G`` on the torus class ``sigma . q_n``."""
    if sigma.n != g.n:
        raise ValueError(f"forest on {g.n} vertices paired with permutation of {sigma.n}")
    if g.num_edges != g.n - 1:
        raise ValueError("need an (n-1)-edge forest")
    if sigma(1) != 1:
        raise ValueError("permutation must fix 1")
    if any(sigma(i) > sigma(j) for i, j in g.edges):
        return 0
    return sigma.sign()


@dataclass
class PairingMatrix:
    n: int
    rows: list[OrderedForest]
    cols: list[Permutation]
    entries: list[list[int]]

    @property
    def size(self) -> int:
        return len(self.rows)

    def det(self) -> int:
        return bareiss_det(self.entries)

    def column(self, sigma: Permutation) -> list[int]:
        j = self.cols.index(sigma)
        return [row[j] for row in self.entries]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["forest"] + [p.label() for p in self.cols])
        for g, row in zip(self.rows, self.entries):
            w.writerow([str(g)] + row)
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rows": [g.to_json() for g in self.rows],
            "cols": [list(p.images) for p in self.cols],
            "entries": self.entries,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PairingMatrix":
        return cls(
            int(data["n"]),
            [OrderedForest.from_json(g) for g in data["rows"]],
            [Permutation(tuple(p)) for p in data["cols"]],
            [list(map(int, row)) for row in data["entries"]],
        )


def dual_basis_matrix(n: int) -> PairingMatrix:
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > MAX_MATRIX_N:
        raise OverflowError(
            f"dual basis matrix for n={n} has {math.factorial(n - 1)}^2 entries; limit is n={MAX_MATRIX_N}"
        )
    rows = enumerate_forests(n, n - 1)
    cols = permutations_fixing_one(n)
    entries = [[pairing_forest_qn(g, s) for s in cols] for g in rows]
    return PairingMatrix(n, rows, cols, entries)


@lru_cache(maxsize=None)
def _dual_expansion(g: OrderedForest) -> tuple[tuple[Permutation, int], ...]:
    n = g.n
    if n <= 2:
        return ((Permutation.identity(n), 1),)
    k = g.parent(n)
    smaller = OrderedForest(n - 1, tuple(e for e in g.edges if e[1] != n))
    out: dict[Permutation, int] = {}
    for sigma, a in _dual_expansion(smaller):
        sk = sigma(k)
        up = sigma.extend(sk + 1)
        out[up] = out.get(up, 0) + a
        if k > 1:
            down = sigma.extend(sk)
            out[down] = out.get(down, 0) - a
    return tuple(sorted((p, c) for p, c in out.items() if c))


def dual_expansion(g: OrderedForest) -> dict[Permutation, int]:
    """Coefficients of the dual element ``G*`` in the signed basis ``sign(s) * s.q_n``.

    Built by inserting vertex ``n`` one step at a time: if ``k -> n`` is the
    last edge, each term ``s`` of the smaller expansion becomes
    ``s^(s(k)+1) - s^(s(k))`` (only the first term when ``k = 1``).
    """
    if g.num_edges != g.n - 1:
        raise ValueError("need an (n-1)-edge forest")
    return dict(_dual_expansion(g))


def dual_expansion_by_solve(g: OrderedForest) -> dict[Permutation, int]:
    """Same coefficients as :func:`dual_expansion`, from an exact linear solve."""
    m = dual_basis_matrix(g.n)
    target = [1 if h == g else 0 for h in m.rows]
    unsigned = solve_rational(m.entries, target)
    out = {}
    for sigma, c in zip(m.cols, unsigned):
        if c.denominator != 1:
            raise ArithmeticError(f"non-integral dual coefficient {c} for {sigma}")
        if c:
            out[sigma] = int(c) * sigma.sign()
    return out


def pair_expansion(h: OrderedForest, coeffs: Mapping[Permutation, int]) -> int:
    """Pair forest ``h`` with ``sum a_s * sign(s) * s.q_n``."""
    return sum(a * sigma.sign() * pairing_forest_qn(h, sigma) for sigma, a in coeffs.items())


def pairing_hhat(g: OrderedForest, a: int, b: int) -> int:
    """Degree of ``alpha_G`` on the 2-torus class that spins disk ``b`` about disk ``a``.

    Zero unless ``a -> b`` is an edge of ``G``; then ``+1`` when it is the
    second edge in terminal-vertex order and ``-1`` when it is the first.
    """
    if g.num_edges != 2:
        raise ValueError("need a 2-edge forest")
    if not 1 <= a < b <= g.n:
        raise ValueError(f"need 1 <= a < b <= {g.n}")
    if (a, b) not in g.edges:
        return 0
    return 1 if g.edges.index((a, b)) == 1 else -1


def matrix_to_json_text(m: PairingMatrix) -> str:
    return json.dumps(m.to_json(), sort_keys=True)
