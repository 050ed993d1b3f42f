"""Ordered forests, the Arnold basis they index, and the n = 4 kernel ladder.

An ordered forest on ``{1..n}`` is a directed graph whose edges ``i -> j``
all have ``i < j`` and whose vertices have in-degree at most one.  Edges are
always kept sorted by terminal vertex; that order fixes the sign of the
corresponding cohomology generator.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .linalg import integer_rank

Edge = tuple[int, int]


@dataclass(frozen=True, order=True)
class OrderedForest:
    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"vertex count must be positive, got {self.n}")
        edges = tuple(sorted((tuple(map(int, e)) for e in self.edges), key=lambda e: (e[1], e[0])))
        object.__setattr__(self, "edges", edges)
        heads = set()
        for i, j in edges:
            if not 1 <= i < j <= self.n:
                raise ValueError(f"edge {i}->{j} is not of the form i < j within 1..{self.n}")
            if j in heads:
                raise ValueError(f"vertex {j} has in-degree > 1")
            heads.add(j)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def parent(self, j: int) -> int | None:
        for a, b in self.edges:
            if b == j:
                return a
        return None

    def without_edge(self, index: int) -> "OrderedForest":
        return OrderedForest(self.n, self.edges[:index] + self.edges[index + 1:])

    def components(self) -> list[set[int]]:
        """Connected components of the underlying undirected graph."""
        parent = list(range(self.n + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            parent[find(a)] = find(b)
        groups: dict[int, set[int]] = {}
        for v in range(1, self.n + 1):
            groups.setdefault(find(v), set()).add(v)
        return sorted(groups.values(), key=min)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: Mapping) -> "OrderedForest":
        return cls(int(data["n"]), tuple(tuple(e) for e in data["edges"]))

    def __str__(self):
        body = ", ".join(f"{a}->{b}" for a, b in self.edges)
        return "{" + body + "}"


@dataclass(frozen=True)
class ComponentProfile:
    """Sizes of the non-isolated components of a forest."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if any(p < 2 for p in parts):
            raise ValueError("component sizes must be at least 2")
        object.__setattr__(self, "parts", parts)

    @property
    def edge_count(self) -> int:
        return sum(m - 1 for m in self.parts)

    @property
    def vertex_count(self) -> int:
        return sum(self.parts)


@dataclass
class CohomClass:
    """Integer combination of ordered forests of one edge count."""

    n: int
    degree: int
    terms: dict[OrderedForest, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for g, c in self.terms.items():
            if g.n != self.n or g.num_edges != self.degree:
                raise ValueError(f"forest {g} does not live in H^{self.degree}(Conf_{self.n})")
            if c:
                clean[g] = int(c)
        self.terms = clean

    @classmethod
    def basis(cls, forest: OrderedForest) -> "CohomClass":
        return cls(forest.n, forest.num_edges, {forest: 1})

    def _check_compatible(self, other: "CohomClass"):
        if (self.n, self.degree) != (other.n, other.degree):
            raise ValueError("classes live in different groups")

    def __add__(self, other: "CohomClass") -> "CohomClass":
        self._check_compatible(other)
        out = Counter(self.terms)
        out.update(other.terms)
        return CohomClass(self.n, self.degree, dict(out))

    def __neg__(self) -> "CohomClass":
        return CohomClass(self.n, self.degree, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other: "CohomClass") -> "CohomClass":
        return self + (-other)

    def __rmul__(self, k: int) -> "CohomClass":
        return CohomClass(self.n, self.degree, {g: k * c for g, c in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, CohomClass):
            return NotImplemented
        return (self.n, self.degree, self.terms) == (other.n, other.degree, other.terms)

    def coefficient_sum(self) -> int:
        return sum(self.terms.values())

    def vector(self, basis: list[OrderedForest]) -> list[int]:
        index = {g: i for i, g in enumerate(basis)}
        v = [0] * len(basis)
        for g, c in self.terms.items():
            v[index[g]] = c
        return v

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "terms": [{"forest": g.to_json(), "coeff": c} for g, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "CohomClass":
        terms = {OrderedForest.from_json(t["forest"]): int(t["coeff"]) for t in data["terms"]}
        if not terms:
            raise ValueError("cannot infer n from an empty class")
        n = next(iter(terms)).n
        return cls(n, int(data["degree"]), terms)


def enumerate_forests(n: int, j: int) -> list[OrderedForest]:
    """All ordered forests on ``n`` vertices with exactly ``j`` edges.

    Sorted lexicographically on the edge list (edges sorted by terminal vertex).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0 <= j <= n - 1:
        raise ValueError(f"edge count must lie in 0..{n - 1}, got {j}")
    out = []
    for heads in itertools.combinations(range(2, n + 1), j):
        for parents in itertools.product(*(range(1, h) for h in heads)):
            out.append(OrderedForest(n, tuple(zip(parents, heads))))
    out.sort(key=lambda g: g.edges)
    return out


def count_forests(n: int, j: int) -> int:
    """Number of ordered forests with ``j`` edges, without enumerating them."""
    # coefficient of t^j in (1 + t)(1 + 2t)...(1 + (n-1)t)
    poly = [1]
    for k in range(1, n):
        poly = [a + k * b for a, b in zip(poly + [0], [0] + poly)]
    return poly[j] if 0 <= j < len(poly) else 0


def component_profile(g: OrderedForest) -> ComponentProfile:
    return ComponentProfile(tuple(len(c) for c in g.components() if len(c) >= 2))


def _is_tree_on_all(g: OrderedForest) -> bool:
    return g.num_edges == g.n - 1 and len(g.components()) == 1


def top_kernel_element(t: OrderedForest) -> CohomClass:
    """Alternating sum of the three 2-edge subforests of a 4-vertex tree.

    Deleting edge k (0-based, terminal-vertex order) contributes sign (-1)^k,
    which is the pullback of the degree-2 kernel generator of the torus minus
    its small diagonal.
    """
    if t.num_edges != 3 or not _is_tree_on_all(t):
        raise ValueError(f"{t} is not a connected 3-edge ordered forest")
    out = CohomClass(t.n, 2)
    for k in range(3):
        out = out + (-1) ** k * CohomClass.basis(t.without_edge(k))
    return out


def shared_vertex_difference(g: OrderedForest) -> CohomClass:
    """``(first edge) - (second edge)`` for two edges meeting at a vertex."""
    if g.num_edges != 2:
        raise ValueError("need a 2-edge forest")
    (a, b), (c, d) = g.edges
    if len({a, b} & {c, d}) != 1:
        raise ValueError(f"edges of {g} do not share exactly one vertex")
    first = OrderedForest(g.n, ((a, b),))
    second = OrderedForest(g.n, ((c, d),))
    return CohomClass.basis(first) - CohomClass.basis(second)


LADDER_THRESHOLDS = (0.25, 1.0 / 3.0, 1.0 / (1.0 + math.sqrt(2.0)))


def kernel_generators_n4(r: float) -> dict[int, list[CohomClass]]:
    """Known generators of the kernel of restriction to Conf_{4,r}, by degree."""
    if r <= 0:
        raise ValueError("radius must be positive")
    gens: dict[int, list[CohomClass]] = {d: [] for d in range(4)}
    quarter, third, square = LADDER_THRESHOLDS
    if r > quarter:
        for t in enumerate_forests(4, 3):
            gens[3].append(CohomClass.basis(t))
            gens[2].append(top_kernel_element(t))
    if r > third:
        for g in enumerate_forests(4, 2):
            (a, b), (c, d) = g.edges
            if len({a, b} & {c, d}) == 1:
                gens[2].append(CohomClass.basis(g))
                gens[1].append(shared_vertex_difference(g))
    if r > square:
        # Conf_{4,r} is empty: everything dies
        for d in range(4):
            gens[d].extend(CohomClass.basis(g) for g in enumerate_forests(4, d))
    return gens


def kernel_ladder_n4(r: float) -> tuple[int, int, int, int]:
    """Dimensions of the kernel in degrees 0..3 at radius ``r``."""
    gens = kernel_generators_n4(r)
    dims = []
    for d in range(4):
        basis = enumerate_forests(4, d)
        rows = [c.vector(basis) for c in gens[d]]
        dims.append(integer_rank(rows) if rows else 0)
    return tuple(dims)


def rank_of_classes(classes: Iterable[CohomClass]) -> int:
    classes = list(classes)
    if not classes:
        return 0
    n, degree = classes[0].n, classes[0].degree
    basis = enumerate_forests(n, degree)
    return integer_rank([c.vector(basis) for c in classes])
