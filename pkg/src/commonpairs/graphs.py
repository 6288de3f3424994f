"""Small labelled graphs stored as edge bitmasks.

A graph on ``n <= 10`` vertices is the pair ``(n, mask)``. Vertices are
1-based in every public interface; internally pair ``{u, v}`` (0-based,
``u < v``) sits at bit ``v * (v - 1) // 2 + u``. That ordering does not
depend on ``n``, so adding vertices never moves existing bits.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import _backend
from ._pycore import mask_edges
from .errors import GraphError, ParseError

MAX_VERTICES = 10
MAX_ENUMERATION = 7


def _pidx(u: int, v: int) -> int:
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


@dataclass(frozen=True, order=True)
class Graph:
    n: int
    mask: int = 0

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise GraphError(f"vertex count {self.n} outside 0..{MAX_VERTICES}")
        if self.mask < 0 or self.mask >> (self.n * (self.n - 1) // 2):
            raise GraphError("edge mask uses pairs outside the vertex set")

    @classmethod
    def from_edges(cls, n: int, edges) -> Graph:
        if n < 1:
            raise GraphError("a graph needs at least one vertex")
        mask = 0
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n) or u == v:
                raise GraphError(f"bad edge ({u}, {v}) for n={n}")
            mask |= 1 << _pidx(u - 1, v - 1)
        return cls(n, mask)

    @property
    def v(self) -> int:
        return self.n

    @property
    def e(self) -> int:
        return bin(self.mask).count("1")

    @property
    def edges(self) -> list[tuple[int, int]]:
        """Edges as sorted 1-based pairs ``(u, v)`` with ``u < v``."""
        return sorted((u + 1, v + 1) for u, v in mask_edges(self.mask))

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and bool(self.mask >> _pidx(u - 1, v - 1) & 1)

    def adjacency(self) -> list[int]:
        """Neighbour bitsets, 0-based."""
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u - 1] |= 1 << (v - 1)
            adj[v - 1] |= 1 << (u - 1)
        return adj

    def degree(self, x: int) -> int:
        return bin(self.adjacency()[x - 1]).count("1")

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    def __str__(self) -> str:
        return f"{self.n}:" + ",".join(f"{u}-{v}" for u, v in self.edges)


# -- constructors -----------------------------------------------------------

def complete(n: int) -> Graph:
    return Graph(n, (1 << (n * (n - 1) // 2)) - 1)


def empty(n: int) -> Graph:
    return Graph(n, 0)


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycles need at least 3 vertices")
    return Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def star(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(1, i) for i in range(2, leaves + 2)])


_ATOM = re.compile(r"^(?:(\d+)\s*\*?\s*)?([KCPES])(\d+)$")


def parse_graph(obj) -> Graph:
    """Build a graph from JSON form or a shorthand string.

    Shorthands: ``K<n>``, ``C<n>``, ``P<n>`` (path on n vertices), ``E<n>``
    (edgeless), ``S<k>`` (star with k leaves), joined by ``+`` for disjoint
    union and prefixed by ``s*`` for ``s`` copies, e.g. ``"K3+K2"``, ``"2*C4"``.
    """
    if isinstance(obj, Graph):
        return obj
    if isinstance(obj, dict):
        try:
            n = int(obj["n"])
            edges = [(int(u), int(v)) for u, v in obj.get("edges", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed graph object ({exc})", "graph") from exc
        for u, v in edges:
            if u >= v:
                raise ParseError(f"edge [{u}, {v}] must satisfy u < v", "graph.edges")
        return Graph.from_edges(n, edges)
    if not isinstance(obj, str):
        raise ParseError(f"cannot read a graph from {type(obj).__name__}", "graph")
    result = None
    for part in obj.replace(" ", "").split("+"):
        m = _ATOM.match(part)
        if not m:
            raise ParseError(f"unknown graph shorthand {part!r}", "graph")
        copies = int(m.group(1) or 1)
        kind, size = m.group(2), int(m.group(3))
        atom = {"K": complete, "C": cycle, "P": path, "E": empty, "S": star}[kind](size)
        for _ in range(copies):
            result = atom if result is None else disjoint_union(result, atom)
    return result


# -- structure --------------------------------------------------------------

def relabel(g: Graph, perm) -> Graph:
    """Send vertex ``i`` (1-based) to ``perm[i - 1]``."""
    return Graph.from_edges(g.n, [(perm[u - 1], perm[v - 1]) for u, v in g.edges]) if g.n else g


def complement(g: Graph) -> Graph:
    return Graph(g.n, complete(g.n).mask ^ g.mask) if g.n else g


def disjoint_union(g: Graph, h: Graph) -> Graph:
    if g.n + h.n > MAX_VERTICES:
        raise GraphError(f"union would have {g.n + h.n} > {MAX_VERTICES} vertices")
    edges = g.edges + [(u + g.n, v + g.n) for u, v in h.edges]
    return Graph.from_edges(g.n + h.n, edges)


def multiple(g: Graph, s: int) -> Graph:
    """``s`` disjoint copies of ``g``."""
    if s < 1:
        raise GraphError("need at least one copy")
    out = g
    for _ in range(s - 1):
        out = disjoint_union(out, g)
    return out


def edge_subgraph(g: Graph, e_subset) -> Graph:
    """Spanning subgraph with the given edges (a bitmask or iterable of 1-based pairs)."""
    if isinstance(e_subset, int):
        mask = e_subset
    else:
        mask = 0
        for u, v in e_subset:
            mask |= 1 << _pidx(u - 1, v - 1)
    if mask & ~g.mask:
        raise GraphError("edge subset is not contained in the graph")
    return Graph(g.n, mask)


def isolated_count(g: Graph) -> int:
    return sum(1 for a in g.adjacency() if not a)


def strip_isolated(g: Graph) -> Graph:
    """Delete isolated vertices; survivors keep their relative order.

    An edgeless input gives the 0-vertex graph.
    """
    keep = [i + 1 for i, a in enumerate(g.adjacency()) if a]
    pos = {x: k + 1 for k, x in enumerate(keep)}
    if not keep:
        return Graph(0, 0)
    return Graph.from_edges(len(keep), [(pos[u], pos[v]) for u, v in g.edges])


def remove_vertex(g: Graph, w: int) -> Graph:
    rest = [x for x in range(1, g.n + 1) if x != w]
    pos = {x: k + 1 for k, x in enumerate(rest)}
    edges = [(pos[u], pos[v]) for u, v in g.edges if w not in (u, v)]
    return Graph.from_edges(g.n - 1, edges) if rest else Graph(0, 0)


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    adj = g.adjacency()
    seen, stack = 1, [0]
    while stack:
        x = stack.pop()
        fresh = adj[x] & ~seen
        seen |= fresh
        stack.extend(i for i in range(g.n) if fresh >> i & 1)
    return seen == (1 << g.n) - 1


def cycle_count(g: Graph, k: int) -> int:
    """Number of k-cycles of ``g`` counted as subgraphs."""
    if k < 3:
        raise GraphError("cycle length must be at least 3")
    adj = g.adjacency()
    total = 0

    def walk(start, last, used, length):
        nonlocal total
        if length == k:
            if adj[last] >> start & 1:
                total += 1
            return
        nxt = adj[last] & ~used
        for y in range(start + 1, g.n):
            if nxt >> y & 1:
                walk(start, y, used | (1 << y), length + 1)

    for s in range(g.n):
        walk(s, s, 1 << s, 1)
    return total // 2  # each cycle is walked in both directions


def girth(g: Graph) -> int | float:
    """Shortest cycle length, or ``math.inf`` for forests."""
    for k in range(3, g.n + 1):
        if cycle_count(g, k):
            return k
    return math.inf


def contains_k4(g: Graph) -> bool:
    adj = g.adjacency()
    for quad in combinations(range(g.n), 4):
        if all(adj[a] >> b & 1 for a, b in combinations(quad, 2)):
            return True
    return False


# -- isomorphism ------------------------------------------------------------

def canonical_form(g: Graph) -> Graph:
    """Relabelling with the smallest edge bitmask (exhaustive over all n!)."""
    if g.n <= 1:
        return g
    return Graph(g.n, _backend.canon_mask(g.n, g.mask))


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.e == h.e and canonical_form(g) == canonical_form(h)


def aut_count(g: Graph) -> int:
    return _backend.aut_count(g.n, g.mask) if g.n > 1 else 1


@dataclass(frozen=True)
class GraphClassTable:
    """All isomorphism classes on ``n`` vertices, ascending by canonical mask."""

    n: int
    classes: tuple[tuple[Graph, int], ...]
    index: dict = field(compare=False, repr=False)

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def graphs(self) -> list[Graph]:
        return [g for g, _ in self.classes]

    def position(self, g: Graph) -> int:
        return self.index[canonical_form(g).mask]


@lru_cache(maxsize=None)
def enumerate_classes(n: int) -> GraphClassTable:
    if not 1 <= n <= MAX_ENUMERATION:
        raise GraphError(f"enumeration supports 1 <= n <= {MAX_ENUMERATION}, got {n}")
    fact = math.factorial(n)
    classes = tuple((Graph(n, mask), fact // size) for mask, size in _backend.orbit_sweep(n))
    index = {g.mask: i for i, (g, _) in enumerate(classes)}
    return GraphClassTable(n, classes, index)


# -- injective homomorphisms -----------------------------------------------

def hom_inj_count(h: Graph, j: Graph) -> int:
    if h.n > j.n:
        raise GraphError(f"v(h)={h.n} exceeds v(j)={j.n}")
    h_edges = [(u - 1, v - 1) for u, v in h.edges]
    return _backend.hom_inj_count(h.n, h_edges, j.n, j.adjacency())


def t_inj(h: Graph, j: Graph) -> Fraction:
    """Probability that a uniform injection ``V(h) -> V(j)`` is a homomorphism."""
    count = hom_inj_count(h, j)
    return Fraction(count * math.factorial(j.n - h.n), math.factorial(j.n))
