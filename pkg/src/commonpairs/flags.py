"""Rooted 4-vertex flags (three roots plus one apex) and their gluing coefficients.

Flag ``F(i, a)``: roots 1, 2, 3 carry ``i - 1`` edges (row 1 none, row 2
``12``, row 3 ``12, 13``, row 4 the triangle); the apex 4 is adjacent to the
``a``-th subset in the order ``{}, {1}, {2}, {3}, {1,2}, {1,3}, {2,3}, {1,2,3}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

from .errors import CommonPairsError, GraphError, OrderingError
from .graphs import Graph, aut_count, canonical_form, enumerate_classes
from .kernels import StepKernel, d_density

ROWS = 4
FLAGS_PER_ROW = 8
ROOT_EDGES = (
    (),
    ((1, 2),),
    ((1, 2), (1, 3)),
    ((1, 2), (1, 3), (2, 3)),
)
APEX_SUBSETS = ((), (1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3))


@dataclass(frozen=True)
class Flag:
    row: int
    index: int

    def __post_init__(self):
        if not 1 <= self.row <= ROWS or not 1 <= self.index <= FLAGS_PER_ROW:
            raise CommonPairsError(f"flag ({self.row}, {self.index}) out of range")

    @property
    def root_edges(self) -> tuple:
        return ROOT_EDGES[self.row - 1]

    @property
    def apex_adjacency(self) -> tuple:
        return APEX_SUBSETS[self.index - 1]

    def graph(self) -> Graph:
        return Graph.from_edges(4, list(self.root_edges) + [(x, 4) for x in self.apex_adjacency])


def flag(i: int, a: int) -> Flag:
    return Flag(i, a)


def root_graph(i: int) -> Graph:
    return Graph.from_edges(3, ROOT_EDGES[i - 1])


def glue(fa: Flag, fb: Flag) -> tuple[Graph, Graph]:
    """``(J_p, J_q)``: roots shared, apexes become 4 and 5; ``J_q`` adds the edge 45."""
    if fa.row != fb.row:
        raise CommonPairsError(f"cannot glue flags from rows {fa.row} and {fb.row}")
    edges = list(fa.root_edges)
    edges += [(x, 4) for x in fa.apex_adjacency]
    edges += [(x, 5) for x in fb.apex_adjacency]
    jp = Graph.from_edges(5, edges)
    return jp, Graph.from_edges(5, edges + [(4, 5)])


def coefficient(fa: Flag, fb: Flag, j: Graph) -> Fraction:
    if j.n != 5:
        raise GraphError(f"gluing targets have 5 vertices, got {j.n}")
    jp, jq = glue(fa, fb)
    cj = canonical_form(j)
    if cj in (canonical_form(jp), canonical_form(jq)):
        return Fraction(aut_count(j), 120)
    return Fraction(0)


@dataclass(frozen=True)
class GluingTable:
    """Nonzero coefficients keyed by ``(i, a, b, canonical J)``; absent keys are 0."""

    entries: dict

    def get(self, i: int, a: int, b: int, j: Graph) -> Fraction:
        return self.entries.get((i, a, b, canonical_form(j)), Fraction(0))

    def matrices(self, j: Graph) -> tuple:
        """The four 8x8 coefficient matrices ``c(F(i,a), F(i,b), J)`` for one J."""
        return _class_matrices(canonical_form(j))

    def to_json(self) -> list:
        return [
            {"i": i, "a": a, "b": b, "graph": str(g), "coefficient": str(c)}
            for (i, a, b, g), c in sorted(self.entries.items(), key=lambda kv: kv[0])
        ]


@lru_cache(maxsize=1)
def gluing_table() -> GluingTable:
    entries = {}
    for i in range(1, ROWS + 1):
        for a in range(1, FLAGS_PER_ROW + 1):
            for b in range(1, FLAGS_PER_ROW + 1):
                for jx in glue(flag(i, a), flag(i, b)):
                    entries[(i, a, b, canonical_form(jx))] = Fraction(aut_count(jx), 120)
    return GluingTable(entries)


@lru_cache(maxsize=64)
def _class_matrices(cj: Graph) -> tuple:
    table = gluing_table()
    return tuple(
        tuple(tuple(table.entries.get((i, a, b, cj), Fraction(0))
                    for b in range(1, FLAGS_PER_ROW + 1))
              for a in range(1, FLAGS_PER_ROW + 1))
        for i in range(1, ROWS + 1)
    )


def _ind_factor(w: StepKernel, x: int, y: int, edge: bool) -> Fraction:
    val = w.values[x][y]
    return val if edge else 1 - val


def product_integral_check(fa: Flag, fb: Flag, w: StepKernel) -> tuple[Fraction, Fraction]:
    """Both sides of the flag-product double count for one pair of flags.

    The left side integrates ``t(F_a) t(F_b) / t(F_i)`` over root blocks where
    the root pattern is nonzero; the right side contracts the gluing table
    against the 5-vertex induced densities.
    """
    if fa.row != fb.row:
        raise CommonPairsError(f"cannot multiply flags from rows {fa.row} and {fb.row}")
    if not w.is_graphon():
        raise CommonPairsError("flag products need a graphon")
    m = w.m
    roots = root_graph(fa.row)
    root_pairs = [(0, 1), (0, 2), (1, 2)]
    root_edge = [roots.has_edge(x + 1, y + 1) for x, y in root_pairs]

    def apex_part(f: Flag, r) -> Fraction:
        total = Fraction(0)
        for z in range(m):
            term = w.masses[z]
            for x in range(3):
                term *= _ind_factor(w, r[x], z, (x + 1) in f.apex_adjacency)
                if not term:
                    break
            total += term
        return total

    lhs = Fraction(0)
    for r in product(range(m), repeat=3):
        mass = w.masses[r[0]] * w.masses[r[1]] * w.masses[r[2]]
        if not mass:
            continue
        pattern = Fraction(1)
        for (x, y), edge in zip(root_pairs, root_edge):
            pattern *= _ind_factor(w, r[x], r[y], edge)
        if not pattern:
            continue
        ta = pattern * apex_part(fa, r)
        tb = pattern * apex_part(fb, r)
        lhs += mass * ta * tb / pattern

    table = gluing_table()
    rhs = Fraction(0)
    for j, _ in enumerate_classes(5):
        c = table.get(fa.row, fa.index, fb.index, j)
        if c:
            rhs += c * d_density(j, w)
    return lhs, rhs


# -- symmetries and ordering recovery ----------------------------------------

def position_permutation(root_perm) -> tuple:
    """Flag positions (0-based) permuted by relabelling the roots via ``root_perm``."""
    index = {frozenset(s): k for k, s in enumerate(APEX_SUBSETS)}
    return tuple(index[frozenset(root_perm[x - 1] for x in s)] for s in APEX_SUBSETS)


def row_symmetries(i: int) -> list[tuple]:
    """Position permutations induced by root relabellings that fix row ``i``'s root graph."""
    roots = root_graph(i)
    out = []
    for perm in permutations((1, 2, 3)):
        image = Graph.from_edges(3, [(perm[u - 1], perm[v - 1]) for u, v in roots.edges])
        if image == roots:
            out.append(position_permutation(perm))
    return out


def permute_matrix(mat, pi) -> tuple:
    """``new[a][b] = old[pi[a]][pi[b]]``."""
    return tuple(tuple(mat[pi[a]][pi[b]] for b in range(len(pi))) for a in range(len(pi)))


def _size_preserving_perms() -> list[tuple]:
    groups = [(0,), (1, 2, 3), (4, 5, 6), (7,)]
    perms = []
    for p1 in permutations(groups[1]):
        for p2 in permutations(groups[2]):
            perms.append((0,) + p1 + p2 + (7,))
    return perms


@dataclass(frozen=True)
class OrderingResult:
    permutations: tuple  # one 0-based position permutation per row
    matrices: tuple

    @property
    def is_identity(self) -> bool:
        return all(p == tuple(range(FLAGS_PER_ROW)) for p in self.permutations)

    @property
    def moved(self) -> int:
        return sum(1 for p in self.permutations for k, x in enumerate(p) if k != x)


def ordering_recovery(certs) -> OrderingResult:
    """Find within-row flag permutations under which the first certificate is
    tight on all 34 graphs (and any further certificates still verify).

    Only permutations preserving apex-subset size are searched (36 per row);
    rows 1-2 are matched against rows 3-4 through a hash of slack vectors.
    Among solutions the one moving the fewest positions wins.
    """
    from .certificate import Certificate, base_slacks, verify

    if isinstance(certs, Certificate):
        certs = [certs]
    certs = list(certs)
    if not certs:
        raise OrderingError("no certificate supplied")
    main = certs[0]
    classes = enumerate_classes(5).graphs()
    mats = [_class_matrices(canonical_form(j)) for j in classes]
    base = base_slacks(main)  # slack with zero matrices, per class
    perms = _size_preserving_perms()

    def row_vector(i, pi):
        m = permute_matrix(main.matrices[i], pi)
        return tuple(
            sum(m[a][b] * cm[i][a][b] for a in range(8) for b in range(8) if cm[i][a][b])
            for cm in mats
        )

    vecs = [[row_vector(i, pi) for pi in perms] for i in range(ROWS)]
    left = {}
    for x, y in product(range(len(perms)), repeat=2):
        key = tuple(u + v for u, v in zip(vecs[0][x], vecs[1][y]))
        left.setdefault(key, []).append((x, y))
    solutions = []
    for z, t in product(range(len(perms)), repeat=2):
        need = tuple(b - u - v for b, u, v in zip(base, vecs[2][z], vecs[3][t]))
        for x, y in left.get(need, ()):
            solutions.append((perms[x], perms[y], perms[z], perms[t]))

    def cost(sol):
        return (sum(1 for p in sol for k, v in enumerate(p) if k != v), sol)

    for sol in sorted(solutions, key=cost):
        fixed = tuple(permute_matrix(main.matrices[i], sol[i]) for i in range(ROWS))
        ok = True
        for other in certs[1:]:
            moved = tuple(permute_matrix(other.matrices[i], sol[i]) for i in range(ROWS))
            if verify(other.with_matrices(moved)).verdict != "certified":
                ok = False
                break
        if ok:
            return OrderingResult(sol, fixed)
    raise OrderingError("no size-preserving flag permutation makes every slack vanish")


__all__ = [
    "APEX_SUBSETS", "Flag", "GluingTable", "OrderingResult", "ROOT_EDGES",
    "coefficient", "flag", "glue", "gluing_table", "ordering_recovery", "permute_matrix",
    "position_permutation", "product_integral_check", "root_graph", "row_symmetries",
]
