"""The weighted monochromatic-density gap and explicit witnesses against it.

For colour classes ``(H_i, p_i, W_i)`` with ``sum p_i = 1`` and
``sum W_i = 1`` the gap is

    sum_i t(H_i, W_i) / (e(H_i) p_i^(e(H_i)-1)) - sum_i p_i / e(H_i).

A tuple of graphs is ``(p_1, ..., p_k)``-common iff the gap is non-negative
for every admissible choice of graphons; a witness is a concrete step
kernel making it negative.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import CommonPairsError, KernelError, PreconditionError
from .graphs import (
    Graph,
    canonical_form,
    complete,
    contains_k4,
    cycle_count,
    girth,
    is_isomorphic,
    mask_edges,
    strip_isolated,
)
from .kernels import (
    StepKernel,
    affine_shift,
    complement_graphon,
    density,
    half_identity,
    kernel_B,
    kernel_K,
    scale,
    scale_down,
)

DEFAULT_DELTAS = tuple(Fraction(1, 2**j) for j in range(1, 11))
DEFAULT_K4_DELTAS = tuple(Fraction(1, 2**j) for j in range(1, 7))
DEFAULT_TENSOR_K = tuple(range(1, 7))
MAX_SUBSET_EDGES = 12


def _check_p(p) -> Fraction:
    p = Fraction(p)
    if not 0 < p < 1:
        raise CommonPairsError(f"probability {p} must lie strictly between 0 and 1")
    return p


def _check_graph(h: Graph):
    if h.e < 1:
        raise CommonPairsError("graphs must have at least one edge")


@dataclass(frozen=True)
class ColourEntry:
    graph: Graph
    p: Fraction
    kernel: StepKernel


@dataclass(frozen=True)
class ColourSystem:
    """Colour classes ``(H_i, p_i, W_i)`` sharing one block structure."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(ColourEntry(g, Fraction(p), w) for g, p, w in self.entries)
        if len(entries) < 2:
            raise CommonPairsError("need at least two colours")
        for ent in entries:
            _check_graph(ent.graph)
            _check_p(ent.p)
            if not ent.kernel.is_graphon():
                raise KernelError("every colour kernel must be a graphon")
        if sum(ent.p for ent in entries) != 1:
            raise CommonPairsError("colour probabilities must sum to 1")
        masses = entries[0].kernel.masses
        if any(ent.kernel.masses != masses for ent in entries):
            raise KernelError("colour kernels must share one block structure (use ColourSystem.build)")
        m = len(masses)
        for a in range(m):
            for b in range(m):
                if sum(ent.kernel.values[a][b] for ent in entries) != 1:
                    raise KernelError(f"colour kernels do not sum to 1 on block ({a}, {b})")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def build(cls, entries) -> ColourSystem:
        """Like the constructor, but first moves kernels onto a common refinement."""
        from .kernels import align

        entries = list(entries)
        kernels = align([w for _, _, w in entries])
        return cls(tuple((g, p, w) for (g, p, _), w in zip(entries, kernels)))

    @classmethod
    def from_pair(cls, h1: Graph, h2: Graph, p1, w1: StepKernel) -> ColourSystem:
        p1 = Fraction(p1)
        return cls(((h1, p1, w1), (h2, 1 - p1, complement_graphon(w1))))

    @property
    def k(self) -> int:
        return len(self.entries)


def gap_from_densities(terms) -> Fraction:
    """Gap from ``(t(H_i, W_i), e(H_i), p_i)`` triples."""
    terms = list(terms)
    lhs = sum(Fraction(t) / (e * Fraction(p) ** (e - 1)) for t, e, p in terms)
    rhs = sum(Fraction(p) / e for _, e, p in terms)
    return lhs - rhs


def commonality_gap(sys: ColourSystem) -> Fraction:
    return gap_from_densities(
        (density(ent.graph, ent.kernel), ent.graph.e, ent.p) for ent in sys.entries
    )


# -- edge-subset expansion ----------------------------------------------------

def _shape(f: Graph) -> Graph:
    f = strip_isolated(f)
    return canonical_form(f) if f.n <= 7 else f


@lru_cache(maxsize=4096)
def subset_profile(h: Graph) -> tuple:
    """``((|E|, shape of H[E] without isolated vertices), multiplicity)`` over all E."""
    if h.e > MAX_SUBSET_EDGES:
        raise CommonPairsError(f"{h.e} edges exceed the {MAX_SUBSET_EDGES}-edge subset limit")
    bits = [1 << i for i in range(h.mask.bit_length()) if h.mask >> i & 1]
    counts = Counter()
    for sel in range(1 << len(bits)):
        mask = 0
        for i, b in enumerate(bits):
            if sel >> i & 1:
                mask |= b
        counts[(len([1 for i in range(len(bits)) if sel >> i & 1]), _shape(Graph(h.n, mask)))] += 1
    return tuple(sorted(counts.items(), key=lambda kv: (kv[0][0], kv[0][1].n, kv[0][1].mask)))


def subset_sums(h: Graph, u: StepKernel, cache=None) -> dict:
    """``{j: sum of t(H[E], u) over |E| = j}``."""
    cache = {} if cache is None else cache
    out = {}
    for (size, shape), mult in subset_profile(h):
        if shape not in cache:
            cache[shape] = density(shape, u)
        out[size] = out.get(size, 0) + mult * cache[shape]
    return out


def _weighted_tail(sums: dict, e: int, p: Fraction, sign: int, start: int) -> Fraction:
    total = Fraction(0)
    for size, s in sums.items():
        if size >= start:
            total += (sign ** size) * s / (e * p ** (size - 1))
    return total


def expansion_functional(h1: Graph, h2: Graph, p1, u: StepKernel) -> Fraction:
    """Gap of ``(W_1, W_2) = (p_1 + u, p_2 - u)`` written through edge subsets of size >= 2."""
    _check_graph(h1)
    _check_graph(h2)
    p1 = _check_p(p1)
    p2 = 1 - p1
    lo, hi = u.value_range()
    if lo < -p1 or hi > p2:
        raise KernelError(f"kernel range [{lo}, {hi}] not inside [-{p1}, {p2}]")
    cache = {}
    s1 = subset_sums(h1, u, cache)
    s2 = subset_sums(h2, u, cache)
    return _weighted_tail(s1, h1.e, p1, 1, 2) + _weighted_tail(s2, h2.e, p2, -1, 2)


def expansion_identity_check(h: Graph, p, u: StepKernel) -> tuple[Fraction, Fraction]:
    """``(t(h, p + u), sum_E p^(e-|E|) t(h[E], u))``; the two must agree."""
    if h.e > MAX_SUBSET_EDGES:
        raise CommonPairsError(f"{h.e} edges exceed the {MAX_SUBSET_EDGES}-edge subset limit")
    p = Fraction(p)
    lhs = density(h, affine_shift(u, p))
    rhs = sum(p ** (h.e - size) * s for size, s in subset_sums(h, u).items())
    return lhs, Fraction(rhs)


# -- the p candidate for odd girth -------------------------------------------

@dataclass(frozen=True)
class CandidateP:
    k: int
    alpha_power: Fraction  # alpha^(k-1)
    p_float: float
    p_exact: Fraction | None  # set when alpha is rational


def _rational_root(q: Fraction, r: int) -> Fraction | None:
    def iroot(n):
        x = round(n ** (1.0 / r)) if n else 0
        for c in (x - 1, x, x + 1):
            if c >= 0 and c ** r == n:
                return c
        lo, hi = 0, n + 1
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** r < n:
                lo = mid + 1
            else:
                hi = mid
        return lo if lo ** r == n else None

    a, b = iroot(q.numerator), iroot(q.denominator)
    return None if a is None or b is None else Fraction(a, b)


def candidate_p(h1: Graph, h2: Graph) -> CandidateP | None:
    """Only ``p`` at which two odd-girth graphs can form a common pair, or None if girths differ."""
    g1, g2 = girth(h1), girth(h2)
    for g in (g1, g2):
        if g == math.inf or g % 2 == 0:
            raise CommonPairsError(f"both graphs need finite odd girth (got {g1}, {g2})")
    if g1 != g2:
        return None
    k = g1
    alpha_power = Fraction(cycle_count(h2, k) * h1.e, cycle_count(h1, k) * h2.e)
    alpha = _rational_root(alpha_power, k - 1)
    p_exact = None if alpha is None else 1 / (alpha + 1)
    p_float = float(p_exact) if p_exact is not None else 1.0 / (float(alpha_power) ** (1.0 / (k - 1)) + 1.0)
    return CandidateP(k, alpha_power, p_float, p_exact)


# -- witnesses ----------------------------------------------------------------

@dataclass
class WitnessReport:
    kind: str
    value: Fraction
    verdict: str
    delta: Fraction | None = None
    k: int | None = None
    parameters: dict = field(default_factory=dict)
    tallies: dict = field(default_factory=dict)
    sweep: list = field(default_factory=list)
    system: ColourSystem | None = field(default=None, repr=False)

    @property
    def negative(self) -> bool:
        return self.verdict == "negative"

    def to_json(self) -> dict:
        def enc(x):
            return str(x) if isinstance(x, Fraction) else x

        return {
            "kind": self.kind,
            "delta": None if self.delta is None else str(self.delta),
            "k": self.k,
            "value": str(self.value),
            "verdict": self.verdict,
            "parameters": {key: enc(v) for key, v in self.parameters.items()},
            "tallies": {key: enc(v) for key, v in self.tallies.items()},
        }


def _finish(kind, sweep, parameters, tallies, builder=None) -> WitnessReport:
    """First negative grid point, else the smallest value seen."""
    hit = next((row for row in sweep if row[2] < 0), None)
    row = hit if hit is not None else min(sweep, key=lambda r: r[2])
    delta, k, value = row
    report = WitnessReport(kind, value, "negative" if value < 0 else "non-negative",
                           delta, k, parameters, tallies, sweep)
    if builder is not None:
        report.system = builder(delta)
    return report


def _nonisolated(f: Graph) -> int:
    return strip_isolated(f).n


def _count_large_subsets(h: Graph, threshold: int) -> int:
    return sum(mult for (size, shape), mult in subset_profile(h) if size and shape.n >= threshold)


def girth_witness(h1: Graph, h2: Graph, p1, delta_grid=DEFAULT_DELTAS) -> WitnessReport:
    """Sweep ``U = +-p * B^delta`` (``p = min(p1, p2)``) looking for a negative functional.

    Requires the shorter odd girth ``k`` on one side with a strictly larger
    normalised ``c_k`` there; the sign of ``U`` follows which side that is.
    """
    _check_graph(h1)
    _check_graph(h2)
    p1 = _check_p(p1)
    p2 = 1 - p1
    g1, g2 = girth(h1), girth(h2)
    k = min(g1, g2)
    if k == math.inf or k % 2 == 0:
        raise PreconditionError(f"shorter girth must be finite and odd (got {g1}, {g2})")
    lhs = Fraction(cycle_count(h1, k), h1.e) / p1 ** (k - 1)
    rhs = Fraction(cycle_count(h2, k), h2.e) / p2 ** (k - 1)
    if lhs > rhs:
        sign = 1
    elif rhs > lhs:
        sign = -1
    else:
        raise PreconditionError(
            f"normalised {k}-cycle counts are equal ({lhs}); the construction is not guaranteed"
        )
    p = min(p1, p2)
    base = scale(kernel_B(), sign * p)
    sweep = []
    for delta in delta_grid:
        u = scale_down(base, delta)
        sweep.append((Fraction(delta), None, expansion_functional(h1, h2, p1, u)))
    tallies = {
        "k": k,
        "c_k(H1)": cycle_count(h1, k),
        "c_k(H2)": cycle_count(h2, k),
        "b1": _count_large_subsets(h1, k + 1),
        "b2": _count_large_subsets(h2, k + 1),
    }
    params = {"p1": p1, "p": p, "sign": sign}
    return _finish("girth", sweep, params, tallies,
                   lambda d: ColourSystem.from_pair(h1, h2, p1, affine_shift(scale_down(base, d), p1)))


def _tensor_profile(h: Graph):
    """``(|E|, non-isolated count, t(H[E]*, K), multiplicity)`` for non-empty E."""
    K = kernel_K()
    cache = {}
    rows = []
    for (size, shape), mult in subset_profile(h):
        if size == 0:
            continue
        if shape not in cache:
            cache[shape] = density(shape, K)
        rows.append((size, shape.n, cache[shape], mult))
    return rows


def tensor_functional(h1: Graph, h2: Graph, p1, delta, k: int) -> Fraction:
    """Expansion functional at ``U = p * (K^(2k+1))^delta`` via the closed form
    ``t(F, U) = p^e(F) delta^(v-i) t(F, K)^(2k+1)``."""
    p1 = _check_p(p1)
    p2 = 1 - p1
    p = min(p1, p2)
    delta = Fraction(delta)
    total = Fraction(0)
    for h, pi, sign in ((h1, p1, 1), (h2, p2, -1)):
        for size, nv, tk, mult in _tensor_profile(h):
            if size < 2:
                continue
            t = p ** size * delta ** nv * tk ** (2 * k + 1)
            total += mult * sign ** size * t / (h.e * pi ** (size - 1))
    return total


def k4_kernel(p, k: int, delta) -> StepKernel:
    """Materialise ``p * (K^(2k+1))^delta``; only sensible for k <= 1."""
    from .kernels import tensor

    u = kernel_K()
    for _ in range(2 * k):
        u = tensor(u, kernel_K())
    return scale_down(scale(u, p), delta)


def k4_witness(h1: Graph, h2: Graph, p1, delta_grid=DEFAULT_K4_DELTAS,
               k_grid=DEFAULT_TENSOR_K) -> WitnessReport:
    """Sweep ``(delta, k)`` for a negative functional at a scaled odd tensor power of K."""
    _check_graph(h1)
    _check_graph(h2)
    p1 = _check_p(p1)
    if not (contains_k4(h1) or contains_k4(h2)):
        raise PreconditionError("neither graph contains K4")
    k4 = complete(4)
    tallies = {}
    for idx, h in ((1, h1), (2, h2)):
        b = s = n = 0
        for (size, shape), mult in subset_profile(h):
            if size == 0:
                continue
            if shape.n >= 5:
                b += mult
            elif is_isomorphic(shape, k4):
                n += mult
            elif not (shape.n == 2 and shape.e == 1):
                s += mult
        tallies.update({f"b{idx}": b, f"s{idx}": s, f"n{idx}": n})
    sweep = [(Fraction(d), k, tensor_functional(h1, h2, p1, d, k))
             for d in delta_grid for k in k_grid]
    params = {"p1": p1, "p": min(p1, 1 - p1)}
    return _finish("k4", sweep, params, tallies)


def multicolour_girth_witness(h1: Graph, h2: Graph, h3: Graph, ps,
                              delta_grid=DEFAULT_DELTAS) -> WitnessReport:
    """Three colours: ``U = 2p B^delta`` on the dominant colour, ``-p B^delta`` on the others."""
    graphs = (h1, h2, h3)
    ps = tuple(_check_p(p) for p in ps)
    if len(ps) != 3 or sum(ps) != 1:
        raise CommonPairsError("need three probabilities summing to 1")
    for h in graphs:
        _check_graph(h)
    k = min(girth(h) for h in graphs)
    if k == math.inf or k % 2 == 0:
        raise PreconditionError(f"minimum girth must be finite and odd (got {k})")
    key = [Fraction(cycle_count(h, k), h.e) / p ** (k - 1) for h, p in zip(graphs, ps)]
    order = sorted(range(3), key=lambda i: -key[i])
    p = min(ps) / 2
    coeff = [Fraction(0)] * 3
    coeff[order[0]] = 2 * p
    coeff[order[1]] = coeff[order[2]] = -p
    B = kernel_B()

    def kernels(delta):
        return [scale(scale_down(B, delta), c) for c in coeff]

    sweep = []
    for delta in delta_grid:
        value = Fraction(0)
        for h, pi, u in zip(graphs, ps, kernels(delta)):
            value += _weighted_tail(subset_sums(h, u), h.e, pi, 1, 1)
        sweep.append((Fraction(delta), None, value))
    tallies = {"k": k, **{f"c_k(H{i + 1})": cycle_count(h, k) for i, h in enumerate(graphs)},
               **{f"b{i + 1}": _count_large_subsets(h, k + 1) for i, h in enumerate(graphs)}}
    params = {"p": p, "dominant": order[0] + 1}

    def build(delta):
        return ColourSystem(tuple((h, pi, affine_shift(u, pi))
                                  for h, pi, u in zip(graphs, ps, kernels(delta))))

    return _finish("multicolour", sweep, params, tallies, build)


def extend_witness_colour(sys: ColourSystem, q_next, h_next: Graph) -> ColourSystem:
    """Add a colour of constant density ``q_next``, shrinking the others by ``1 - q_next``.

    The gap of the result is ``(1 - q_next)`` times the gap of ``sys``.
    """
    q = Fraction(q_next)
    if not 0 < q < 1:
        raise CommonPairsError(f"q_next must lie strictly between 0 and 1, got {q}")
    masses = sys.entries[0].kernel.masses
    m = len(masses)
    new = [(ent.graph, (1 - q) * ent.p, scale(ent.kernel, 1 - q)) for ent in sys.entries]
    new.append((h_next, q, StepKernel(masses, [[q] * m for _ in range(m)], (0, 1))))
    return ColourSystem(tuple(new))


def half_identity_witness(p) -> dict:
    """``(C4, C5)`` at ``(p, 1 - p)`` against the two-clique graphon."""
    from .graphs import cycle

    p = _check_p(p)
    sys = ColourSystem.from_pair(cycle(4), cycle(5), p, half_identity())
    gap = commonality_gap(sys)
    poly = 40 * p**4 + 32 * (1 - p) * p**3 - 5
    return {
        "p": p,
        "gap": gap,
        "verdict": "negative" if gap < 0 else "non-negative",
        "polynomial": poly,
        "polynomial_sign": (poly > 0) - (poly < 0),
    }


__all__ = [
    "CandidateP", "ColourEntry", "ColourSystem", "WitnessReport",
    "candidate_p", "commonality_gap", "expansion_functional", "expansion_identity_check",
    "extend_witness_colour", "gap_from_densities", "girth_witness", "half_identity_witness",
    "k4_kernel", "k4_witness", "multicolour_girth_witness", "subset_profile", "subset_sums",
    "tensor_functional",
]
