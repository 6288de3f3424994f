"""Step kernels with exact rational entries and their homomorphism densities.

A step kernel splits [0, 1] into ``m`` blocks of the given masses and is
constant on each product of blocks. Every number is a ``fractions.Fraction``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product

from . import _backend
from .errors import KernelError, ParseError
from .graphs import Graph, aut_count, strip_isolated

Rational = Fraction

MAX_ASSIGNMENTS = 10**9
MAX_TENSOR_BLOCKS = 4096


def parse_rational(obj, location=None) -> Fraction:
    """Read ``"a/b"``, ``"a"`` or an int. Floats are refused (they are not exact)."""
    if isinstance(obj, bool) or isinstance(obj, float):
        raise ParseError(f"expected an exact rational string, got {obj!r}", location)
    if isinstance(obj, (int, Fraction)):
        return Fraction(obj)
    if not isinstance(obj, str):
        raise ParseError(f"expected a rational string, got {type(obj).__name__}", location)
    try:
        return Fraction(obj.strip())
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {obj!r}", location) from None
    except ValueError:
        raise ParseError(f"not a rational: {obj!r}", location) from None


def format_rational(q) -> str:
    return str(Fraction(q))


@dataclass(frozen=True)
class StepKernel:
    masses: tuple
    values: tuple
    bounds: tuple | None = None

    def __post_init__(self):
        masses = tuple(Fraction(x) for x in self.masses)
        values = tuple(tuple(Fraction(x) for x in row) for row in self.values)
        m = len(masses)
        if m < 1:
            raise KernelError("a kernel needs at least one block")
        if len(values) != m or any(len(row) != m for row in values):
            raise KernelError(f"values must be a {m}x{m} matrix")
        if any(x < 0 for x in masses) or sum(masses) != 1:
            raise KernelError("block masses must be non-negative and sum to 1")
        for i in range(m):
            for j in range(i):
                if values[i][j] != values[j][i]:
                    raise KernelError(f"values not symmetric at ({i}, {j})")
        bounds = self.bounds
        if bounds is not None:
            lo, hi = (Fraction(x) for x in bounds)
            if lo > hi:
                raise KernelError("empty bounds interval")
            if any(not lo <= x <= hi for row in values for x in row):
                raise KernelError(f"values leave the declared range [{lo}, {hi}]")
            bounds = (lo, hi)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "bounds", bounds)

    @property
    def m(self) -> int:
        return len(self.masses)

    @cached_property
    def _integer_form(self):
        den = math.lcm(*(x.denominator for row in self.values for x in row))
        mden = math.lcm(*(x.denominator for x in self.masses))
        mat = [[int(x * den) for x in row] for row in self.values]
        w = [int(x * mden) for x in self.masses]
        return mat, w, den, mden

    def value_range(self) -> tuple[Fraction, Fraction]:
        flat = [x for row in self.values for x in row]
        return min(flat), max(flat)

    def is_graphon(self) -> bool:
        lo, hi = self.value_range()
        return lo >= 0 and hi <= 1

    def to_json(self) -> dict:
        out = {
            "masses": [str(x) for x in self.masses],
            "values": [[str(x) for x in row] for row in self.values],
        }
        if self.bounds is not None:
            out["bounds"] = [str(x) for x in self.bounds]
        return out


def kernel_from_json(obj) -> StepKernel:
    if not isinstance(obj, dict):
        raise ParseError("kernel must be a JSON object", "kernel")
    try:
        masses = [parse_rational(x, f"masses[{i}]") for i, x in enumerate(obj["masses"])]
        values = [[parse_rational(x, f"values[{i}][{j}]") for j, x in enumerate(row)]
                  for i, row in enumerate(obj["values"])]
    except KeyError as exc:
        raise ParseError(f"missing field {exc}", "kernel") from None
    bounds = obj.get("bounds")
    if bounds is not None:
        bounds = tuple(parse_rational(x, f"bounds[{i}]") for i, x in enumerate(bounds))
    return StepKernel(masses, values, bounds)


# -- constructions ------------------------------------------------------------

def constant(c, bounds=None) -> StepKernel:
    return StepKernel((1,), ((c,),), bounds)


def zero_kernel() -> StepKernel:
    return constant(0, (0, 0))


def kernel_B() -> StepKernel:
    """Two half blocks: -1 inside a block, +1 across."""
    h = Fraction(1, 2)
    return StepKernel((h, h), ((-1, 1), (1, -1)), (-1, 1))


def kernel_K() -> StepKernel:
    """Four quarter blocks: +1 inside a block, -1 across."""
    q = Fraction(1, 4)
    vals = tuple(tuple(1 if i == j else -1 for j in range(4)) for i in range(4))
    return StepKernel((q,) * 4, vals, (-1, 1))


def half_identity() -> StepKernel:
    """Graphon equal to 1 on the two diagonal half blocks and 0 across."""
    h = Fraction(1, 2)
    return StepKernel((h, h), ((1, 0), (0, 1)), (0, 1))


def scale(u: StepKernel, c) -> StepKernel:
    """The kernel ``c * u``."""
    c = Fraction(c)
    vals = [[c * x for x in row] for row in u.values]
    bounds = None
    if u.bounds is not None:
        lo, hi = c * u.bounds[0], c * u.bounds[1]
        bounds = (min(lo, hi), max(lo, hi))
    return StepKernel(u.masses, vals, bounds)


def affine_shift(u: StepKernel, p) -> StepKernel:
    """The kernel ``p + u``."""
    p = Fraction(p)
    vals = [[p + x for x in row] for row in u.values]
    bounds = None if u.bounds is None else (u.bounds[0] + p, u.bounds[1] + p)
    return StepKernel(u.masses, vals, bounds)


def complement_graphon(w: StepKernel) -> StepKernel:
    if not w.is_graphon():
        raise KernelError("complement needs a graphon (values in [0, 1])")
    return StepKernel(w.masses, [[1 - x for x in row] for row in w.values], (0, 1))


def scale_down(u: StepKernel, delta) -> StepKernel:
    """Squeeze ``u`` onto a ``delta`` fraction of [0, 1]; zero on the rest."""
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise KernelError(f"delta must lie in (0, 1], got {delta}")
    if delta == 1:
        return u
    m = u.m
    masses = [delta * x for x in u.masses] + [1 - delta]
    vals = [list(row) + [0] for row in u.values] + [[0] * (m + 1)]
    bounds = None
    if u.bounds is not None:
        bounds = (min(u.bounds[0], 0), max(u.bounds[1], 0))
    return StepKernel(masses, vals, bounds)


def tensor(u1: StepKernel, u2: StepKernel) -> StepKernel:
    """Block Kronecker product; block ``(i, j)`` has index ``i * u2.m + j``."""
    if u1.m * u2.m > MAX_TENSOR_BLOCKS:
        raise KernelError(f"tensor product would have {u1.m * u2.m} > {MAX_TENSOR_BLOCKS} blocks")
    pairs = list(product(range(u1.m), range(u2.m)))
    masses = [u1.masses[i] * u2.masses[j] for i, j in pairs]
    vals = [[u1.values[i][k] * u2.values[j][l] for k, l in pairs] for i, j in pairs]
    bounds = None
    if u1.bounds is not None and u2.bounds is not None:
        corners = [a * b for a in u1.bounds for b in u2.bounds]
        bounds = (min(corners), max(corners))
    return StepKernel(masses, vals, bounds)


def lift(u: StepKernel, position: int, partitions) -> StepKernel:
    """Re-express ``u`` on the product of several block partitions.

    ``partitions`` lists mass vectors; ``u`` must live on ``partitions[position]``.
    Blocks of the result are tuples in ``itertools.product`` order.
    """
    if tuple(partitions[position]) != u.masses:
        raise KernelError("kernel does not live on the named partition")
    cells = list(product(*(range(len(p)) for p in partitions)))
    masses = [math.prod(p[c[k]] for k, p in enumerate(partitions)) for c in cells]
    vals = [[u.values[a[position]][b[position]] for b in cells] for a in cells]
    return StepKernel(masses, vals, u.bounds)


def align(kernels) -> list[StepKernel]:
    """Put kernels on one common block structure (product of distinct partitions)."""
    parts = []
    for u in kernels:
        if u.masses not in parts:
            parts.append(u.masses)
    if len(parts) == 1:
        return list(kernels)
    return [lift(u, parts.index(u.masses), parts) for u in kernels]


# -- densities --------------------------------------------------------------

def _check_cost(m: int, nv: int):
    if m ** nv > MAX_ASSIGNMENTS:
        raise KernelError(f"{m}^{nv} block assignments exceed the {MAX_ASSIGNMENTS} cap")


def density(h: Graph, u: StepKernel) -> Fraction:
    """Homomorphism density ``t(h, u)`` as an exact rational."""
    f = strip_isolated(h)
    if f.n == 0:
        return Fraction(1)
    _check_cost(u.m, f.n)
    mat, w, den, mden = u._integer_form
    pairs = [(a - 1, b - 1, 0) for a, b in f.edges]
    total = _backend.block_sum(f.n, pairs, [mat], w)
    return Fraction(total, den ** f.e * mden ** f.n)


def tensor_power_density(h: Graph, u: StepKernel, m: int) -> Fraction:
    """``t(h, u^{(x)m}) = t(h, u)^m`` without building the power."""
    if m < 0:
        raise KernelError("tensor power must be non-negative")
    return density(h, u) ** m if m else Fraction(1)


def is_d_regular(u: StepKernel):
    """Common weighted row sum over positive-mass blocks, or ``None``."""
    sums = {
        sum(mu * x for mu, x in zip(u.masses, row))
        for mass, row in zip(u.masses, u.values) if mass > 0
    }
    return sums.pop() if len(sums) == 1 else None


def t_ind(j: Graph, w: StepKernel) -> Fraction:
    """Induced density: edges weighted by ``w``, non-edges by ``1 - w``."""
    if not w.is_graphon():
        raise KernelError("induced densities need a graphon (values in [0, 1])")
    if j.n == 0:
        return Fraction(1)
    _check_cost(w.m, j.n)
    mat, wts, den, mden = w._integer_form
    comp = [[den - x for x in row] for row in mat]
    pairs = [(a, b, 0 if j.has_edge(a + 1, b + 1) else 1)
             for b in range(j.n) for a in range(b)]
    total = _backend.block_sum(j.n, pairs, [mat, comp], wts)
    return Fraction(total, den ** len(pairs) * mden ** j.n)


def d_density(j: Graph, w: StepKernel) -> Fraction:
    """Probability that a ``w``-random graph on ``v(j)`` vertices is isomorphic to ``j``."""
    return Fraction(math.factorial(j.n), aut_count(j)) * t_ind(j, w)
