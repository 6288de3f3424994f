"""Exact verification of flag certificates, plus a floating search-and-round helper.

A certificate for ``(H1, H2)`` at ``(p1, 1 - p1)`` is four symmetric 8x8
rational matrices, one per flag row. It proves the pair common when every
matrix is PSD and every 5-vertex graph ``J`` has non-negative slack

    t_inj(H1, J) / (e1 p1^(e1-1)) + t_inj(H2, co-J) / (e2 p2^(e2-1))
      - sum_i <M_i, C_i(J)> - (p1 / e1 + p2 / e2).
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import CommonPairsError, ParseError
from .flags import FLAGS_PER_ROW, ROWS, gluing_table
from .graphs import Graph, canonical_form, complement, enumerate_classes, parse_graph, t_inj
from .kernels import parse_rational

MATRIX_SIZE = FLAGS_PER_ROW


def _check_matrix(mat, what="matrix") -> tuple:
    mat = tuple(tuple(Fraction(x) for x in row) for row in mat)
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise CommonPairsError(f"{what} is not square")
    for a in range(n):
        for b in range(a):
            if mat[a][b] != mat[b][a]:
                raise CommonPairsError(f"{what} is not symmetric at ({a + 1}, {b + 1})")
    return mat


@dataclass(frozen=True)
class Certificate:
    p1: Fraction
    h1: Graph
    h2: Graph
    matrices: tuple

    def __post_init__(self):
        p1 = Fraction(self.p1)
        if not 0 < p1 < 1:
            raise CommonPairsError(f"p1 = {p1} must lie strictly between 0 and 1")
        for name, h in (("h1", self.h1), ("h2", self.h2)):
            if h.e < 1:
                raise CommonPairsError(f"{name} has no edges")
            if h.n > 5:
                raise CommonPairsError(f"{name} has {h.n} > 5 vertices")
        if len(self.matrices) != ROWS:
            raise CommonPairsError(f"expected {ROWS} matrices, got {len(self.matrices)}")
        mats = tuple(_check_matrix(m, f"M{i + 1}") for i, m in enumerate(self.matrices))
        if any(len(m) != MATRIX_SIZE for m in mats):
            raise CommonPairsError(f"certificate matrices must be {MATRIX_SIZE}x{MATRIX_SIZE}")
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "matrices", mats)

    @property
    def p2(self) -> Fraction:
        return 1 - self.p1

    @property
    def rhs(self) -> Fraction:
        return self.p1 / self.h1.e + self.p2 / self.h2.e

    def with_matrices(self, matrices) -> Certificate:
        return Certificate(self.p1, self.h1, self.h2, matrices)

    def to_json(self) -> dict:
        return {
            "p1": str(self.p1),
            "h1": self.h1.to_json(),
            "h2": self.h2.to_json(),
            "matrices": [[[str(x) for x in row] for row in m] for m in self.matrices],
        }


def zero_matrices() -> tuple:
    zero = tuple(tuple(Fraction(0) for _ in range(MATRIX_SIZE)) for _ in range(MATRIX_SIZE))
    return (zero,) * ROWS


# -- exact PSD test -----------------------------------------------------------

@dataclass(frozen=True)
class PSDResult:
    psd: bool
    pivots: tuple
    witness: tuple | None = None  # z with z^T M z < 0 when not PSD
    reason: str = ""

    def __bool__(self):
        return self.psd


def psd_check(m) -> PSDResult:
    """Exact symmetric elimination ``T^T M T = D``.

    A zero pivot is accepted only when the rest of its row is zero; any
    failure comes with a rational vector ``z`` such that ``z^T M z < 0``.
    """
    m = _check_matrix(m)
    n = len(m)
    s = [list(row) for row in m]
    t = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    pivots = []

    def column(y):
        return tuple(sum(t[r][c] * y[c] for c in range(n)) for r in range(n))

    for k in range(n):
        d = s[k][k]
        if d < 0:
            y = [Fraction(0)] * n
            y[k] = Fraction(1)
            return PSDResult(False, tuple(pivots), column(y), f"negative pivot {d} at {k + 1}")
        if d == 0:
            for j in range(k + 1, n):
                if s[k][j]:
                    y = [Fraction(0)] * n
                    y[k] = -(s[j][j] + 1) / (2 * s[k][j])
                    y[j] = Fraction(1)
                    return PSDResult(False, tuple(pivots), column(y),
                                     f"zero pivot at {k + 1} with nonzero entry at {j + 1}")
            pivots.append(d)
            continue
        pivots.append(d)
        row = s[k][:]
        for j in range(k + 1, n):
            f = row[j] / d
            if not f:
                continue
            for r in range(n):
                t[r][j] -= f * t[r][k]
            for c in range(k + 1, n):
                s[j][c] -= f * row[c]
            s[j][k] = s[k][j] = Fraction(0)
    return PSDResult(True, tuple(pivots))


# -- slacks -------------------------------------------------------------------

def _density_term(h: Graph, j: Graph, p: Fraction) -> Fraction:
    return t_inj(h, j) / (h.e * p ** (h.e - 1))


def base_slack(cert: Certificate, j: Graph) -> Fraction:
    """Slack of ``j`` with all matrices zero."""
    return _density_term(cert.h1, j, cert.p1) + _density_term(cert.h2, complement(j), cert.p2) - cert.rhs


def base_slacks(cert: Certificate) -> tuple:
    return tuple(base_slack(cert, j) for j in enumerate_classes(5).graphs())


def flag_term(cert: Certificate, j: Graph) -> Fraction:
    mats = gluing_table().matrices(j)
    total = Fraction(0)
    for m, c in zip(cert.matrices, mats):
        for a in range(MATRIX_SIZE):
            for b in range(MATRIX_SIZE):
                if c[a][b]:
                    total += m[a][b] * c[a][b]
    return total


def slack(cert: Certificate, j: Graph) -> Fraction:
    if j.n != 5:
        raise CommonPairsError(f"slacks are defined for 5-vertex graphs, got {j.n}")
    return base_slack(cert, j) - flag_term(cert, j)


@dataclass
class VerificationReport:
    psd: tuple
    slacks: dict
    min_slack: Fraction
    equality_count: int
    verdict: str
    reason: str = ""

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "psd": [r.psd for r in self.psd],
            "min_slack": str(self.min_slack),
            "equality_count": self.equality_count,
            "slacks": {str(g): str(s) for g, s in self.slacks.items()},
        }


def verify(cert: Certificate) -> VerificationReport:
    psd = tuple(psd_check(m) for m in cert.matrices)
    slacks = {canonical_form(j): slack(cert, j) for j in enumerate_classes(5).graphs()}
    low = min(slacks.values())
    eq = sum(1 for s in slacks.values() if s == 0)
    reasons = [f"M{i + 1} not PSD ({r.reason})" for i, r in enumerate(psd) if not r.psd]
    if low < 0:
        worst = min(slacks, key=slacks.get)
        reasons.append(f"negative slack {low} at {worst}")
    verdict = "rejected" if reasons else "certified"
    return VerificationReport(psd, slacks, low, eq, verdict, "; ".join(reasons))


# -- files --------------------------------------------------------------------

def certificate_from_json(obj) -> Certificate:
    if not isinstance(obj, dict):
        raise ParseError("certificate must be a JSON object", "certificate")
    for key in ("p1", "h1", "h2", "matrices"):
        if key not in obj:
            raise ParseError(f"missing field {key!r}", "certificate")
    p1 = parse_rational(obj["p1"], "p1")
    h1, h2 = parse_graph(obj["h1"]), parse_graph(obj["h2"])
    mats = obj["matrices"]
    if not isinstance(mats, list):
        raise ParseError("matrices must be a list", "matrices")
    parsed = [
        [[parse_rational(x, f"matrices[{i}][{a}][{b}]") for b, x in enumerate(row)]
         for a, row in enumerate(m)]
        for i, m in enumerate(mats)
    ]
    return Certificate(p1, h1, h2, parsed)


def load_certificate(path) -> Certificate:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg})", f"line {exc.lineno}") from None
    return certificate_from_json(obj)


def save_certificate(cert: Certificate, path) -> None:
    Path(path).write_text(json.dumps(cert.to_json(), indent=1) + "\n")


def data_path(name: str) -> Path:
    """Location of a certificate shipped with the package."""
    return Path(__file__).with_name("data") / name


# -- floating search ----------------------------------------------------------

@dataclass
class FloatCertificate:
    p1: Fraction
    h1: Graph
    h2: Graph
    matrices: list  # four 8x8 nested lists of floats
    objective: float
    status: str = ""
    iterations: int = 0
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_certificate(cls, cert: Certificate) -> FloatCertificate:
        mats = [[[float(x) for x in row] for row in m] for m in cert.matrices]
        low = min(base_slack(cert, j) - flag_term(cert, j) for j in enumerate_classes(5).graphs())
        return cls(cert.p1, cert.h1, cert.h2, mats, float(low + cert.rhs), "exact")

    def to_json(self) -> dict:
        return {
            "p1": str(self.p1),
            "h1": self.h1.to_json(),
            "h2": self.h2.to_json(),
            "objective": self.objective,
            "status": self.status,
            "iterations": self.iterations,
            "matrices": self.matrices,
        }


def float_certificate_from_json(obj) -> FloatCertificate:
    try:
        mats = [[[float(x) for x in row] for row in m] for m in obj["matrices"]]
        return FloatCertificate(parse_rational(obj["p1"], "p1"), parse_graph(obj["h1"]),
                                parse_graph(obj["h2"]), mats, float(obj.get("objective", "nan")),
                                str(obj.get("status", "")), int(obj.get("iterations", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed float certificate ({exc})", "certificate") from None


def search(h1: Graph, h2: Graph, p1, iterations: int = 5000, seed: int = 0) -> FloatCertificate:
    """Best-effort numerical solution of the flag SDP: maximise ``t`` subject to
    ``t <= base(J) + rhs - <M, C(J)>`` for all 34 classes and ``M_i`` PSD.

    Uses the SCS splitting solver through cvxpy, warm-started from a seeded
    random PSD point. Nothing about the result is trusted; round it and
    ``verify``. ``iterations = 0`` skips the solver and returns zero matrices.
    """
    probe = Certificate(p1, h1, h2, zero_matrices())
    classes = enumerate_classes(5).graphs()
    base = [float(base_slack(probe, j) + probe.rhs) for j in classes]
    if iterations <= 0:
        zero = [[[0.0] * MATRIX_SIZE for _ in range(MATRIX_SIZE)] for _ in range(ROWS)]
        return FloatCertificate(probe.p1, h1, h2, zero, min(base), "not run", 0)
    try:
        import cvxpy as cp
        import numpy as np
    except ImportError:
        raise CommonPairsError("search needs numpy and cvxpy (install the 'search' extra)") from None

    table = gluing_table()
    coeffs = [[np.array(c, dtype=float) for c in table.matrices(j)] for j in classes]
    mats = [cp.Variable((MATRIX_SIZE, MATRIX_SIZE), PSD=True) for _ in range(ROWS)]
    t = cp.Variable()
    cons = [
        t <= base[s] - sum(cp.sum(cp.multiply(coeffs[s][i], mats[i])) for i in range(ROWS))
        for s in range(len(classes))
    ]
    rng = np.random.default_rng(seed)
    for var in mats:
        r = rng.standard_normal((MATRIX_SIZE, MATRIX_SIZE)) * 0.1
        var.value = r @ r.T
    problem = cp.Problem(cp.Maximize(t), cons)
    status = "error"
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # inaccuracy shows up in the status instead
            problem.solve(solver=cp.SCS, max_iters=int(iterations), eps_abs=1e-9, eps_rel=1e-9,
                          warm_start=True)
        status = str(problem.status)
    except cp.error.SolverError as exc:  # reported, not raised
        status = f"solver error: {exc}"
    if any(v.value is None for v in mats):
        zero = [[[0.0] * MATRIX_SIZE for _ in range(MATRIX_SIZE)] for _ in range(ROWS)]
        return FloatCertificate(probe.p1, h1, h2, zero, min(base), status, int(iterations))
    values = [((v.value + v.value.T) / 2).tolist() for v in mats]
    objective = min(
        base[s] - sum(float(np.sum(coeffs[s][i] * np.array(values[i]))) for i in range(ROWS))
        for s in range(len(classes))
    )
    return FloatCertificate(probe.p1, h1, h2, values, objective, status, int(iterations))


def round_certificate(fc: FloatCertificate, denominator: int) -> Certificate:
    """Symmetrise, then round every entry to the nearest multiple of ``1/denominator``."""
    if denominator < 1:
        raise CommonPairsError("denominator must be a positive integer")
    out = []
    for m in fc.matrices:
        n = len(m)
        out.append([[Fraction(round((m[a][b] + m[b][a]) / 2 * denominator), denominator)
                     for b in range(n)] for a in range(n)])
    return Certificate(fc.p1, fc.h1, fc.h2, out)


__all__ = [
    "Certificate", "FloatCertificate", "PSDResult", "VerificationReport",
    "base_slack", "base_slacks", "certificate_from_json", "data_path",
    "float_certificate_from_json", "load_certificate", "psd_check", "round_certificate",
    "flag_term", "save_certificate", "search", "slack", "verify", "zero_matrices",
]
