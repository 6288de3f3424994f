"""Select the compiled kernels when available, else the pure-Python ones.

Set ``COMMONPAIRS_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pycore

core = _pycore
if os.environ.get("COMMONPAIRS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _core as core  # noqa: F811
    except ImportError:  # extension not built
        core = _pycore

BACKEND = core.BACKEND

# Largest magnitude the 64-bit block sum may reach.
_INT64_SAFE = 1 << 62


def canon_mask(n, mask):
    if n > 10 and core is not _pycore:
        return _pycore.canon_mask(n, mask)
    return core.canon_mask(n, mask)


def aut_count(n, mask):
    return core.aut_count(n, mask)


def orbit_sweep(n):
    return core.orbit_sweep(n)


def hom_inj_count(nh, h_edges, nj, j_adj):
    return core.hom_inj_count(nh, h_edges, nj, j_adj)


def block_sum(nv, pairs, mats, masses):
    """Exact integer block sum; uses the 64-bit kernel only when it cannot overflow."""
    if core is _pycore or nv > 16 or len(pairs) > 64:
        return _pycore.block_sum(nv, pairs, mats, masses)
    amax = max((abs(x) for mat in mats for row in mat for x in row), default=1) or 1
    wmax = max(abs(x) for x in masses) or 1
    bound = len(masses) ** nv * amax ** len(pairs) * wmax ** nv
    if bound >= _INT64_SAFE:
        return _pycore.block_sum(nv, pairs, mats, masses)
    return core.block_sum(nv, pairs, mats, masses)
