"""Pure-Python hot kernels.

Mirror of ``_core.pyx``; every function here has an identically named,
identically behaving compiled twin.  Graphs are handled as edge bitmasks
where pair ``(u, v)`` with ``u < v`` (0-based) occupies bit
``v * (v - 1) // 2 + u``.
"""
from functools import lru_cache
from itertools import permutations

BACKEND = "python"


def pair_index(u, v):
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def mask_edges(mask):
    """Decode a bitmask into a list of 0-based ``(u, v)`` pairs."""
    out = []
    v = 1
    base = 0
    while mask >> base:
        for u in range(v):
            if mask >> (base + u) & 1:
                out.append((u, v))
        base += v
        v += 1
    return out


@lru_cache(maxsize=None)
def _pair_maps(n):
    pairs = [(u, v) for v in range(n) for u in range(v)]
    return tuple(
        tuple(pair_index(perm[u], perm[v]) for u, v in pairs)
        for perm in permutations(range(n))
    )


def _images(n, mask):
    edges = mask_edges(mask)
    if n <= 7:
        bits = [pair_index(u, v) for u, v in edges]
        for pm in _pair_maps(n):
            img = 0
            for b in bits:
                img |= 1 << pm[b]
            yield img
    else:
        for perm in permutations(range(n)):
            img = 0
            for u, v in edges:
                img |= 1 << pair_index(perm[u], perm[v])
            yield img


def canon_mask(n, mask):
    return min(_images(n, mask))


def aut_count(n, mask):
    return sum(1 for img in _images(n, mask) if img == mask)


def orbit_sweep(n):
    """All isomorphism classes on ``n`` vertices as ``(min_mask, orbit_size)``.

    Masks are scanned in ascending order, so the first unseen mask of an
    orbit is its minimum.
    """
    npairs = n * (n - 1) // 2
    seen = bytearray(1 << npairs)
    maps = _pair_maps(n)
    out = []
    for mask in range(1 << npairs):
        if seen[mask]:
            continue
        bits = [i for i in range(npairs) if mask >> i & 1]
        orbit = set()
        for pm in maps:
            img = 0
            for b in bits:
                img |= 1 << pm[b]
            orbit.add(img)
        for img in orbit:
            seen[img] = 1
        out.append((mask, len(orbit)))
    return out


def hom_inj_count(nh, h_edges, nj, j_adj):
    """Number of injective maps ``V(h) -> V(j)`` sending edges to edges.

    ``h_edges`` holds 0-based pairs; ``j_adj[x]`` is the neighbour bitset of x.
    """
    back = [[] for _ in range(nh)]
    for u, v in h_edges:
        if u > v:
            u, v = v, u
        back[v].append(u)
    image = [0] * nh

    def extend(x, used):
        if x == nh:
            return 1
        need = back[x]
        total = 0
        for y in range(nj):
            if used >> y & 1:
                continue
            adj = j_adj[y]
            if all(adj >> image[w] & 1 for w in need):
                image[x] = y
                total += extend(x + 1, used | (1 << y))
        return total

    return extend(0, 0)


def block_sum(nv, pairs, mats, masses):
    """Integer block-assignment sum.

    Returns the sum over all maps ``phi: range(nv) -> range(m)`` of
    ``prod(masses[phi(x)]) * prod(mats[s][phi(u)][phi(v)] for u, v, s in pairs)``.
    """
    m = len(masses)
    back = [[] for _ in range(nv)]
    for u, v, s in pairs:
        if u > v:
            u, v = v, u
        back[v].append((u, mats[s]))
    phi = [0] * nv

    def extend(x, acc):
        if x == nv:
            return acc
        total = 0
        need = back[x]
        for b in range(m):
            w = masses[b]
            if not w:
                continue
            w *= acc
            for u, mat in need:
                f = mat[phi[u]][b]
                if not f:
                    w = 0
                    break
                w *= f
            if w:
                phi[x] = b
                total += extend(x + 1, w)
        return total

    return extend(0, 1)
