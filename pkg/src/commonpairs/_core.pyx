# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same API as ``_pycore``.

``block_sum`` works in 64-bit integers. Callers must guarantee the result
and every partial product fit (see ``_backend.block_sum``).
"""
from libc.stdlib cimport malloc, free

BACKEND = "cython"

cdef enum:
    MAXV = 16


cdef inline int _pidx(int u, int v) nogil:
    cdef int t
    if u > v:
        t = u
        u = v
        v = t
    return v * (v - 1) // 2 + u


cdef bint _next_perm(int* a, int n) nogil:
    cdef int i = n - 2
    cdef int j, t
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = n - 1
    while a[j] <= a[i]:
        j -= 1
    t = a[i]; a[i] = a[j]; a[j] = t
    i += 1
    j = n - 1
    while i < j:
        t = a[i]; a[i] = a[j]; a[j] = t
        i += 1
        j -= 1
    return True


cdef int _decode(unsigned long long mask, int* eu, int* ev) nogil:
    cdef int ne = 0
    cdef int u, v = 1, base = 0
    while base < 64 and (mask >> base):
        for u in range(v):
            if (mask >> (base + u)) & 1ULL:
                eu[ne] = u
                ev[ne] = v
                ne += 1
        base += v
        v += 1
    return ne


def canon_mask(int n, unsigned long long mask):
    cdef int perm[MAXV]
    cdef int eu[64]
    cdef int ev[64]
    cdef int ne, k, i
    cdef unsigned long long best = mask, img
    ne = _decode(mask, eu, ev)
    for i in range(n):
        perm[i] = i
    with nogil:
        while True:
            img = 0
            for k in range(ne):
                img |= 1ULL << _pidx(perm[eu[k]], perm[ev[k]])
            if img < best:
                best = img
            if not _next_perm(perm, n):
                break
    return best


def aut_count(int n, unsigned long long mask):
    cdef int perm[MAXV]
    cdef int eu[64]
    cdef int ev[64]
    cdef int ne, k, i
    cdef long long count = 0
    cdef unsigned long long img
    ne = _decode(mask, eu, ev)
    for i in range(n):
        perm[i] = i
    with nogil:
        while True:
            img = 0
            for k in range(ne):
                img |= 1ULL << _pidx(perm[eu[k]], perm[ev[k]])
            if img == mask:
                count += 1
            if not _next_perm(perm, n):
                break
    return count


def orbit_sweep(int n):
    cdef int npairs = n * (n - 1) // 2
    cdef unsigned long long total = 1ULL << npairs
    cdef unsigned long long mask, img
    cdef int perm[MAXV]
    cdef int bits[64]
    cdef int nb, i, k, u, v
    cdef long long nperm = 1, p, size
    cdef int* maps
    cdef unsigned char* seen
    for i in range(2, n + 1):
        nperm *= i
    maps = <int*>malloc(nperm * npairs * sizeof(int))
    seen = <unsigned char*>malloc(total)
    out = []
    try:
        for i in range(n):
            perm[i] = i
        p = 0
        while True:
            k = 0
            for v in range(n):
                for u in range(v):
                    maps[p * npairs + k] = _pidx(perm[u], perm[v])
                    k += 1
            p += 1
            if not _next_perm(perm, n):
                break
        for mask in range(total):
            seen[mask] = 0
        for mask in range(total):
            if seen[mask]:
                continue
            nb = 0
            for i in range(npairs):
                if (mask >> i) & 1ULL:
                    bits[nb] = i
                    nb += 1
            size = 0
            for p in range(nperm):
                img = 0
                for k in range(nb):
                    img |= 1ULL << maps[p * npairs + bits[k]]
                if not seen[img]:
                    seen[img] = 1
                    size += 1
            out.append((mask, size))
    finally:
        free(maps)
        free(seen)
    return out


def hom_inj_count(int nh, h_edges, int nj, j_adj):
    cdef int back[MAXV][MAXV]
    cdef int nback[MAXV]
    cdef unsigned int adj[MAXV]
    cdef int image[MAXV]
    cdef int cursor[MAXV]
    cdef int x, y, k, u, v, ok
    cdef unsigned int used = 0
    cdef long long total = 0
    if nh == 0:
        return 1
    for x in range(nh):
        nback[x] = 0
    for u, v in h_edges:
        if u > v:
            u, v = v, u
        back[v][nback[v]] = u
        nback[v] += 1
    for y in range(nj):
        adj[y] = j_adj[y]
    with nogil:
        x = 0
        cursor[0] = 0
        while x >= 0:
            y = cursor[x]
            if y >= nj:
                x -= 1
                if x >= 0:
                    used &= ~(1u << image[x])
                    cursor[x] += 1
                continue
            ok = not ((used >> y) & 1u)
            if ok:
                for k in range(nback[x]):
                    if not ((adj[y] >> image[back[x][k]]) & 1u):
                        ok = 0
                        break
            if not ok:
                cursor[x] += 1
                continue
            if x == nh - 1:
                total += 1
                cursor[x] += 1
                continue
            image[x] = y
            used |= 1u << y
            x += 1
            cursor[x] = 0
    return total


def block_sum(int nv, pairs, mats, masses):
    cdef int m = len(masses)
    cdef int nmat = len(mats)
    cdef long long* vals
    cdef long long* w
    cdef int bu[MAXV][64]
    cdef int bs[MAXV][64]
    cdef int nb[MAXV]
    cdef int phi[MAXV]
    cdef long long acc[MAXV + 1]
    cdef int x, b, k, s, u, v, i, j
    cdef long long t, f, total = 0
    if nv == 0:
        return 1
    vals = <long long*>malloc(nmat * m * m * sizeof(long long))
    w = <long long*>malloc(m * sizeof(long long))
    try:
        for s in range(nmat):
            mat = mats[s]
            for i in range(m):
                row = mat[i]
                for j in range(m):
                    vals[(s * m + i) * m + j] = row[j]
        for i in range(m):
            w[i] = masses[i]
        for x in range(nv):
            nb[x] = 0
        for u, v, s in pairs:
            if u > v:
                u, v = v, u
            bu[v][nb[v]] = u
            bs[v][nb[v]] = s
            nb[v] += 1
        with nogil:
            x = 0
            phi[0] = -1
            acc[0] = 1
            while x >= 0:
                phi[x] += 1
                b = phi[x]
                if b >= m:
                    x -= 1
                    continue
                t = w[b]
                if t == 0:
                    continue
                t *= acc[x]
                for k in range(nb[x]):
                    f = vals[(bs[x][k] * m + phi[bu[x][k]]) * m + b]
                    if f == 0:
                        t = 0
                        break
                    t *= f
                if t == 0:
                    continue
                if x == nv - 1:
                    total += t
                    continue
                acc[x + 1] = t
                x += 1
                phi[x] = -1
    finally:
        free(vals)
        free(w)
    return total
