"""
Prime-field hot loops: Gauss-Jordan elimination and monomial evaluation on
int64 arrays. Each kernel has a loop form compiled by numba and a vectorised
numpy form; ``rref_modp`` / ``eval_monomials_modp`` pick one according to
``JIT_ENABLED``.

Moduli must satisfy p < 2**31 so that products of two residues fit in int64.
"""

import numpy as np

from ._jit import JIT_ENABLED, njit

MAX_KERNEL_PRIME = 2**31


def _check_modulus(p):
    if not 2 <= p < MAX_KERNEL_PRIME:
        raise ValueError(f"kernel modulus must lie in [2, 2**31), got {p}")


# --- Gauss-Jordan mod p -----------------------------------------------------


def _powmod(b, e, p):
    r = 1
    b = b % p
    while e > 0:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r


_powmod_jit = njit(cache=True)(_powmod)


@njit(cache=True)
def _rref_modp_loops(a, p):
    m, n = a.shape
    pivots = np.empty(min(m, n), dtype=np.int64)
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        inv = _powmod_jit(a[r, c], p - 2, p)
        for j in range(c, n):
            a[r, j] = (a[r, j] * inv) % p
        for i in range(m):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            for j in range(c, n):
                a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return r, pivots[:r]


def _rref_modp_numpy(a, p):
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = _powmod(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        f = a[:, c].copy()
        f[r] = 0
        a[:, c:] = (a[:, c:] - (f[:, None] * a[r, c:][None, :]) % p) % p
        pivots.append(c)
        r += 1
    return r, np.array(pivots, dtype=np.int64)


def rref_modp(a, p, use_jit=None):
    """Reduced row echelon form of ``a`` over GF(p).

    Returns ``(rank, echelon, pivot_cols)``; ``a`` is not modified.
    """
    _check_modulus(p)
    work = np.array(a, dtype=np.int64, copy=True) % p
    if work.ndim != 2:
        raise ValueError("expected a 2-d array")
    if use_jit is None:
        use_jit = JIT_ENABLED
    if use_jit:
        rank, piv = _rref_modp_loops(work, np.int64(p))
    else:
        rank, piv = _rref_modp_numpy(work, p)
    return int(rank), work, [int(c) for c in piv]


# --- monomial evaluation mod p ----------------------------------------------


@njit(cache=True)
def _eval_monomials_loops(points, exps, p):
    m, n = points.shape
    l = exps.shape[0]
    maxdeg = 0
    for k in range(l):
        for v in range(n):
            if exps[k, v] > maxdeg:
                maxdeg = exps[k, v]
    out = np.empty((m, l), dtype=np.int64)
    powers = np.empty((n, maxdeg + 1), dtype=np.int64)
    for i in range(m):
        for v in range(n):
            powers[v, 0] = 1
            for e in range(1, maxdeg + 1):
                powers[v, e] = (powers[v, e - 1] * points[i, v]) % p
        for k in range(l):
            acc = 1
            for v in range(n):
                acc = (acc * powers[v, exps[k, v]]) % p
            out[i, k] = acc
    return out


def _eval_monomials_numpy(points, exps, p):
    m, n = points.shape
    l = exps.shape[0]
    out = np.ones((m, l), dtype=np.int64)
    if m == 0 or l == 0:
        return out
    maxdeg = int(exps.max()) if exps.size else 0
    # powers[v, e, i] = points[i, v]**e mod p
    powers = np.ones((n, maxdeg + 1, m), dtype=np.int64)
    for e in range(1, maxdeg + 1):
        powers[:, e, :] = (powers[:, e - 1, :] * points.T) % p
    for v in range(n):
        out = (out * powers[v, exps[:, v], :].T) % p
    return out


def eval_monomials_modp(points, exps, p, use_jit=None):
    """Matrix of monomials (rows of ``exps``) evaluated at ``points`` mod p."""
    _check_modulus(p)
    pts = np.array(points, dtype=np.int64).reshape(len(points), -1) % p
    ex = np.array(exps, dtype=np.int64).reshape(len(exps), -1)
    if use_jit is None:
        use_jit = JIT_ENABLED
    if use_jit:
        return _eval_monomials_loops(pts, ex, np.int64(p))
    return _eval_monomials_numpy(pts, ex, p)
