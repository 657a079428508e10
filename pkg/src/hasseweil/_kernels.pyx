# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled point-counting kernel (hot loop of the a_p sweep).

Mirrors `_kernels_py`; primes must fit in 31 bits so that intermediate
products stay inside 64-bit arithmetic.
"""

from libc.stdlib cimport calloc, free

IMPLEMENTATION = "cython"

MAX_PRIME = (1 << 31) - 1


def count_points_mod_p(a1, a2, a3, a4, a6, p):
    """#E(F_p) including the point at infinity, on the reduction mod p."""
    if p > MAX_PRIME:
        raise OverflowError(f"compiled kernel limited to p <= {MAX_PRIME}")
    if p == 2:
        return _count_mod_2(a1 % 2, a2 % 2, a3 % 2, a4 % 2, a6 % 2)
    return _count_odd(a1 % p, a2 % p, a3 % p, a4 % p, a6 % p, p)


def ap_sweep(a1, a2, a3, a4, a6, primes):
    """p + 1 - #E(F_p) for each listed prime."""
    return [p + 1 - count_points_mod_p(a1, a2, a3, a4, a6, p) for p in primes]


def _count_mod_2(long a1, long a2, long a3, long a4, long a6):
    cdef long count = 1, x, y, rhs
    for x in range(2):
        rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2
        for y in range(2):
            if (y * y + a1 * x * y + a3 * y) % 2 == rhs:
                count += 1
    return count


def _count_odd(long long a1, long long a2, long long a3,
               long long a4, long long a6, long long p):
    cdef unsigned char * sq = <unsigned char *> calloc(p, 1)
    if sq == NULL:
        raise MemoryError()
    cdef long long y, x, x2, rhs, b, d, count
    try:
        for y in range((p + 1) // 2):
            sq[(y * y) % p] = 1
        count = p + 1
        for x in range(p):
            x2 = (x * x) % p
            rhs = (x2 * ((x + a2) % p) + a4 * x + a6) % p
            b = (a1 * x + a3) % p
            d = (b * b + 4 * rhs) % p
            if d != 0:
                count += 1 if sq[d] else -1
        return count
    finally:
        free(sq)


# -- baby-step giant-step order finding (large good primes) -------------------

cdef long long _powmod(long long b, long long e, long long p) nogil:
    cdef long long r = 1
    b %= p
    while e:
        if e & 1:
            r = (r * b) % p
        b = (b * b) % p
        e >>= 1
    return r


cdef int _legendre_c(long long a, long long p) nogil:
    a %= p
    if a == 0:
        return 0
    return 1 if _powmod(a, (p - 1) // 2, p) == 1 else -1


cdef long long _sqrt_mod_c(long long a, long long p) nogil:
    """Square root of a quadratic residue mod odd prime p."""
    cdef long long q, z, m, c, t, r, b, tt
    cdef long long i
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return _powmod(a, (p + 1) // 4, p)
    q = p - 1
    m = 0
    while q % 2 == 0:
        q //= 2
        m += 1
    z = 2
    while _legendre_c(z, p) != -1:
        z += 1
    c = _powmod(z, q, p)
    t = _powmod(a, q, p)
    r = _powmod(a, (q + 1) // 2, p)
    while t != 1:
        i = 0
        tt = t
        while tt != 1:
            tt = (tt * tt) % p
            i += 1
        b = _powmod(c, 1 << (m - i - 1), p)
        m = i
        c = (b * b) % p
        t = (t * c) % p
        r = (r * b) % p
    return r


cdef struct Pt:
    long long x
    long long y
    int inf


cdef Pt _pt_add(Pt P, Pt Q, long long A, long long p) nogil:
    # all coordinates kept fully reduced in [0, p) so products stay < 2^62
    cdef Pt R
    cdef long long lam, x3, num, den, t
    if P.inf:
        return Q
    if Q.inf:
        return P
    if P.x == Q.x:
        if (P.y + Q.y) % p == 0:
            R.inf = 1
            R.x = 0
            R.y = 0
            return R
        num = (3 * ((P.x * P.x) % p) + A) % p
        den = (2 * P.y) % p
    else:
        num = (Q.y - P.y + p) % p
        den = (Q.x - P.x + p) % p
    lam = (num * _powmod(den, p - 2, p)) % p
    x3 = (((lam * lam) % p - P.x - Q.x) % p + p) % p
    t = (P.x - x3 + p) % p
    R.x = x3
    R.y = ((lam * t) % p - P.y + p) % p
    R.inf = 0
    return R


cdef Pt _pt_mul(long long n, Pt P, long long A, long long p) nogil:
    cdef Pt R, add
    R.inf = 1
    R.x = 0
    R.y = 0
    add = P
    while n:
        if n & 1:
            R = _pt_add(R, add, A, p)
        add = _pt_add(add, add, A, p)
        n >>= 1
    return R


cdef long long _isqrt_c(long long n) nogil:
    cdef long long x = <long long> (n ** 0.5)
    while x * x > n:
        x -= 1
    while (x + 1) * (x + 1) <= n:
        x += 1
    return x


cdef int _bsgs_all(long long A, long long p, Pt P, long long lo, long long hi,
                   long long * out, int out_cap):
    """Collect all m in [lo, hi] with mP = O; returns count (or -1 overflow)."""
    cdef long long width = hi - lo
    cdef long long s = _isqrt_c(width) + 1
    cdef long long * bx = <long long *> calloc(s, sizeof(long long))
    cdef long long * by = <long long *> calloc(s, sizeof(long long))
    cdef unsigned char * binf = <unsigned char *> calloc(s, 1)
    if bx == NULL or by == NULL or binf == NULL:
        free(bx); free(by); free(binf)
        raise MemoryError()
    cdef Pt R, Q, step, negQ
    cdef long long i, k, m
    cdef int n_out = 0
    try:
        R.inf = 1; R.x = 0; R.y = 0
        for i in range(s):
            bx[i] = R.x
            by[i] = R.y
            binf[i] = R.inf
            R = _pt_add(R, P, A, p)
        step = R  # sP
        Q = _pt_mul(lo, P, A, p)
        k = 0
        while k * s <= width:
            negQ = Q
            if not negQ.inf:
                negQ.y = (p - negQ.y) % p
            for i in range(s):
                if binf[i]:
                    if negQ.inf:
                        m = lo + k * s + i
                        if m <= hi:
                            if n_out >= out_cap:
                                return -1
                            out[n_out] = m
                            n_out += 1
                elif (not negQ.inf) and bx[i] == negQ.x and by[i] == negQ.y:
                    m = lo + k * s + i
                    if m <= hi:
                        if n_out >= out_cap:
                            return -1
                        out[n_out] = m
                        n_out += 1
            Q = _pt_add(Q, step, A, p)
            k += 1
        return n_out
    finally:
        free(bx); free(by); free(binf)


def ap_bsgs(c4, c6, p, seed=0):
    """a_p at a good prime p >= 5 via order finding in the Hasse interval.

    Uses the short model y^2 = x^3 - 27 c4 x - 54 c6 and its quadratic
    twist; deterministic for fixed (c4, c6, p, seed).
    """
    if p > MAX_PRIME:
        raise OverflowError(f"compiled kernel limited to p <= {MAX_PRIME}")
    cdef long long pp = p
    cdef long long A = ((-27 * c4) % pp + pp) % pp
    cdef long long B = ((-54 * c6) % pp + pp) % pp
    cdef long long g = 2
    while _legendre_c(g, pp) != -1:
        g += 1
    cdef long long At = (A * g % pp) * g % pp
    cdef long long Bt = ((B * g % pp) * g % pp) * g % pp
    cdef long long w = _isqrt_c(4 * pp)
    cdef long long lo = pp + 1 - w, hi = pp + 1 + w
    cdef unsigned long long state = (<unsigned long long> seed) * 0x9E3779B97F4A7C15ULL + <unsigned long long> pp
    cdef long long curA, curB, x, rhs, m
    cdef Pt P
    cdef int round_idx, n_match, i
    cdef long long * match_buf = <long long *> calloc(4096, sizeof(long long))
    if match_buf == NULL:
        raise MemoryError()
    candidates = None
    try:
        for round_idx in range(64):
            if round_idx % 2 == 1:
                curA, curB = At, Bt
            else:
                curA, curB = A, B
            while True:
                state ^= state << 13
                state ^= state >> 7
                state ^= state << 17
                x = <long long> (state % <unsigned long long> pp)
                rhs = (((x * x) % pp) * x + curA * x + curB) % pp
                if _legendre_c(rhs, pp) >= 0:
                    P.x = x
                    P.y = _sqrt_mod_c(rhs, pp)
                    P.inf = 0
                    break
            n_match = _bsgs_all(curA, pp, P, lo, hi, match_buf, 4096)
            if n_match < 0:
                raise ArithmeticError("BSGS match buffer overflow")
            if round_idx % 2 == 1:
                matches = {2 * pp + 2 - match_buf[i] for i in range(n_match)}
            else:
                matches = {match_buf[i] for i in range(n_match)}
            candidates = matches if candidates is None else candidates & matches
            if len(candidates) == 1:
                return pp + 1 - candidates.pop()
            if not candidates:
                raise ArithmeticError(f"BSGS eliminated every group order at p={p}")
        raise ArithmeticError(f"BSGS failed to isolate the group order at p={p}")
    finally:
        free(match_buf)
