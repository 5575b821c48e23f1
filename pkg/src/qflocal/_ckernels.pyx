# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_pykernels``: same walk, int64 state, 128-bit products.

The Python wrapper only dispatches here after checking that every level
quantity stays below 2**60 in magnitude.
"""
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free, calloc
from libc.string cimport memcpy

cdef extern from *:
    """
    typedef __int128 qf_i128;
    """
    ctypedef long long qf_i128

cdef extern from "math.h":
    long double sqrtl(long double x)

NAME = "cython"

cdef enum:
    MAXN = 16

ctypedef int64_t i64

cdef struct Level:
    i64 d
    i64 alpha
    i64 ajj
    i64 a[MAXN]
    i64 r[MAXN]
    i64 adj[MAXN][MAXN]


cdef inline qf_i128 floordiv(qf_i128 a, qf_i128 b):
    # b > 0
    cdef qf_i128 q = a // b
    if (a % b != 0) and (a < 0):
        q -= 1
    return q


cdef inline qf_i128 isqrt128(qf_i128 x):
    cdef qf_i128 s = <qf_i128> sqrtl(<long double> x)
    while s > 0 and s * s > x:
        s -= 1
    while (s + 1) * (s + 1) <= x:
        s += 1
    return s


cdef inline bint t_range(qf_i128 alpha, qf_i128 beta, qf_i128 gamma, qf_i128 rhs,
                         i64* lo_out, i64* hi_out):
    cdef qf_i128 disc = beta * beta - alpha * (gamma - rhs)
    cdef qf_i128 s, lo, hi
    if disc < 0:
        return False
    s = isqrt128(disc)
    lo = -floordiv(beta + s, alpha)
    while alpha * (lo - 1) * (lo - 1) + 2 * beta * (lo - 1) + gamma <= rhs:
        lo -= 1
    hi = floordiv(s - beta, alpha)
    while alpha * (hi + 1) * (hi + 1) + 2 * beta * (hi + 1) + gamma <= rhs:
        hi += 1
    if lo > hi:
        return False
    lo_out[0] = <i64> lo
    hi_out[0] = <i64> hi
    return True


cdef class _Walker:
    cdef Level* levels
    cdef int n
    cdef int k
    cdef i64 bound
    cdef uint64_t* out
    cdef i64 nwords
    # fold data
    cdef i64 hnf[MAXN][MAXN]
    cdef i64 u[MAXN][MAXN]
    cdef i64 inner[MAXN][MAXN]
    cdef i64 radix[MAXN]
    cdef i64 strides[MAXN]
    cdef uint64_t* masks
    cdef i64 mask_words
    cdef i64* mins

    def __cinit__(self):
        self.levels = NULL
        self.out = NULL
        self.masks = NULL
        self.mins = NULL

    def __dealloc__(self):
        free(self.levels)
        free(self.out)
        free(self.masks)
        free(self.mins)

    cdef setup(self, plan, int n, i64 bound, int k):
        cdef int j, i, l
        if n > MAXN:
            raise OverflowError("rank too large for the compiled kernel")
        self.n = n
        self.k = k
        self.bound = bound
        self.levels = <Level*> calloc(n, sizeof(Level))
        for j in range(n):
            d, alpha, ajj, a, r, adj = plan[j]
            self.levels[j].d = d
            self.levels[j].alpha = alpha
            self.levels[j].ajj = ajj
            for i in range(j):
                self.levels[j].a[i] = a[i]
                self.levels[j].r[i] = r[i]
                for l in range(j):
                    self.levels[j].adj[i][l] = adj[i][l]
        self.nwords = (bound >> 6) + 2
        self.out = <uint64_t*> calloc(self.nwords, sizeof(uint64_t))

    cdef inline void setbit(self, i64 v):
        self.out[v >> 6] |= (<uint64_t> 1) << (v & 63)

    cdef void leaf(self, i64 lo, i64 hi, i64 a, i64 b, i64 c):
        cdef i64 t
        cdef i64 v = a * lo * lo + 2 * b * lo + c
        cdef i64 dv = a * (2 * lo + 1) + 2 * b
        for t in range(lo, hi + 1):
            if v >= 0:
                self.setbit(v)
            v += dv
            dv += 2 * a

    cdef void visit(self, i64* h, i64 c):
        cdef int i, row
        cdef i64 hh[MAXN]
        cdef i64 y[MAXN]
        cdef i64 z[MAXN]
        cdef i64 yi, cls = 0
        cdef qf_i128 zaz = 0, zh = 0, acc, off
        cdef int k = self.k
        cdef i64 w0, nw, sh, w, base
        cdef uint64_t m
        cdef uint64_t* mask
        for i in range(k):
            hh[i] = h[i]
        for i in range(k):
            yi = <i64> floordiv(hh[i], self.radix[i])
            y[i] = yi
            if yi != 0:
                for row in range(i, k):
                    hh[row] -= yi * self.hnf[row][i]
        for i in range(k):
            cls += hh[i] * self.strides[i]
        for i in range(k):
            acc = 0
            for row in range(k):
                acc += (<qf_i128> self.u[i][row]) * y[row]
            z[i] = <i64> acc
        for i in range(k):
            if z[i] != 0:
                acc = 0
                for row in range(k):
                    acc += (<qf_i128> self.inner[i][row]) * z[row]
                zaz += acc * z[i]
            zh += (<qf_i128> z[i]) * h[i]
        off = c + zaz - 2 * zh + self.mins[cls]
        if off > self.bound or off < 0:
            return
        base = <i64> off
        w0 = base >> 6
        sh = base & 63
        nw = ((self.bound - base) >> 6) + 1
        if nw > self.mask_words:
            nw = self.mask_words
        mask = self.masks + cls * self.mask_words
        for w in range(nw):
            m = mask[w]
            if m == 0:
                continue
            self.out[w0 + w] |= m << sh
            if sh != 0 and w0 + w + 1 < self.nwords:
                self.out[w0 + w + 1] |= m >> (64 - sh)

    cdef void rec(self, int j, i64* h, i64 c):
        cdef Level* lv
        cdef i64 hn[MAXN]
        cdef i64 lo, hi, t
        cdef qf_i128 beta, gamma, quad, rowsum
        cdef int i, l
        if j == self.k:
            self.visit(h, c)
            return
        lv = &self.levels[j - 1]
        if j == 1:
            if t_range(lv.ajj, h[0], c, self.bound, &lo, &hi):
                self.leaf(lo, hi, lv.ajj, h[0], c)
            return
        beta = (<qf_i128> lv.d) * h[j - 1]
        for i in range(j - 1):
            beta -= (<qf_i128> lv.r[i]) * h[i]
        quad = 0
        for i in range(j - 1):
            if h[i] != 0:
                rowsum = 0
                for l in range(j - 1):
                    rowsum += (<qf_i128> lv.adj[i][l]) * h[l]
                quad += rowsum * h[i]
        gamma = (<qf_i128> lv.d) * c - quad
        if not t_range(lv.alpha, beta, gamma, (<qf_i128> lv.d) * self.bound, &lo, &hi):
            return
        for t in range(lo, hi + 1):
            for i in range(j - 1):
                hn[i] = h[i] + t * lv.a[i]
            self.rec(j - 1, hn, c + 2 * t * h[j - 1] + t * t * lv.ajj)

    cdef object result(self):
        cdef bytes raw = (<char*> self.out)[: self.nwords * 8]
        cdef object top = self.bound + 1
        value = int.from_bytes(raw, "little")
        return value & ((1 << top) - 1)


def mark(plan, int n, h0, c0, bound):
    cdef _Walker w = _Walker()
    cdef i64 h[MAXN]
    cdef int i
    w.setup(plan, n, bound, 0)
    for i in range(n):
        h[i] = h0[i]
    if n == 0:
        if 0 <= c0 <= bound:
            w.setbit(c0)
    else:
        w.rec(n, h, c0)
    return w.result()


def fold(plan, int n, bound, int k, hnf, u, inner, masks, mins):
    cdef _Walker w = _Walker()
    cdef i64 h[MAXN]
    cdef int i, j
    cdef i64 s = 1, ncls
    cdef bytes raw
    w.setup(plan, n, bound, k)
    for i in range(k):
        for j in range(k):
            w.hnf[i][j] = hnf[i][j]
            w.u[i][j] = u[i][j]
            w.inner[i][j] = inner[i][j]
        w.radix[i] = hnf[i][i]
        w.strides[i] = s
        s *= hnf[i][i]
    ncls = len(masks)
    w.mask_words = (bound >> 6) + 1
    w.masks = <uint64_t*> calloc(ncls * w.mask_words, sizeof(uint64_t))
    w.mins = <i64*> malloc(ncls * sizeof(i64))
    for i in range(ncls):
        w.mins[i] = mins[i]
        raw = int(masks[i] & ((1 << (bound + 1)) - 1)).to_bytes(w.mask_words * 8, "little")
        memcpy(w.masks + i * w.mask_words, <char*> raw, w.mask_words * 8)
    for i in range(n):
        h[i] = 0
    w.rec(n, h, 0)
    return w.result()
