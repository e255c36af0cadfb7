# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled solver kernels; same signatures and results as ``_pykernels``.

Floating-point summation order in ``evaluate`` matches the Python objective
exactly (no fast-math), so both backends produce identical doubles.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY

cnp.import_array()

BACKEND = "cython"


cdef inline double _tol(double z) noexcept nogil:
    cdef double a = fabs(z)
    return 1e-9 * (a if a > 1.0 else 1.0)


def tie_tol(double z):
    return _tol(z)


cdef double _eval(const double[:, ::1] C, const double[:, :, :, ::1] R,
                  const unsigned char[:, ::1] P, double beta,
                  const cnp.int64_t[::1] ch) noexcept nogil:
    cdef Py_ssize_t n = C.shape[0], i, j
    cdef double lin = 0.0, quad = 0.0
    for i in range(n):
        lin += C[i, ch[i]]
    for i in range(n):
        for j in range(i + 1, n):
            if P[i, j]:
                quad += R[i, ch[i], j, ch[j]]
    return lin + beta * quad


def evaluate(C, R, P, double beta, choices):
    cdef cnp.int64_t[::1] ch = np.ascontiguousarray(choices, dtype=np.int64)
    return _eval(C, R, P, beta, ch)


def brute_force(const double[:, ::1] C, const double[:, :, :, ::1] R,
                const unsigned char[:, ::1] P, double beta,
                const cnp.int64_t[:, ::1] cand, const cnp.int64_t[::1] ncand):
    """Exhaustive odometer enumeration; returns (choices, assignments evaluated)."""
    cdef Py_ssize_t n = C.shape[0], i
    cdef long long total = 1, count
    for i in range(n):
        total *= ncand[i]
    digit_arr = np.zeros(n, dtype=np.int64)
    ch_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] digit = digit_arr
    cdef cnp.int64_t[::1] ch = ch_arr
    cdef double best = -INFINITY, z, floor
    cdef int npass
    for npass in range(2):
        for i in range(n):
            digit[i] = 0
            ch[i] = cand[i, 0]
        if npass == 1:
            floor = best - _tol(best)
        with nogil:
            for count in range(total):
                z = _eval(C, R, P, beta, ch)
                if npass == 0:
                    if z > best:
                        best = z
                elif z >= floor:
                    break
                # advance odometer, last word fastest
                i = n - 1
                while i >= 0:
                    digit[i] += 1
                    if digit[i] < ncand[i]:
                        ch[i] = cand[i, digit[i]]
                        break
                    digit[i] = 0
                    ch[i] = cand[i, 0]
                    i -= 1
        if npass == 1:
            if z < floor:
                raise AssertionError("brute force lost its optimum")
            return ch_arr, total


cdef class _Search:
    cdef Py_ssize_t n, mmax
    cdef const double[:, ::1] C
    cdef const double[:, :, :, ::1] R
    cdef const unsigned char[:, ::1] P
    cdef double beta
    cdef const cnp.int64_t[:, ::1] cand
    cdef const cnp.int64_t[::1] ncand
    cdef cnp.int64_t[::1] order
    cdef double[:, ::1] future
    cdef unsigned char[:, ::1] inter
    cdef cnp.int64_t[::1] pos
    cdef double[:, :, ::1] acc      # one (n, mmax) layer per depth
    cdef double[:, ::1] score       # scratch per depth
    cdef cnp.int64_t[:, ::1] perm   # child order per depth
    cdef cnp.int64_t[::1] choices
    cdef public long long nodes
    cdef double best_val, floor
    cdef object best_arr, choices_arr

    def __init__(self, C, R, P, double beta, cand, ncand, order):
        cdef Py_ssize_t i, j, u, v, t
        cdef double m, w
        self.C = C
        self.R = R
        self.P = P
        self.beta = beta
        self.cand = cand
        self.ncand = ncand
        self.n = C.shape[0]
        self.mmax = C.shape[1]
        self.order = np.ascontiguousarray(order, dtype=np.int64)
        pos = np.empty(self.n, dtype=np.int64)
        pos[np.asarray(self.order)] = np.arange(self.n)
        self.pos = pos
        inter = np.asarray(P, dtype=np.uint8)
        self.inter = np.ascontiguousarray(inter | inter.T)
        self.future = np.zeros((self.n, self.mmax))
        for i in range(self.n):
            for j in range(self.n):
                if self.inter[i, j] and self.pos[j] > self.pos[i]:
                    for u in range(self.mmax):
                        m = -INFINITY
                        for t in range(self.ncand[j]):
                            v = self.cand[j, t]
                            w = beta * R[i, u, j, v]
                            if w > m:
                                m = w
                        self.future[i, u] += m
        self.acc = np.zeros((self.n + 1, self.n, self.mmax))
        self.score = np.zeros((self.n + 1, self.mmax))
        self.perm = np.zeros((self.n + 1, self.mmax), dtype=np.int64)
        self.choices_arr = np.zeros(self.n, dtype=np.int64)
        self.choices = self.choices_arr
        self.nodes = 0

    cdef double _bound(self, Py_ssize_t depth) noexcept nogil:
        cdef Py_ssize_t t, i, s, k
        cdef double total = 0.0, m, x
        for t in range(depth, self.n):
            i = self.order[t]
            m = -INFINITY
            for s in range(self.ncand[i]):
                k = self.cand[i, s]
                x = self.acc[depth, i, k] + self.future[i, k]
                if x > m:
                    m = x
            total += m
        return total

    cdef void _push(self, Py_ssize_t depth, Py_ssize_t i, Py_ssize_t k) noexcept nogil:
        """Layer depth+1 = layer depth plus the interaction of (i, k) with later words."""
        cdef Py_ssize_t t, j, u
        for t in range(depth + 1, self.n):
            j = self.order[t]
            if self.inter[i, j]:
                for u in range(self.mmax):
                    self.acc[depth + 1, j, u] = self.acc[depth, j, u] + self.beta * self.R[j, u, i, k]
            else:
                for u in range(self.mmax):
                    self.acc[depth + 1, j, u] = self.acc[depth, j, u]

    cdef void _max(self, Py_ssize_t depth, double val):
        cdef Py_ssize_t i, s, t, k, nc
        cdef double z, key
        cdef cnp.int64_t tmp
        self.nodes += 1
        if depth == self.n:
            z = _eval(self.C, self.R, self.P, self.beta, self.choices)
            if z > self.best_val:
                self.best_val = z
                self.best_arr = np.array(self.choices_arr)
            return
        if val + self._bound(depth) <= self.best_val:
            return
        i = self.order[depth]
        nc = self.ncand[i]
        # children by descending optimistic score, stable insertion sort
        for s in range(nc):
            k = self.cand[i, s]
            self.score[depth, s] = self.acc[depth, i, k] + self.future[i, k]
            self.perm[depth, s] = s
        for s in range(1, nc):
            tmp = self.perm[depth, s]
            key = self.score[depth, tmp]
            t = s - 1
            while t >= 0 and self.score[depth, self.perm[depth, t]] < key:
                self.perm[depth, t + 1] = self.perm[depth, t]
                t -= 1
            self.perm[depth, t + 1] = tmp
        for s in range(nc):
            k = self.cand[i, self.perm[depth, s]]
            self.choices[i] = k
            self._push(depth, i, k)
            self._max(depth + 1, val + self.acc[depth, i, k])

    cdef bint _first(self, Py_ssize_t depth, double val) except -1:
        cdef Py_ssize_t i, s, k
        self.nodes += 1
        if depth == self.n:
            return _eval(self.C, self.R, self.P, self.beta, self.choices) >= self.floor
        if val + self._bound(depth) < self.floor:
            return False
        i = self.order[depth]
        for s in range(self.ncand[i]):
            k = self.cand[i, s]
            self.choices[i] = k
            self._push(depth, i, k)
            if self._first(depth + 1, val + self.acc[depth, i, k]):
                return True
        return False

    def maximize(self, double incumbent_val, incumbent):
        self.acc[0, :, :] = self.C
        self.best_val = incumbent_val
        self.best_arr = np.array(incumbent, dtype=np.int64)
        self._max(0, 0.0)
        return self.best_val, self.best_arr

    def first_reaching(self, double target):
        self.acc[0, :, :] = self.C
        self.floor = target - _tol(target)
        if self._first(0, 0.0):
            return np.array(self.choices_arr)
        return None


def branch_and_bound(C, R, P, double beta, cand, ncand, order, incumbent):
    """Two-phase exact search; returns (choices, nodes explored)."""
    n = C.shape[0]
    search = _Search(C, R, P, beta, cand, ncand, order)
    inc_val = evaluate(C, R, P, beta, incumbent)
    best_val, _ = search.maximize(inc_val, incumbent)
    lex = _Search(C, R, P, beta, cand, ncand, np.arange(n))
    result = lex.first_reaching(best_val)
    if result is None:
        raise AssertionError("branch and bound lost its optimum")
    return result, search.nodes + lex.nodes


def chain_dp(const double[:, ::1] C, const double[:, :, :, ::1] R, double beta,
             const cnp.int64_t[:, ::1] cand, const cnp.int64_t[::1] ncand):
    """Max-sum dynamic programming over consecutive words; returns choices."""
    cdef Py_ssize_t n = C.shape[0], mmax = C.shape[1], i, s, t, u, v
    cdef double m, x, best, floor, prefix, link
    suffix_arr = np.full((n, mmax), -INFINITY)
    cdef double[:, ::1] suffix = suffix_arr
    choices_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] choices = choices_arr
    cdef Py_ssize_t prev = -1
    cdef bint found
    for s in range(ncand[n - 1]):
        u = cand[n - 1, s]
        suffix[n - 1, u] = C[n - 1, u]
    for i in range(n - 2, -1, -1):
        for s in range(ncand[i]):
            u = cand[i, s]
            m = -INFINITY
            for t in range(ncand[i + 1]):
                v = cand[i + 1, t]
                x = beta * R[i, u, i + 1, v] + suffix[i + 1, v]
                if x > m:
                    m = x
            suffix[i, u] = C[i, u] + m
    best = -INFINITY
    for s in range(ncand[0]):
        u = cand[0, s]
        if suffix[0, u] > best:
            best = suffix[0, u]
    floor = best - _tol(best)
    prefix = 0.0
    for i in range(n):
        found = False
        for s in range(ncand[i]):
            v = cand[i, s]
            link = 0.0 if prev < 0 else beta * R[i - 1, prev, i, v]
            if prefix + link + suffix[i, v] >= floor:
                choices[i] = v
                prefix += link + C[i, v]
                prev = v
                found = True
                break
        if not found:
            raise AssertionError("chain reconstruction lost its optimum")
    return choices_arr


def coordinate_ascent(const double[:, ::1] C, const double[:, :, :, ::1] R,
                      const unsigned char[:, ::1] P, double beta,
                      const cnp.int64_t[:, ::1] cand, const cnp.int64_t[::1] ncand, start):
    """Single-word re-selection sweeps; returns (choices, sweeps, objective trace)."""
    cdef Py_ssize_t n = C.shape[0], i, j, s, k, top
    choices_arr = np.array(start, dtype=np.int64)
    cdef cnp.int64_t[::1] ch = choices_arr
    inter_np = np.asarray(P, dtype=np.uint8)
    inter_np = np.ascontiguousarray(inter_np | inter_np.T)
    cdef const unsigned char[:, ::1] inter = inter_np
    cdef double g, cur, topval
    cdef bint improved
    cdef long sweeps = 0
    trace = [_eval(C, R, P, beta, ch)]
    while True:
        sweeps += 1
        improved = False
        for i in range(n):
            if ncand[i] == 1:
                continue
            cur = -INFINITY
            topval = -INFINITY
            top = -1
            for s in range(ncand[i]):
                k = cand[i, s]
                g = C[i, k]
                for j in range(n):
                    if inter[i, j]:
                        g += beta * R[i, k, j, ch[j]]
                if k == ch[i]:
                    cur = g
                if g > topval:
                    topval = g
                    top = k
            if topval > cur + 1e-12 * (fabs(cur) if fabs(cur) > 1.0 else 1.0):
                ch[i] = top
                improved = True
        trace.append(_eval(C, R, P, beta, ch))
        if not improved:
            return choices_arr, sweeps, trace
