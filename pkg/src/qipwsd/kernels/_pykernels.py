"""Pure-Python/numpy solver kernels.

Array arguments follow ``PackedModel``: ``C`` (n, mmax), ``R`` (n, mmax, n, mmax)
holding r in both orientations, ``P`` (n, n) flagging interacting pairs i < j,
``cand``/``ncand`` listing the allowed sense indices per word in ascending order.

Every kernel returns the lexicographically smallest assignment among those
within ``tie_tol`` of the optimum.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"
CHUNK = 1 << 16


def tie_tol(z: float) -> float:
    return 1e-9 * max(1.0, abs(z))


def _pairs(P):
    n = P.shape[0]
    return [(i, j) for i in range(n) for j in range(i + 1, n) if P[i, j]]


def evaluate(C, R, P, beta, choices) -> float:
    lin = 0.0
    for i, k in enumerate(choices):
        lin += float(C[i, k])
    quad = 0.0
    for i, j in _pairs(P):
        quad += float(R[i, choices[i], j, choices[j]])
    return lin + beta * quad


def _decode(cand, ncand, flat):
    """Mixed-radix decode of flat indices into (len(flat), n) sense choices, last word fastest."""
    n = len(ncand)
    K = np.empty((len(flat), n), dtype=np.int64)
    rem = flat.copy()
    for i in range(n - 1, -1, -1):
        K[:, i] = cand[i, rem % ncand[i]]
        rem //= ncand[i]
    return K


def _chunk_values(C, R, pairs, beta, K):
    lin = np.zeros(len(K))
    for i in range(K.shape[1]):
        lin = lin + C[i, K[:, i]]
    quad = np.zeros(len(K))
    for i, j in pairs:
        quad = quad + R[i, K[:, i], j, K[:, j]]
    return lin + beta * quad


def brute_force(C, R, P, beta, cand, ncand):
    """Exhaustive search; returns (choices, assignments evaluated)."""
    total = int(np.prod(ncand))
    pairs = _pairs(P)
    best = -np.inf
    for start in range(0, total, CHUNK):
        flat = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        z = _chunk_values(C, R, pairs, beta, _decode(cand, ncand, flat))
        best = max(best, float(z.max()))
    floor = best - tie_tol(best)
    for start in range(0, total, CHUNK):
        flat = np.arange(start, min(total, start + CHUNK), dtype=np.int64)
        K = _decode(cand, ncand, flat)
        hits = np.flatnonzero(_chunk_values(C, R, pairs, beta, K) >= floor)
        if len(hits):
            return K[hits[0]].copy(), total
    raise AssertionError("brute force lost its optimum")


class _Search:
    """Depth-first branch and bound over a fixed word order."""

    def __init__(self, C, R, P, beta, cand, ncand, order):
        n = C.shape[0]
        self.n = n
        self.C, self.R, self.P, self.beta = C, R, P, beta
        self.cand = [list(cand[i, : ncand[i]]) for i in range(n)]
        self.order = list(order)
        pos = np.empty(n, dtype=np.int64)
        pos[self.order] = np.arange(n)
        inter = np.zeros((n, n), dtype=bool)
        inter |= P.astype(bool)
        inter |= inter.T
        self.inter = inter
        self.W = beta * R
        # best possible contribution of each pair to the word that comes first in the order
        future = np.zeros(C.shape)
        for i in range(n):
            for j in range(n):
                if inter[i, j] and pos[j] > pos[i]:
                    future[i] += self.W[i][:, j][:, self.cand[j]].max(axis=1)
        self.future = future
        self.later = [[j for j in self.order[pos[i] + 1:] if inter[i, j]] for i in range(n)]
        self.nodes = 0
        self.choices = np.zeros(n, dtype=np.int64)

    def bound(self, acc, depth):
        total = 0.0
        for t in range(depth, self.n):
            i = self.order[t]
            ks = self.cand[i]
            total += float(np.max(acc[i, ks] + self.future[i, ks]))
        return total

    def child_acc(self, acc, i, k):
        new = acc.copy()
        for j in self.later[i]:
            new[j] += self.W[j, :, i, k]
        return new

    def maximize(self, incumbent_val, incumbent):
        self.best_val = incumbent_val
        self.best = np.array(incumbent, dtype=np.int64)
        self._max(0, 0.0, self.C.copy())
        return self.best_val, self.best

    def _max(self, depth, val, acc):
        self.nodes += 1
        if depth == self.n:
            z = evaluate(self.C, self.R, self.P, self.beta, self.choices)
            if z > self.best_val:
                self.best_val = z
                self.best = self.choices.copy()
            return
        if val + self.bound(acc, depth) <= self.best_val:
            return
        i = self.order[depth]
        ks = self.cand[i]
        score = acc[i, ks] + self.future[i, ks]
        for idx in np.argsort(-score, kind="stable"):
            k = ks[idx]
            self.choices[i] = k
            self._max(depth + 1, val + float(acc[i, k]), self.child_acc(acc, i, k))

    def first_reaching(self, target):
        self.floor = target - tie_tol(target)
        found = self._first(0, 0.0, self.C.copy())
        return self.result if found else None

    def _first(self, depth, val, acc):
        self.nodes += 1
        if depth == self.n:
            z = evaluate(self.C, self.R, self.P, self.beta, self.choices)
            if z >= self.floor:
                self.result = self.choices.copy()
                return True
            return False
        if val + self.bound(acc, depth) < self.floor:
            return False
        i = self.order[depth]
        for k in self.cand[i]:
            self.choices[i] = k
            if self._first(depth + 1, val + float(acc[i, k]), self.child_acc(acc, i, k)):
                return True
        return False


def branch_and_bound(C, R, P, beta, cand, ncand, order, incumbent):
    """Two-phase exact search; returns (choices, nodes explored).

    Phase one finds the optimal value along `order` starting from the
    incumbent. Phase two walks words in index order with senses ascending and
    stops at the first assignment reaching that value, which is therefore the
    lexicographically smallest optimum.
    """
    n = C.shape[0]
    search = _Search(C, R, P, beta, cand, ncand, order)
    inc_val = evaluate(C, R, P, beta, incumbent)
    best_val, _ = search.maximize(inc_val, incumbent)
    lex = _Search(C, R, P, beta, cand, ncand, range(n))
    result = lex.first_reaching(best_val)
    if result is None:
        raise AssertionError("branch and bound lost its optimum")
    return result, search.nodes + lex.nodes


def chain_dp(C, R, beta, cand, ncand):
    """Max-sum dynamic programming over consecutive words; returns choices."""
    n = C.shape[0]
    cands = [list(cand[i, : ncand[i]]) for i in range(n)]
    suffix = [None] * n
    suffix[n - 1] = {u: float(C[n - 1, u]) for u in cands[n - 1]}
    for i in range(n - 2, -1, -1):
        nxt = suffix[i + 1]
        suffix[i] = {
            u: float(C[i, u]) + max(beta * float(R[i, u, i + 1, v]) + nxt[v] for v in cands[i + 1])
            for u in cands[i]
        }
    best = max(suffix[0].values())
    floor = best - tie_tol(best)
    choices = np.zeros(n, dtype=np.int64)
    prefix = 0.0
    prev = None
    for i in range(n):
        for v in cands[i]:
            link = 0.0 if prev is None else beta * float(R[i - 1, prev, i, v])
            if prefix + link + suffix[i][v] >= floor:
                choices[i] = v
                prefix += link + float(C[i, v])
                prev = v
                break
        else:
            raise AssertionError("chain reconstruction lost its optimum")
    return choices


def coordinate_ascent(C, R, P, beta, cand, ncand, start):
    """Single-word re-selection sweeps until no word improves.

    Returns (choices, sweeps, objective trace), the trace starting at the
    initial assignment and recording the objective after every sweep.
    """
    n = C.shape[0]
    inter = P.astype(bool) | P.astype(bool).T
    nbrs = [np.flatnonzero(inter[i]) for i in range(n)]
    cands = [np.asarray(cand[i, : ncand[i]]) for i in range(n)]
    choices = np.array(start, dtype=np.int64)
    trace = [evaluate(C, R, P, beta, choices)]
    sweeps = 0
    while True:
        sweeps += 1
        improved = False
        for i in range(n):
            ks = cands[i]
            if len(ks) == 1:
                continue
            # same accumulation order as the compiled kernel
            gain = C[i, ks].copy()
            for j in nbrs[i]:
                gain = gain + beta * R[i, ks, j, choices[j]]
            cur = float(gain[np.searchsorted(ks, choices[i])])
            top = int(np.argmax(gain))
            if float(gain[top]) > cur + 1e-12 * max(1.0, abs(cur)):
                choices[i] = ks[top]
                improved = True
        trace.append(evaluate(C, R, P, beta, choices))
        if not improved:
            return choices, sweeps, trace
