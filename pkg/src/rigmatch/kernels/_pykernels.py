"""Pure-Python/NumPy kernels.

Same call signatures and results as the compiled ``_ckernels`` module.  Used
when the extension is not built, or when ``RIGMATCH_PURE=1`` is set.
Node sets are sorted, duplicate-free ``uint32`` arrays; CSR ``indptr`` arrays
are ``int64``.
"""
import time

import numpy as np

NAME = "python"

U32 = np.uint32
_EMPTY = np.empty(0, dtype=U32)

# Enumerator run() status codes, shared with the compiled backend.
MORE, EXHAUSTED, TRUNCATED, TIMED_OUT = 0, 1, 2, 3


def _u32(a):
    return np.asarray(a, dtype=U32)


# ---------------------------------------------------------------------------
# sorted-set algebra
# ---------------------------------------------------------------------------

def intersect(a, b):
    if len(a) > len(b):
        a, b = b, a
    if len(a) == 0:
        return _EMPTY.copy()
    if len(b) > 16 * len(a):
        # skewed sizes: probe the small side into the large one
        idx = np.searchsorted(b, a)
        idx[idx == len(b)] = 0
        return _u32(a[b[idx] == a])
    return _u32(np.intersect1d(a, b, assume_unique=True))


def intersect_many(arrays):
    if not arrays:
        raise ValueError("intersect_many needs at least one set")
    arrays = sorted(arrays, key=len)
    out = arrays[0]
    for other in arrays[1:]:
        if len(out) == 0:
            break
        out = intersect(out, other)
    return _u32(out).copy()


def union(a, b):
    return _u32(np.union1d(a, b))


def difference(a, b):
    return _u32(np.setdiff1d(a, b, assume_unique=True))


def union_rows(indptr, indices, rows):
    if len(rows) == 0:
        return _EMPTY.copy()
    parts = [indices[indptr[r]:indptr[r + 1]] for r in rows.tolist()]
    return _u32(np.unique(np.concatenate(parts)))


def batch_filter(cand, indptr, indices, frontier):
    """``cand`` intersected with the union of the CSR rows of ``frontier``."""
    if len(cand) == 0 or len(frontier) == 0:
        return _EMPTY.copy()
    return intersect(cand, union_rows(indptr, indices, frontier))


def reach_filter(cand, indptr, indices, sources):
    """Members of ``cand`` reachable by a nonempty path from ``sources``."""
    if len(cand) == 0 or len(sources) == 0:
        return _EMPTY.copy()
    seen = np.zeros(len(indptr) - 1, dtype=bool)
    frontier = union_rows(indptr, indices, sources)
    while len(frontier):
        frontier = frontier[~seen[frontier]]
        seen[frontier] = True
        if len(frontier):
            frontier = union_rows(indptr, indices, frontier)
    return _u32(cand[seen[cand]])


# ---------------------------------------------------------------------------
# traversal
# ---------------------------------------------------------------------------

def tarjan_scc(indptr, indices, n):
    """Iterative Tarjan.  Component ids follow completion order, so every
    edge between distinct components goes from a higher id to a lower one."""
    ptr = indptr.tolist()
    idx = indices.tolist()
    index = [-1] * n
    low = [0] * n
    onstack = [False] * n
    comp = [-1] * n
    stack = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, ptr[root])]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        onstack[root] = True
        while work:
            v, pos = work[-1]
            end = ptr[v + 1]
            if pos < end:
                w = idx[pos]
                work[-1] = (v, pos + 1)
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    onstack[w] = True
                    work.append((w, ptr[w]))
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return np.asarray(comp, dtype=np.int32), ncomp


def dfs_intervals(indptr, indices, n):
    """Depth-first (begin, end) times with one clock ticking on discovery and
    on departure.  Roots and children are taken in ascending id order."""
    ptr = indptr.tolist()
    idx = indices.tolist()
    begin = [-1] * n
    end = [-1] * n
    clock = 0
    for root in range(n):
        if begin[root] != -1:
            continue
        begin[root] = clock
        clock += 1
        work = [(root, ptr[root])]
        while work:
            v, pos = work[-1]
            if pos < ptr[v + 1]:
                w = idx[pos]
                work[-1] = (v, pos + 1)
                if begin[w] == -1:
                    begin[w] = clock
                    clock += 1
                    work.append((w, ptr[w]))
                continue
            work.pop()
            end[v] = clock
            clock += 1
    return np.asarray(begin, dtype=np.int64), np.asarray(end, dtype=np.int64)


def bloom_labels(cindptr, cindices, ncomp, hashbit, words):
    """Out/in bit signatures over a condensation whose edges go low -> high."""
    ptr = cindptr.tolist()
    idx = cindices.tolist()
    own = [1 << int(b) for b in hashbit.tolist()]
    sig_out = list(own)
    for c in range(ncomp - 1, -1, -1):
        s = sig_out[c]
        for d in idx[ptr[c]:ptr[c + 1]]:
            s |= sig_out[d]
        sig_out[c] = s
    sig_in = list(own)
    for c in range(ncomp):
        s = sig_in[c]
        for d in idx[ptr[c]:ptr[c + 1]]:
            sig_in[d] |= s
    return _pack(sig_out, words), _pack(sig_in, words)


def _pack(sigs, words):
    out = np.zeros((len(sigs), words), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i, s in enumerate(sigs):
        for w in range(words):
            out[i, w] = (s >> (64 * w)) & mask
    return out


def _unpack(arr):
    sigs = []
    for row in arr.tolist():
        s = 0
        for w, x in enumerate(row):
            s |= int(x) << (64 * w)
        sigs.append(s)
    return sigs


class Reacher:
    """Exact u -> v path test (nonempty paths) over a condensed graph."""

    def __init__(self, comp, cyclic, begin, end, sig_out, sig_in, cindptr, cindices):
        self.comp = comp.tolist()
        self.cyclic = [bool(x) for x in cyclic.tolist()]
        self.begin = begin.tolist()
        self.end = end.tolist()
        self.sig_out = _unpack(sig_out)
        self.sig_in = _unpack(sig_in)
        self.ptr = cindptr.tolist()
        self.idx = cindices.tolist()

    def reaches(self, u, v):
        cu = self.comp[u]
        cv = self.comp[v]
        if cu == cv:
            return self.cyclic[cu]
        return self.reaches_comp(cu, cv)

    def _undecided(self, w, cv):
        # None: can't tell, True/False: settled by labels alone
        if w > cv or self.begin[cv] > self.end[w]:
            return False
        if self.begin[w] < self.begin[cv] and self.end[cv] < self.end[w]:
            return True
        if self.sig_out[cv] & ~self.sig_out[w] or self.sig_in[w] & ~self.sig_in[cv]:
            return False
        return None

    def reaches_comp(self, cu, cv):
        verdict = self._undecided(cu, cv)
        if verdict is not None:
            return verdict
        ptr, idx = self.ptr, self.idx
        seen = {cu}
        stack = [cu]
        while stack:
            w = stack.pop()
            for s in idx[ptr[w]:ptr[w + 1]]:
                if s == cv:
                    return True
                if s in seen:
                    continue
                seen.add(s)
                verdict = self._undecided(s, cv)
                if verdict:
                    return True
                if verdict is None:
                    stack.append(s)
        return False


# ---------------------------------------------------------------------------
# simulation and RIG expansion
# ---------------------------------------------------------------------------

def check_edge(direct, forward, cand, targets, wit, indptr, indices, reacher, end_id):
    """Keep the members of ``cand`` that have a partner in ``targets``.

    forward: ``cand`` are edge tails and partners are heads; otherwise the
    reverse.  For direct edges ``indptr``/``indices`` is the adjacency of the
    candidates in the matching direction.  ``wit`` (aligned with ``cand``,
    -1 = none) short-circuits candidates whose previous witness survived.
    ``end_id`` (DAG data only) bounds forward reachability scans.
    Returns ``(kept, witnesses)``.
    """
    tset = set(targets.tolist())
    tlist = targets.tolist()
    wl = wit.tolist() if wit is not None else None
    kept = []
    kwit = []
    for i, u in enumerate(cand.tolist()):
        if wl is not None and wl[i] >= 0 and wl[i] in tset:
            kept.append(u)
            kwit.append(wl[i])
            continue
        found = -1
        if direct:
            for x in indices[indptr[u]:indptr[u + 1]].tolist():
                if x in tset:
                    found = x
                    break
        elif forward:
            limit = end_id[u] if end_id is not None else None
            for v in tlist:
                if limit is not None and v > limit:
                    break
                if reacher.reaches(u, v):
                    found = v
                    break
        else:
            for s in tlist:
                if reacher.reaches(s, u):
                    found = s
                    break
        if found >= 0:
            kept.append(u)
            kwit.append(found)
    return np.asarray(kept, dtype=U32), np.asarray(kwit, dtype=np.int64)


def expand_direct(src, dst, indptr, indices):
    rptr = np.zeros(len(src) + 1, dtype=np.int64)
    rows = []
    for i, u in enumerate(src.tolist()):
        row = intersect(indices[indptr[u]:indptr[u + 1]], dst)
        rows.append(row)
        rptr[i + 1] = rptr[i] + len(row)
    return rptr, (np.concatenate(rows).astype(U32) if rows else _EMPTY.copy())


def _bounded_descendants(u, ptr, idx, budget):
    """Nodes reachable from ``u`` by a nonempty path, or None once the
    search has scanned more than ``budget`` edges."""
    seen = set()
    todo = list(idx[ptr[u]:ptr[u + 1]])
    work = len(todo)
    while todo:
        if work > budget:
            return None
        v = todo.pop()
        if v in seen:
            continue
        seen.add(v)
        row = idx[ptr[v]:ptr[v + 1]]
        work += len(row)
        todo.extend(row)
    return seen if work <= budget else None


def expand_reach(src, dst, reacher, end_id, indptr=None, indices=None):
    """Rows ``dst`` reachable from each ``src`` node: a scan of ``dst`` with
    the reachability test, or a bounded search from ``u`` when the forward
    CSR is given and the search stays cheaper than the scan."""
    rptr = np.zeros(len(src) + 1, dtype=np.int64)
    out = []
    dl = dst.tolist()
    if indptr is not None:
        ptr, idx = indptr.tolist(), indices.tolist()
        dset = set(dl)
    for i, u in enumerate(src.tolist()):
        lim = len(dl)
        if end_id is not None:
            lim = int(np.searchsorted(dst, end_id[u], side="right"))
        row = None
        if indptr is not None and lim > 16:
            desc = _bounded_descendants(u, ptr, idx, 2 * lim + 64)
            if desc is not None:
                row = sorted(desc & dset)
        if row is None:
            row = [v for v in dl[:lim] if reacher.reaches(u, v)]
        out.extend(row)
        rptr[i + 1] = rptr[i] + len(row)
    return rptr, np.asarray(out, dtype=U32)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

class Enumerator:
    """Resumable backtracking over a search order.

    ``cos_list[i]`` is the candidate set of level ``i``; ``constraints[i]``
    lists ``(j, keys, indptr, indices)`` for every earlier level ``j`` joined
    to level ``i``: the row of the value bound at ``j`` (looked up in
    ``keys``) holds the admissible values for level ``i``.
    """

    def __init__(self, cos_list, constraints, columns):
        self.n = len(cos_list)
        self.cos = cos_list
        self.cons = constraints
        self.columns = list(columns)
        self.emitted = 0
        self.ticks = 0
        self.peak_cells = 0
        self._cand = [None] * self.n
        self._pos = [0] * self.n
        self._t = [0] * self.n
        self._level = -1
        self._done = False

    def _candidates(self, i):
        rows = []
        for j, keys, indptr, indices in self.cons[i]:
            v = self._t[j]
            k = int(np.searchsorted(keys, v))
            rows.append(indices[indptr[k]:indptr[k + 1]])
        if not rows:
            return self.cos[i].tolist()
        return intersect_many(rows).tolist()

    def _enter(self, i):
        self._cand[i] = self._candidates(i)
        self._pos[i] = 0
        self._level = i
        live = sum(len(self._cand[k]) for k in range(i + 1))
        if live > self.peak_cells:
            self.peak_cells = live

    def run(self, max_matches=-1, deadline=-1.0, out=None):
        """Advance the search.  Count-only when ``out`` is None; otherwise fill
        rows of ``out`` until it is full.  Returns ``(rows, status)``."""
        if self._done:
            return 0, self._status
        if self.n == 0:
            self._done, self._status = True, EXHAUSTED
            return 0, EXHAUSTED
        if self._level < 0:
            self._enter(0)
        rows = 0
        cap = len(out) if out is not None else -1
        n = self.n
        while True:
            i = self._level
            if self._pos[i] >= len(self._cand[i]):
                if i == 0:
                    self._done, self._status = True, EXHAUSTED
                    return rows, EXHAUSTED
                self._level = i - 1
                self._pos[i - 1] += 1
                continue
            self._t[i] = self._cand[i][self._pos[i]]
            if i == n - 1:
                if 0 <= max_matches <= self.emitted:
                    self._done, self._status = True, TRUNCATED
                    return rows, TRUNCATED
                if out is not None:
                    if rows >= cap:
                        return rows, MORE
                    for k in range(n):
                        out[rows, self.columns[k]] = self._t[k]
                    rows += 1
                self.emitted += 1
                self._pos[i] += 1
                continue
            self.ticks += 1
            if deadline >= 0 and (self.ticks & 4095) == 0 and time.monotonic() > deadline:
                self._done, self._status = True, TIMED_OUT
                return rows, TIMED_OUT
            self._enter(i + 1)
