# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Mirrors ``_pykernels`` call for call."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint32_t, uint64_t, int64_t, int32_t
from libc.stdlib cimport malloc, free, qsort
from posix.time cimport clock_gettime, timespec, CLOCK_MONOTONIC

cnp.import_array()

NAME = "cython"

MORE, EXHAUSTED, TRUNCATED, TIMED_OUT = 0, 1, 2, 3

ctypedef uint32_t u32


cdef inline double _now() nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9


cdef inline Py_ssize_t _lower_bound(const u32* a, Py_ssize_t lo, Py_ssize_t hi, u32 x) nogil:
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline Py_ssize_t _gallop(const u32* a, Py_ssize_t lo, Py_ssize_t hi, u32 x) nogil:
    # first index >= lo with a[idx] >= x
    cdef Py_ssize_t step = 1, probe = lo
    while probe < hi and a[probe] < x:
        lo = probe + 1
        probe = lo + step
        step <<= 1
    if probe > hi:
        probe = hi
    return _lower_bound(a, lo, probe, x)


cdef Py_ssize_t _intersect_into(const u32* a, Py_ssize_t na, const u32* b, Py_ssize_t nb,
                                u32* out) nogil:
    cdef Py_ssize_t i = 0, j = 0, k = 0
    cdef const u32* t
    cdef Py_ssize_t tn
    if na > nb:
        t = a; a = b; b = t
        tn = na; na = nb; nb = tn
    if na == 0:
        return 0
    if nb > 32 * na:
        for i in range(na):
            j = _gallop(b, j, nb, a[i])
            if j >= nb:
                break
            if b[j] == a[i]:
                out[k] = a[i]
                k += 1
        return k
    while i < na and j < nb:
        if a[i] < b[j]:
            i += 1
        elif a[i] > b[j]:
            j += 1
        else:
            out[k] = a[i]
            k += 1
            i += 1
            j += 1
    return k


cdef Py_ssize_t _first_common(const u32* a, Py_ssize_t na, const u32* b, Py_ssize_t nb) nogil:
    # index into a of the first shared element, or -1
    cdef Py_ssize_t i = 0, j = 0
    while i < na and j < nb:
        if a[i] < b[j]:
            i = _gallop(a, i, na, b[j])
        elif a[i] > b[j]:
            j = _gallop(b, j, nb, a[i])
        else:
            return i
    return -1


def intersect(const u32[::1] a, const u32[::1] b):
    cdef Py_ssize_t n = min(a.shape[0], b.shape[0])
    out = np.empty(n, dtype=np.uint32)
    cdef u32[::1] o = out
    if n == 0:
        return out
    cdef Py_ssize_t k = _intersect_into(&a[0], a.shape[0], &b[0], b.shape[0], &o[0])
    return out[:k].copy()


def intersect_many(arrays):
    if not arrays:
        raise ValueError("intersect_many needs at least one set")
    arrays = sorted(arrays, key=len)
    cdef const u32[::1] first = arrays[0]
    cdef Py_ssize_t k = first.shape[0]
    out = np.array(first, dtype=np.uint32)
    if k == 0 or len(arrays) == 1:
        return out
    cdef u32[::1] o = out
    cdef const u32[::1] other
    for arr in arrays[1:]:
        other = arr
        if other.shape[0] == 0:
            return out[:0].copy()
        k = _intersect_into(&o[0], k, &other[0], other.shape[0], &o[0])
        if k == 0:
            break
    return out[:k].copy()


def union(const u32[::1] a, const u32[::1] b):
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], i = 0, j = 0, k = 0
    out = np.empty(na + nb, dtype=np.uint32)
    cdef u32[::1] o = out
    while i < na and j < nb:
        if a[i] < b[j]:
            o[k] = a[i]; i += 1
        elif a[i] > b[j]:
            o[k] = b[j]; j += 1
        else:
            o[k] = a[i]; i += 1; j += 1
        k += 1
    while i < na:
        o[k] = a[i]; i += 1; k += 1
    while j < nb:
        o[k] = b[j]; j += 1; k += 1
    return out[:k].copy()


def difference(const u32[::1] a, const u32[::1] b):
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], i = 0, j = 0, k = 0
    out = np.empty(na, dtype=np.uint32)
    cdef u32[::1] o = out
    while i < na:
        while j < nb and b[j] < a[i]:
            j += 1
        if j >= nb or b[j] != a[i]:
            o[k] = a[i]
            k += 1
        i += 1
    return out[:k].copy()


cdef _mark_rows(const int64_t[::1] indptr, const u32[::1] indices, const u32[::1] rows,
                cnp.uint8_t[::1] mark):
    cdef Py_ssize_t r, p
    for r in range(rows.shape[0]):
        for p in range(indptr[rows[r]], indptr[rows[r] + 1]):
            mark[indices[p]] = 1


def union_rows(const int64_t[::1] indptr, const u32[::1] indices, const u32[::1] rows):
    n = indptr.shape[0] - 1
    cdef cnp.uint8_t[::1] mark = np.zeros(max(n, 1), dtype=np.uint8)
    _mark_rows(indptr, indices, rows, mark)
    return np.flatnonzero(np.asarray(mark)).astype(np.uint32)


def batch_filter(const u32[::1] cand, const int64_t[::1] indptr, const u32[::1] indices,
                 const u32[::1] frontier):
    """``cand`` intersected with the union of the CSR rows of ``frontier``."""
    cdef Py_ssize_t n = indptr.shape[0] - 1, i, k = 0
    out = np.empty(cand.shape[0], dtype=np.uint32)
    if cand.shape[0] == 0 or frontier.shape[0] == 0:
        return out[:0].copy()
    cdef u32[::1] o = out
    cdef cnp.uint8_t[::1] mark = np.zeros(n, dtype=np.uint8)
    _mark_rows(indptr, indices, frontier, mark)
    for i in range(cand.shape[0]):
        if mark[cand[i]]:
            o[k] = cand[i]
            k += 1
    return out[:k].copy()


def reach_filter(const u32[::1] cand, const int64_t[::1] indptr, const u32[::1] indices,
                 const u32[::1] sources):
    """Members of ``cand`` reachable by a nonempty path from ``sources``."""
    cdef Py_ssize_t n = indptr.shape[0] - 1, i, k = 0, head = 0, tail = 0, p
    cdef u32 v, w
    out = np.empty(cand.shape[0], dtype=np.uint32)
    if cand.shape[0] == 0 or sources.shape[0] == 0:
        return out[:0].copy()
    cdef u32[::1] o = out
    cdef cnp.uint8_t[::1] seen = np.zeros(n, dtype=np.uint8)
    cdef u32[::1] queue = np.empty(n, dtype=np.uint32)
    with nogil:
        for i in range(sources.shape[0]):
            v = sources[i]
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if not seen[w]:
                    seen[w] = 1
                    queue[tail] = w
                    tail += 1
        while head < tail:
            v = queue[head]
            head += 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if not seen[w]:
                    seen[w] = 1
                    queue[tail] = w
                    tail += 1
        for i in range(cand.shape[0]):
            if seen[cand[i]]:
                o[k] = cand[i]
                k += 1
    return out[:k].copy()


def tarjan_scc(const int64_t[::1] indptr, const u32[::1] indices, Py_ssize_t n):
    comp_arr = np.full(n, -1, dtype=np.int32)
    if n == 0:
        return comp_arr, 0
    cdef int32_t[::1] comp = comp_arr
    cdef int64_t[::1] index = np.full(n, -1, dtype=np.int64)
    cdef int64_t[::1] low = np.zeros(n, dtype=np.int64)
    cdef cnp.uint8_t[::1] onstack = np.zeros(n, dtype=np.uint8)
    cdef int64_t[::1] stack = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] wnode = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] wpos = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t sp = 0, wp = 0, root, v, w, parent
    cdef int64_t counter = 0
    cdef int32_t ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = counter
        low[root] = counter
        counter += 1
        stack[sp] = root; sp += 1
        onstack[root] = 1
        wnode[0] = root; wpos[0] = indptr[root]; wp = 1
        while wp > 0:
            v = wnode[wp - 1]
            if wpos[wp - 1] < indptr[v + 1]:
                w = indices[wpos[wp - 1]]
                wpos[wp - 1] += 1
                if index[w] == -1:
                    index[w] = counter
                    low[w] = counter
                    counter += 1
                    stack[sp] = w; sp += 1
                    onstack[w] = 1
                    wnode[wp] = w; wpos[wp] = indptr[w]; wp += 1
                elif onstack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            wp -= 1
            if wp > 0:
                parent = wnode[wp - 1]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                while True:
                    sp -= 1
                    w = stack[sp]
                    onstack[w] = 0
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp_arr, ncomp


def dfs_intervals(const int64_t[::1] indptr, const u32[::1] indices, Py_ssize_t n):
    begin_arr = np.full(n, -1, dtype=np.int64)
    end_arr = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return begin_arr, end_arr
    cdef int64_t[::1] begin = begin_arr
    cdef int64_t[::1] end = end_arr
    cdef int64_t[::1] wnode = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] wpos = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t wp, root, v, w
    cdef int64_t clock = 0
    for root in range(n):
        if begin[root] != -1:
            continue
        begin[root] = clock
        clock += 1
        wnode[0] = root; wpos[0] = indptr[root]; wp = 1
        while wp > 0:
            v = wnode[wp - 1]
            if wpos[wp - 1] < indptr[v + 1]:
                w = indices[wpos[wp - 1]]
                wpos[wp - 1] += 1
                if begin[w] == -1:
                    begin[w] = clock
                    clock += 1
                    wnode[wp] = w; wpos[wp] = indptr[w]; wp += 1
                continue
            wp -= 1
            end[v] = clock
            clock += 1
    return begin_arr, end_arr


def bloom_labels(const int64_t[::1] cindptr, const u32[::1] cindices, Py_ssize_t ncomp,
                 const int32_t[::1] hashbit, int words):
    out_arr = np.zeros((ncomp, words), dtype=np.uint64)
    in_arr = np.zeros((ncomp, words), dtype=np.uint64)
    if ncomp == 0:
        return out_arr, in_arr
    cdef uint64_t[:, ::1] so = out_arr
    cdef uint64_t[:, ::1] si = in_arr
    cdef Py_ssize_t c, p, d, w
    for c in range(ncomp):
        so[c, hashbit[c] >> 6] = (<uint64_t>1) << (hashbit[c] & 63)
        si[c, hashbit[c] >> 6] = (<uint64_t>1) << (hashbit[c] & 63)
    for c in range(ncomp - 1, -1, -1):
        for p in range(cindptr[c], cindptr[c + 1]):
            d = cindices[p]
            for w in range(words):
                so[c, w] |= so[d, w]
    for c in range(ncomp):
        for p in range(cindptr[c], cindptr[c + 1]):
            d = cindices[p]
            for w in range(words):
                si[d, w] |= si[c, w]
    return out_arr, in_arr


cdef class Reacher:
    """Exact u -> v path test (nonempty paths) over a condensed graph."""
    cdef const int32_t[::1] comp
    cdef const cnp.uint8_t[::1] cyclic
    cdef const int64_t[::1] begin
    cdef const int64_t[::1] end
    cdef const uint64_t[:, ::1] sig_out
    cdef const uint64_t[:, ::1] sig_in
    cdef const int64_t[::1] ptr
    cdef const u32[::1] idx
    cdef int32_t[::1] stamp
    cdef int32_t[::1] stack
    cdef int32_t epoch
    cdef int words

    def __init__(self, comp, cyclic, begin, end, sig_out, sig_in, cindptr, cindices):
        self.comp = comp
        self.cyclic = cyclic
        self.begin = begin
        self.end = end
        self.sig_out = sig_out
        self.sig_in = sig_in
        self.ptr = cindptr
        self.idx = cindices
        ncomp = len(begin)
        self.stamp = np.zeros(max(ncomp, 1), dtype=np.int32)
        self.stack = np.empty(max(ncomp, 1), dtype=np.int32)
        self.epoch = 0
        self.words = sig_out.shape[1]

    cdef inline int _label_verdict(self, Py_ssize_t w, Py_ssize_t cv) nogil:
        # 0 = unreachable, 1 = reachable, 2 = undecided
        cdef int k
        if w > cv or self.begin[cv] > self.end[w]:
            return 0
        if self.begin[w] < self.begin[cv] and self.end[cv] < self.end[w]:
            return 1
        for k in range(self.words):
            if (self.sig_out[cv, k] & ~self.sig_out[w, k]) or (self.sig_in[w, k] & ~self.sig_in[cv, k]):
                return 0
        return 2

    cdef bint reach_comp(self, Py_ssize_t cu, Py_ssize_t cv) nogil:
        cdef int verdict = self._label_verdict(cu, cv)
        cdef Py_ssize_t sp, w, p, s
        if verdict != 2:
            return verdict == 1
        self.epoch += 1
        if self.epoch == 2147483647:
            self.stamp[:] = 0
            self.epoch = 1
        self.stamp[cu] = self.epoch
        self.stack[0] = <int32_t>cu
        sp = 1
        while sp > 0:
            sp -= 1
            w = self.stack[sp]
            for p in range(self.ptr[w], self.ptr[w + 1]):
                s = self.idx[p]
                if s == cv:
                    return True
                if self.stamp[s] == self.epoch:
                    continue
                self.stamp[s] = self.epoch
                verdict = self._label_verdict(s, cv)
                if verdict == 1:
                    return True
                if verdict == 2:
                    self.stack[sp] = <int32_t>s
                    sp += 1
        return False

    cdef inline bint reach(self, Py_ssize_t u, Py_ssize_t v) nogil:
        cdef Py_ssize_t cu = self.comp[u], cv = self.comp[v]
        if cu == cv:
            return self.cyclic[cu] != 0
        return self.reach_comp(cu, cv)

    def reaches(self, Py_ssize_t u, Py_ssize_t v):
        return self.reach(u, v)

    def reaches_comp(self, Py_ssize_t cu, Py_ssize_t cv):
        return self.reach_comp(cu, cv)


def check_edge(bint direct, bint forward, const u32[::1] cand, const u32[::1] targets, wit,
               const int64_t[::1] indptr, const u32[::1] indices, Reacher reacher, end_id):
    """Keep the members of ``cand`` that have a partner in ``targets``;
    see the pure-Python twin for the argument contract."""
    cdef Py_ssize_t nc = cand.shape[0], nt = targets.shape[0], i, k = 0, j, lim, pos
    cdef const int64_t[::1] wv
    cdef const int64_t[::1] ev
    cdef bint use_wit = wit is not None
    cdef bint use_end = end_id is not None
    cdef int64_t w, found
    cdef u32 u
    kept_arr = np.empty(nc, dtype=np.uint32)
    kw_arr = np.empty(nc, dtype=np.int64)
    if nc == 0 or nt == 0:
        return kept_arr[:0].copy(), kw_arr[:0].copy()
    cdef u32[::1] kept = kept_arr
    cdef int64_t[::1] kw = kw_arr
    if use_wit:
        wv = wit
    if use_end:
        ev = end_id
    for i in range(nc):
        u = cand[i]
        if use_wit:
            w = wv[i]
            if w >= 0:
                pos = _lower_bound(&targets[0], 0, nt, <u32>w)
                if pos < nt and targets[pos] == w:
                    kept[k] = u
                    kw[k] = w
                    k += 1
                    continue
        found = -1
        if direct:
            if indptr[u + 1] > indptr[u]:
                pos = _first_common(&indices[indptr[u]], indptr[u + 1] - indptr[u], &targets[0], nt)
                if pos >= 0:
                    found = indices[indptr[u] + pos]
        elif forward:
            lim = nt
            if use_end:
                lim = _lower_bound(&targets[0], 0, nt, <u32>(ev[u] + 1)) if ev[u] + 1 <= 4294967295 else nt
            for j in range(lim):
                if reacher.reach(u, targets[j]):
                    found = targets[j]
                    break
        else:
            for j in range(nt):
                if reacher.reach(targets[j], u):
                    found = targets[j]
                    break
        if found >= 0:
            kept[k] = u
            kw[k] = found
            k += 1
    return kept_arr[:k].copy(), kw_arr[:k].copy()


def expand_direct(const u32[::1] src, const u32[::1] dst, const int64_t[::1] indptr,
                  const u32[::1] indices):
    cdef Py_ssize_t ns = src.shape[0], nd = dst.shape[0], i, total = 0, m
    rptr_arr = np.zeros(ns + 1, dtype=np.int64)
    cdef int64_t[::1] rptr = rptr_arr
    cdef u32 u
    for i in range(ns):
        u = src[i]
        rptr[i + 1] = rptr[i] + min(indptr[u + 1] - indptr[u], nd)
    out_arr = np.empty(rptr[ns], dtype=np.uint32)
    if ns == 0 or nd == 0 or rptr[ns] == 0:
        return np.zeros(ns + 1, dtype=np.int64), out_arr[:0].copy()
    cdef u32[::1] out = out_arr
    for i in range(ns):
        u = src[i]
        m = indptr[u + 1] - indptr[u]
        if m > 0:
            m = _intersect_into(&indices[indptr[u]], m, &dst[0], nd, &out[total])
        total += m
        rptr[i + 1] = total
    return rptr_arr, out_arr[:total].copy()


cdef int _cmp_u32(const void* a, const void* b) noexcept nogil:
    cdef u32 x = (<const u32*>a)[0], y = (<const u32*>b)[0]
    return (x > y) - (x < y)


def expand_reach(const u32[::1] src, const u32[::1] dst, Reacher reacher, end_id,
                 indptr=None, indices=None):
    """Rows ``dst`` reachable from each ``src`` node.

    Each row is found either by scanning ``dst`` (up to ``end_id[u]`` when
    given) with the reachability test, or, when the forward CSR is passed, by
    a search from ``u`` that gives up once it has cost more than the scan
    would.  Both give the same rows.
    """
    cdef Py_ssize_t ns = src.shape[0], nd = dst.shape[0], i, j, lim, k
    cdef bint use_end = end_id is not None
    cdef bint use_bfs = indptr is not None and nd > 0
    cdef const int64_t[::1] ev
    cdef const int64_t[::1] iptr
    cdef const u32[::1] iidx
    cdef Py_ssize_t n = 0, head, tail, work, budget, p, found
    cdef int64_t[::1] stamp
    cdef cnp.uint8_t[::1] isdst
    cdef u32[::1] queue
    cdef u32 v, w
    if use_end:
        ev = end_id
    if use_bfs:
        iptr = indptr
        iidx = indices
        n = iptr.shape[0] - 1
        stamp = np.zeros(n, dtype=np.int64)
        isdst = np.zeros(n, dtype=np.uint8)
        for j in range(nd):
            isdst[dst[j]] = 1
        queue = np.empty(n, dtype=np.uint32)
    rptr_arr = np.zeros(ns + 1, dtype=np.int64)
    cdef int64_t[::1] rptr = rptr_arr
    cdef Py_ssize_t cap = max(ns, 16)
    buf = np.empty(cap, dtype=np.uint32)
    cdef u32[::1] b = buf
    cdef Py_ssize_t total = 0
    cdef u32 u
    for i in range(ns):
        u = src[i]
        lim = nd
        if use_end and nd > 0:
            lim = _lower_bound(&dst[0], 0, nd, <u32>(ev[u] + 1)) if ev[u] + 1 <= 4294967295 else nd
        if use_bfs and lim > 16:
            # bounded search; on success the hits sit in queue[0:found]
            budget = 2 * lim + 64
            work = 0
            head = tail = 0
            found = -1
            for p in range(iptr[u], iptr[u + 1]):
                w = iidx[p]
                work += 1
                if stamp[w] != i + 1:
                    stamp[w] = i + 1
                    queue[tail] = w
                    tail += 1
            while head < tail and work <= budget:
                v = queue[head]
                head += 1
                for p in range(iptr[v], iptr[v + 1]):
                    w = iidx[p]
                    work += 1
                    if stamp[w] != i + 1:
                        stamp[w] = i + 1
                        queue[tail] = w
                        tail += 1
            if head == tail and work <= budget:
                found = 0
                for k in range(tail):
                    if isdst[queue[k]]:
                        queue[found] = queue[k]
                        found += 1
                if found > 1:
                    qsort(&queue[0], found, sizeof(u32), _cmp_u32)
            else:
                # abandoned: forget the marks so later sources start clean
                for k in range(tail):
                    stamp[queue[k]] = 0
            if found >= 0:
                if total + found > cap:
                    while total + found > cap:
                        cap *= 2
                    nb = np.empty(cap, dtype=np.uint32)
                    nb[:total] = buf[:total]
                    buf = nb
                    b = buf
                for k in range(found):
                    b[total + k] = queue[k]
                total += found
                rptr[i + 1] = total
                continue
        for j in range(lim):
            if reacher.reach(u, dst[j]):
                if total == cap:
                    cap *= 2
                    nb = np.empty(cap, dtype=np.uint32)
                    nb[:total] = buf[:total]
                    buf = nb
                    b = buf
                b[total] = dst[j]
                total += 1
        rptr[i + 1] = total
    return rptr_arr, buf[:total].copy()


cdef class Enumerator:
    """Resumable iterative backtracking; see the pure-Python twin."""
    cdef public Py_ssize_t n
    cdef public long long emitted
    cdef public long long ticks
    cdef public long long peak_cells
    cdef u32[::1] cos_all
    cdef int64_t[::1] cos_off
    cdef int64_t[::1] cons_ptr
    cdef int64_t[::1] cons_src
    cdef int64_t[::1] keys_off
    cdef int64_t[::1] keys_len
    cdef int64_t[::1] iptr_off
    cdef u32[::1] keys_all
    cdef int64_t[::1] iptr_all
    cdef u32[::1] idx_all
    cdef int64_t[::1] columns
    cdef u32[:, ::1] buf
    cdef u32[::1] tmp
    cdef int64_t[::1] lens
    cdef int64_t[::1] pos
    cdef u32[::1] t
    cdef Py_ssize_t level
    cdef bint done
    cdef int status
    cdef Py_ssize_t maxcos

    def __init__(self, cos_list, constraints, columns):
        self.n = len(cos_list)
        self.emitted = 0
        self.ticks = 0
        self.peak_cells = 0
        self.level = -1
        self.done = False
        self.status = 0
        sizes = [len(c) for c in cos_list]
        self.maxcos = max(sizes) if sizes else 0
        self.cos_all = np.concatenate(list(cos_list) + [np.empty(0, np.uint32)]).astype(np.uint32)
        self.cos_off = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        cons_ptr = [0]
        cons_src, keys_off, keys_len, iptr_off = [], [], [], []
        keys_parts, iptr_parts, idx_parts = [], [], []
        ko = io = xo = 0
        for level_cons in constraints:
            for j, keys, indptr, indices in level_cons:
                cons_src.append(j)
                keys_off.append(ko)
                keys_len.append(len(keys))
                iptr_off.append(io)
                keys_parts.append(np.asarray(keys, dtype=np.uint32))
                iptr_parts.append(np.asarray(indptr, dtype=np.int64) + xo)
                idx_parts.append(np.asarray(indices, dtype=np.uint32))
                ko += len(keys)
                io += len(indptr)
                xo += len(indices)
            cons_ptr.append(len(cons_src))
        self.cons_ptr = np.asarray(cons_ptr, dtype=np.int64)
        self.cons_src = np.asarray(cons_src, dtype=np.int64)
        self.keys_off = np.asarray(keys_off, dtype=np.int64)
        self.keys_len = np.asarray(keys_len, dtype=np.int64)
        self.iptr_off = np.asarray(iptr_off, dtype=np.int64)
        self.keys_all = np.concatenate(keys_parts + [np.empty(0, np.uint32)]).astype(np.uint32)
        self.iptr_all = np.concatenate(iptr_parts + [np.empty(0, np.int64)]).astype(np.int64)
        self.idx_all = np.concatenate(idx_parts + [np.empty(0, np.uint32)]).astype(np.uint32)
        self.columns = np.asarray(list(columns), dtype=np.int64)
        self.buf = np.empty((max(self.n, 1), max(self.maxcos, 1)), dtype=np.uint32)
        self.tmp = np.empty(max(self.maxcos, 1), dtype=np.uint32)
        self.lens = np.zeros(max(self.n, 1), dtype=np.int64)
        self.pos = np.zeros(max(self.n, 1), dtype=np.int64)
        self.t = np.zeros(max(self.n, 1), dtype=np.uint32)

    cdef void _enter(self, Py_ssize_t i) nogil:
        cdef Py_ssize_t c0 = self.cons_ptr[i], c1 = self.cons_ptr[i + 1], nc = c1 - c0
        cdef Py_ssize_t c, a, b, kpos, m, k, best
        cdef const u32* rows_p[64]
        cdef Py_ssize_t rows_n[64]
        cdef const u32* tp
        cdef Py_ssize_t tn
        cdef u32 v
        cdef int64_t live = 0
        if nc == 0:
            m = self.cos_off[i + 1] - self.cos_off[i]
            for k in range(m):
                self.buf[i, k] = self.cos_all[self.cos_off[i] + k]
            self.lens[i] = m
        else:
            for c in range(nc):
                v = self.t[self.cons_src[c0 + c]]
                kpos = _lower_bound(&self.keys_all[0], self.keys_off[c0 + c],
                                    self.keys_off[c0 + c] + self.keys_len[c0 + c], v)
                kpos -= self.keys_off[c0 + c]
                a = self.iptr_all[self.iptr_off[c0 + c] + kpos]
                b = self.iptr_all[self.iptr_off[c0 + c] + kpos + 1]
                rows_p[c] = &self.idx_all[a] if b > a else NULL
                rows_n[c] = b - a
            # smallest rows first
            for a in range(1, nc):
                tp = rows_p[a]
                tn = rows_n[a]
                b = a - 1
                while b >= 0 and rows_n[b] > tn:
                    rows_p[b + 1] = rows_p[b]
                    rows_n[b + 1] = rows_n[b]
                    b -= 1
                rows_p[b + 1] = tp
                rows_n[b + 1] = tn
            m = rows_n[0]
            for k in range(m):
                self.buf[i, k] = rows_p[0][k]
            for c in range(1, nc):
                if m == 0:
                    break
                m = _intersect_into(&self.buf[i, 0], m, rows_p[c], rows_n[c], &self.buf[i, 0])
            self.lens[i] = m
        self.pos[i] = 0
        self.level = i
        for k in range(i + 1):
            live += self.lens[k]
        if live > self.peak_cells:
            self.peak_cells = live

    def run(self, long long max_matches=-1, double deadline=-1.0, out=None):
        """Advance the search; returns ``(rows, status)``."""
        cdef Py_ssize_t i, k, rows = 0, cap = -1
        cdef u32[:, ::1] o
        cdef bint fill = out is not None
        cdef Py_ssize_t n = self.n
        if self.done:
            return 0, self.status
        if n == 0:
            self.done = True
            self.status = EXHAUSTED
            return 0, EXHAUSTED
        for i in range(n):
            if self.cons_ptr[i + 1] - self.cons_ptr[i] > 64:
                raise ValueError("too many joined neighbours for one query node")
        if fill:
            o = out
            cap = o.shape[0]
        if self.level < 0:
            self._enter(0)
        while True:
            i = self.level
            if self.pos[i] >= self.lens[i]:
                if i == 0:
                    self.done = True
                    self.status = EXHAUSTED
                    return rows, EXHAUSTED
                self.level = i - 1
                self.pos[i - 1] += 1
                continue
            self.t[i] = self.buf[i, self.pos[i]]
            if i == n - 1:
                if max_matches >= 0 and self.emitted >= max_matches:
                    self.done = True
                    self.status = TRUNCATED
                    return rows, TRUNCATED
                if fill:
                    if rows >= cap:
                        return rows, MORE
                    for k in range(n):
                        o[rows, self.columns[k]] = self.t[k]
                    rows += 1
                self.emitted += 1
                self.pos[i] += 1
                continue
            self.ticks += 1
            if deadline >= 0 and (self.ticks & 4095) == 0 and _now() > deadline:
                self.done = True
                self.status = TIMED_OUT
                return rows, TIMED_OUT
            self._enter(i + 1)
