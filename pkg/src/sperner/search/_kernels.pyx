# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels.

Mirrors _kernels_py operation for operation: same RNG draws in the same
order, same float expressions, same tie-breaks.  A fixed seed therefore
produces identical trajectories on either backend; the tests rely on it.
The annealer packs each family bitset into one machine word, so it only
serves grounds with at most 6 elements; the engine falls back to the
pure kernel above that.
"""

from libc.math cimport exp as cexp, pow as cpow
from libc.stdint cimport int64_t, uint8_t, uint64_t
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy, memset
from posix.time cimport CLOCK_MONOTONIC, clock_gettime, timespec

cdef extern from *:
    """
    static inline int popcount64(unsigned long long x) {
    #if defined(__GNUC__) || defined(__clang__)
        return __builtin_popcountll(x);
    #else
        int c = 0;
        while (x) { x &= x - 1; c++; }
        return c;
    #endif
    }
    """
    int popcount64(unsigned long long x) nogil
    ctypedef unsigned long long uint128_t "unsigned __int128"

BACKEND = "compiled"
ANNEAL_MAX_GROUND = 6

cdef enum:
    FREE = 0
    DEAD = 255

cdef int64_t _INF = <int64_t> 1 << 60


cdef inline double _mono() noexcept nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9


cdef inline uint64_t _sm64(uint64_t *state) noexcept nogil:
    state[0] = state[0] + <uint64_t> 0x9E3779B97F4A7C15
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t> 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t> 0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t _rand_below(uint64_t *state, uint64_t bound) noexcept nogil:
    cdef uint64_t z = _sm64(state)
    return <uint64_t> ((<uint128_t> z * bound) >> 64)


cdef inline double _rand_unit(uint64_t *state) noexcept nogil:
    cdef uint64_t z = _sm64(state)
    return (z >> 11) * (1.0 / 9007199254740992.0)


def sm64_next(state):
    """One generator step, exposed so the backends can be diffed draw
    by draw.  Returns (new_state, value)."""
    cdef uint64_t s = <uint64_t> (state & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t z = _sm64(&s)
    return s, z


# -- monotone pair scan ------------------------------------------------------


def comp_scan(upsets, usizes, downsets, dsizes, total):
    """Same contract as the pure version: per intersection size t, the
    minimum |U| + |D| - t and the first pair in scan order attaining it."""
    cdef Py_ssize_t count = len(upsets)
    cdef int tt = total
    cdef uint64_t *ups = <uint64_t *> malloc(count * sizeof(uint64_t))
    cdef uint64_t *downs = <uint64_t *> malloc(count * sizeof(uint64_t))
    cdef int64_t *us = <int64_t *> malloc(count * sizeof(int64_t))
    cdef int64_t *ds = <int64_t *> malloc(count * sizeof(int64_t))
    cdef int64_t *best = <int64_t *> malloc((tt + 1) * sizeof(int64_t))
    cdef int64_t *bu = <int64_t *> malloc((tt + 1) * sizeof(int64_t))
    cdef int64_t *bd = <int64_t *> malloc((tt + 1) * sizeof(int64_t))
    if not (ups and downs and us and ds and best and bu and bd):
        raise MemoryError
    cdef Py_ssize_t i, j
    cdef int t
    cdef int64_t v, su
    cdef uint64_t u
    try:
        for i in range(count):
            ups[i] = upsets[i]
            downs[i] = downsets[i]
            us[i] = usizes[i]
            ds[i] = dsizes[i]
        with nogil:
            for t in range(tt + 1):
                best[t] = _INF
                bu[t] = -1
                bd[t] = -1
            for i in range(count):
                u = ups[i]
                su = us[i]
                for j in range(count):
                    t = popcount64(u & downs[j])
                    v = su + ds[j] - t
                    if v < best[t]:
                        best[t] = v
                        bu[t] = i
                        bd[t] = j
        return ([best[t] for t in range(tt + 1)],
                [bu[t] for t in range(tt + 1)],
                [bd[t] for t in range(tt + 1)])
    finally:
        free(ups); free(downs); free(us); free(ds)
        free(best); free(bu); free(bd)


# -- exact label-assignment DFS ---------------------------------------------


cdef struct _Ctx:
    int M
    int k
    bint product
    int64_t *masks
    uint64_t *cmp
    uint8_t *labels
    uint8_t *pins          # (M + 1) rows of M
    int64_t *counts
    int64_t best
    uint8_t *best_labels
    bint has_labels
    int64_t *best_key
    int best_key_len
    int64_t *key_buf
    int64_t *tmp
    int64_t *starts
    int64_t *lens
    int64_t *ford
    int64_t *wf
    int64_t nodes
    int64_t target
    int64_t node_budget
    double deadline
    bint aborted


cdef int _build_key(_Ctx *c, int64_t *out) noexcept nogil:
    cdef int pos = 0, i, j, jj, a, b, klen
    cdef int64_t x
    for j in range(1, c.k + 1):
        c.starts[j] = pos
        for i in range(c.M):
            if c.labels[i] == j:
                c.tmp[pos] = c.masks[i]
                pos += 1
        # insertion sort this family's members ascending
        for a in range(<int> c.starts[j] + 1, pos):
            x = c.tmp[a]
            b = a - 1
            while b >= c.starts[j] and c.tmp[b] > x:
                c.tmp[b + 1] = c.tmp[b]
                b -= 1
            c.tmp[b + 1] = x
        c.lens[j] = pos - c.starts[j]
    for j in range(c.k):
        c.ford[j] = j + 1
    # order families by least member (members are disjoint across families)
    for a in range(c.k):
        b = a
        for jj in range(a + 1, c.k):
            if c.tmp[c.starts[c.ford[jj]]] < c.tmp[c.starts[c.ford[b]]]:
                b = jj
        x = c.ford[a]; c.ford[a] = c.ford[b]; c.ford[b] = x
    klen = 0
    for a in range(c.k):
        j = <int> c.ford[a]
        if a:
            out[klen] = -1
            klen += 1
        for i in range(<int> c.starts[j], <int> (c.starts[j] + c.lens[j])):
            out[klen] = c.tmp[i]
            klen += 1
    return klen


cdef inline int _cmp_key(int64_t *a, int la, int64_t *b, int lb) noexcept nogil:
    cdef int i, n = la if la < lb else lb
    for i in range(n):
        if a[i] != b[i]:
            return -1 if a[i] < b[i] else 1
    return 0 if la == lb else (-1 if la < lb else 1)


cdef int64_t _waterfill(_Ctx *c, int used, int64_t units) noexcept nogil:
    cdef int i, a, b, cnt
    cdef int64_t x, lev, u, gap, base, r, bound
    for i in range(used):
        c.wf[i] = c.counts[i + 1]
    for i in range(used, c.k):
        c.wf[i] = 0
    for a in range(1, c.k):
        x = c.wf[a]
        b = a - 1
        while b >= 0 and c.wf[b] > x:
            c.wf[b + 1] = c.wf[b]
            b -= 1
        c.wf[b + 1] = x
    lev = c.wf[0]
    cnt = 1
    u = units
    i = 1
    while i < c.k:
        gap = c.wf[i] - lev
        if cnt * gap <= u:
            u -= cnt * gap
            lev = c.wf[i]
            cnt += 1
            i += 1
        else:
            break
    base = lev + u // cnt
    r = u % cnt
    bound = 1
    for i in range(<int> r):
        bound *= base + 1
    for i in range(cnt - <int> r):
        bound *= base
    for i in range(cnt, c.k):
        bound *= c.wf[i]
    return bound


cdef void _leaf(_Ctx *c, int used, int64_t cur_sum) noexcept nogil:
    cdef int64_t v
    cdef int j, klen, rel
    if used != c.k:
        return
    if c.product:
        v = 1
        for j in range(1, c.k + 1):
            v *= c.counts[j]
    else:
        v = cur_sum
    if v > c.best:
        c.best = v
        memcpy(c.best_labels, c.labels, c.M)
        c.has_labels = True
        c.best_key_len = _build_key(c, c.best_key)
    elif v == c.best:
        klen = _build_key(c, c.key_buf)
        if not c.has_labels:
            rel = -1
        else:
            rel = _cmp_key(c.key_buf, klen, c.best_key, c.best_key_len)
        if rel < 0:
            memcpy(c.best_labels, c.labels, c.M)
            c.has_labels = True
            memcpy(c.best_key, c.key_buf, klen * sizeof(int64_t))
            c.best_key_len = klen


cdef void _rec(_Ctx *c, int d, int used, int64_t cur_sum, uint8_t *pin) noexcept nogil:
    cdef int i, p, n_choices, ci, cval
    cdef int64_t free_rem, pin_rem, bound
    cdef uint64_t fwd, low
    cdef uint8_t *child
    cdef uint8_t q
    c.nodes += 1
    if c.aborted or (c.node_budget and c.nodes > c.node_budget):
        c.aborted = True
        return
    if c.target and c.best >= c.target:
        c.aborted = True
        return
    if c.deadline and c.nodes % 4096 == 0 and _mono() > c.deadline:
        c.aborted = True
        return
    if d == c.M:
        _leaf(c, used, cur_sum)
        return
    free_rem = 0
    pin_rem = 0
    for i in range(d, c.M):
        p = pin[i]
        if p == FREE:
            free_rem += 1
        elif p != DEAD:
            pin_rem += 1
    if used < c.k and free_rem < c.k - used:
        return
    if c.product:
        bound = _waterfill(c, used, free_rem + pin_rem)
    else:
        bound = cur_sum + free_rem + pin_rem
    if bound < c.best:
        return
    p = pin[d]
    if p == DEAD:
        n_choices = 0
    elif p == FREE:
        n_choices = used + 1 if used < c.k else c.k
    else:
        n_choices = 1
    child = c.pins + (d + 1) * c.M
    for ci in range(n_choices):
        cval = ci + 1 if p == FREE else p
        c.labels[d] = cval
        c.counts[cval] += 1
        memcpy(child, pin, c.M)
        fwd = c.cmp[d]
        while fwd:
            low = fwd & (~fwd + 1)
            i = popcount64(low - 1)
            fwd ^= low
            q = child[i]
            if q == FREE:
                child[i] = cval
            elif q != cval:
                child[i] = DEAD
        _rec(c, d + 1, used + (1 if cval > used else 0), cur_sum + 1, child)
        c.counts[cval] -= 1
        if c.aborted:
            c.labels[d] = 0
            return
    c.labels[d] = 0
    _rec(c, d + 1, used, cur_sum, pin)


def exact_search(m_count, k, product, masks, cmp_fwd, floor_value,
                 target, node_budget, deadline):
    """Same contract as the pure version; see there for the search story."""
    cdef _Ctx c
    cdef int M = m_count, i
    cdef int kk = k
    cdef int keycap = M + kk + 1
    memset(&c, 0, sizeof(c))
    c.M = M
    c.k = kk
    c.product = bool(product)
    c.best = floor_value
    c.target = target or 0
    c.node_budget = node_budget or 0
    c.deadline = deadline or 0.0
    c.masks = <int64_t *> malloc(max(M, 1) * sizeof(int64_t))
    c.cmp = <uint64_t *> malloc(max(M, 1) * sizeof(uint64_t))
    c.labels = <uint8_t *> malloc(max(M, 1))
    c.best_labels = <uint8_t *> malloc(max(M, 1))
    c.pins = <uint8_t *> malloc(max((M + 1) * M, 1))
    c.counts = <int64_t *> malloc((kk + 1) * sizeof(int64_t))
    c.best_key = <int64_t *> malloc(keycap * sizeof(int64_t))
    c.key_buf = <int64_t *> malloc(keycap * sizeof(int64_t))
    c.tmp = <int64_t *> malloc(max(M, 1) * sizeof(int64_t))
    c.starts = <int64_t *> malloc((kk + 1) * sizeof(int64_t))
    c.lens = <int64_t *> malloc((kk + 1) * sizeof(int64_t))
    c.ford = <int64_t *> malloc(max(kk, 1) * sizeof(int64_t))
    c.wf = <int64_t *> malloc(max(kk, 1) * sizeof(int64_t))
    if not (c.masks and c.cmp and c.labels and c.best_labels and c.pins
            and c.counts and c.best_key and c.key_buf and c.tmp and c.starts
            and c.lens and c.ford and c.wf):
        _free_ctx(&c)
        raise MemoryError
    try:
        for i in range(M):
            c.masks[i] = masks[i]
            c.cmp[i] = cmp_fwd[i]
            c.labels[i] = 0
        for i in range(kk + 1):
            c.counts[i] = 0
        if M:
            memset(c.pins, 0, (M + 1) * M)
        if M:
            with nogil:
                _rec(&c, 0, 0, 0, c.pins)
        else:
            c.nodes = 1
        labels_out = None
        if c.has_labels:
            labels_out = [c.best_labels[i] for i in range(M)]
        return c.best, labels_out, c.nodes, not c.aborted
    finally:
        _free_ctx(&c)


cdef void _free_ctx(_Ctx *c) noexcept:
    free(c.masks); free(c.cmp); free(c.labels); free(c.best_labels)
    free(c.pins); free(c.counts); free(c.best_key); free(c.key_buf)
    free(c.tmp); free(c.starts); free(c.lens); free(c.ford); free(c.wf)


# -- annealing chain ---------------------------------------------------------


cdef struct _Ann:
    int n
    int k
    int total
    bint product
    uint64_t hi[6]            # positions whose mask has element b
    uint64_t all_bits
    uint8_t *labels
    uint64_t *fams
    uint64_t *ups
    uint64_t *downs
    int64_t *counts
    uint64_t support
    int support_count
    # snapshot
    uint8_t *s_labels
    uint64_t *s_fams
    uint64_t *s_ups
    uint64_t *s_downs
    int64_t *s_counts
    uint64_t s_support
    int s_support_count
    # usable masks
    int n_usable
    int *usable
    uint64_t usable_bits
    int *order
    int *feas


cdef inline uint64_t _close_up(_Ann *a, uint64_t bits) noexcept nogil:
    cdef int b
    for b in range(a.n):
        bits |= (bits & ~a.hi[b]) << (<uint64_t> 1 << b)
    return bits


cdef inline uint64_t _close_down(_Ann *a, uint64_t bits) noexcept nogil:
    cdef int b
    for b in range(a.n):
        bits |= (bits & a.hi[b]) >> (<uint64_t> 1 << b)
    return bits


cdef inline void _reclose(_Ann *a, int j) noexcept nogil:
    cdef uint64_t bits = a.fams[j]
    if bits:
        a.ups[j] = _close_up(a, bits)
        a.downs[j] = _close_down(a, bits)
    else:
        a.ups[j] = 0
        a.downs[j] = 0


cdef void _ann_load(_Ann *a, uint8_t *labels) noexcept nogil:
    cdef int m, j
    memcpy(a.labels, labels, a.total)
    for j in range(a.k + 1):
        a.fams[j] = 0
        a.counts[j] = 0
    a.support = 0
    for m in range(a.total):
        j = labels[m]
        if j:
            a.fams[j] |= <uint64_t> 1 << m
            a.counts[j] += 1
            a.support |= <uint64_t> 1 << m
    a.support_count = popcount64(a.support)
    for j in range(1, a.k + 1):
        _reclose(a, j)


cdef inline void _snapshot(_Ann *a) noexcept nogil:
    memcpy(a.s_labels, a.labels, a.total)
    memcpy(a.s_fams, a.fams, (a.k + 1) * sizeof(uint64_t))
    memcpy(a.s_ups, a.ups, (a.k + 1) * sizeof(uint64_t))
    memcpy(a.s_downs, a.downs, (a.k + 1) * sizeof(uint64_t))
    memcpy(a.s_counts, a.counts, (a.k + 1) * sizeof(int64_t))
    a.s_support = a.support
    a.s_support_count = a.support_count


cdef inline void _restore(_Ann *a) noexcept nogil:
    memcpy(a.labels, a.s_labels, a.total)
    memcpy(a.fams, a.s_fams, (a.k + 1) * sizeof(uint64_t))
    memcpy(a.ups, a.s_ups, (a.k + 1) * sizeof(uint64_t))
    memcpy(a.downs, a.s_downs, (a.k + 1) * sizeof(uint64_t))
    memcpy(a.counts, a.s_counts, (a.k + 1) * sizeof(int64_t))
    a.support = a.s_support
    a.support_count = a.s_support_count


cdef inline bint _feasible(_Ann *a, int m, int j) noexcept nogil:
    cdef uint64_t bit = <uint64_t> 1 << m
    cdef int i
    for i in range(1, a.k + 1):
        if i != j and (a.ups[i] | a.downs[i]) & bit:
            return False
    return True


cdef inline void _ann_add(_Ann *a, int m, int j) noexcept nogil:
    a.labels[m] = j
    a.fams[j] |= <uint64_t> 1 << m
    a.counts[j] += 1
    a.support |= <uint64_t> 1 << m
    a.support_count += 1
    _reclose(a, j)


cdef inline void _ann_remove(_Ann *a, int m) noexcept nogil:
    cdef int j = a.labels[m]
    a.labels[m] = 0
    a.fams[j] &= ~(<uint64_t> 1 << m)
    a.counts[j] -= 1
    a.support &= ~(<uint64_t> 1 << m)
    a.support_count -= 1
    _reclose(a, j)


cdef inline int64_t _ann_value(_Ann *a) noexcept nogil:
    cdef int64_t v
    cdef int j
    if a.product:
        v = 1
        for j in range(1, a.k + 1):
            v *= a.counts[j]
        return v
    return a.support_count


cdef inline int _nth_member(uint64_t bits, uint64_t idx) noexcept nogil:
    cdef uint64_t low
    while True:
        low = bits & (~bits + 1)
        if idx == 0:
            return popcount64(low - 1)
        idx -= 1
        bits ^= low


cdef uint64_t _component(_Ann *a, int m) noexcept nogil:
    cdef uint64_t comp = <uint64_t> 1 << m
    cdef uint64_t near, low, bit
    cdef int stack[64]
    cdef int top = 0, x
    stack[top] = m
    top += 1
    while top:
        top -= 1
        x = stack[top]
        bit = <uint64_t> 1 << x
        near = (_close_up(a, bit) | _close_down(a, bit)) & a.support & ~comp
        while near:
            low = near & (~near + 1)
            near ^= low
            comp |= low
            stack[top] = popcount64(low - 1)
            top += 1
    return comp


cdef uint64_t _fill(_Ann *a, uint64_t state) noexcept nogil:
    cdef int i, m, j, bestj, e
    cdef int beste, bestc
    cdef uint64_t bit
    cdef uint64_t r
    cdef bint enclosed_only
    cdef int pass_no
    for i in range(a.n_usable):
        a.order[i] = a.usable[i]
    for i in range(a.n_usable - 1, 0, -1):
        r = _rand_below(&state, i + 1)
        m = a.order[i]
        a.order[i] = a.order[<int> r]
        a.order[<int> r] = m
    for pass_no in range(2):
        enclosed_only = pass_no == 0
        for i in range(a.n_usable):
            m = a.order[i]
            if a.labels[m]:
                continue
            bit = <uint64_t> 1 << m
            bestj = 0
            beste = 2
            bestc = 0
            for j in range(1, a.k + 1):
                if not _feasible(a, m, j):
                    continue
                e = 0 if (a.ups[j] | a.downs[j]) & bit else 1
                if bestj == 0 or e < beste or (e == beste and a.counts[j] < bestc):
                    bestj = j
                    beste = e
                    bestc = <int> a.counts[j]
            if bestj and (not enclosed_only or beste == 0):
                _ann_add(a, m, bestj)
    return state


def anneal_chain(n, k, product, usable, variants, seed, steps, t0, alpha,
                 restart_interval, stop_value, deadline):
    """Same contract and trajectory as the pure version, one word per
    bitset; n must stay at or below ANNEAL_MAX_GROUND."""
    if n > ANNEAL_MAX_GROUND:
        raise ValueError("compiled annealer is limited to n <= 6")
    cdef _Ann a
    cdef int total = 1 << n
    cdef int kk = k
    cdef int n_var = len(variants)
    cdef int i, j, m
    memset(&a, 0, sizeof(a))
    a.n = n
    a.k = kk
    a.total = total
    a.product = bool(product)
    a.n_usable = len(usable)
    for i in range(n):
        for m in range(total):
            if m >> i & 1:
                a.hi[i] |= <uint64_t> 1 << m
    a.labels = <uint8_t *> malloc(total)
    a.s_labels = <uint8_t *> malloc(total)
    a.fams = <uint64_t *> malloc((kk + 1) * sizeof(uint64_t))
    a.ups = <uint64_t *> malloc((kk + 1) * sizeof(uint64_t))
    a.downs = <uint64_t *> malloc((kk + 1) * sizeof(uint64_t))
    a.counts = <int64_t *> malloc((kk + 1) * sizeof(int64_t))
    a.s_fams = <uint64_t *> malloc((kk + 1) * sizeof(uint64_t))
    a.s_ups = <uint64_t *> malloc((kk + 1) * sizeof(uint64_t))
    a.s_downs = <uint64_t *> malloc((kk + 1) * sizeof(uint64_t))
    a.s_counts = <int64_t *> malloc((kk + 1) * sizeof(int64_t))
    a.usable = <int *> malloc(max(a.n_usable, 1) * sizeof(int))
    a.order = <int *> malloc(max(a.n_usable, 1) * sizeof(int))
    a.feas = <int *> malloc((kk + 1) * sizeof(int))
    cdef uint8_t *var_buf = <uint8_t *> malloc(max(n_var * total, 1))
    cdef uint8_t *best_labels = <uint8_t *> malloc(total)
    if not (a.labels and a.s_labels and a.fams and a.ups and a.downs
            and a.counts and a.s_fams and a.s_ups and a.s_downs and a.s_counts
            and a.usable and a.order and a.feas and var_buf and best_labels):
        _free_ann(&a); free(var_buf); free(best_labels)
        raise MemoryError
    cdef uint64_t state = seed & <uint64_t> 0xFFFFFFFFFFFFFFFF
    cdef int64_t stop = stop_value or 0
    cdef double dl = deadline or 0.0
    cdef int n_steps = steps
    cdef double T0 = t0, al = alpha
    cdef int64_t restart = restart_interval
    cdef int64_t best = 0
    cdef int done = 0
    try:
        for i in range(a.n_usable):
            a.usable[i] = usable[i]
            a.usable_bits |= <uint64_t> 1 << <int> usable[i]
        for i in range(n_var):
            for m in range(total):
                var_buf[i * total + m] = variants[i][m]
        with nogil:
            done = _ann_run(&a, var_buf, n_var, &state, n_steps, T0, al,
                            restart, stop, dl, &best, best_labels)
        return best, [best_labels[m] for m in range(total)], done
    finally:
        _free_ann(&a)
        free(var_buf)
        free(best_labels)


cdef void _free_ann(_Ann *a) noexcept:
    free(a.labels); free(a.s_labels); free(a.fams); free(a.ups)
    free(a.downs); free(a.counts); free(a.s_fams); free(a.s_ups)
    free(a.s_downs); free(a.s_counts); free(a.usable); free(a.order)
    free(a.feas)


cdef int _ann_run(_Ann *a, uint8_t *var_buf, int n_var, uint64_t *state,
                  int steps, double t0, double alpha, int64_t restart_interval,
                  int64_t stop_value, double deadline, int64_t *best_out,
                  uint8_t *best_labels) noexcept nogil:
    cdef int64_t cur, best, nv
    cdef double temp = t0, r, z, u, p_ruin, p
    cdef int variant_idx = 0
    cdef int64_t last_improve = 0
    cdef int done = 0, step, m, j, jj, csize, n_feas
    cdef uint64_t idx, pick, bits, low, comp, near, spare, pivot
    cdef bint moved, accept
    _ann_load(a, var_buf)
    state[0] = _fill(a, state[0])
    cur = _ann_value(a)
    best = cur
    memcpy(best_labels, a.labels, a.total)
    for step in range(steps):
        done = step + 1
        if deadline and step % 256 == 0 and _mono() > deadline:
            break
        r = _rand_unit(state)
        _snapshot(a)
        moved = False
        if r < 0.20:  # remove
            if a.support_count:
                idx = _rand_below(state, a.support_count)
                m = _nth_member(a.support, idx)
                if a.counts[a.labels[m]] > 1:
                    _ann_remove(a, m)
                    moved = True
        elif r < 0.40:  # move to another family
            if a.support_count:
                idx = _rand_below(state, a.support_count)
                m = _nth_member(a.support, idx)
                j = a.labels[m]
                if a.counts[j] > 1:
                    pick = _rand_below(state, a.k - 1)
                    jj = <int> pick + 1 + (1 if <int> pick + 1 >= j else 0)
                    _ann_remove(a, m)
                    if _feasible(a, m, jj):
                        _ann_add(a, m, jj)
                        moved = True
                    else:
                        _restore(a)
        elif r < 0.55:  # recolor a whole component
            if a.support_count:
                idx = _rand_below(state, a.support_count)
                m = _nth_member(a.support, idx)
                j = a.labels[m]
                comp = _component(a, m)
                csize = popcount64(comp)
                if csize < a.counts[j]:
                    pick = _rand_below(state, a.k - 1)
                    jj = <int> pick + 1 + (1 if <int> pick + 1 >= j else 0)
                    bits = comp
                    while bits:
                        low = bits & (~bits + 1)
                        bits ^= low
                        _ann_remove(a, popcount64(low - 1))
                    bits = comp
                    while bits:
                        low = bits & (~bits + 1)
                        bits ^= low
                        _ann_add(a, popcount64(low - 1), jj)
                    moved = True
        elif r < 0.70:  # add
            spare = a.usable_bits & ~a.support
            csize = popcount64(spare)
            if csize:
                idx = _rand_below(state, csize)
                m = _nth_member(spare, idx)
                n_feas = 0
                for j in range(1, a.k + 1):
                    if _feasible(a, m, j):
                        a.feas[n_feas] = j
                        n_feas += 1
                if n_feas:
                    pick = _rand_below(state, n_feas)
                    _ann_add(a, m, a.feas[<int> pick])
                    moved = True
        elif r < 0.85:  # ruin a random chunk of the support and rebuild
            z = _rand_unit(state)
            p_ruin = 0.1 + 0.3 * z
            bits = a.support
            while bits:
                low = bits & (~bits + 1)
                bits ^= low
                u = _rand_unit(state)
                if u < p_ruin:
                    m = popcount64(low - 1)
                    if a.counts[a.labels[m]] > 1:
                        _ann_remove(a, m)
                        moved = True
        else:  # dig a coordinated hole: drop everything comparable to a pivot
            idx = _rand_below(state, a.n_usable)
            pivot = <uint64_t> 1 << a.usable[<int> idx]
            near = (_close_up(a, pivot) | _close_down(a, pivot)) & a.support
            while near:
                low = near & (~near + 1)
                near ^= low
                m = popcount64(low - 1)
                if a.counts[a.labels[m]] > 1:
                    _ann_remove(a, m)
                    moved = True
        if moved:
            state[0] = _fill(a, state[0])
            nv = _ann_value(a)
            accept = nv >= cur
            if not accept:
                if a.product:
                    p = cpow(<double> nv / <double> cur, 1.0 / temp) if cur else 0.0
                else:
                    p = cexp((<double> nv - <double> cur) / temp)
                u = _rand_unit(state)
                accept = u < p
            if accept:
                cur = nv
                if nv > best:
                    best = nv
                    memcpy(best_labels, a.labels, a.total)
                    last_improve = step
                    if stop_value and best >= stop_value:
                        break
            else:
                _restore(a)
        temp *= alpha
        if temp < 1e-6:
            temp = 1e-6
        if step - last_improve > restart_interval:
            variant_idx += 1
            _ann_load(a, var_buf + (variant_idx % n_var) * a.total)
            state[0] = _fill(a, state[0])
            cur = _ann_value(a)
            temp = t0
            last_improve = step
    best_out[0] = best
    return done
