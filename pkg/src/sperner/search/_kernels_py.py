"""Pure Python search kernels.

Reference implementations of the three hot loops: the monotone-pair scan
behind the comparability table, the exact label-assignment DFS, and the
annealing chain.  The compiled module mirrors these semantics operation
for operation (same RNG, same tie-breaks, same float expressions), so a
given seed walks the same trajectory on either backend.
"""

from __future__ import annotations

import math
import time

from ..lattice import _closure_bits

BACKEND = "pure"
ANNEAL_MAX_GROUND = 20

_INF = 1 << 60
_MASK64 = (1 << 64) - 1

FREE = 0
DEAD = 255


def _popcount(x: int) -> int:
    return x.bit_count()


# -- splitmix64, mirrored bit for bit by the compiled kernel ----------------


def sm64_next(state: int) -> tuple[int, int]:
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


def _rand_below(state: int, bound: int) -> tuple[int, int]:
    # Lemire multiply-shift; bound 0 is the caller's bug
    state, z = sm64_next(state)
    return state, (z * bound) >> 64


def _rand_unit(state: int) -> tuple[int, float]:
    state, z = sm64_next(state)
    return state, (z >> 11) * (2.0**-53)


# -- monotone pair scan ------------------------------------------------------


def comp_scan(upsets, usizes, downsets, dsizes, total):
    """For each intersection size t, the minimum of |U| + |D| - t over all
    (upset, downset) pairs with |U & D| = t, plus the first pair in scan
    order attaining that minimum.  Pure fallback uses numpy when present,
    plain loops otherwise."""
    try:
        import numpy as np
    except ImportError:  # pragma: no cover - numpy is a hard dependency
        np = None
    best = [_INF] * (total + 1)
    bu = [-1] * (total + 1)
    bd = [-1] * (total + 1)
    if np is not None:
        d_arr = np.asarray(downsets, dtype=np.uint64)
        ds_arr = np.asarray(dsizes, dtype=np.int64)
        best_a = np.full(total + 1, _INF, dtype=np.int64)
        for i, u in enumerate(upsets):
            t = np.bitwise_count(np.uint64(u) & d_arr).astype(np.int64)
            np.minimum.at(best_a, t, usizes[i] + ds_arr - t)
        found = np.zeros(total + 1, dtype=bool)
        for i, u in enumerate(upsets):
            t = np.bitwise_count(np.uint64(u) & d_arr).astype(np.int64)
            v = usizes[i] + ds_arr - t
            hits = np.flatnonzero((v == best_a[t]) & ~found[t])
            for j in hits:
                tj = int(t[j])
                if not found[tj]:
                    found[tj] = True
                    bu[tj], bd[tj] = i, int(j)
            if found.all():
                break
        return best_a.tolist(), bu, bd
    for i, u in enumerate(upsets):
        su = usizes[i]
        for j, d in enumerate(downsets):
            t = _popcount(u & d)
            v = su + dsizes[j] - t
            if v < best[t]:
                best[t] = v
                bu[t], bd[t] = i, j
    return best, bu, bd


# -- exact label-assignment DFS ---------------------------------------------


def _canonical_key(labels, masks, k):
    fams = [[] for _ in range(k)]
    for i, lab in enumerate(labels):
        if lab:
            fams[lab - 1].append(masks[i])
    for f in fams:
        f.sort()
    fams.sort()
    return tuple(tuple(f) for f in fams)


def _waterfill_product(values, units):
    """Max of prod(v_i + x_i) over x >= 0 with sum(x) = units: raise the
    lowest entries first."""
    w = sorted(values)
    k = len(w)
    lev, cnt, u = w[0], 1, units
    idx = 1
    while idx < k:
        gap = w[idx] - lev
        if cnt * gap <= u:
            u -= cnt * gap
            lev = w[idx]
            cnt += 1
            idx += 1
        else:
            break
    base, r = lev + u // cnt, u % cnt
    bound = 1
    for i in range(r):
        bound *= base + 1
    for i in range(cnt - r):
        bound *= base
    for i in range(cnt, k):
        bound *= w[i]
    return bound


def exact_search(m_count, k, product, masks, cmp_fwd, floor_value,
                 target, node_budget, deadline):
    """Exhaustive search over labelings of the usable masks.

    Index i gets a label in {0 = unused, 1..k}; assigning a positive label
    pins every comparable later index to that label (or kills it if it was
    pinned elsewhere), which is exactly the cross-Sperner constraint.
    Label numbers open in first-use order, cutting the k! symmetry.
    Pruning is by an admissible completion bound and is strict (only
    branches that cannot reach the best value are cut), so every optimal
    labeling is visited and the canonically least witness survives.
    A positive target stops the search once best reaches it, giving up
    both optimality and the canonical-minimum guarantee.

    Returns (best_value, best_labels or None, nodes, completed).
    """
    labels = [0] * m_count
    pins = [bytearray(m_count)]  # one scratch row per depth
    for _ in range(m_count):
        pins.append(bytearray(m_count))
    counts = [0] * (k + 1)
    best = floor_value
    best_labels = None
    best_key = None
    nodes = 0
    aborted = False

    def rec(d, used, cur_sum, pin):
        nonlocal best, best_labels, best_key, nodes, aborted
        nodes += 1
        if aborted or (node_budget and nodes > node_budget):
            aborted = True
            return
        if target and best >= target:
            aborted = True
            return
        if deadline and not nodes % 4096 and time.monotonic() > deadline:
            aborted = True
            return
        if d == m_count:
            if used != k:
                return
            if product:
                v = 1
                for j in range(1, k + 1):
                    v *= counts[j]
            else:
                v = cur_sum
            if v > best:
                best, best_labels = v, labels.copy()
                best_key = _canonical_key(labels, masks, k)
            elif v == best:
                key = _canonical_key(labels, masks, k)
                if best_key is None or key < best_key:
                    best_labels, best_key = labels.copy(), key
            return
        free_rem = 0
        pin_rem = 0
        for i in range(d, m_count):
            p = pin[i]
            if p == FREE:
                free_rem += 1
            elif p != DEAD:
                pin_rem += 1
        if used < k and free_rem < k - used:
            return
        if product:
            values = counts[1 : used + 1] + [0] * (k - used)
            bound = _waterfill_product(values, free_rem + pin_rem)
        else:
            bound = cur_sum + free_rem + pin_rem
        if bound < best:
            return
        p = pin[d]
        if p == DEAD:
            choices = ()
        elif p == FREE:
            choices = range(1, used + 2) if used < k else range(1, k + 1)
        else:
            choices = (p,)
        child = pins[d + 1]
        for c in choices:
            labels[d] = c
            counts[c] += 1
            child[:] = pin
            fwd = cmp_fwd[d]
            while fwd:
                low = fwd & -fwd
                i = low.bit_length() - 1
                fwd ^= low
                q = child[i]
                if q == FREE:
                    child[i] = c
                elif q != c:
                    child[i] = DEAD
            rec(d + 1, used + (1 if c > used else 0), cur_sum + 1, child)
            counts[c] -= 1
            if aborted:
                labels[d] = 0
                return
        labels[d] = 0
        rec(d + 1, used, cur_sum, pin)

    if m_count:
        rec(0, 0, 0, pins[0])
    else:
        nodes = 1
    return best, best_labels, nodes, not aborted


# -- annealing chain ---------------------------------------------------------


class _AnnealState:
    __slots__ = ("n", "k", "total", "labels", "fams", "ups", "downs",
                 "counts", "support", "support_count")

    def __init__(self, n, k):
        self.n = n
        self.k = k
        self.total = 1 << n
        self.labels = [0] * self.total
        self.fams = [0] * (k + 1)
        self.ups = [0] * (k + 1)
        self.downs = [0] * (k + 1)
        self.counts = [0] * (k + 1)
        self.support = 0
        self.support_count = 0

    def load(self, labels):
        self.labels = list(labels)
        self.fams = [0] * (self.k + 1)
        self.counts = [0] * (self.k + 1)
        self.support = 0
        for m, lab in enumerate(labels):
            if lab:
                self.fams[lab] |= 1 << m
                self.counts[lab] += 1
                self.support |= 1 << m
        self.support_count = self.support.bit_count()
        for j in range(1, self.k + 1):
            self._reclose(j)

    def _reclose(self, j):
        bits = self.fams[j]
        if bits:
            self.ups[j] = _closure_bits(bits, self.n, "up")
            self.downs[j] = _closure_bits(bits, self.n, "down")
        else:
            self.ups[j] = self.downs[j] = 0

    def snapshot(self):
        return (self.labels.copy(), self.fams.copy(), self.ups.copy(),
                self.downs.copy(), self.counts.copy(), self.support,
                self.support_count)

    def restore(self, snap):
        (self.labels, self.fams, self.ups, self.downs, self.counts,
         self.support, self.support_count) = (
            snap[0].copy(), snap[1].copy(), snap[2].copy(), snap[3].copy(),
            snap[4].copy(), snap[5], snap[6])

    def feasible(self, m, j):
        bit = 1 << m
        for i in range(1, self.k + 1):
            if i != j and (self.ups[i] | self.downs[i]) & bit:
                return False
        return True

    def add(self, m, j):
        self.labels[m] = j
        self.fams[j] |= 1 << m
        self.counts[j] += 1
        self.support |= 1 << m
        self.support_count += 1
        self._reclose(j)

    def remove(self, m):
        j = self.labels[m]
        self.labels[m] = 0
        self.fams[j] &= ~(1 << m)
        self.counts[j] -= 1
        self.support &= ~(1 << m)
        self.support_count -= 1
        self._reclose(j)

    def value(self, product):
        if product:
            v = 1
            for j in range(1, self.k + 1):
                v *= self.counts[j]
            return v
        return self.support_count

    def nth_member(self, bits, idx):
        while True:
            low = bits & -bits
            if idx == 0:
                return low.bit_length() - 1
            idx -= 1
            bits ^= low

    def component(self, m):
        """Comparability component of m inside the support."""
        comp = 1 << m
        frontier = [m]
        while frontier:
            x = frontier.pop()
            bit = 1 << x
            near = (_closure_bits(bit, self.n, "up")
                    | _closure_bits(bit, self.n, "down")) & self.support & ~comp
            while near:
                low = near & -near
                near ^= low
                comp |= low
                frontier.append(low.bit_length() - 1)
        return comp


def anneal_chain(n, k, product, usable, variants, seed, steps, t0, alpha,
                 restart_interval, stop_value, deadline):
    """One annealing chain: perturb (remove / move / recolor a component /
    add), greedily refill to a maximal labeling, and Metropolis-accept on
    the measure with geometric cooling.  Restarts cycle through the given
    construction variants.  Fully determined by the seed (wall-clock
    deadline aside).

    Returns (best_value, best_labels, steps_done).
    """
    st = _AnnealState(n, k)
    state = seed & _MASK64
    variant_idx = 0
    usable = list(usable)
    usable_bits = 0
    for m in usable:
        usable_bits |= 1 << m

    def fill(state):
        order = usable.copy()
        for i in range(len(order) - 1, 0, -1):
            state, j = _rand_below(state, i + 1)
            order[i], order[j] = order[j], order[i]
        # first pass: only additions some family's closure already covers,
        # so ruined structure snaps back before foreign placements
        for enclosed_only in (True, False):
            for m in order:
                if st.labels[m]:
                    continue
                bit = 1 << m
                bestj = 0
                bestscore = (2, 0)
                for j in range(1, k + 1):
                    if not st.feasible(m, j):
                        continue
                    score = (0 if (st.ups[j] | st.downs[j]) & bit else 1,
                             st.counts[j])
                    if bestj == 0 or score < bestscore:
                        bestj, bestscore = j, score
                if bestj and (not enclosed_only or bestscore[0] == 0):
                    st.add(m, bestj)
        return state

    st.load(variants[0])
    state = fill(state)
    cur = st.value(product)
    best = cur
    best_labels = st.labels.copy()
    temp = t0
    last_improve = 0
    done = 0
    for step in range(steps):
        done = step + 1
        if deadline and not step % 256 and time.monotonic() > deadline:
            break
        state, r = _rand_unit(state)
        snap = st.snapshot()
        moved = False
        if r < 0.20:  # remove
            if st.support_count:
                state, idx = _rand_below(state, st.support_count)
                m = st.nth_member(st.support, idx)
                if st.counts[st.labels[m]] > 1:
                    st.remove(m)
                    moved = True
        elif r < 0.40:  # move to another family
            if st.support_count:
                state, idx = _rand_below(state, st.support_count)
                m = st.nth_member(st.support, idx)
                j = st.labels[m]
                if st.counts[j] > 1:
                    state, pick = _rand_below(state, k - 1)
                    jj = pick + 1 + (1 if pick + 1 >= j else 0)
                    st.remove(m)
                    if st.feasible(m, jj):
                        st.add(m, jj)
                        moved = True
                    else:
                        st.restore(snap)
        elif r < 0.55:  # recolor a whole component
            if st.support_count:
                state, idx = _rand_below(state, st.support_count)
                m = st.nth_member(st.support, idx)
                j = st.labels[m]
                comp = st.component(m)
                csize = comp.bit_count()
                if csize < st.counts[j]:
                    state, pick = _rand_below(state, k - 1)
                    jj = pick + 1 + (1 if pick + 1 >= j else 0)
                    bits = comp
                    while bits:
                        low = bits & -bits
                        bits ^= low
                        st.remove(low.bit_length() - 1)
                    bits = comp
                    while bits:
                        low = bits & -bits
                        bits ^= low
                        st.add(low.bit_length() - 1, jj)
                    moved = True
        elif r < 0.70:  # add
            spare = usable_bits & ~st.support
            cnt = spare.bit_count()
            if cnt:
                state, idx = _rand_below(state, cnt)
                m = st.nth_member(spare, idx)
                feas = [j for j in range(1, k + 1) if st.feasible(m, j)]
                if feas:
                    state, pick = _rand_below(state, len(feas))
                    st.add(m, feas[pick])
                    moved = True
        elif r < 0.85:  # ruin a random chunk of the support and rebuild
            state, z = _rand_unit(state)
            p_ruin = 0.1 + 0.3 * z
            bits = st.support
            while bits:
                low = bits & -bits
                bits ^= low
                state, u = _rand_unit(state)
                if u < p_ruin:
                    m = low.bit_length() - 1
                    if st.counts[st.labels[m]] > 1:
                        st.remove(m)
                        moved = True
        else:  # dig a coordinated hole: drop everything comparable to a pivot
            state, idx = _rand_below(state, len(usable))
            pivot = 1 << usable[idx]
            near = (_closure_bits(pivot, n, "up")
                    | _closure_bits(pivot, n, "down")) & st.support
            while near:
                low = near & -near
                near ^= low
                m = low.bit_length() - 1
                if st.counts[st.labels[m]] > 1:
                    st.remove(m)
                    moved = True
        if moved:
            state = fill(state)
            new = st.value(product)
            accept = new >= cur
            if not accept:
                if product:
                    p = math.pow(new / cur, 1.0 / temp) if cur else 0.0
                else:
                    p = math.exp((new - cur) / temp)
                state, u = _rand_unit(state)
                accept = u < p
            if accept:
                cur = new
                if new > best:
                    best = new
                    best_labels = st.labels.copy()
                    last_improve = step
                    if stop_value and best >= stop_value:
                        break
            else:
                st.restore(snap)
        temp *= alpha
        if temp < 1e-6:
            temp = 1e-6
        if step - last_improve > restart_interval:
            variant_idx += 1
            st.load(variants[variant_idx % len(variants)])
            state = fill(state)
            cur = st.value(product)
            temp = t0
            last_improve = step
    return best, best_labels, done
