"""Search engines: exact optima, annealing heuristics, comparability table.

Exact searches run a single kernel call and are deterministic in value,
witness and node count no matter how many threads are configured.  The
heuristic runs one annealing chain per thread with seeds derived from the
configured seed, so a fixed (seed, threads) pair reproduces exactly.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import isqrt

from ..constructions import (
    PrefixParams,
    ProductParams,
    SumParams,
    build_pair_product,
    build_pair_sum,
    build_prefix_tuple,
    build_product_tuple,
    build_sum_tuple,
)
from ..errors import GroundTooLarge, InfeasibleParams, SpernerError
from ..lattice import (
    Family,
    FamilyTuple,
    _closure_bits,
    check_ground,
    comparable,
    is_cross_sperner,
)
from . import _kernels_py
from ._backend import BACKEND, kernels
from ._kernels_py import sm64_next

EXACT_MAX_GROUND = 5
TABLE_MAX_GROUND = 5
ORACLE_MAX_GROUND = 3

_DEFAULT_STEPS = 60_000
_DEFAULT_CHAINS = 4
_T0 = 0.35
_ALPHA = 0.99993
_RESTART = 10_000


@dataclass(frozen=True)
class SearchConfig:
    """Knobs shared by the search entry points.

    budget_nodes caps DFS nodes in exact mode and annealing steps per
    chain in heuristic mode.  budget_secs is a wall-clock cap.  threads
    fixes the chain count for the heuristic (exact results never depend
    on it); None falls back to SPERNER_THREADS, then to 4.  target stops
    a search early once the value is reached.
    """

    n: int
    k: int
    mode: str = "exact"
    budget_nodes: int | None = None
    budget_secs: float | None = None
    seed: int = 0
    threads: int | None = None
    target: int | None = None


@dataclass(frozen=True)
class SearchResult:
    value: int
    witness: FamilyTuple | None
    optimal: bool
    nodes: int
    elapsed: float
    backend: str


@dataclass(frozen=True)
class CompRow:
    m: int
    c_exact: int
    lower_bound: int
    equality: bool
    witness: Family


@dataclass(frozen=True)
class CompTable:
    n: int
    rows: tuple[CompRow, ...]

    def row(self, m: int) -> CompRow:
        return self.rows[m - 1]


def _anneal_kernels(n: int):
    # the compiled annealer packs family bitsets into one machine word
    if n > getattr(kernels, "ANNEAL_MAX_GROUND", 0):
        return _kernels_py
    return kernels


def resolve_threads(explicit: int | None) -> int:
    if explicit is not None:
        if explicit < 1:
            raise InfeasibleParams("threads must be positive")
        return explicit
    env = os.environ.get("SPERNER_THREADS", "").strip()
    if env.isdigit() and int(env) > 0:
        return int(env)
    return _DEFAULT_CHAINS


# -- monotone families -------------------------------------------------------


def enumerate_upsets(n: int) -> list[Family]:
    """All upward-closed families of P([n]), empty one included.

    Depth-first over masks in popcount-descending order, include branch
    first; a mask may join only when all its immediate supersets are
    already in.  The order is fixed and the comparability table's
    tie-breaks refer to it.
    """
    check_ground(n)
    if n > TABLE_MAX_GROUND:
        raise GroundTooLarge(f"upset enumeration supports n <= {TABLE_MAX_GROUND}")
    return [Family(n, bits) for bits in _upset_bits(n)]


def _upset_bits(n: int) -> list[int]:
    total = 1 << n
    order = sorted(range(total), key=lambda m: (-(m.bit_count()), m))
    missing = [[m | (1 << b) for b in range(n) if not m >> b & 1] for m in order]
    out: list[int] = []

    def rec(i: int, bits: int) -> None:
        if i == len(order):
            out.append(bits)
            return
        if all(bits >> s & 1 for s in missing[i]):
            rec(i + 1, bits | (1 << order[i]))
        rec(i + 1, bits)

    rec(0, 0)
    return out


def _reflect_bits(bits: int, total: int) -> int:
    # complementing every member turns an upset bitset into a downset one
    out = 0
    for p in range(total):
        if bits >> p & 1:
            out |= 1 << (total - 1 - p)
    return out


def min_comparability_table(n: int) -> CompTable:
    """Exact minimum comparability number for every family size m, with a
    witness family attaining it and the root-style lower bound."""
    check_ground(n, minimum=1)
    if n > TABLE_MAX_GROUND:
        raise GroundTooLarge(f"comparability table supports n <= {TABLE_MAX_GROUND}")
    total = 1 << n
    ups = _upset_bits(n)
    usizes = [b.bit_count() for b in ups]
    downs = [_reflect_bits(b, total) for b in ups]
    best, bu, bd = kernels.comp_scan(ups, usizes, downs, usizes, total)
    rows = []
    for m in range(1, total + 1):
        c = None
        pick = -1
        for t in range(m, total + 1):
            if c is None or best[t] < c:
                c, pick = best[t], t
        hull = ups[bu[pick]] & downs[bd[pick]]
        while hull.bit_count() > m:
            # the numerically largest member has no proper superset inside
            hull ^= 1 << (hull.bit_length() - 1)
        s = 4 * (total * m)
        r = isqrt(s)
        if r * r < s:
            r += 1
        lower = r - m
        rows.append(
            CompRow(m=m, c_exact=c, lower_bound=lower, equality=c == lower,
                    witness=Family(n, hull))
        )
    return CompTable(n=n, rows=tuple(rows))


# -- exact optimisation ------------------------------------------------------


def _usable_order(n: int) -> list[int]:
    total = 1 << n
    masks = [m for m in range(1, total - 1)]
    masks.sort(key=lambda m: (min(m.bit_count(), n - m.bit_count()),
                              m.bit_count(), m))
    return masks


def _cmp_forward(masks: list[int]) -> list[int]:
    out = []
    for i, x in enumerate(masks):
        bits = 0
        for j in range(i + 1, len(masks)):
            if comparable(x, masks[j]):
                bits |= 1 << j
        out.append(bits)
    return out


def _best_construction(n: int, k: int, product: bool):
    cands: list[FamilyTuple] = []
    if product:
        try:
            cands.append(build_product_tuple(ProductParams(n, k)))
        except SpernerError:
            pass
        if k == 2:
            try:
                cands.append(build_pair_product(n))
            except SpernerError:
                pass
    else:
        try:
            cands.append(build_sum_tuple(SumParams(n, k)))
        except SpernerError:
            pass
        if k == 2:
            try:
                cands.append(build_pair_sum(n))
            except SpernerError:
                pass
    try:
        cands.append(build_prefix_tuple(PrefixParams(n, k)))
    except SpernerError:
        pass
    if not cands:
        return 0, None

    def val(t: FamilyTuple) -> int:
        return t.product_size() if product else t.sum_size()

    top = max(cands, key=val)
    return val(top), top


def _tuple_from_order_labels(n, k, labels, masks) -> FamilyTuple:
    fams: list[list[int]] = [[] for _ in range(k)]
    for i, lab in enumerate(labels):
        if lab:
            fams[lab - 1].append(masks[i])
    return FamilyTuple(n, tuple(Family.from_masks(n, f) for f in fams))


def _exact(cfg: SearchConfig, product: bool) -> SearchResult:
    check_ground(cfg.n, minimum=1)
    if cfg.n > EXACT_MAX_GROUND:
        raise GroundTooLarge(f"exact search supports n <= {EXACT_MAX_GROUND}")
    if cfg.k < 2:
        raise InfeasibleParams("searches need k >= 2")
    start = time.monotonic()
    masks = _usable_order(cfg.n)
    fwd = _cmp_forward(masks)
    floor, floor_tuple = _best_construction(cfg.n, cfg.k, product)
    deadline = start + cfg.budget_secs if cfg.budget_secs is not None else 0.0
    value, labels, nodes, completed = kernels.exact_search(
        len(masks), cfg.k, product, masks, fwd, floor,
        cfg.target or 0, cfg.budget_nodes or 0, deadline,
    )
    if labels is not None:
        witness = _tuple_from_order_labels(cfg.n, cfg.k, labels, masks)
    elif value == floor:
        witness = floor_tuple
    else:
        witness = None
    if witness is not None:
        assert is_cross_sperner(witness).ok
        got = witness.product_size() if product else witness.sum_size()
        assert got == value
    return SearchResult(value=value, witness=witness, optimal=completed,
                        nodes=nodes, elapsed=time.monotonic() - start,
                        backend=BACKEND)


def exact_max_product(cfg: SearchConfig) -> SearchResult:
    """Largest product of family sizes over cross-Sperner k-tuples,
    proven by exhaustive search (n <= 5)."""
    return _exact(cfg, product=True)


def exact_max_sum(cfg: SearchConfig) -> SearchResult:
    """Largest total size over cross-Sperner k-tuples, proven by
    exhaustive search (n <= 5)."""
    return _exact(cfg, product=False)


# -- annealing ---------------------------------------------------------------


def _labels_of(t: FamilyTuple, total: int) -> list[int]:
    arr = [0] * total
    for j, fam in enumerate(t.families, start=1):
        for m in fam.masks():
            arr[m] = j
    return arr


def _variants(n: int, k: int, product: bool, seed: int) -> list[list[int]]:
    total = 1 << n
    cands: list[FamilyTuple] = []

    def push(build, *args):
        try:
            cands.append(build(*args))
        except SpernerError:
            pass

    if product:
        push(build_product_tuple, ProductParams(n, k))
        if k == 2:
            push(build_pair_product, n)
    else:
        push(build_sum_tuple, SumParams(n, k))
        if k == 2:
            push(build_pair_sum, n)
    push(build_prefix_tuple, PrefixParams(n, k))
    # jittered segment sizes diversify the restart pool
    state = (seed ^ 0x5EED5EED) & ((1 << 64) - 1)
    base = ProductParams(n, k)
    for _ in range(8):
        segs = []
        for b in base.block_sizes():
            width = (1 << b) - 1
            state, z = sm64_next(state)
            segs.append(1 + (z * width >> 64))
        push(build_product_tuple, ProductParams(n, k, tuple(segs)))
    seen: set[tuple[int, ...]] = set()
    out: list[list[int]] = []
    for t in cands:
        lab = _labels_of(t, total)
        key = tuple(lab)
        if key not in seen:
            seen.add(key)
            out.append(lab)
    if not out:
        raise InfeasibleParams(
            f"no feasible starting tuple for n={n}, k={k}"
        )
    return out


def _anneal(cfg: SearchConfig, product: bool) -> SearchResult:
    check_ground(cfg.n, minimum=1)
    if cfg.k < 2:
        raise InfeasibleParams("searches need k >= 2")
    start = time.monotonic()
    chains = resolve_threads(cfg.threads)
    steps = cfg.budget_nodes or _DEFAULT_STEPS
    deadline = start + cfg.budget_secs if cfg.budget_secs is not None else 0.0
    variants = _variants(cfg.n, cfg.k, product, cfg.seed)
    usable = list(range(1, (1 << cfg.n) - 1))
    state = cfg.seed & ((1 << 64) - 1)
    seeds = []
    for _ in range(chains):
        state, z = sm64_next(state)
        seeds.append(z)
    stop = cfg.target or 0

    kern = _anneal_kernels(cfg.n)

    def run(chain_seed: int):
        return kern.anneal_chain(
            cfg.n, cfg.k, product, usable, variants, chain_seed, steps,
            _T0, _ALPHA, _RESTART, stop, deadline,
        )

    if chains == 1:
        outs = [run(seeds[0])]
    else:
        with ThreadPoolExecutor(max_workers=min(chains, os.cpu_count() or 1)) as ex:
            outs = list(ex.map(run, seeds))
    total = 1 << cfg.n
    best_val = -1
    best_tuple = None
    steps_done = 0
    for value, labels, done in outs:
        steps_done += done
        fams: list[list[int]] = [[] for _ in range(cfg.k)]
        for m, lab in enumerate(labels):
            if lab:
                fams[lab - 1].append(m)
        cand = FamilyTuple(cfg.n, tuple(Family.from_masks(cfg.n, f) for f in fams))
        if value > best_val or (
            value == best_val
            and best_tuple is not None
            and cand.canonical_key() < best_tuple.canonical_key()
        ):
            best_val, best_tuple = value, cand
    assert best_tuple is not None and is_cross_sperner(best_tuple).ok
    got = best_tuple.product_size() if product else best_tuple.sum_size()
    assert got == best_val
    return SearchResult(value=best_val, witness=best_tuple, optimal=False,
                        nodes=steps_done, elapsed=time.monotonic() - start,
                        backend=kern.BACKEND)


def anneal_max_product(cfg: SearchConfig) -> SearchResult:
    """Heuristic lower bound for the largest size product; never claims
    optimality."""
    return _anneal(cfg, product=True)


def anneal_max_sum(cfg: SearchConfig) -> SearchResult:
    """Heuristic lower bound for the largest total size; never claims
    optimality."""
    return _anneal(cfg, product=False)


# -- tiny definition-level oracle -------------------------------------------


def brute_force_max(n: int, k: int, product: bool = True) -> int:
    """Maximum by raw enumeration of every labeling, for cross-checking
    the DFS on toy grounds."""
    check_ground(n, minimum=1)
    if n > ORACLE_MAX_GROUND:
        raise GroundTooLarge(f"the oracle supports n <= {ORACLE_MAX_GROUND}")
    if k < 2:
        raise InfeasibleParams("the oracle needs k >= 2")
    usable = list(range(1, (1 << n) - 1))
    best = 0
    for labels in itertools.product(range(k + 1), repeat=len(usable)):
        counts = [0] * (k + 1)
        for lab in labels:
            counts[lab] += 1
        if 0 in counts[1:]:
            continue
        ok = True
        for i, x in enumerate(usable):
            if not labels[i]:
                continue
            for j in range(i + 1, len(usable)):
                if labels[j] and labels[j] != labels[i] and comparable(x, usable[j]):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        if product:
            v = 1
            for c in counts[1:]:
                v *= c
        else:
            v = sum(counts[1:])
        best = max(best, v)
    return best
