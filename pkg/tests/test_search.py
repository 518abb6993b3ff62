import os

import pytest

from sperner.errors import GroundTooLarge
from sperner.lattice import FamilyTuple, comparability_number, is_cross_sperner
from sperner.search import (
    BACKEND,
    SearchConfig,
    anneal_max_product,
    anneal_max_sum,
    brute_force_max,
    enumerate_upsets,
    exact_max_product,
    exact_max_sum,
    min_comparability_table,
)
from sperner.search.engine import resolve_threads

from .oracles import (
    count_upsets,
    max_product_exact,
    max_sum_exact,
    min_comparability_exact,
)

DEDEKIND = {0: 2, 1: 3, 2: 6, 3: 20, 4: 168, 5: 7581}


# monotone enumeration


def test_upset_counts_match_known_sequence():
    for n, expected in DEDEKIND.items():
        assert len(enumerate_upsets(n)) == expected


def test_upset_counts_match_brute_oracle():
    for n in range(4):
        assert len(enumerate_upsets(n)) == count_upsets(n)


def test_enumerated_families_are_upsets_and_distinct():
    from sperner.lattice import is_upward_closed

    fams = enumerate_upsets(4)
    assert len({f.members for f in fams}) == len(fams)
    assert all(is_upward_closed(f) or f.members == 0 for f in fams)


def test_upset_enumeration_gated():
    with pytest.raises(GroundTooLarge):
        enumerate_upsets(6)


# comparability tables


def test_comp_table_matches_brute_oracle_small():
    for n in range(1, 4):
        table = min_comparability_table(n)
        for m in range(1, (1 << n) + 1):
            assert table.row(m).c_exact == min_comparability_exact(n, m)


def test_comp_table_matches_brute_oracle_n4_prefix():
    table = min_comparability_table(4)
    for m in range(1, 5):
        assert table.row(m).c_exact == min_comparability_exact(4, m)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_comp_table_rows_are_certified(n):
    table = min_comparability_table(n)
    assert [r.m for r in table.rows] == list(range(1, (1 << n) + 1))
    prev = 0
    for r in table.rows:
        assert r.witness.size == r.m
        count, _ = comparability_number(r.witness)
        assert count == r.c_exact
        assert r.c_exact >= r.lower_bound
        assert r.equality == (r.c_exact == r.lower_bound)
        assert r.c_exact >= prev  # dropping a set never raises the minimum
        prev = r.c_exact


def test_comp_table_gated():
    with pytest.raises(GroundTooLarge):
        min_comparability_table(6)


# exact search vs definition-level oracle


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("k", [2, 3])
def test_exact_agrees_with_labeling_oracle(n, k):
    cfg = SearchConfig(n=n, k=k)
    assert exact_max_product(cfg).value == max_product_exact(n, k)
    assert exact_max_sum(cfg).value == max_sum_exact(n, k)
    assert brute_force_max(n, k, product=True) == max_product_exact(n, k)
    assert brute_force_max(n, k, product=False) == max_sum_exact(n, k)


# frozen exact optima; values proven by the completed branch-and-bound

PI_EXACT = {
    (2, 2): 1,
    (3, 2): 4,
    (3, 3): 1,
    (4, 2): 16,
    (4, 3): 9,
    (4, 4): 4,
    (5, 2): 64,
    (5, 3): 81,
    (5, 4): 108,
}
SIGMA_EXACT = {
    (2, 2): 2,
    (3, 2): 4,
    (3, 3): 3,
    (4, 2): 10,
    (4, 3): 8,
    (4, 4): 7,
    (5, 2): 22,
    (5, 3): 18,
    (5, 4): 16,
}


def _check_exact(res, expected):
    assert res.optimal
    assert res.value == expected
    if expected:
        assert res.witness is not None
        assert is_cross_sperner(res.witness).ok
    return res


@pytest.mark.parametrize("nk,expected", sorted(PI_EXACT.items()))
def test_exact_product_values(nk, expected):
    res = _check_exact(exact_max_product(SearchConfig(*nk)), expected)
    if res.witness:
        assert res.witness.product_size() == expected


@pytest.mark.parametrize("nk,expected", sorted(SIGMA_EXACT.items()))
def test_exact_sum_values(nk, expected):
    res = _check_exact(exact_max_sum(SearchConfig(*nk)), expected)
    if res.witness:
        assert res.witness.sum_size() == expected


def test_exact_infeasible_width_returns_zero():
    res = exact_max_product(SearchConfig(2, 3))
    assert res.value == 0 and res.optimal and res.witness is None
    assert res.nodes == 1


def test_exact_pair_product_closed_form():
    for n in range(2, 5):
        assert exact_max_product(SearchConfig(n, 2)).value == 1 << (2 * n - 4)


# determinism: node counts are part of the contract

NODE_COUNTS_PRODUCT = {(4, 2): 1837, (4, 3): 932, (4, 4): 627, (5, 2): 1781591, (5, 4): 548728}
NODE_COUNTS_SUM = {(4, 2): 295, (4, 3): 435, (4, 4): 307, (5, 2): 17968, (5, 4): 66508}


@pytest.mark.parametrize("nk,count", sorted(NODE_COUNTS_PRODUCT.items()))
def test_exact_product_node_counts(nk, count):
    assert exact_max_product(SearchConfig(*nk)).nodes == count


@pytest.mark.parametrize("nk,count", sorted(NODE_COUNTS_SUM.items()))
def test_exact_sum_node_counts(nk, count):
    assert exact_max_sum(SearchConfig(*nk)).nodes == count


def test_exact_ignores_thread_count():
    a = exact_max_product(SearchConfig(4, 3, threads=1))
    b = exact_max_product(SearchConfig(4, 3, threads=8))
    assert (a.value, a.nodes, a.witness.canonical_key()) == (
        b.value,
        b.nodes,
        b.witness.canonical_key(),
    )


def test_exact_witness_is_canonical_minimum():
    # all optima are visited, so the reported witness is the least one
    res = exact_max_product(SearchConfig(4, 2))
    again = exact_max_product(SearchConfig(4, 2))
    assert res.witness.canonical_key() == again.witness.canonical_key()


# budgets and targets


def test_exact_budget_keeps_best_so_far():
    res = exact_max_product(SearchConfig(5, 2, budget_nodes=500))
    assert not res.optimal
    assert res.nodes <= 501
    assert res.witness is not None
    assert is_cross_sperner(res.witness).ok
    assert res.value >= 64  # the construction floor is available immediately
    full = exact_max_product(SearchConfig(5, 2))
    assert res.value <= full.value


def test_exact_target_short_circuits():
    # the construction floor already meets the target, so the search
    # stops immediately without the full 1.78M-node proof
    res = exact_max_product(SearchConfig(5, 2, target=64))
    assert res.value >= 64
    assert not res.optimal
    assert res.nodes == 1
    assert is_cross_sperner(res.witness).ok
    # an unreachable target runs the proof to completion
    full = exact_max_product(SearchConfig(5, 2, target=100))
    assert full.optimal and full.value == 64


def test_exact_deadline_abort():
    res = exact_max_product(SearchConfig(5, 3, budget_secs=0.0))
    assert not res.optimal
    assert res.value >= 1
    assert res.witness is not None


# annealer


def test_anneal_reproducible_for_fixed_seed():
    cfg = SearchConfig(5, 3, mode="heuristic", budget_nodes=2000, seed=42, threads=2)
    a = anneal_max_product(cfg)
    b = anneal_max_product(cfg)
    assert a.value == b.value
    assert a.witness.canonical_key() == b.witness.canonical_key()
    assert not a.optimal
    assert is_cross_sperner(a.witness).ok


def test_anneal_thread_count_changes_exploration_not_validity():
    one = anneal_max_product(
        SearchConfig(5, 3, mode="heuristic", budget_nodes=1500, seed=7, threads=1)
    )
    four = anneal_max_product(
        SearchConfig(5, 3, mode="heuristic", budget_nodes=1500, seed=7, threads=4)
    )
    for res in (one, four):
        assert is_cross_sperner(res.witness).ok
        assert res.witness.product_size() == res.value
    assert four.value >= one.value  # chain 0 of both runs is the same


KNOWN_TARGETS = [
    ((5, 3), 81),
    ((6, 3), 810),
    ((5, 4), 108),
]


@pytest.mark.parametrize("nk,target", KNOWN_TARGETS)
def test_anneal_reaches_published_products(nk, target):
    n, k = nk
    cfg = SearchConfig(
        n, k, mode="heuristic", budget_nodes=60_000, seed=0, target=target
    )
    res = anneal_max_product(cfg)
    assert res.value >= target
    assert is_cross_sperner(res.witness).ok
    assert res.witness.product_size() == res.value


def test_anneal_sum_reaches_known_values():
    res = anneal_max_sum(
        SearchConfig(5, 2, mode="heuristic", budget_nodes=20_000, seed=0, target=22)
    )
    assert res.value >= 22
    assert res.witness.sum_size() == res.value


def test_anneal_never_reports_invalid_tuple():
    for seed in range(5):
        res = anneal_max_sum(
            SearchConfig(4, 3, mode="heuristic", budget_nodes=800, seed=seed)
        )
        assert is_cross_sperner(res.witness).ok
        assert res.witness.sum_size() == res.value


# thread resolution


def test_resolve_threads_env(monkeypatch):
    monkeypatch.delenv("SPERNER_THREADS", raising=False)
    assert resolve_threads(3) == 3
    assert resolve_threads(None) == 4
    monkeypatch.setenv("SPERNER_THREADS", "9")
    assert resolve_threads(None) == 9
    assert resolve_threads(2) == 2


# backend parity

compiled = pytest.importorskip(
    "sperner.search._kernels", reason="compiled backend not built"
)


def _comp_args(n):
    from sperner.search.engine import _reflect_bits, _upset_bits

    total = 1 << n
    ups = _upset_bits(n)
    usizes = [b.bit_count() for b in ups]
    downs = [_reflect_bits(b, total) for b in ups]
    return ups, usizes, downs, usizes, total


def _exact_args(n, k, product):
    from sperner.search.engine import (
        _best_construction,
        _cmp_forward,
        _usable_order,
    )

    masks = _usable_order(n)
    fwd = _cmp_forward(masks)
    floor, _ = _best_construction(n, k, product)
    return len(masks), k, product, masks, fwd, floor, 0, 0, 0.0


def _anneal_args(n, k, product, seed, steps):
    from sperner.search.engine import _ALPHA, _RESTART, _T0, _variants

    variants = _variants(n, k, product, seed)
    usable = list(range(1, (1 << n) - 1))
    return (n, k, product, usable, variants, seed, steps,
            _T0, _ALPHA, _RESTART, 0, 0.0)


class TestBackendParity:
    @pytest.fixture(autouse=True)
    def _pure(self):
        from sperner.search import _kernels_py

        self.pure = _kernels_py
        self.fast = compiled

    def test_backend_tags(self):
        assert self.pure.BACKEND == "pure"
        assert self.fast.BACKEND == "compiled"
        assert BACKEND in ("pure", "compiled")

    def test_rng_streams_identical(self):
        for seed in (0, 1, 0xDEADBEEF):
            sp = sf = seed
            for _ in range(100):
                sp, vp = self.pure.sm64_next(sp)
                sf, vf = self.fast.sm64_next(sf)
                assert (sp, vp) == (sf, vf)

    def test_comp_scan_identical(self):
        for n in (3, 4):
            args = _comp_args(n)
            assert self.pure.comp_scan(*args) == self.fast.comp_scan(*args)

    def test_exact_search_identical(self):
        for n, k, product in [(4, 2, True), (4, 3, True), (4, 2, False), (4, 4, False)]:
            args = _exact_args(n, k, product)
            assert self.pure.exact_search(*args) == self.fast.exact_search(*args)

    def test_anneal_chain_identical(self):
        for n, k, product, seed in [(5, 3, True, 1), (5, 2, False, 9)]:
            args = _anneal_args(n, k, product, seed, 3000)
            assert self.pure.anneal_chain(*args) == self.fast.anneal_chain(*args)
