"""Definition-level reference implementations used to cross-check the
package.  Everything here works on plain frozensets of integers and
never touches the bitset code paths, so agreement is meaningful."""

from itertools import combinations
from math import prod


def subsets(n):
    """All subsets of {1..n} as frozensets, in mask order."""
    out = []
    for mask in range(1 << n):
        out.append(frozenset(e for e in range(1, n + 1) if mask >> (e - 1) & 1))
    return out


def comparable_sets(x, y):
    return x <= y or y <= x


def comparability_of(family, n):
    """Sets of [n] comparable to at least one member."""
    return {s for s in subsets(n) if any(comparable_sets(s, f) for f in family)}


def up_closure(family, n):
    return {s for s in subsets(n) if any(f <= s for f in family)}


def down_closure(family, n):
    return {s for s in subsets(n) if any(s <= f for f in family)}


def is_antichain_sets(family):
    return all(
        not comparable_sets(x, y) for x, y in combinations(family, 2)
    )


def cross_sperner_sets(families):
    """families: sequence of collections of frozensets, all non-empty."""
    if any(not f for f in families):
        return False
    for i in range(len(families)):
        for j in range(i + 1, len(families)):
            for x in families[i]:
                for y in families[j]:
                    if comparable_sets(x, y):
                        return False
    return True


def min_comparability_exact(n, m):
    """Brute minimum of |comparability| over all size-m families."""
    best = None
    for family in combinations(subsets(n), m):
        c = len(comparability_of(family, n))
        if best is None or c < best:
            best = c
    return best


def _max_over_labelings(n, k, score):
    """Assign each proper non-empty subset to one of k families or none,
    keep assignments whose families are non-empty and cross-Sperner,
    return the best score.  Exponential; n <= 3 only."""
    usable = [s for s in subsets(n) if s and len(s) < n]
    best = 0
    total = (k + 1) ** len(usable)
    for code in range(total):
        fams = [[] for _ in range(k)]
        c = code
        for s in usable:
            c, r = divmod(c, k + 1)
            if r:
                fams[r - 1].append(s)
        if any(not f for f in fams):
            continue
        if cross_sperner_sets(fams):
            v = score([len(f) for f in fams])
            if v > best:
                best = v
    return best


def max_product_exact(n, k):
    return _max_over_labelings(n, k, prod)


def max_sum_exact(n, k):
    return _max_over_labelings(n, k, sum)


def count_upsets(n):
    """Dedekind-style count of upward-closed families, empty included.
    Checks every family of subsets; n <= 3 only."""
    all_sets = subsets(n)
    count = 0
    for code in range(1 << len(all_sets)):
        fam = {s for i, s in enumerate(all_sets) if code >> i & 1}
        if all(
            s | {e} in fam for s in fam for e in range(1, n + 1) if e not in s
        ):
            count += 1
    return count
