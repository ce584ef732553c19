import itertools

import numpy as np
import pytest

from src.errors import MiningCapError
from src.itemsets import TransactionDb, mine_topk_closed


def _db(*groups):
    db = TransactionDb()
    for nodes, multiplicity in groups:
        db.add(nodes, multiplicity)
    return db


def test_ranking_by_support():
    db = _db(([1, 2, 3], 3), ([1, 2], 2), ([4, 5], 1))
    assert len(db) == 6
    assert mine_topk_closed(db, 3, 2) == [((1, 2), 5), ((1, 2, 3), 3), ((4, 5), 1)]


def test_minimum_size_filters_small_sets():
    db = _db(([1, 2, 3], 3), ([1, 2], 2), ([4, 5], 1))
    assert mine_topk_closed(db, 5, 3) == [((1, 2, 3), 3)]


def test_ties_prefer_larger_then_lexicographic_sets():
    db = _db(([1, 2], 2), ([3, 4, 5], 2))
    assert mine_topk_closed(db, 1, 2) == [((3, 4, 5), 2)]
    assert mine_topk_closed(db, 2, 2) == [((3, 4, 5), 2), ((1, 2), 2)]

    db = _db(([3, 4], 1), ([1, 2], 1))
    assert mine_topk_closed(db, 1, 2) == [((1, 2), 1)]
    assert mine_topk_closed(db, 2, 2) == [((1, 2), 1), ((3, 4), 1)]


def _brute_force(db, k, l_m):
    items = sorted(set().union(*db.distinct))
    closed = []
    for size in range(l_m, len(items) + 1):
        for candidate in itertools.combinations(items, size):
            support = db.support(candidate)
            if support == 0:
                continue
            containing = [set(t) for t in db.distinct if set(candidate).issubset(t)]
            if set.intersection(*containing) == set(candidate):
                closed.append((candidate, support))
    closed.sort(key=lambda entry: (-entry[1], -len(entry[0]), entry[0]))
    return closed[:k]


def test_matches_brute_force_on_random_databases():
    rng = np.random.default_rng(13)
    for _ in range(40):
        db = TransactionDb()
        for _ in range(int(rng.integers(1, 12))):
            nodes = [v for v in range(6) if rng.random() < 0.5]
            if nodes:
                db.add(nodes, int(rng.integers(1, 4)))
        if not db.distinct:
            continue
        k = int(rng.integers(1, 6))
        l_m = int(rng.integers(1, 4))
        assert mine_topk_closed(db, k, l_m, cap=10_000) == _brute_force(db, k, l_m)


def test_cap_is_enforced():
    db = TransactionDb.from_transactions([[1, 2], [2, 3]])
    with pytest.raises(MiningCapError):
        mine_topk_closed(db, 5, 1, cap=1)


def test_empty_database_mines_nothing():
    assert mine_topk_closed(TransactionDb(), 3, 1) == []


@pytest.mark.parametrize('k, l_m', [(0, 1), (1, 0)])
def test_invalid_parameters(k, l_m):
    with pytest.raises(ValueError):
        mine_topk_closed(TransactionDb.from_transactions([[1, 2]]), k, l_m)


def test_support_and_merge():
    left = TransactionDb.from_transactions([[1, 2, 3], [2, 3]])
    right = TransactionDb.from_transactions([[2, 3]])
    left.merge(right)
    assert len(left) == 3
    assert left.support([2, 3]) == 3
    assert left.support([1]) == 1
    assert left.support([4]) == 0
