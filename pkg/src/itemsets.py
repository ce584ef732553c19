"""
Top-k closed node-set mining over a transaction database of node sets.

Closed sets are enumerated by prefix-preserving closure extension over
tidset bitmasks of the distinct transactions. A min-support threshold is
raised as the top-k heap fills, which prunes whole branches because
support only shrinks along an extension.
"""

import heapq
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .config import get_settings
from .errors import MiningCapError
from .graph_core import NodeSet

logger = logging.getLogger(__name__)


@dataclass
class TransactionDb:
    """One node set per non-degenerate round, with distinct-set multiplicities."""

    transactions: List[NodeSet] = field(default_factory=list)
    distinct: Counter = field(default_factory=Counter)

    @classmethod
    def from_transactions(cls, transactions: Iterable[Iterable[int]]) -> 'TransactionDb':
        db = cls()
        for transaction in transactions:
            db.add(transaction)
        return db

    def add(self, transaction: Iterable[int], multiplicity: int = 1):
        nodes = NodeSet(transaction)
        self.transactions.extend([nodes] * multiplicity)
        self.distinct[nodes] += multiplicity

    def merge(self, other: 'TransactionDb'):
        self.transactions.extend(other.transactions)
        self.distinct.update(other.distinct)

    def __len__(self) -> int:
        return sum(self.distinct.values())

    def support(self, nodes: Iterable[int]) -> int:
        """Number of transactions containing ``nodes``."""
        wanted = set(nodes)
        return sum(m for t, m in self.distinct.items() if wanted.issubset(t))


def _rank_key(entry: Tuple[NodeSet, int]):
    nodes, support = entry
    return -support, -len(nodes), tuple(nodes)


def mine_topk_closed(db: TransactionDb, k: int, l_m: int,
                     cap: Optional[int] = None) -> List[Tuple[NodeSet, int]]:
    """
    Top-k closed node sets of size >= l_m by support.

    Args:
        db: Transaction database
        k: Number of sets to return
        l_m: Minimum set size
        cap: Closed sets the search may explore (defaults to UDENSE_MINER_CAP)

    Returns:
        (node set, support) pairs ordered by support descending, then larger
        size, then lexicographic node set

    Raises:
        ValueError: If k < 1 or l_m < 1
        MiningCapError: If more than ``cap`` closed sets are explored
    """
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if l_m < 1:
        raise ValueError(f"l_m must be at least 1, got {l_m}")
    cap = get_settings().miner_cap if cap is None else cap

    distinct = sorted(db.distinct.items())
    if not distinct:
        return []
    multiplicity = [m for _, m in distinct]
    transactions = [set(t) for t, _ in distinct]
    items = sorted(set().union(*transactions))
    tidset: Dict[int, int] = {item: 0 for item in items}
    for i, transaction in enumerate(transactions):
        for item in transaction:
            tidset[item] |= 1 << i
    everyone = (1 << len(distinct)) - 1

    def support_of(tids: int) -> int:
        total = 0
        while tids:
            low = tids & -tids
            total += multiplicity[low.bit_length() - 1]
            tids ^= low
        return total

    def closure_of(tids: int) -> frozenset:
        common = None
        while tids:
            low = tids & -tids
            transaction = transactions[low.bit_length() - 1]
            common = set(transaction) if common is None else common & transaction
            tids ^= low
        return frozenset(common or ())

    # min-heap keyed on the reverse of the final ranking: the root is the weakest kept entry
    top: List[Tuple[Tuple[int, int, Tuple[int, ...]], NodeSet, int]] = []
    explored = 0

    def threshold() -> int:
        return top[0][2] if len(top) >= k else 1

    def record(closed: frozenset, support: int):
        nonlocal explored
        explored += 1
        if explored > cap:
            raise MiningCapError(f"explored more than {cap} closed sets")
        if len(closed) < l_m:
            return
        nodes = NodeSet(closed)
        weakness = (support, len(nodes), tuple(-v for v in nodes))
        entry = (weakness, nodes, support)
        if len(top) < k:
            heapq.heappush(top, entry)
        elif weakness > top[0][0]:
            heapq.heapreplace(top, entry)

    root = closure_of(everyone)
    record(root, support_of(everyone))

    stack = [(root, everyone, -1)]
    while stack:
        closed, tids, core = stack.pop()
        for item in reversed(items):
            if item <= core or item in closed:
                continue
            extended = tids & tidset[item]
            if not extended:
                continue
            support = support_of(extended)
            if support < threshold():
                continue
            candidate = closure_of(extended)
            if any(j < item and j not in closed for j in candidate):
                continue
            record(candidate, support)
            stack.append((candidate, extended, item))

    ranked = sorted(((nodes, support) for _, nodes, support in top), key=_rank_key)
    logger.debug(f"mined {len(ranked)} closed sets after exploring {explored}")
    return ranked
