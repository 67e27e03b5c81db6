"""Exhaustive reference implementations for checking the miner and the greedy search

Nothing here is fast. The rule oracle enumerates every pair of disjoint item
subsets and tests every split point directly; the code-set oracle tries every
subset of a small candidate pool.
"""
import itertools
import logging
import random
import typing
from dataclasses import dataclass

from .codec import CodingOptions, DEFAULT_OPTIONS, CodeSet, canonical_sort, compress_length
from .rulemine import MinedRule, RuleStats, SequentialRule, ThresholdError, as_fraction
from .seqdb import Sequence, SequenceDatabase

logger = logging.getLogger(__name__)

MAX_POOL = 12


class OracleBoundsError(ValueError):
    """An instance too large to enumerate"""


@dataclass(frozen=True)
class OracleConfig:
    max_sequences: int = 10
    max_alphabet: int = 8
    max_length: int = 10
    seed: int = 0

    def check_bounds(self, db: SequenceDatabase):
        if len(db) > self.max_sequences:
            raise OracleBoundsError("{} sequences exceed the limit of {}"
                                    "".format(len(db), self.max_sequences))
        if len(db.alphabet) > self.max_alphabet:
            raise OracleBoundsError("{} items exceed the limit of {}"
                                    "".format(len(db.alphabet), self.max_alphabet))
        for seq in db:
            if len(seq) > self.max_length:
                raise OracleBoundsError("sequence {} is longer than {}"
                                        "".format(seq.sid, self.max_length))


DEFAULT_CONFIG = OracleConfig()


def _holds(antecedent, consequent, seq: Sequence):
    for split in range(1, len(seq)):
        before = set().union(*seq.steps[:split])
        after = set().union(*seq.steps[split:])
        if antecedent <= before and consequent <= after:
            return True
    return False


def _subsets(items, largest):
    for size in range(1, largest + 1):
        for combo in itertools.combinations(items, size):
            yield frozenset(combo)


def brute_force_rules(db: SequenceDatabase, minsup, minconf, max_antecedent=None,
                      max_consequent=None, config: OracleConfig = DEFAULT_CONFIG
                      ) -> typing.Set[MinedRule]:
    """Every rule meeting both thresholds, found by enumeration"""
    config.check_bounds(db)
    minsup, minconf = as_fraction(minsup), as_fraction(minconf)
    if not 0 < minsup <= 1 or not 0 <= minconf <= 1:
        raise ThresholdError("thresholds out of range")
    if not len(db):
        return set()

    alphabet = sorted(db.alphabet)
    left_cap = len(alphabet) if max_antecedent is None else min(max_antecedent, len(alphabet))
    found = set()
    for antecedent in _subsets(alphabet, left_cap):
        rest = [item for item in alphabet if item not in antecedent]
        right_cap = len(rest) if max_consequent is None else min(max_consequent, len(rest))
        containing = sum(1 for seq in db if antecedent <= seq.items)
        for consequent in _subsets(rest, right_cap):
            count = sum(1 for seq in db if _holds(antecedent, consequent, seq))
            stats = RuleStats(count, containing, len(db))
            if count and stats.support >= minsup and stats.confidence >= minconf:
                found.add(MinedRule(SequentialRule(antecedent, consequent), stats))
    return found


def best_code_subset(db: SequenceDatabase, pool, k: int,
                     options: CodingOptions = DEFAULT_OPTIONS) -> typing.Tuple[CodeSet, int]:
    """The smallest total length over base + any ``k`` or fewer larger rules

    The 1x1 rules of ``pool`` form the base that every code set keeps; the
    larger rules are the candidates, at most :data:`MAX_POOL` of them.
    """
    base = [mined for mined in pool if mined.rule.is_unit()]
    candidates = sorted((mined for mined in pool if not mined.rule.is_unit()),
                        key=lambda mined: mined.rule.text)
    if len(candidates) > MAX_POOL:
        raise OracleBoundsError("{} candidates exceed the limit of {}"
                                "".format(len(candidates), MAX_POOL))

    best_code, best_total = None, None
    for size in range(0, min(k, len(candidates)) + 1):
        for chosen in itertools.combinations(candidates, size):
            code = canonical_sort(base + list(chosen))
            total = compress_length(code, db, options).total
            if best_total is None or total < best_total:
                best_code, best_total = code, total
    return best_code, best_total


def random_database(config: OracleConfig = DEFAULT_CONFIG, rng=None,
                    distinct=False, min_length=1) -> SequenceDatabase:
    """A random single-item database within the config's bounds

    With ``distinct`` no item repeats inside a sequence.
    """
    rng = rng or random.Random(config.seed)
    rows = []
    for _ in range(rng.randint(1, config.max_sequences)):
        longest = config.max_length
        if distinct:
            longest = min(longest, config.max_alphabet)
        length = rng.randint(min(min_length, longest), longest)
        if distinct:
            rows.append(rng.sample(range(config.max_alphabet), length))
        else:
            rows.append([rng.randrange(config.max_alphabet) for _ in range(length)])
    return SequenceDatabase.from_lists(rows)
