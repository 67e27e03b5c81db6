"""Sequential rules, their support and confidence, and rule mining

A rule ``X -> Y`` occurs in a sequence when some split puts every item of
``X`` at or before the split and every item of ``Y`` after it. Both sides
are unordered.

>>> from comsr.seqdb import SequenceDatabase
>>> db = SequenceDatabase.from_lists([[1, 2, 3], [2, 1, 3], [1, 3]])
>>> rule = SequentialRule({1}, {3})
>>> support(rule, db), confidence(rule, db)
(Fraction(1, 1), Fraction(1, 1))
>>> format_rule(MinedRule(SequentialRule({1, 2}, {3}), compute_stats(SequentialRule({1, 2}, {3}), db)))
'1,2 -> 3 sup=0.6667 conf=1.0000'
"""
import logging
import typing
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce

from .seqdb import Sequence, SequenceDatabase

logger = logging.getLogger(__name__)

DEFAULT_MAX_ANTECEDENT = 4
DEFAULT_MAX_CONSEQUENT = 1


class ThresholdError(ValueError):
    """A threshold or size cap outside its valid range"""


def as_fraction(value) -> Fraction:
    """Exact rational form of a threshold; floats go through their decimal repr

    >>> as_fraction(0.7)
    Fraction(7, 10)
    """
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class SequentialRule:
    """An implication ``antecedent -> consequent`` between disjoint itemsets"""
    antecedent: typing.FrozenSet[int]
    consequent: typing.FrozenSet[int]

    def __post_init__(self):
        antecedent = frozenset(self.antecedent)
        consequent = frozenset(self.consequent)
        if not antecedent or not consequent:
            raise ValueError("both sides of a rule must be non-empty")
        if antecedent & consequent:
            raise ValueError("antecedent and consequent must be disjoint")
        object.__setattr__(self, 'antecedent', antecedent)
        object.__setattr__(self, 'consequent', consequent)

    @cached_property
    def antecedent_items(self) -> typing.Tuple[int, ...]:
        return tuple(sorted(self.antecedent))

    @cached_property
    def consequent_items(self) -> typing.Tuple[int, ...]:
        return tuple(sorted(self.consequent))

    @cached_property
    def token_items(self) -> typing.Tuple[int, ...]:
        """Items in the order positions are listed in a cover token"""
        return self.antecedent_items + self.consequent_items

    @property
    def shape(self) -> typing.Tuple[int, int]:
        return len(self.antecedent), len(self.consequent)

    @property
    def size(self) -> int:
        return len(self.antecedent) + len(self.consequent)

    def is_unit(self):
        """True for a 1x1 rule"""
        return self.shape == (1, 1)

    @cached_property
    def text(self) -> str:
        return "{} -> {}".format(','.join(map(str, self.antecedent_items)),
                                 ','.join(map(str, self.consequent_items)))

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class RuleStats:
    """Exact counts behind support and confidence"""
    support_count: int
    antecedent_count: int
    database_size: int

    @property
    def support(self) -> Fraction:
        return Fraction(self.support_count, self.database_size)

    @property
    def confidence(self) -> Fraction:
        if not self.antecedent_count:
            return Fraction(0)
        return Fraction(self.support_count, self.antecedent_count)


@dataclass(frozen=True)
class MinedRule:
    rule: SequentialRule
    stats: RuleStats

    @property
    def support(self) -> Fraction:
        return self.stats.support

    @property
    def confidence(self) -> Fraction:
        return self.stats.confidence

    def __str__(self):
        return format_rule(self)


def larger_than(first: SequentialRule, second: SequentialRule) -> bool:
    """Size partial order: strictly more items on one side and no fewer on the other

    >>> larger_than(SequentialRule({1, 2}, {3}), SequentialRule({1}, {3}))
    True
    >>> larger_than(SequentialRule({1, 2}, {3}), SequentialRule({1}, {3, 4}))
    False
    """
    p, q = first.shape
    m, n = second.shape
    return (p > m and q >= n) or (p >= m and q > n)


def occurs(rule: SequentialRule, seq: Sequence) -> bool:
    """True iff some split puts the antecedent before the consequent"""
    first = seq.first_positions
    last = seq.last_positions
    try:
        split = max(first[item] for item in rule.antecedent)
        return split < min(last[item] for item in rule.consequent)
    except KeyError:
        return False


def _require_items(db):
    if not len(db):
        raise ThresholdError("support and confidence are undefined on an empty database")


def compute_stats(rule: SequentialRule, db: SequenceDatabase) -> RuleStats:
    _require_items(db)
    support_count = sum(1 for seq in db if occurs(rule, seq))
    antecedent_count = sum(1 for seq in db if rule.antecedent <= seq.items)
    return RuleStats(support_count, antecedent_count, len(db))


def support(rule: SequentialRule, db: SequenceDatabase) -> Fraction:
    return compute_stats(rule, db).support


def confidence(rule: SequentialRule, db: SequenceDatabase) -> Fraction:
    """Support count over the sequences containing every antecedent item, anywhere"""
    return compute_stats(rule, db).confidence


def format_rule(mined: MinedRule) -> str:
    return "{} sup={:.4f} conf={:.4f}".format(mined.rule.text, float(mined.support),
                                              float(mined.confidence))


def parse_rule_line(line: str) -> SequentialRule:
    """Read back the rule part of a :func:`format_rule` line

    >>> parse_rule_line('1,2 -> 3 sup=0.5000 conf=1.0000')
    SequentialRule(antecedent=frozenset({1, 2}), consequent=frozenset({3}))
    """
    try:
        left, right = line.split('->')
        right = right.split()[0]
        return SequentialRule(frozenset(int(x) for x in left.split(',')),
                              frozenset(int(y) for y in right.split(',')))
    except (ValueError, IndexError):
        raise ValueError("not a rule line: {!r}".format(line))


def _check_thresholds(minsup, minconf, max_antecedent, max_consequent):
    minsup = as_fraction(minsup)
    minconf = as_fraction(minconf)
    if not 0 < minsup <= 1:
        raise ThresholdError("minsup must be in (0, 1], got {}".format(minsup))
    if not 0 <= minconf <= 1:
        raise ThresholdError("minconf must be in [0, 1], got {}".format(minconf))
    for name, cap in (('max_antecedent', max_antecedent), ('max_consequent', max_consequent)):
        if cap is not None and cap < 1:
            raise ThresholdError("{} must be at least 1, got {}".format(name, cap))
    return minsup, minconf


class _RuleGrower(object):
    """Left/right rule expansion with support pruning

    Every rule (X, Y) is reached along exactly one path: start from the 1x1
    rule of the smallest items, grow the consequent in ascending item order,
    then grow the antecedent in ascending item order.
    """

    def __init__(self, db, min_count, minconf, max_antecedent, max_consequent):
        self.db = db
        self.min_count = min_count
        self.minconf = minconf
        self.max_antecedent = max_antecedent
        self.max_consequent = max_consequent
        self.containing = defaultdict(set)
        for index, seq in enumerate(db):
            for item in seq.items:
                self.containing[item].add(index)
        self.frequent = sorted(item for item, sids in self.containing.items()
                               if len(sids) >= min_count)
        self._antecedent_counts = {}
        self.found = set()

    def antecedent_count(self, antecedent):
        count = self._antecedent_counts.get(antecedent)
        if count is None:
            count = len(reduce(set.intersection, (self.containing[x] for x in antecedent)))
            self._antecedent_counts[antecedent] = count
        return count

    def run(self):
        for x in self.frequent:
            for y in self.frequent:
                if x == y:
                    continue
                bounds = {}
                for index in self.containing[x] & self.containing[y]:
                    seq = self.db[index]
                    first, last = seq.first_positions[x], seq.last_positions[y]
                    if first < last:
                        bounds[index] = (first, last)
                if len(bounds) >= self.min_count:
                    self.grow(frozenset([x]), frozenset([y]), bounds, grow_right=True)
        return self.found

    def _capped(self, size, cap):
        return cap is not None and size >= cap

    def grow(self, antecedent, consequent, bounds, grow_right):
        self.emit(antecedent, consequent, len(bounds))

        if grow_right and not self._capped(len(consequent), self.max_consequent):
            top = max(consequent)
            for z in self.frequent:
                if z <= top or z in antecedent:
                    continue
                expanded = {}
                for index, (first, last) in bounds.items():
                    last_z = self.db[index].last_positions.get(z)
                    if last_z is not None and first < last_z:
                        expanded[index] = (first, min(last, last_z))
                if len(expanded) >= self.min_count:
                    self.grow(antecedent, consequent | {z}, expanded, grow_right=True)

        if not self._capped(len(antecedent), self.max_antecedent):
            top = max(antecedent)
            for z in self.frequent:
                if z <= top or z in consequent:
                    continue
                expanded = {}
                for index, (first, last) in bounds.items():
                    first_z = self.db[index].first_positions.get(z)
                    if first_z is not None and first_z < last:
                        expanded[index] = (max(first, first_z), last)
                if len(expanded) >= self.min_count:
                    self.grow(antecedent | {z}, consequent, expanded, grow_right=False)

    def emit(self, antecedent, consequent, support_count):
        antecedent_count = self.antecedent_count(antecedent)
        stats = RuleStats(support_count, antecedent_count, len(self.db))
        if stats.confidence >= self.minconf:
            self.found.add(MinedRule(SequentialRule(antecedent, consequent), stats))


def _min_count(minsup, size):
    # smallest integer count c with c / size >= minsup
    bound = minsup * size
    return max(1, -(-bound.numerator // bound.denominator))


def mine_rules(db: SequenceDatabase, minsup, minconf,
               max_antecedent=DEFAULT_MAX_ANTECEDENT,
               max_consequent=DEFAULT_MAX_CONSEQUENT) -> typing.Set[MinedRule]:
    """All rules meeting both thresholds within the size caps

    A cap of ``None`` leaves that side unbounded.
    """
    minsup, minconf = _check_thresholds(minsup, minconf, max_antecedent, max_consequent)
    if not len(db):
        return set()
    grower = _RuleGrower(db, _min_count(minsup, len(db)), minconf,
                         max_antecedent, max_consequent)
    found = grower.run()
    logger.info("mined %d rules at minsup=%s minconf=%s (caps %s x %s)",
                len(found), minsup, minconf, max_antecedent, max_consequent)
    return found


def mine_all_one_rules(db: SequenceDatabase) -> typing.Set[MinedRule]:
    """Every 1x1 rule with positive support"""
    pair_counts = Counter()
    item_counts = Counter()
    for seq in db:
        item_counts.update(seq.items)
        first, last = seq.first_positions, seq.last_positions
        pair_counts.update((x, y) for x in first for y in last
                           if x != y and first[x] < last[y])
    return {MinedRule(SequentialRule(frozenset([x]), frozenset([y])),
                      RuleStats(count, item_counts[x], len(db)))
            for (x, y), count in pair_counts.items()}


def initial_code(rules) -> typing.Set[MinedRule]:
    """The 1x1 rules of a mined rule set"""
    return {mined for mined in rules if mined.rule.is_unit()}
