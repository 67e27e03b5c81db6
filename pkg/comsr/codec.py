"""Covering a single-item database with a code set of rules

Each sequence is encoded as a list of cover tokens, a rule reference plus the
positions of the items it stands for, and a residual of items no rule
covered. Lengths are counted in abstract units:

* the code set costs one unit per rule plus one per item in every rule;
* a full token costs one unit for the reference plus one per position;
* a partial token (a lone leftover item coded by one side of a 1x1 rule)
  costs two units, or ``|R| + 1`` under :attr:`PartialCost.UNIFORM`;
* every residual item costs one unit.
"""
import bisect
import enum
import logging
import typing
from dataclasses import dataclass, field
from fractions import Fraction

from .rulemine import MinedRule, SequentialRule, occurs
from .seqdb import Sequence, SequenceDatabase

logger = logging.getLogger(__name__)


class DuplicateRuleError(ValueError):
    """A code set lists the same rule twice"""


class DecodeError(ValueError):
    """An encoding that cannot be mapped back onto a database"""


class UsageError(ValueError):
    """Usage counts disagree with the tokens they summarize"""


class CoverPolicy(enum.Enum):
    """How often one rule may be applied to one sequence"""
    REPEAT = 'repeat'
    SINGLE = 'single'


class PartialCost(enum.Enum):
    """Cost of a partial token"""
    TWO = 'two'
    UNIFORM = 'uniform'


@dataclass(frozen=True)
class CodingOptions:
    cover: CoverPolicy = CoverPolicy.REPEAT
    partial_cost: PartialCost = PartialCost.TWO


DEFAULT_OPTIONS = CodingOptions()

FULL = 'full'
PARTIAL = 'partial'
ANTECEDENT = 'antecedent'
CONSEQUENT = 'consequent'


def canonical_key(mined: MinedRule):
    return -mined.rule.size, -mined.support, mined.rule.text


class CodeSet(typing.Sequence[MinedRule]):
    """Rules ordered by size, then support (both descending), then rule text"""

    def __init__(self, rules=()):
        rules = tuple(rules)
        seen = set()
        for mined in rules:
            if mined.rule in seen:
                raise DuplicateRuleError("rule {} appears more than once".format(mined.rule))
            seen.add(mined.rule)
        keys = [canonical_key(mined) for mined in rules]
        if keys != sorted(keys):
            raise ValueError("code set rules are not in canonical order")
        self._rules = rules
        self._index = {mined.rule: index for index, mined in enumerate(rules)}

    def __getitem__(self, index):
        return self._rules[index]

    def __len__(self):
        return len(self._rules)

    def __eq__(self, other):
        return isinstance(other, CodeSet) and self._rules == other._rules

    def __hash__(self):
        return hash(self._rules)

    def __repr__(self):
        return "CodeSet([{}])".format(', '.join(str(mined.rule) for mined in self._rules))

    def __contains__(self, item):
        rule = item.rule if isinstance(item, MinedRule) else item
        return rule in self._index

    def index_of(self, rule: SequentialRule) -> int:
        return self._index[rule]

    @property
    def rules(self) -> typing.Tuple[MinedRule, ...]:
        return self._rules

    def with_rule(self, mined: MinedRule) -> 'CodeSet':
        """A new code set with one more rule, canonically sorted"""
        return canonical_sort(self._rules + (mined,))


def canonical_sort(rules) -> CodeSet:
    """Sort rules into a code set

    >>> from comsr.rulemine import RuleStats
    >>> big = MinedRule(SequentialRule({1, 2}, {3}), RuleStats(1, 1, 2))
    >>> small = MinedRule(SequentialRule({1}, {2}), RuleStats(2, 2, 2))
    >>> canonical_sort([small, big])
    CodeSet([1,2 -> 3, 1 -> 2])
    """
    return CodeSet(sorted(rules, key=canonical_key))


@dataclass(frozen=True)
class CoverToken:
    """A reference to a code set rule and the positions it covers

    Full tokens list antecedent positions then consequent positions, each in
    ascending item order. Partial tokens carry one position and record which
    side of a 1x1 rule holds the item.
    """
    rule_index: int
    kind: str
    positions: typing.Tuple[int, ...]
    partial_side: typing.Optional[str] = None

    def render(self, one_based=True):
        number = self.rule_index + 1 if one_based else self.rule_index
        text = "rule{}|{}".format(number, ','.join(map(str, self.positions)))
        if self.kind == PARTIAL:
            text += "|" + self.partial_side[0]
        return "({})".format(text)


@dataclass(frozen=True)
class EncodedSequence:
    sid: int
    tokens: typing.Tuple[CoverToken, ...]
    residual: typing.Tuple[typing.Tuple[int, int], ...]

    def render(self, one_based=True):
        """Tokens in ``<(rule1|1,2), (rule2|4,5)>`` notation"""
        return "<{}>".format(', '.join(token.render(one_based) for token in self.tokens))

    @property
    def covered(self):
        return sum(len(token.positions) for token in self.tokens)


@dataclass(frozen=True)
class EncodedDatabase:
    sequences: typing.Tuple[EncodedSequence, ...]
    full_usage: typing.Tuple[int, ...]
    partial_usage: typing.Tuple[int, ...]

    def usage(self, index):
        """Full plus partial uses of the rule at ``index``"""
        return self.full_usage[index] + self.partial_usage[index]

    def check_usage(self, code_size=None):
        if code_size is not None and (len(self.full_usage) != code_size
                                      or len(self.partial_usage) != code_size):
            raise UsageError("usage covers {} rules, code set has {}"
                             "".format(len(self.full_usage), code_size))
        full = [0] * len(self.full_usage)
        partial = [0] * len(self.partial_usage)
        for encoded in self.sequences:
            for token in encoded.tokens:
                counts = full if token.kind == FULL else partial
                if not 0 <= token.rule_index < len(counts):
                    raise UsageError("token refers to unknown rule {}".format(token.rule_index))
                counts[token.rule_index] += 1
        if tuple(full) != self.full_usage or tuple(partial) != self.partial_usage:
            raise UsageError("usage counts do not match the tokens")

    @classmethod
    def from_sequences(cls, sequences, code_size):
        """Build an encoding, deriving usage from the tokens"""
        full = [0] * code_size
        partial = [0] * code_size
        for encoded in sequences:
            for token in encoded.tokens:
                (full if token.kind == FULL else partial)[token.rule_index] += 1
        return cls(tuple(sequences), tuple(full), tuple(partial))


@dataclass(frozen=True)
class LengthReport:
    model_length: int
    data_length: int
    residual_length: int
    usage: typing.Tuple[int, ...] = field(default=(), compare=False)

    @property
    def total(self) -> int:
        return self.model_length + self.data_length + self.residual_length


def _residual_index(residual) -> typing.Dict[int, typing.List[int]]:
    index = {}
    previous = 0
    for position, item in residual:
        if position <= previous:
            raise ValueError("residual positions must be strictly increasing")
        previous = position
        index.setdefault(item, []).append(position)
    return index


def _embed(rule: SequentialRule, index):
    split = 0
    positions = []
    for item in rule.antecedent_items:
        occurrences = index.get(item)
        if not occurrences:
            return None
        positions.append(occurrences[0])
        split = max(split, occurrences[0])
    for item in rule.consequent_items:
        occurrences = index.get(item)
        if not occurrences:
            return None
        after = bisect.bisect_right(occurrences, split)
        if after == len(occurrences):
            return None
        positions.append(occurrences[after])
    return tuple(positions)


def find_embedding(rule: SequentialRule, residual) -> typing.Optional[typing.Tuple[int, ...]]:
    """Leftmost embedding of ``rule`` in a residual of ``(position, item)`` pairs

    >>> rule = SequentialRule({1, 2}, {4, 5})
    >>> find_embedding(rule, [(1, 1), (2, 2), (3, 3), (4, 4), (5, 5), (6, 6)])
    (1, 2, 4, 5)
    >>> find_embedding(SequentialRule({2}, {1}), [(1, 1), (2, 2)]) is None
    True
    """
    return _embed(rule, _residual_index(residual))


def _cover_sequence(code: CodeSet, seq: Sequence, options: CodingOptions):
    items = seq.singletons()
    index = _residual_index(enumerate(items, 1))
    present = seq.items
    tokens = []

    for rule_index, mined in enumerate(code):
        rule = mined.rule
        if not (rule.antecedent <= present and rule.consequent <= present):
            continue
        while True:
            positions = _embed(rule, index)
            if positions is None:
                break
            for item, position in zip(rule.token_items, positions):
                occurrences = index[item]
                occurrences.remove(position)
                if not occurrences:
                    del index[item]
            tokens.append(CoverToken(rule_index, FULL, positions))
            if options.cover is CoverPolicy.SINGLE:
                break

    residual = sorted((position, item) for item, occurrences in index.items()
                      for position in occurrences)
    if len(residual) == 1:
        position, item = residual[0]
        for rule_index, mined in enumerate(code):
            rule = mined.rule
            if not rule.is_unit():
                continue
            if item == rule.antecedent_items[0]:
                side = ANTECEDENT
            elif item == rule.consequent_items[0]:
                side = CONSEQUENT
            else:
                continue
            if occurs(rule, seq):
                tokens.append(CoverToken(rule_index, PARTIAL, (position,), side))
                residual = []
                break

    return EncodedSequence(seq.sid, tuple(tokens), tuple(residual))


def cover_database(code: CodeSet, db: SequenceDatabase,
                   options: CodingOptions = DEFAULT_OPTIONS) -> EncodedDatabase:
    """Encode every sequence with the code set

    Rules are tried in code set order; under :attr:`CoverPolicy.REPEAT` a rule
    is applied to a sequence until it no longer embeds in what is left. A
    sequence left with exactly one item is then coded by the first 1x1 rule
    naming that item on either side and occurring in the original sequence.
    Covering a sequence depends only on the code set and that sequence, so
    the result is the same as the rule-major order of the procedure.
    """
    encoded = [_cover_sequence(code, seq, options) for seq in db]
    return EncodedDatabase.from_sequences(encoded, len(code))


def model_length(code: CodeSet) -> int:
    """``|H|`` plus the number of items in every rule, used or not"""
    return len(code) + sum(mined.rule.size for mined in code)


def _partial_unit(mined: MinedRule, options: CodingOptions) -> int:
    if options.partial_cost is PartialCost.UNIFORM:
        return mined.rule.size + 1
    return 2


def data_length(enc: EncodedDatabase, code: CodeSet,
                options: CodingOptions = DEFAULT_OPTIONS) -> int:
    enc.check_usage(len(code))
    length = 0
    for index, mined in enumerate(code):
        length += enc.full_usage[index] * (mined.rule.size + 1)
        length += enc.partial_usage[index] * _partial_unit(mined, options)
    return length


def covered_count(enc: EncodedDatabase) -> int:
    return sum(encoded.covered for encoded in enc.sequences)


def _total_items(db: SequenceDatabase) -> int:
    return sum(len(step) for seq in db for step in seq)


def compress_length(code: CodeSet, db: SequenceDatabase,
                    options: CodingOptions = DEFAULT_OPTIONS) -> LengthReport:
    """Description length of ``db`` under ``code``, residual items included"""
    enc = cover_database(code, db, options)
    return length_report(enc, code, options)


def length_report(enc: EncodedDatabase, code: CodeSet,
                  options: CodingOptions = DEFAULT_OPTIONS) -> LengthReport:
    residual = sum(len(encoded.residual) for encoded in enc.sequences)
    usage = tuple(enc.usage(index) for index in range(len(code)))
    return LengthReport(model_length(code), data_length(enc, code, options), residual, usage)


def decode(enc: EncodedDatabase, code: CodeSet) -> SequenceDatabase:
    """Rebuild the database an encoding was produced from"""
    sequences = []
    for encoded in enc.sequences:
        placed = {}

        def place(position, item):
            if position in placed:
                raise DecodeError("sequence {}: position {} is covered twice"
                                  "".format(encoded.sid, position))
            placed[position] = item

        for token in encoded.tokens:
            if not 0 <= token.rule_index < len(code):
                raise DecodeError("sequence {}: unknown rule index {}"
                                  "".format(encoded.sid, token.rule_index))
            rule = code[token.rule_index].rule
            if token.kind == FULL:
                if len(token.positions) != rule.size:
                    raise DecodeError("sequence {}: token for rule {} lists {} positions"
                                      "".format(encoded.sid, rule, len(token.positions)))
                split = len(rule.antecedent)
                if max(token.positions[:split]) >= min(token.positions[split:]):
                    raise DecodeError("sequence {}: consequent of rule {} does not follow "
                                      "its antecedent".format(encoded.sid, rule))
                for item, position in zip(rule.token_items, token.positions):
                    place(position, item)
            elif token.kind == PARTIAL:
                if not rule.is_unit() or len(token.positions) != 1:
                    raise DecodeError("sequence {}: malformed partial token".format(encoded.sid))
                if token.partial_side == ANTECEDENT:
                    item = rule.antecedent_items[0]
                elif token.partial_side == CONSEQUENT:
                    item = rule.consequent_items[0]
                else:
                    raise DecodeError("sequence {}: partial token has no side".format(encoded.sid))
                place(token.positions[0], item)
            else:
                raise DecodeError("sequence {}: unknown token kind {!r}"
                                  "".format(encoded.sid, token.kind))
        for position, item in encoded.residual:
            place(position, item)

        if sorted(placed) != list(range(1, len(placed) + 1)):
            raise DecodeError("sequence {}: positions are not 1..{}"
                              "".format(encoded.sid, len(placed)))
        steps = tuple(frozenset([placed[position]]) for position in range(1, len(placed) + 1))
        try:
            sequences.append(Sequence(encoded.sid, steps))
        except ValueError as err:
            raise DecodeError(str(err))
    try:
        return SequenceDatabase(tuple(sequences))
    except ValueError as err:
        raise DecodeError(str(err))


def compression_ratio(enc: EncodedDatabase, db: SequenceDatabase) -> Fraction:
    """Share of items covered by a token, full or partial"""
    total = _total_items(db)
    if not total:
        raise ValueError("compression ratio is undefined on an empty database")
    return Fraction(covered_count(enc), total)
