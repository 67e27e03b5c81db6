"""Sequence databases in SPMF text format

A database is an ordered list of sequences; each sequence is an ordered list
of itemsets and each itemset a set of integer items. Positions within a
sequence are 1-based.

>>> db = parse_spmf("1 -1 2 3 -1 -2\\n4 -1 -2")
>>> [seq.sid for seq in db]
[1, 2]
>>> sorted(db.alphabet)
[1, 2, 3, 4]
>>> print(to_spmf(db), end='')
1 -1 2 3 -1 -2
4 -1 -2
"""
import io
import logging
import os
import typing
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

logger = logging.getLogger(__name__)

ITEMSET_END = -1
SEQUENCE_END = -2
COMMENT_PREFIXES = ('#', '@', '%')

Item = int
Itemset = typing.FrozenSet[int]


class SpmfParseError(ValueError):
    """Malformed SPMF input; ``line`` is the 1-based line of the failure"""

    def __init__(self, message, line):
        super().__init__("line {}: {}".format(line, message))
        self.line = line


class NotSingleItemError(ValueError):
    """A step holds more than one item where single-item steps are required"""

    def __init__(self, sid, position):
        super().__init__("sequence {} has more than one item at position {}"
                         "".format(sid, position))
        self.sid = sid
        self.position = position


@dataclass(frozen=True)
class Sequence:
    """An ordered list of itemsets identified by ``sid``"""
    sid: int
    steps: typing.Tuple[Itemset, ...]

    def __post_init__(self):
        steps = tuple(frozenset(step) for step in self.steps)
        if not steps:
            raise ValueError("sequence {} has no itemsets".format(self.sid))
        for step in steps:
            if not step:
                raise ValueError("sequence {} has an empty itemset".format(self.sid))
            if any(item < 0 for item in step):
                raise ValueError("items must be non-negative integers")
        object.__setattr__(self, 'steps', steps)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def at(self, position):
        """The itemset at a 1-based position"""
        if position < 1:
            raise IndexError(position)
        return self.steps[position - 1]

    @cached_property
    def items(self) -> Itemset:
        return frozenset().union(*self.steps)

    @cached_property
    def first_positions(self) -> typing.Dict[int, int]:
        """Map each item to the first position holding it"""
        first = {}
        for position, step in enumerate(self.steps, 1):
            for item in step:
                first.setdefault(item, position)
        return first

    @cached_property
    def last_positions(self) -> typing.Dict[int, int]:
        """Map each item to the last position holding it"""
        last = {}
        for position, step in enumerate(self.steps, 1):
            for item in step:
                last[item] = position
        return last

    def is_single_item(self):
        return all(len(step) == 1 for step in self.steps)

    def singletons(self) -> typing.Tuple[int, ...]:
        """The item of every step; only defined for single-item sequences"""
        for position, step in enumerate(self.steps, 1):
            if len(step) != 1:
                raise NotSingleItemError(self.sid, position)
        return tuple(next(iter(step)) for step in self.steps)


@dataclass(frozen=True)
class SequenceDatabase:
    """An immutable ordered collection of sequences with unique sids"""
    sequences: typing.Tuple[Sequence, ...] = field(default_factory=tuple)

    def __post_init__(self):
        sequences = tuple(self.sequences)
        seen = set()
        for seq in sequences:
            if seq.sid in seen:
                raise ValueError("duplicate sid {}".format(seq.sid))
            seen.add(seq.sid)
        object.__setattr__(self, 'sequences', sequences)

    @classmethod
    def from_lists(cls, rows):
        """Build a database from nested lists, sids numbered from 1

        >>> SequenceDatabase.from_lists([[1, 2], [[3, 4], 5]]).sequences[1].steps
        (frozenset({3, 4}), frozenset({5}))
        """
        sequences = []
        for sid, row in enumerate(rows, 1):
            steps = [frozenset(step) if isinstance(step, (list, tuple, set, frozenset))
                     else frozenset([step]) for step in row]
            sequences.append(Sequence(sid, tuple(steps)))
        return cls(tuple(sequences))

    def __len__(self):
        return len(self.sequences)

    def __iter__(self):
        return iter(self.sequences)

    def __getitem__(self, index):
        return self.sequences[index]

    @cached_property
    def alphabet(self) -> Itemset:
        return frozenset().union(*(seq.items for seq in self.sequences))

    def limit(self, count):
        """The first ``count`` sequences; ``None`` keeps everything"""
        if count is None:
            return self
        if count < 0:
            raise ValueError("limit must be non-negative")
        return SequenceDatabase(self.sequences[:count])


class ValidationResult(typing.NamedTuple):
    """Outcome of :func:`validate_single_item`; truthy on success"""
    ok: bool
    sid: typing.Optional[int] = None
    position: typing.Optional[int] = None

    def __bool__(self):
        return self.ok

    def raise_for_failure(self):
        if not self.ok:
            raise NotSingleItemError(self.sid, self.position)


class DatabaseStats(typing.NamedTuple):
    sequence_count: int
    alphabet_size: int
    total_items: int
    mean_length: typing.Optional[Fraction]

    def describe(self):
        mean = ('undefined' if self.mean_length is None
                else '{:.3f}'.format(float(self.mean_length)))
        return ("{} sequences, {} distinct items, {} items in total, mean length {}"
                "".format(self.sequence_count, self.alphabet_size, self.total_items, mean))


def _tokens(stream):
    for lineno, line in enumerate(stream, 1):
        stripped = line.strip()
        if not stripped or stripped.startswith(COMMENT_PREFIXES):
            continue
        for token in stripped.split():
            yield lineno, token


def parse_spmf(text, limit=None) -> SequenceDatabase:
    """Parse SPMF sequence text (a string or a text stream)

    ``-1`` closes an itemset and ``-2`` closes a sequence. Sequence ids are
    assigned 1, 2, ... in input order. Parsing stops after ``limit``
    sequences when it is given.

    >>> parse_spmf("1 -1 2 -1 -2").sequences[0].steps
    (frozenset({1}), frozenset({2}))
    >>> parse_spmf("1 -1 x -1 -2")
    Traceback (most recent call last):
        ...
    comsr.seqdb.SpmfParseError: line 1: malformed token 'x'
    """
    if isinstance(text, str):
        text = io.StringIO(text)

    sequences = []
    steps = []
    itemset = set()
    lineno = 0
    for lineno, token in _tokens(text):
        if limit is not None and len(sequences) >= limit:
            break
        try:
            value = int(token)
        except ValueError:
            raise SpmfParseError("malformed token {!r}".format(token), lineno)
        if value == ITEMSET_END:
            if not itemset:
                raise SpmfParseError("itemset with no items before -1", lineno)
            steps.append(frozenset(itemset))
            itemset = set()
        elif value == SEQUENCE_END:
            if itemset:
                raise SpmfParseError("itemset not closed by -1 before -2", lineno)
            if not steps:
                raise SpmfParseError("sequence with no itemsets before -2", lineno)
            sequences.append(Sequence(len(sequences) + 1, tuple(steps)))
            steps = []
        elif value < 0:
            raise SpmfParseError("unexpected marker {}".format(value), lineno)
        else:
            itemset.add(value)

    if (limit is None or len(sequences) < limit) and (steps or itemset):
        raise SpmfParseError("missing -2 at end of input", lineno)
    return SequenceDatabase(tuple(sequences))


def load_spmf(path, limit=None) -> SequenceDatabase:
    """Read an SPMF file from disk"""
    with open(os.fspath(path)) as f:
        db = parse_spmf(f, limit=limit)
    logger.info("loaded %d sequences (%d distinct items) from %s",
                len(db), len(db.alphabet), path)
    return db


def to_spmf(db: SequenceDatabase) -> str:
    """Serialize to SPMF with single spaces, ascending items and ``\\n`` line ends"""
    lines = []
    for seq in db:
        tokens = []
        for step in seq:
            tokens.extend(str(item) for item in sorted(step))
            tokens.append(str(ITEMSET_END))
        tokens.append(str(SEQUENCE_END))
        lines.append(' '.join(tokens))
    return ''.join(line + '\n' for line in lines)


def validate_single_item(db: SequenceDatabase) -> ValidationResult:
    """Check that every itemset holds exactly one item

    >>> validate_single_item(SequenceDatabase.from_lists([[1, 2], [[3, 4]]]))
    ValidationResult(ok=False, sid=2, position=1)
    """
    for seq in db:
        for position, step in enumerate(seq, 1):
            if len(step) != 1:
                return ValidationResult(False, seq.sid, position)
    return ValidationResult(True)


def db_stats(db: SequenceDatabase) -> DatabaseStats:
    total = sum(len(step) for seq in db for step in seq)
    mean = Fraction(total, len(db)) if len(db) else None
    return DatabaseStats(len(db), len(db.alphabet), total, mean)
