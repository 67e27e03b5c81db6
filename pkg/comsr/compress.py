"""Greedy MDL selection of a code set

Both variants mine rules at the given thresholds, start from a base of 1x1
rules and try every larger mined rule once, in descending support order,
keeping it only when it makes the total description length strictly smaller.

* ``non`` starts from the mined 1x1 rules;
* ``ful`` starts from every 1x1 rule with positive support, so that nearly
  every item can be covered.
"""
import enum
import hashlib
import logging
import time
import typing
from dataclasses import dataclass, field
from fractions import Fraction

from .codec import (CodeSet, CodingOptions, DEFAULT_OPTIONS, EncodedDatabase, LengthReport,
                    canonical_sort, compress_length, compression_ratio, cover_database)
from .rulemine import (DEFAULT_MAX_ANTECEDENT, DEFAULT_MAX_CONSEQUENT, MinedRule, as_fraction,
                       initial_code, mine_all_one_rules, mine_rules)
from .seqdb import SequenceDatabase, to_spmf, validate_single_item

logger = logging.getLogger(__name__)


class Mode(enum.Enum):
    NON = 'non'
    FUL = 'ful'


class RunMismatchError(ValueError):
    """Runs compared on different databases or thresholds"""


def fingerprint(db: SequenceDatabase) -> str:
    return hashlib.sha1(to_spmf(db).encode('ascii')).hexdigest()


@dataclass(frozen=True)
class CompressionRun:
    mode: Mode
    minsup: Fraction
    minconf: Fraction
    max_antecedent: typing.Optional[int]
    max_consequent: typing.Optional[int]
    options: CodingOptions
    code: CodeSet
    encoded: EncodedDatabase
    initial: LengthReport
    final: LengthReport
    ratio: Fraction
    accepted: int
    rejected: int
    mined_count: int
    initial_rules_used: int
    loop_seconds: float
    database: str = ''
    accepted_totals: typing.Tuple[int, ...] = field(default=(), compare=False)

    @property
    def candidate_count(self):
        return self.accepted + self.rejected


def _candidate_key(mined: MinedRule):
    return -mined.support, mined.rule.text


def _greedy(db, code, candidates, options):
    current = compress_length(code, db, options)
    initial = current
    totals = [current.total]
    accepted = rejected = 0

    start = time.perf_counter()
    for candidate in candidates:
        if candidate in code:
            rejected += 1
            continue
        tentative = code.with_rule(candidate)
        report = compress_length(tentative, db, options)
        if report.total < current.total:
            code, current = tentative, report
            totals.append(current.total)
            accepted += 1
            logger.debug("accepted %s, total length now %d", candidate.rule, current.total)
        else:
            rejected += 1
    elapsed = time.perf_counter() - start
    return code, initial, current, accepted, rejected, tuple(totals), elapsed


def comsr(db: SequenceDatabase, minsup, minconf,
          max_antecedent=DEFAULT_MAX_ANTECEDENT, max_consequent=DEFAULT_MAX_CONSEQUENT,
          mode=Mode.NON, options: CodingOptions = DEFAULT_OPTIONS) -> CompressionRun:
    """Run one greedy selection; ``mode`` picks the starting code set"""
    mode = Mode(mode)
    validate_single_item(db).raise_for_failure()
    mined = mine_rules(db, minsup, minconf, max_antecedent, max_consequent)

    if mode is Mode.FUL:
        base = mine_all_one_rules(db)
    else:
        base = initial_code(mined)
    code = canonical_sort(base)
    candidates = sorted((mined_rule for mined_rule in mined if not mined_rule.rule.is_unit()),
                        key=_candidate_key)
    if not candidates:
        logger.warning("no rule larger than 1x1 at minsup=%s minconf=%s; "
                       "the base code set is final", minsup, minconf)
    logger.info("%s: %d base rules, %d candidates", mode.value, len(code), len(candidates))

    code, initial, final, accepted, rejected, totals, elapsed = _greedy(db, code, candidates,
                                                                       options)
    initial_used = sum(1 for count in initial.usage if count)
    encoded = cover_database(code, db, options)
    ratio = compression_ratio(encoded, db) if len(db) else Fraction(0)
    logger.info("%s: total length %d -> %d, %d rules, ratio %.4f, loop %.3fs",
                mode.value, initial.total, final.total, len(code), float(ratio), elapsed)

    return CompressionRun(mode=mode, minsup=as_fraction(minsup), minconf=as_fraction(minconf),
                          max_antecedent=max_antecedent, max_consequent=max_consequent,
                          options=options, code=code, encoded=encoded, initial=initial,
                          final=final, ratio=ratio, accepted=accepted, rejected=rejected,
                          mined_count=len(mined), initial_rules_used=initial_used,
                          loop_seconds=elapsed, database=fingerprint(db),
                          accepted_totals=totals)


def comsr_non(db, minsup, minconf, max_antecedent=DEFAULT_MAX_ANTECEDENT,
              max_consequent=DEFAULT_MAX_CONSEQUENT, options=DEFAULT_OPTIONS) -> CompressionRun:
    return comsr(db, minsup, minconf, max_antecedent, max_consequent, Mode.NON, options)


def comsr_ful(db, minsup, minconf, max_antecedent=DEFAULT_MAX_ANTECEDENT,
              max_consequent=DEFAULT_MAX_CONSEQUENT, options=DEFAULT_OPTIONS) -> CompressionRun:
    return comsr(db, minsup, minconf, max_antecedent, max_consequent, Mode.FUL, options)


@dataclass(frozen=True)
class RunComparison:
    ratio_delta: Fraction
    rule_count_delta: int
    runtime_delta: float
    below_threshold: typing.Tuple[MinedRule, ...]


def compare_runs(run_non: CompressionRun, run_ful: CompressionRun) -> RunComparison:
    """Differences of the second run from the first, on the same inputs

    ``below_threshold`` lists the second run's rules whose support or
    confidence falls short of the shared thresholds.
    """
    if run_non.database != run_ful.database:
        raise RunMismatchError("runs were made on different databases")
    if (run_non.minsup, run_non.minconf) != (run_ful.minsup, run_ful.minconf):
        raise RunMismatchError("runs were made at different thresholds")
    if ((run_non.max_antecedent, run_non.max_consequent)
            != (run_ful.max_antecedent, run_ful.max_consequent)):
        raise RunMismatchError("runs were made with different rule size caps")
    if run_non.options != run_ful.options:
        raise RunMismatchError("runs were made with different coding options")
    below = tuple(mined for mined in run_ful.code
                  if mined.support < run_ful.minsup or mined.confidence < run_ful.minconf)
    return RunComparison(ratio_delta=run_ful.ratio - run_non.ratio,
                         rule_count_delta=len(run_ful.code) - len(run_non.code),
                         runtime_delta=run_ful.loop_seconds - run_non.loop_seconds,
                         below_threshold=below)
