"""Command-line front end

    comsr compress --input sign.txt --mode ful --minsup 0.7 --minconf 0.7 --archive out.json
    comsr grid --input sign.txt --minsup 0.3 --vary minconf --from 0.3 --to 0.7 --step 0.1
    comsr decode --archive out.json --codeset code.json --output restored.txt
    comsr stats --input sign.txt

Exit statuses: 0 success, 1 bad input or thresholds, 2 an archive or round
trip that does not check out, 3 an I/O error.
"""
import argparse
import csv
import dataclasses
import logging
import multiprocessing
import os
import sys
import typing
from dataclasses import dataclass
from fractions import Fraction

from .archive import read_archive, read_codeset, write_archive, write_codeset, write_report
from .codec import (CodingOptions, CoverPolicy, DecodeError, PartialCost, UsageError,
                    canonical_key, decode)
from .compress import CompressionRun, Mode, comsr
from .oracle import OracleBoundsError, brute_force_rules
from .rulemine import (DEFAULT_MAX_ANTECEDENT, DEFAULT_MAX_CONSEQUENT, ThresholdError,
                       as_fraction, format_rule)
from .schemabase import SchemaValidationError
from .seqdb import (NotSingleItemError, SpmfParseError, db_stats, load_spmf, to_spmf,
                    validate_single_item)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCONSISTENT = 2
EXIT_IO = 3

THREADS_VARIABLE = 'COMSR_THREADS'

GRID_COLUMNS = ('minsup', 'minconf', 'mode', 'final_rule_count', 'compression_ratio',
                'total_length', 'loop_seconds', 'mined_rule_count', 'error')

_INPUT_ERRORS = (SpmfParseError, NotSingleItemError, ThresholdError)
_ARCHIVE_ERRORS = (SchemaValidationError, UsageError, DecodeError, ValueError)


@dataclass(frozen=True)
class RunConfig:
    input: str
    minsup: Fraction
    minconf: Fraction
    limit: typing.Optional[int] = None
    mode: Mode = Mode.NON
    max_antecedent: typing.Optional[int] = DEFAULT_MAX_ANTECEDENT
    max_consequent: typing.Optional[int] = DEFAULT_MAX_CONSEQUENT
    options: CodingOptions = CodingOptions()
    report: typing.Optional[str] = None
    codeset: typing.Optional[str] = None
    archive: typing.Optional[str] = None

    def __post_init__(self):
        for name in ('minsup', 'minconf'):
            value = getattr(self, name)
            if value is None:
                raise ThresholdError("{} is required".format(name))
            value = as_fraction(value)
            if not 0 < value <= 1:
                raise ThresholdError("{} must lie in (0, 1], got {}".format(name, value))
            object.__setattr__(self, name, value)
        if self.limit is not None and self.limit < 0:
            raise ThresholdError("limit must be non-negative")

    @classmethod
    def from_args(cls, args):
        return cls(input=args.input, minsup=args.minsup, minconf=args.minconf,
                   limit=args.limit, mode=Mode(args.mode),
                   max_antecedent=args.max_ante, max_consequent=args.max_cons,
                   options=CodingOptions(cover=CoverPolicy(args.cover),
                                         partial_cost=PartialCost(args.partial_cost)),
                   report=getattr(args, 'report', None),
                   codeset=getattr(args, 'codeset', None),
                   archive=getattr(args, 'archive', None))


def _run(config: RunConfig, db) -> CompressionRun:
    return comsr(db, config.minsup, config.minconf, config.max_antecedent,
                 config.max_consequent, config.mode, config.options)


def cmd_compress(config: RunConfig) -> int:
    """Compress, check the round trip, then write the requested files"""
    try:
        db = load_spmf(config.input, config.limit)
        run = _run(config, db)
    except _INPUT_ERRORS as err:
        logger.error("%s", err)
        return EXIT_INPUT
    except OSError as err:
        logger.error("cannot read %s: %s", config.input, err)
        return EXIT_IO

    try:
        restored = decode(run.encoded, run.code)
    except DecodeError as err:
        logger.error("encoding does not decode: %s", err)
        return EXIT_INCONSISTENT
    if to_spmf(restored) != to_spmf(db):
        logger.error("decoded database differs from the input")
        return EXIT_INCONSISTENT

    try:
        if config.report:
            write_report(config.report, run)
        if config.codeset:
            write_codeset(config.codeset, run.code, len(db))
        if config.archive:
            write_archive(config.archive, run.encoded)
    except SchemaValidationError as err:
        logger.error("%s", err)
        return EXIT_INCONSISTENT
    except OSError as err:
        logger.error("cannot write output: %s", err)
        return EXIT_IO

    print("mode={} rules={} initial_rules_used={} total={}->{} ratio={:.4f} loop={:.4f}s"
          "".format(run.mode.value, len(run.code), run.initial_rules_used, run.initial.total,
                    run.final.total, float(run.ratio), run.loop_seconds))
    return EXIT_OK


def grid_values(start, stop, step) -> typing.List[Fraction]:
    """``start``, ``start + step``, ... up to and including ``stop``

    >>> [str(value) for value in grid_values('0.3', '0.5', '0.1')]
    ['3/10', '2/5', '1/2']
    """
    start, stop, step = as_fraction(start), as_fraction(stop), as_fraction(step)
    if step <= 0:
        raise ThresholdError("step must be positive")
    if start > stop:
        raise ThresholdError("range start {} exceeds its end {}".format(start, stop))
    values = []
    value = start
    while value <= stop:
        values.append(value)
        value += step
    return values


def _decimal(value) -> str:
    return '{:.4f}'.format(float(value))


def _grid_row(job) -> typing.Dict[str, str]:
    config, db = job
    row = dict.fromkeys(GRID_COLUMNS, '')
    row.update(minsup=_decimal(config.minsup), minconf=_decimal(config.minconf),
               mode=config.mode.value)
    try:
        run = _run(config, db)
    except ValueError as err:
        logger.warning("grid point minsup=%s minconf=%s failed: %s",
                       row['minsup'], row['minconf'], err)
        row['error'] = str(err)
        return row
    row.update(final_rule_count=str(len(run.code)),
               compression_ratio=_decimal(run.ratio),
               total_length=str(run.final.total),
               loop_seconds=_decimal(run.loop_seconds),
               mined_rule_count=str(run.mined_count))
    logger.info("grid point minsup=%s minconf=%s done", row['minsup'], row['minconf'])
    logger.debug("grid point took %.4fs in the loop", run.loop_seconds)
    return row


def thread_count() -> int:
    value = os.environ.get(THREADS_VARIABLE, '1')
    try:
        threads = int(value)
    except ValueError:
        threads = 0
    if threads < 1:
        logger.warning("ignoring %s=%r, using 1", THREADS_VARIABLE, value)
        return 1
    return threads


def cmd_grid(config: RunConfig, vary: str, start, stop, step,
             csv_path: typing.Optional[str] = None) -> int:
    """One compression run per value of the varied threshold, as CSV rows

    Failed points become rows with an ``error`` message; the exit status is
    then 1, after every point has run.
    """
    if vary not in ('minsup', 'minconf'):
        logger.error("can only vary minsup or minconf, not %r", vary)
        return EXIT_INPUT
    try:
        values = grid_values(start, stop, step)
        configs = [dataclasses.replace(config, **{vary: value}) for value in values]
        db = load_spmf(config.input, config.limit)
        validate_single_item(db).raise_for_failure()
    except _INPUT_ERRORS as err:
        logger.error("%s", err)
        return EXIT_INPUT
    except OSError as err:
        logger.error("cannot read %s: %s", config.input, err)
        return EXIT_IO

    jobs = [(point, db) for point in configs]
    threads = min(thread_count(), len(jobs))
    if threads > 1:
        with multiprocessing.Pool(threads) as pool:
            rows = pool.map(_grid_row, jobs)
    else:
        rows = [_grid_row(job) for job in jobs]

    try:
        if csv_path:
            with open(csv_path, 'w', newline='') as f:
                _write_rows(f, rows)
            logger.info("wrote %s", csv_path)
        else:
            _write_rows(sys.stdout, rows)
    except OSError as err:
        logger.error("cannot write %s: %s", csv_path, err)
        return EXIT_IO
    return EXIT_INPUT if any(row['error'] for row in rows) else EXIT_OK


def _write_rows(stream, rows):
    writer = csv.DictWriter(stream, fieldnames=GRID_COLUMNS, lineterminator='\n')
    writer.writeheader()
    writer.writerows(rows)


def cmd_decode(archive_path, codeset_path, output_path=None) -> int:
    """Rebuild the database from an archive and its code set, as SPMF text"""
    try:
        code = read_codeset(codeset_path)
        enc = read_archive(archive_path)
        text = to_spmf(decode(enc, code))
    except OSError as err:
        logger.error("%s", err)
        return EXIT_IO
    except _ARCHIVE_ERRORS as err:
        logger.error("archive does not decode: %s", err)
        return EXIT_INCONSISTENT

    try:
        if output_path:
            with open(output_path, 'w') as f:
                f.write(text)
        else:
            sys.stdout.write(text)
    except OSError as err:
        logger.error("cannot write %s: %s", output_path, err)
        return EXIT_IO
    return EXIT_OK


def cmd_stats(path, limit=None) -> int:
    try:
        db = load_spmf(path, limit)
    except SpmfParseError as err:
        logger.error("%s", err)
        return EXIT_INPUT
    except OSError as err:
        logger.error("cannot read %s: %s", path, err)
        return EXIT_IO
    print(db_stats(db).describe())
    result = validate_single_item(db)
    if result:
        print("single-item: yes")
    else:
        print("single-item: no (sid {}, position {})".format(result.sid, result.position))
    return EXIT_OK


def cmd_oracle(config: RunConfig) -> int:
    """Print every rule the brute-force miner finds, in code set order"""
    try:
        db = load_spmf(config.input, config.limit)
        rules = brute_force_rules(db, config.minsup, config.minconf,
                                  config.max_antecedent, config.max_consequent)
    except _INPUT_ERRORS + (OracleBoundsError,) as err:
        logger.error("%s", err)
        return EXIT_INPUT
    except OSError as err:
        logger.error("cannot read %s: %s", config.input, err)
        return EXIT_IO
    for mined in sorted(rules, key=canonical_key):
        print(format_rule(mined))
    return EXIT_OK


def _fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError("not a number: {!r}".format(text))


def _cap(text):
    if text.lower() == 'none':
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("not an integer: {!r}".format(text))
    if value < 1:
        raise argparse.ArgumentTypeError("caps must be at least 1 or 'none'")
    return value


def build_parser() -> argparse.ArgumentParser:
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument('--input', required=True, metavar='PATH',
                        help="SPMF sequence database")
    source.add_argument('--limit', type=int, metavar='N',
                        help="use only the first N sequences")

    mining = argparse.ArgumentParser(add_help=False)
    mining.add_argument('--mode', choices=[mode.value for mode in Mode], default='non')
    mining.add_argument('--minsup', type=_fraction, metavar='F')
    mining.add_argument('--minconf', type=_fraction, metavar='F')
    mining.add_argument('--max-ante', type=_cap, default=DEFAULT_MAX_ANTECEDENT, metavar='K',
                        help="antecedent size cap, or 'none' (default: %(default)s)")
    mining.add_argument('--max-cons', type=_cap, default=DEFAULT_MAX_CONSEQUENT, metavar='K',
                        help="consequent size cap, or 'none' (default: %(default)s)")
    mining.add_argument('--cover', choices=[policy.value for policy in CoverPolicy],
                        default=CoverPolicy.REPEAT.value)
    mining.add_argument('--partial-cost', choices=[cost.value for cost in PartialCost],
                        default=PartialCost.TWO.value)

    parser = argparse.ArgumentParser(prog='comsr',
                                     description="Compress sequence databases with sequential rules")
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help="-v for progress, -vv for every accepted rule")
    commands = parser.add_subparsers(dest='command', metavar='{compress,grid,decode,stats}')
    commands.required = True

    compress = commands.add_parser('compress', parents=[source, mining],
                                   help="compress one database")
    compress.add_argument('--report', metavar='PATH')
    compress.add_argument('--codeset', metavar='PATH')
    compress.add_argument('--archive', metavar='PATH')

    grid = commands.add_parser('grid', parents=[source, mining],
                               help="compress over a range of one threshold")
    grid.add_argument('--vary', choices=['minsup', 'minconf'], required=True)
    grid.add_argument('--from', dest='start', type=_fraction, required=True, metavar='F')
    grid.add_argument('--to', dest='stop', type=_fraction, required=True, metavar='F')
    grid.add_argument('--step', type=_fraction, default=Fraction(1, 10), metavar='F')
    grid.add_argument('--csv', metavar='PATH', help="default: standard output")

    restore = commands.add_parser('decode', help="rebuild a database from an archive")
    restore.add_argument('--archive', required=True, metavar='PATH')
    restore.add_argument('--codeset', required=True, metavar='PATH')
    restore.add_argument('--output', metavar='PATH', help="default: standard output")

    commands.add_parser('stats', parents=[source], help="summarize a database")

    # unlisted
    commands.add_parser('oracle', parents=[source, mining])
    return parser


def _configure_logging(verbosity):
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(format='%(name)s %(levelname)s: %(message)s', level=level)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)

    if args.command == 'decode':
        return cmd_decode(args.archive, args.codeset, args.output)
    if args.command == 'stats':
        return cmd_stats(args.input, args.limit)

    if args.command == 'grid':
        setattr(args, args.vary, args.start)
    try:
        config = RunConfig.from_args(args)
    except ThresholdError as err:
        logger.error("%s", err)
        return EXIT_INPUT

    if args.command == 'compress':
        return cmd_compress(config)
    if args.command == 'grid':
        return cmd_grid(config, args.vary, args.start, args.stop, args.step, args.csv)
    return cmd_oracle(config)


if __name__ == '__main__':
    sys.exit(main())
