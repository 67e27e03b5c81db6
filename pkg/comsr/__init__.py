"""
comsr: compress sequence databases with sequential rules
"""
from .seqdb import (Sequence, SequenceDatabase, SpmfParseError, NotSingleItemError,
                    parse_spmf, load_spmf, to_spmf, validate_single_item, db_stats)
from .rulemine import (SequentialRule, MinedRule, RuleStats, ThresholdError,
                       support, confidence, mine_rules, mine_all_one_rules, initial_code)
from .codec import (CodeSet, CodingOptions, CoverPolicy, PartialCost, EncodedDatabase,
                    LengthReport, DecodeError, cover_database, compress_length, decode,
                    compression_ratio)
from .compress import Mode, CompressionRun, comsr, comsr_non, comsr_ful, compare_runs
from .schemabase import SchemaValidationError
from .version import version as __version__


__all__ = (
    "Sequence",
    "SequenceDatabase",
    "SpmfParseError",
    "NotSingleItemError",
    "parse_spmf",
    "load_spmf",
    "to_spmf",
    "validate_single_item",
    "db_stats",
    "SequentialRule",
    "MinedRule",
    "RuleStats",
    "ThresholdError",
    "support",
    "confidence",
    "mine_rules",
    "mine_all_one_rules",
    "initial_code",
    "CodeSet",
    "CodingOptions",
    "CoverPolicy",
    "PartialCost",
    "EncodedDatabase",
    "LengthReport",
    "DecodeError",
    "cover_database",
    "compress_length",
    "decode",
    "compression_ratio",
    "Mode",
    "CompressionRun",
    "comsr",
    "comsr_non",
    "comsr_ful",
    "compare_runs",
    "SchemaValidationError",
)
