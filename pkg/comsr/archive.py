"""JSON documents: code sets, encoded archives and run reports

A code set file and an archive file together are the lossless compressed
form of a database; :func:`comsr.codec.decode` rebuilds it.
"""
import logging
import os

from .codec import CodeSet, CoverToken, EncodedDatabase, EncodedSequence, LengthReport
from .decorator import schemaclass
from .rulemine import MinedRule, RuleStats, SequentialRule
from .schemabase import SchemaBase, Undefined, debug_mode

logger = logging.getLogger(__name__)

CODESET_FORMAT = 'comsr-codeset'
ARCHIVE_FORMAT = 'comsr-archive'
REPORT_FORMAT = 'comsr-report'

_count = {'type': 'integer', 'minimum': 0}
_counts = {'type': 'array', 'items': _count}
_cap = {'type': ['integer', 'null'], 'minimum': 1}

DOCUMENT_SCHEMA = {
    '$schema': 'http://json-schema.org/draft-07/schema#',
    'definitions': {
        'ItemList': {
            'type': 'array',
            'items': {'type': 'integer', 'minimum': 0},
            'minItems': 1,
            'uniqueItems': True,
        },
        'Rule': {
            'type': 'object',
            'description': 'A rule with the exact counts behind its support and confidence.',
            'required': ['antecedent', 'consequent', 'support_count', 'antecedent_count'],
            'properties': {
                'index': dict(_count, description='Position in the canonical code set order.'),
                'antecedent': {'$ref': '#/definitions/ItemList'},
                'consequent': {'$ref': '#/definitions/ItemList'},
                'support': {'type': 'number', 'minimum': 0, 'maximum': 1},
                'confidence': {'type': 'number', 'minimum': 0, 'maximum': 1},
                'support_count': _count,
                'antecedent_count': _count,
                'full_usage': _count,
                'partial_usage': _count,
            },
            'additionalProperties': False,
        },
        'CodeSet': {
            'type': 'object',
            'required': ['format', 'database_size', 'rules'],
            'properties': {
                'format': {'const': CODESET_FORMAT},
                'database_size': dict(_count, description='Sequence count the stats refer to.'),
                'rules': {'type': 'array', 'items': {'$ref': '#/definitions/Rule'}},
            },
            'additionalProperties': False,
        },
        'Token': {
            'type': 'object',
            'required': ['rule_index', 'kind', 'positions'],
            'properties': {
                'rule_index': _count,
                'kind': {'enum': ['full', 'partial']},
                'positions': {'type': 'array', 'items': {'type': 'integer', 'minimum': 1},
                              'minItems': 1},
                'partial_side': {'enum': ['antecedent', 'consequent']},
            },
            'additionalProperties': False,
        },
        'EncodedSequence': {
            'type': 'object',
            'required': ['sid', 'tokens', 'residual'],
            'properties': {
                'sid': {'type': 'integer'},
                'tokens': {'type': 'array', 'items': {'$ref': '#/definitions/Token'}},
                'residual': {
                    'type': 'array',
                    'description': 'Uncovered (position, item) pairs.',
                    'items': {
                        'type': 'array',
                        'items': [{'type': 'integer', 'minimum': 1}, _count],
                        'minItems': 2,
                        'maxItems': 2,
                    },
                },
            },
            'additionalProperties': False,
        },
        'Archive': {
            'type': 'object',
            'required': ['format', 'sequences', 'usage'],
            'properties': {
                'format': {'const': ARCHIVE_FORMAT},
                'sequences': {'type': 'array', 'items': {'$ref': '#/definitions/EncodedSequence'}},
                'usage': {
                    'type': 'object',
                    'required': ['full', 'partial'],
                    'properties': {'full': _counts, 'partial': _counts},
                    'additionalProperties': False,
                },
            },
            'additionalProperties': False,
        },
        'Lengths': {
            'type': 'object',
            'required': ['model_length', 'data_length', 'residual_length', 'total'],
            'properties': {
                'model_length': _count,
                'data_length': _count,
                'residual_length': _count,
                'total': _count,
            },
            'additionalProperties': False,
        },
        'Report': {
            'type': 'object',
            'required': ['format', 'mode', 'minsup', 'minconf', 'initial', 'final',
                         'compression_ratio', 'rules'],
            'properties': {
                'format': {'const': REPORT_FORMAT},
                'mode': {'enum': ['non', 'ful']},
                'minsup': {'type': 'number', 'exclusiveMinimum': 0, 'maximum': 1},
                'minconf': {'type': 'number', 'minimum': 0, 'maximum': 1},
                'max_antecedent': _cap,
                'max_consequent': _cap,
                'cover': {'enum': ['repeat', 'single']},
                'partial_cost': {'enum': ['two', 'uniform']},
                'initial': {'$ref': '#/definitions/Lengths'},
                'final': {'$ref': '#/definitions/Lengths'},
                'compression_ratio': {'type': 'number', 'minimum': 0, 'maximum': 1},
                'accepted': _count,
                'rejected': _count,
                'mined_rule_count': _count,
                'initial_rules_used': _count,
                'loop_seconds': {'type': 'number', 'minimum': 0},
                'rules': {'type': 'array', 'items': {'$ref': '#/definitions/Rule'}},
            },
            'additionalProperties': False,
        },
    },
}


class _Document(SchemaBase):
    _rootschema = DOCUMENT_SCHEMA

    @classmethod
    def _default_wrapper_classes(cls):
        return _Document.__subclasses__()


@schemaclass
class RuleRecord(_Document):
    _schema = {'$ref': '#/definitions/Rule'}


@schemaclass
class CodeSetDocument(_Document):
    _schema = {'$ref': '#/definitions/CodeSet'}


@schemaclass
class TokenRecord(_Document):
    _schema = {'$ref': '#/definitions/Token'}


@schemaclass
class EncodedSequenceRecord(_Document):
    _schema = {'$ref': '#/definitions/EncodedSequence'}


@schemaclass
class ArchiveDocument(_Document):
    _schema = {'$ref': '#/definitions/Archive'}


@schemaclass
class LengthRecord(_Document):
    _schema = {'$ref': '#/definitions/Lengths'}


@schemaclass
class RunReport(_Document):
    _schema = {'$ref': '#/definitions/Report'}


def rule_record(mined: MinedRule, index=Undefined, full_usage=Undefined,
                partial_usage=Undefined) -> RuleRecord:
    return RuleRecord(index=index,
                      antecedent=list(mined.rule.antecedent_items),
                      consequent=list(mined.rule.consequent_items),
                      support=float(mined.support),
                      confidence=float(mined.confidence),
                      support_count=mined.stats.support_count,
                      antecedent_count=mined.stats.antecedent_count,
                      full_usage=full_usage,
                      partial_usage=partial_usage)


def mined_from_record(record, database_size) -> MinedRule:
    rule = SequentialRule(frozenset(record['antecedent']), frozenset(record['consequent']))
    return MinedRule(rule, RuleStats(record['support_count'], record['antecedent_count'],
                                     database_size))


def codeset_document(code: CodeSet, database_size: int) -> CodeSetDocument:
    with debug_mode(False):
        rules = [rule_record(mined, index=index) for index, mined in enumerate(code)]
        return CodeSetDocument(format=CODESET_FORMAT, database_size=database_size, rules=rules)


def codeset_from_document(document: CodeSetDocument) -> CodeSet:
    """Rebuild a code set; the stored order must be the canonical one"""
    records = list(document['rules'])
    if records and document['database_size'] == 0:
        raise ValueError("code set has rules but a database size of 0")
    if any('index' in record._kwds for record in records):
        records.sort(key=lambda record: record.get('index', -1))
        if [record.get('index') for record in records] != list(range(len(records))):
            raise ValueError("code set indexes are not 0..{}".format(len(records) - 1))
    rules = [mined_from_record(record, document['database_size']) for record in records]
    return CodeSet(rules)


def archive_document(enc: EncodedDatabase) -> ArchiveDocument:
    with debug_mode(False):
        sequences = []
        for encoded in enc.sequences:
            tokens = [TokenRecord(rule_index=token.rule_index, kind=token.kind,
                                  positions=list(token.positions),
                                  partial_side=token.partial_side or Undefined)
                      for token in encoded.tokens]
            sequences.append(EncodedSequenceRecord(
                sid=encoded.sid, tokens=tokens,
                residual=[[position, item] for position, item in encoded.residual]))
        return ArchiveDocument(format=ARCHIVE_FORMAT, sequences=sequences,
                               usage={'full': list(enc.full_usage),
                                      'partial': list(enc.partial_usage)})


def encoded_from_document(document: ArchiveDocument) -> EncodedDatabase:
    """Rebuild an encoding; usage counts are checked against the tokens"""
    sequences = []
    for record in document['sequences']:
        tokens = tuple(CoverToken(token['rule_index'], token['kind'], tuple(token['positions']),
                                  token.get('partial_side'))
                       for token in record['tokens'])
        residual = tuple((position, item) for position, item in record['residual'])
        sequences.append(EncodedSequence(record['sid'], tokens, residual))
    usage = document['usage']
    enc = EncodedDatabase(tuple(sequences), tuple(usage['full']), tuple(usage['partial']))
    enc.check_usage()
    return enc


def length_record(report: LengthReport) -> LengthRecord:
    return LengthRecord(model_length=report.model_length, data_length=report.data_length,
                        residual_length=report.residual_length, total=report.total)


def report_document(run) -> RunReport:
    """Summarize a :class:`comsr.compress.CompressionRun`"""
    with debug_mode(False):
        rules = [rule_record(mined, index=index,
                             full_usage=run.encoded.full_usage[index],
                             partial_usage=run.encoded.partial_usage[index])
                 for index, mined in enumerate(run.code)]
        return RunReport(format=REPORT_FORMAT,
                         mode=run.mode.value,
                         minsup=float(run.minsup),
                         minconf=float(run.minconf),
                         max_antecedent=run.max_antecedent,
                         max_consequent=run.max_consequent,
                         cover=run.options.cover.value,
                         partial_cost=run.options.partial_cost.value,
                         initial=length_record(run.initial),
                         final=length_record(run.final),
                         compression_ratio=float(run.ratio),
                         accepted=run.accepted,
                         rejected=run.rejected,
                         mined_rule_count=run.mined_count,
                         initial_rules_used=run.initial_rules_used,
                         loop_seconds=run.loop_seconds,
                         rules=rules)


def _write(document, path):
    path = os.fspath(path)
    with open(path, 'w') as f:
        f.write(document.to_json())
        f.write('\n')
    logger.info("wrote %s", path)
    return os.path.abspath(path)


def _read(cls, path):
    with open(os.fspath(path)) as f:
        return cls.from_json(f.read())


def write_codeset(path, code: CodeSet, database_size: int):
    return _write(codeset_document(code, database_size), path)


def read_codeset(path) -> CodeSet:
    return codeset_from_document(_read(CodeSetDocument, path))


def write_archive(path, enc: EncodedDatabase):
    return _write(archive_document(enc), path)


def read_archive(path) -> EncodedDatabase:
    return encoded_from_document(_read(ArchiveDocument, path))


def write_report(path, run):
    return _write(report_document(run), path)