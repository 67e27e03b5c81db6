import pytest

from ..archive import CodeSetDocument, EncodedSequenceRecord, RuleRecord, TokenRecord
from ..decorator import schemaclass
from ..schemabase import SchemaBase


@schemaclass
class Pairs(SchemaBase):
    _schema = {
        'type': 'object',
        'properties': {
            'pair': {'type': 'array', 'items': [{'type': 'integer'}, {'type': 'integer'}]},
            'pairs': {'type': 'array',
                      'items': {'type': 'array',
                                'items': [{'type': 'integer'}, {'type': 'string'}]}},
            'label': {'type': ['string', 'null']},
        },
    }


@schemaclass(docstring=False)
class Quiet(SchemaBase):
    _schema = {'type': 'object', 'properties': {'x': {'type': 'integer'}}}


@schemaclass
class Documented(SchemaBase):
    """Written by hand"""
    _schema = {'type': 'object', 'properties': {'x': {'type': 'integer'}}}


def attributes(cls):
    lines = cls.__doc__.splitlines()
    return lines[lines.index('----------') + 1:]


def test_tuple_items():
    assert attributes(Pairs) == [
        "label : anyOf(string, null)",
        "pair : Tuple(integer, integer)",
        "pairs : List(Tuple(integer, string))",
    ]
    pairs = Pairs(pair=[1, 2], pairs=[[3, 'c']])
    assert pairs.to_dict() == {'pair': [1, 2], 'pairs': [[3, 'c']]}


def test_encoded_sequence_docstring():
    assert EncodedSequenceRecord.__doc__.splitlines()[0] == "EncodedSequenceRecord document wrapper"
    assert attributes(EncodedSequenceRecord) == [
        "residual : List(Tuple(integer, integer))",
        "    Uncovered (position, item) pairs.",
        "sid : integer",
        "tokens : List(:class:`Token`)",
    ]


def test_required_properties_come_first():
    assert RuleRecord.__doc__.splitlines()[:3] == [
        "RuleRecord document wrapper",
        "",
        "A rule with the exact counts behind its support and confidence.",
    ]
    assert attributes(RuleRecord) == [
        "antecedent : :class:`ItemList`",
        "antecedent_count : integer",
        "consequent : :class:`ItemList`",
        "support_count : integer",
        "confidence : number",
        "full_usage : integer",
        "index : integer",
        "    Position in the canonical code set order.",
        "partial_usage : integer",
        "support : number",
    ]


def test_enum_and_const_properties():
    assert attributes(TokenRecord) == [
        "kind : enum('full', 'partial')",
        "positions : List(integer)",
        "rule_index : integer",
        "partial_side : enum('antecedent', 'consequent')",
    ]
    assert attributes(CodeSetDocument) == [
        "database_size : integer",
        "    Sequence count the stats refer to.",
        "format : const('comsr-codeset')",
        "rules : List(:class:`Rule`)",
    ]


def test_property_names():
    assert TokenRecord._property_names == ('rule_index', 'kind', 'positions', 'partial_side')
    assert Pairs._property_names == ('pair', 'pairs', 'label')

    token = TokenRecord(rule_index=1, kind='full', positions=[1, 2])
    token.rule_index = 0
    assert token.to_dict()['rule_index'] == 0


def test_decorator_options():
    assert Quiet.__doc__ is None
    assert Quiet._property_names == ('x',)
    assert Documented.__doc__ == "Written by hand"


def test_decorator_warns_on_other_classes():
    class Plain(object):
        _schema = {'type': 'object'}
        _rootschema = None

    with pytest.warns(UserWarning):
        schemaclass(Plain)


def test_decorator_positional_arguments():
    with pytest.raises(ValueError):
        schemaclass(Quiet, Documented)
