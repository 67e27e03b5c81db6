from fractions import Fraction

import pytest

from ..codec import (ANTECEDENT, CONSEQUENT, FULL, PARTIAL, CodeSet, CodingOptions, CoverPolicy,
                     CoverToken, DecodeError, DuplicateRuleError, EncodedDatabase,
                     EncodedSequence, LengthReport, PartialCost, UsageError, canonical_sort,
                     compress_length, compression_ratio, cover_database, covered_count,
                     data_length, decode, find_embedding, length_report, model_length)
from ..rulemine import MinedRule, RuleStats
from ..seqdb import NotSingleItemError, SequenceDatabase
from .tables import A, B, C, D, E, F, database, mined, rule


def fixed(antecedent, consequent, support_count, database_size=1):
    """A rule with made-up stats, to force a code set order"""
    return MinedRule(rule(antecedent, consequent),
                     RuleStats(support_count, database_size, database_size))


def test_canonical_sort_orders_by_size_support_text():
    longer = fixed({A}, {B, C, D}, 1, 2)
    wider = fixed({A, B}, {C, D}, 1, 2)
    unit = fixed({A}, {B}, 2, 2)
    code = canonical_sort([unit, wider, longer])
    assert [m.rule.text for m in code] == ["1 -> 2,3,4", "1,2 -> 3,4", "1 -> 2"]


def test_canonical_sort_descending_support():
    rules = [fixed({A}, {B}, 1, 4), fixed({A}, {C}, 3, 4), fixed({B}, {C}, 2, 4)]
    code = canonical_sort(rules)
    assert [m.support for m in code] == [Fraction(3, 4), Fraction(1, 2), Fraction(1, 4)]


def test_canonical_sort_h1(h1):
    assert repr(h1) == "CodeSet([1 -> 2, 4 -> 5, 3 -> 6, 7 -> 6])"


def test_code_set_rejects_duplicates():
    with pytest.raises(DuplicateRuleError):
        canonical_sort([fixed({A}, {B}, 1), fixed({A}, {B}, 0)])


def test_code_set_requires_canonical_order():
    with pytest.raises(ValueError):
        CodeSet([fixed({A}, {B}, 1), fixed({A, C}, {B}, 1)])


def test_code_set_lookup(h1):
    assert len(h1) == 4
    assert rule({D}, {E}) in h1
    assert h1[1] in h1
    assert rule({E}, {D}) not in h1
    assert h1.index_of(rule({C}, {F})) == 2
    assert h1.rules == tuple(h1)


def test_with_rule_keeps_order(h1, table_three):
    bigger = h1.with_rule(mined(table_three, {A, B}, {D, E}))
    assert bigger[0].rule == rule({A, B}, {D, E})
    assert len(bigger) == 5
    assert len(h1) == 4
    assert bigger != h1


def test_find_embedding_skips_gaps():
    residual = [(position, item) for position, item in enumerate([A, B, C, D, E, F], 1)]
    assert find_embedding(rule({A, B}, {D, E}), residual) == (1, 2, 4, 5)
    assert find_embedding(rule({D}, {E}), residual[2:]) == (4, 5)


def test_find_embedding_none():
    assert find_embedding(rule({B}, {A}), [(1, A), (2, B)]) is None
    assert find_embedding(rule({A}, {C}), [(1, A), (2, B)]) is None
    assert find_embedding(rule({A}, {B}), []) is None


def test_find_embedding_leftmost_with_repeats():
    # antecedent binds to the first 1, consequent to the first 2 after it
    assert find_embedding(rule({1}, {2}), [(1, 2), (2, 1), (3, 1), (4, 2)]) == (2, 4)
    assert find_embedding(rule({1, 3}, {2}), [(1, 3), (2, 2), (3, 1), (5, 2), (8, 2)]) == (3, 1, 5)


def test_find_embedding_requires_increasing_positions():
    with pytest.raises(ValueError):
        find_embedding(rule({A}, {B}), [(2, A), (1, B)])


def test_cover_table_five(h1, table_three):
    enc = cover_database(h1, table_three)
    seq1, seq2 = enc.sequences
    assert seq1.render() == "<(rule1|1,2), (rule2|4,5), (rule3|3,6)>"
    assert seq2.render() == "<(rule1|1,2), (rule2|3,4), (rule4|5,6)>"
    assert seq1.residual == seq2.residual == ()
    assert enc.full_usage == (2, 2, 1, 1)
    assert enc.partial_usage == (0, 0, 0, 0)
    assert seq1.tokens[2] == CoverToken(2, FULL, (3, 6))


def test_cover_table_six(h2, table_three):
    enc = cover_database(h2, table_three)
    assert [s.render() for s in enc.sequences] == ["<(rule1|1,2,4,5), (rule2|3,6)>",
                                                   "<(rule1|1,2,3,4), (rule3|5,6)>"]


def test_lengths_h1(h1, table_three):
    report = compress_length(h1, table_three)
    assert report == LengthReport(model_length=12, data_length=18, residual_length=0)
    assert report.total == 30
    assert report.usage == (2, 2, 1, 1)


def test_lengths_h2(h2, table_three):
    report = compress_length(h2, table_three)
    assert (report.model_length, report.data_length, report.total) == (11, 16, 27)


def test_empty_code_set(table_three):
    report = compress_length(CodeSet(), table_three)
    assert (report.model_length, report.data_length, report.residual_length) == (0, 0, 12)
    assert model_length(CodeSet()) == 0
    enc = cover_database(CodeSet(), table_three)
    assert data_length(enc, CodeSet()) == 0
    assert compression_ratio(enc, table_three) == 0
    assert decode(enc, CodeSet()) == table_three


def test_leftover_without_eligible_rule():
    db = database([[A, B, C]])
    code = canonical_sort([mined(db, {A}, {B})])
    enc = cover_database(code, db)
    assert enc.sequences[0].tokens == (CoverToken(0, FULL, (1, 2)),)
    assert enc.sequences[0].residual == ((3, C),)
    assert compression_ratio(enc, db) == Fraction(2, 3)
    assert compress_length(code, db).total == 3 + 3 + 1


def test_leftover_partial_consequent():
    db = database([[1, 2, 3]])
    code = canonical_sort([mined(db, {1}, {2}), mined(db, {1}, {3})])
    enc = cover_database(code, db)
    token = enc.sequences[0].tokens[-1]
    assert token == CoverToken(1, PARTIAL, (3,), CONSEQUENT)
    assert token.render() == "(rule2|3|c)"
    assert enc.sequences[0].residual == ()
    assert enc.partial_usage == (0, 1)
    assert compress_length(code, db).total == 6 + 3 + 2
    uniform = CodingOptions(partial_cost=PartialCost.UNIFORM)
    assert compress_length(code, db, uniform).total == 6 + 3 + 3
    assert compression_ratio(enc, db) == 1
    assert decode(enc, code) == db


def test_leftover_partial_antecedent():
    db = database([[1, 2, 3]])
    code = canonical_sort([mined(db, {2}, {3}), mined(db, {1}, {3})])
    enc = cover_database(code, db)
    assert enc.sequences[0].tokens == (CoverToken(0, FULL, (1, 3)),
                                       CoverToken(1, PARTIAL, (2,), ANTECEDENT))
    assert decode(enc, code) == db


def test_leftover_rule_must_occur_in_original_sequence():
    db = database([[1, 3, 2]])
    code = canonical_sort([fixed({1}, {3}, 1), fixed({2}, {1}, 1), fixed({3}, {2}, 0)])
    assert [m.rule.text for m in code] == ["1 -> 3", "2 -> 1", "3 -> 2"]
    enc = cover_database(code, db)
    assert enc.sequences[0].tokens[-1] == CoverToken(2, PARTIAL, (3,), CONSEQUENT)


def test_leftover_pass_needs_exactly_one_item():
    db = database([[1, 2, 3, 4]])
    code = canonical_sort([mined(db, {1}, {2})])
    enc = cover_database(code, db)
    assert enc.sequences[0].residual == ((3, 3), (4, 4))


def test_length_one_sequence_is_never_encoded():
    db = database([[1, 2], [3]])
    code = canonical_sort([mined(db, {1}, {2}), mined(db, {3}, {1})])
    enc = cover_database(code, db)
    assert enc.sequences[1].tokens == ()
    assert compression_ratio(enc, db) == Fraction(2, 3)


@pytest.mark.parametrize('policy,tokens,total', [
    (CoverPolicy.REPEAT, 2, 3 + 6),
    (CoverPolicy.SINGLE, 1, 3 + 3 + 2),
])
def test_cover_policy(policy, tokens, total):
    db = database([[1, 2, 1, 2]])
    code = canonical_sort([mined(db, {1}, {2})])
    options = CodingOptions(cover=policy)
    enc = cover_database(code, db, options)
    assert len(enc.sequences[0].tokens) == tokens
    assert compress_length(code, db, options).total == total
    assert decode(enc, code) == db


def test_cover_requires_single_items(table_one, h1):
    with pytest.raises(NotSingleItemError):
        cover_database(h1, table_one)


def test_length_consistency(h1):
    db = database([[1, 2, 3, 4, 5, 6], [1, 9, 9, 2], [7]])
    enc = cover_database(h1, db)
    report = length_report(enc, h1)
    total_items = sum(len(seq) for seq in db)
    assert report.residual_length == total_items - covered_count(enc)
    assert report.total == model_length(h1) + data_length(enc, h1) + report.residual_length


def test_decode_tables(h1, h2, table_three):
    assert decode(cover_database(h1, table_three), h1) == table_three
    assert decode(cover_database(h2, table_three), h2) == table_three


def _encoding(*tokens, residual=()):
    return EncodedDatabase.from_sequences([EncodedSequence(1, tuple(tokens), tuple(residual))], 4)


@pytest.mark.parametrize('enc,message', [
    (_encoding(CoverToken(0, FULL, (1, 2)), CoverToken(0, FULL, (1, 2))), "covered twice"),
    (_encoding(CoverToken(0, FULL, (1, 3))), "not 1..2"),
    (_encoding(CoverToken(0, FULL, (2, 1))), "does not follow"),
    (_encoding(CoverToken(0, FULL, (1, 2, 3))), "lists 3 positions"),
    (_encoding(CoverToken(0, PARTIAL, (1,))), "no side"),
    (_encoding(CoverToken(0, PARTIAL, (1, 2), ANTECEDENT)), "malformed partial"),
    (_encoding(CoverToken(0, 'half', (1, 2))), "unknown token kind"),
    (_encoding(CoverToken(0, FULL, (1, 2)), residual=[(2, 9)]), "covered twice"),
    (_encoding(), "no itemsets"),
])
def test_decode_errors(h1, enc, message):
    with pytest.raises(DecodeError) as err:
        decode(enc, h1)
    assert message in str(err.value)


def test_decode_unknown_rule(h1):
    sequence = EncodedSequence(1, (CoverToken(7, FULL, (1, 2)),), ())
    with pytest.raises(DecodeError) as err:
        decode(EncodedDatabase((sequence,), (0,) * 8, (0,) * 8), h1)
    assert "unknown rule index 7" in str(err.value)


def test_usage_must_match_tokens(h1, table_three):
    enc = cover_database(h1, table_three)
    tampered = EncodedDatabase(enc.sequences, (2, 2, 1, 0), enc.partial_usage)
    with pytest.raises(UsageError):
        tampered.check_usage()
    with pytest.raises(UsageError):
        data_length(tampered, h1)
    with pytest.raises(UsageError):
        enc.check_usage(code_size=3)
    enc.check_usage(code_size=4)


def test_encoded_sequence_helpers(h1, table_three):
    enc = cover_database(h1, table_three)
    assert enc.sequences[0].covered == 6
    assert covered_count(enc) == 12
    assert enc.usage(0) == 2
    assert enc.sequences[0].render(one_based=False).startswith("<(rule0|1,2)")


def test_compression_ratio(h1, table_three):
    assert compression_ratio(cover_database(h1, table_three), table_three) == 1
    with pytest.raises(ValueError):
        compression_ratio(EncodedDatabase((), (), ()), SequenceDatabase())
