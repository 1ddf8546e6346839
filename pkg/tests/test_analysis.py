"""Detection methods: the variable case, the pattern case, and the
fixpoint driver."""

import json
from pathlib import Path

import pytest

from redarg import (
    AnalysisConfig,
    PreconditionUnmet,
    Substitution,
    Var,
    analyze,
    designated_constants,
    fi_triples,
    format_term,
    is_fi_redundant_var,
    parse_term,
    parse_trs,
    pattern_case,
    redundant_positions,
    variable_case,
)
from redarg.analysis import check_triple, minimal_positions, sigma_c, tau_transform

from conftest import CORPUS, load_corpus


# --- redundant positions ----------------------------------------------------

def test_redundant_positions_closure(applast):
    t = parse_term("lastnew(S(x), cons(y, ys), z)", applast)
    known = {"lastnew": frozenset({1})}
    # everything at or below argument 1 of any lastnew node
    assert redundant_positions(t, known) == {(1,), (1, 1)}
    assert redundant_positions(t, {}) == set()


def test_redundant_positions_nested(applast):
    t = parse_term("lastnew(Z, xs, lastnew(Z, nil, z))", applast)
    known = {"lastnew": frozenset({2})}
    assert redundant_positions(t, known) == {(2,), (3, 2)}


# --- per-variable test ------------------------------------------------------

def test_is_fi_redundant_var_under_own_argument(bogus):
    # loop(a, bogus, Z) -> loop(S(a), S(bogus), S(Z)): the second
    # argument's variable occurs only inside argument 2 of loop
    rhs = bogus.rules[0].rhs
    assert is_fi_redundant_var("bogus", rhs, "loop", 2, {})
    assert not is_fi_redundant_var("a", rhs, "loop", 2, {})


def test_is_fi_redundant_var_vacuous(bogus):
    rhs = bogus.rules[1].rhs  # just `a`
    assert is_fi_redundant_var("bogus", rhs, "loop", 2, {})


def test_is_fi_redundant_var_known_positions(applast):
    rhs = parse_term("lastnew(x, xs, z)", applast)
    # without knowledge, x at argument 1 of lastnew blocks (applast, 1)
    assert not is_fi_redundant_var("x", rhs, "applast", 1, {})
    # once (lastnew, 1) is known redundant the occurrence is invisible
    assert is_fi_redundant_var("x", rhs, "applast", 1,
                               {"lastnew": frozenset({1})})


# --- variable case ----------------------------------------------------------

def test_variable_case_bogus(bogus):
    assert variable_case(bogus, "loop", 2)
    assert not variable_case(bogus, "loop", 1)
    assert not variable_case(bogus, "loop", 3)  # argument 3 is a pattern


def test_variable_case_gates(noncs):
    with pytest.raises(PreconditionUnmet) as exc:
        variable_case(noncs, "f", 1)
    assert exc.value.gate == "constructor-system"


# --- triples ----------------------------------------------------------------

def test_fi_triples_lastnew(applast):
    triples = fi_triples(applast, "lastnew", 2)
    assert len(triples) == 1
    tr = triples[0]
    assert str(tr.rule1) == "lastnew(x, nil, z) -> z"
    # only the clashing variables of the second rule are primed
    assert str(tr.rule2) == "lastnew(x', cons(y, ys), z') -> lastnew(y, ys, z')"
    assert dict(tr.sigma.items()) == {
        "x": Var("x'", "Nat"),
        "z": Var("z'", "Nat"),
    }


def test_fi_triples_clash_on_other_argument(applast):
    # deleting argument 3 leaves nil against cons(y, ys): no triple
    assert fi_triples(applast, "lastnew", 3) == []


def test_fi_triples_all_pairs(mutrec2=None):
    trs = load_corpus("mutrec2.trs")
    triples = fi_triples(trs, "f", 1)
    assert len(triples) == 3  # all three rule pairs unify up to arg 1
    pairs = [(t.rule1.label, t.rule2.label) for t in triples]
    assert pairs == [("r1", "r2"), ("r1", "r3"), ("r2", "r3")]


# --- the tau transformation and sigma_C -------------------------------------

def test_tau_transform_identity_on_variable_argument(applast):
    constants = designated_constants(applast)
    rule = applast.rules[2]  # lastnew(x, nil, z) -> z with respect to arg 1
    assert tau_transform(rule.rhs, rule.lhs, "lastnew", 1, constants) is rule.rhs


def test_tau_transform_plugs_dependent_subterm(applast):
    constants = designated_constants(applast)
    lhs = parse_term("lastnew(x, cons(y, ys), z)", applast)
    rhs = parse_term("lastnew(y, ys, z)", applast)
    out = tau_transform(rhs, lhs, "lastnew", 2, constants)
    assert format_term(out) == "lastnew(y, nil, z)"


def test_tau_transform_outermost_only(applast):
    constants = designated_constants(applast)
    lhs = parse_term("lastnew(x, cons(y, ys), z)", applast)
    # nested lastnew: only the outermost dependent argument-2 position
    # is plugged, the inner one disappears with it
    rhs = parse_term("lastnew(y, cons(y, ys), lastnew(x, ys, z))", applast)
    out = tau_transform(rhs, lhs, "lastnew", 2, constants)
    assert format_term(out) == "lastnew(y, nil, lastnew(x, nil, z))"


def test_minimal_positions():
    assert minimal_positions([(1, 2), (1,), (2,), (1, 2, 3)]) == [(1,), (2,)]


def test_sigma_c_frozen_example(applast):
    constants = designated_constants(applast)
    (triple,) = fi_triples(applast, "lastnew", 2)
    sc = sigma_c(triple, constants)
    assert dict(sc.items()) == {
        "x": Var("x'", "Nat"),
        "z": Var("z'", "Nat"),
        "y": parse_term("Z", applast),
        "ys": parse_term("nil", applast),
    }


def test_check_triple_joins(applast):
    constants = designated_constants(applast)
    (triple,) = fi_triples(applast, "lastnew", 2)
    ev = check_triple(applast, triple, constants)
    assert format_term(ev.left) == "z'"
    assert format_term(ev.right) == "lastnew(Z, nil, z')"
    assert ev.joinable is True
    assert format_term(ev.common) == "z'"


# --- pattern case -----------------------------------------------------------

def test_pattern_case_minus(plus_minus):
    verdict, evidence = pattern_case(plus_minus, "minus_pe", 1)
    assert verdict is True
    assert len(evidence) == 1
    # the unifier binds y to the renamed copy y', so the reduct is primed
    assert format_term(evidence[0].common) == "y'"


def test_pattern_case_rejects_visible_variable(applast):
    # (lastnew, 3): z is the result in rule 3, so replacing it shows
    verdict, evidence = pattern_case(applast, "lastnew", 3)
    assert verdict is False
    assert evidence == ()


def test_pattern_case_gates(nonconfluent, partial):
    with pytest.raises(PreconditionUnmet) as exc:
        pattern_case(nonconfluent, "f", 1)
    assert exc.value.gate == "confluent"
    with pytest.raises(PreconditionUnmet) as exc:
        pattern_case(partial, "f", 1)
    assert exc.value.gate == "seval-defined"


def test_pattern_case_fuel_returns_none(plus_minus):
    verdict, _ = pattern_case(plus_minus, "minus_pe", 1, fuel=0)
    assert verdict is None


# --- the fixpoint driver ----------------------------------------------------

EXPECTATIONS = json.loads((CORPUS / "expectations.json").read_text())


@pytest.mark.parametrize(
    "entry", EXPECTATIONS["benchmarks"], ids=lambda e: Path(e["file"]).stem
)
def test_analyze_corpus(entry):
    trs = load_corpus(entry["file"])
    result = analyze(trs)
    found = {k: sorted(v) for k, v in result.redundancy.entries.items() if v}
    assert found == {k: sorted(v) for k, v in entry["expected_redundant"].items()}


def test_analyze_justifications(applast):
    result = analyze(applast)
    j = result.redundancy.justifications
    assert (j[("lastnew", 1)].method, j[("lastnew", 1)].round) == ("variable-case", 1)
    assert (j[("lastnew", 2)].method, j[("lastnew", 2)].round) == ("pattern-case", 2)
    assert (j[("applast", 1)].method, j[("applast", 1)].round) == ("pattern-case", 3)
    assert result.rounds == 4  # three growing rounds plus the fixpoint round
    # the pattern-case justification carries its triple evidence
    assert len(j[("lastnew", 2)].triples) == 1


def test_analyze_needs_knowledge_chain(applast):
    # (applast, 1) is only provable after (lastnew, 1) and (lastnew, 2)
    only_first_round = analyze(applast, AnalysisConfig(max_rounds=1))
    assert ("applast", 1) not in only_first_round.redundancy
    full = analyze(applast)
    assert ("applast", 1) in full.redundancy


def test_analyze_notes_on_negatives(nonconfluent, partial, noncs):
    r1 = analyze(nonconfluent)
    assert {k: sorted(v) for k, v in r1.redundancy.entries.items()} == {"g": [1]}
    assert all(j.method == "variable-case"
               for j in r1.redundancy.justifications.values())
    assert any("confluence = no (critical pair <Z, S(Z)>)" in n for n in r1.notes)

    r2 = analyze(partial)
    assert r2.redundancy.entries == {}
    assert any("not completely defined (witness g(Z))" in n for n in r2.notes)

    r3 = analyze(noncs)
    assert r3.redundancy.entries == {}
    assert any("not a constructor system (rule: g(f(b, x)) -> x)" in n
               for n in r3.notes)


def test_analyze_variable_case_only(bogus):
    result = analyze(bogus, AnalysisConfig(methods=("variable",)))
    assert {k: sorted(v) for k, v in result.redundancy.entries.items()} == {
        "loop": [2]
    }


def test_analyze_pattern_case_only(plus_minus):
    result = analyze(plus_minus, AnalysisConfig(methods=("pattern",)))
    assert {k: sorted(v) for k, v in result.redundancy.entries.items()} == {
        "minus_pe": [1]
    }


def test_analyze_indeterminate_with_tiny_fuel(plus_minus):
    result = analyze(plus_minus, AnalysisConfig(fuel=0))
    assert ("minus_pe", 1) in result.indeterminate
    assert ("minus_pe", 1) not in result.redundancy


def test_analyze_respects_candidate_order_without_changing_result(applast):
    base = analyze(applast).redundancy.entries
    reordered = analyze(
        applast,
        candidate_order=[("applast", 1), ("lastnew", 2), ("lastnew", 1),
                         ("applast", 2), ("lastnew", 3)],
    )
    assert reordered.redundancy.entries == base


def test_redundancy_set_accessors(applast):
    red = analyze(applast).redundancy
    assert red.get("lastnew") == frozenset({1, 2})
    assert red.get("missing") == frozenset()
    assert red.total_indices() == 3
    assert ("applast", 1) in red and ("applast", 2) not in red
