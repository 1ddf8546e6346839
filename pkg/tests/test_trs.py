"""Parser, formatter, and the structural property checks."""

import pytest

from redarg import (
    App,
    NoGroundConstant,
    NotAConstructorSystem,
    ParseError,
    Trs,
    Var,
    WellFormednessError,
    build_property_report,
    check_completely_defined,
    check_confluence,
    check_constructor_system,
    check_left_linear,
    check_seval_defined,
    critical_pairs,
    designated_constant,
    designated_constants,
    format_term,
    format_trs,
    parse_term,
    parse_trs,
    rules_alpha_equal,
)
from redarg.trs import canonical_rule

NAT_SYSTEM = """\
sort Nat
cons Z : Nat
cons S : Nat -> Nat
fun plus : Nat Nat -> Nat
pragma terminating
rule plus(Z, y) -> y
rule plus(S(x), y) -> S(plus(x, y))
"""


# --- parsing ----------------------------------------------------------------

def test_parse_basic():
    trs = parse_trs(NAT_SYSTEM)
    assert trs.sorts == ("Nat",)
    assert [f.name for f in trs.symbols] == ["Z", "S", "plus"]
    assert [f.name for f in trs.constructors] == ["Z", "S"]
    assert [f.name for f in trs.defined] == ["plus"]
    assert trs.terminating_attested
    assert len(trs.rules) == 2
    assert trs.rules[0].label == "r1"
    assert trs.rules[1].label == "r2"
    assert str(trs.rules[1]) == "plus(S(x), y) -> S(plus(x, y))"


def test_parse_comments_and_trailing_dot():
    trs = parse_trs(
        "# a comment\n"
        "sort N   # end of line\n"
        "cons a : N.\n"
        "fun f : N -> N\n"
        "rule f(x) -> x.\n"
    )
    assert trs.sorts == ("N",)
    assert len(trs.rules) == 1


def test_parse_arrowless_signature():
    # `cons c : A B -> C` and `cons c : A B C` mean the same thing
    a = parse_trs("sort A\nsort B\ncons c : A -> B\n")
    b = parse_trs("sort A\nsort B\ncons c : A B\n")
    assert a.symbol_map["c"].arg_sorts == b.symbol_map["c"].arg_sorts == ("A",)


@pytest.mark.parametrize(
    "text, exc",
    [
        ("bogus directive\n", ParseError),
        ("pragma confluent\n", ParseError),
        ("sort N\nfun f : N -> N\nrule f(x) = x\n", ParseError),
        ("sort N\ncons a : N\nfun f : N -> N\nrule f(a -> a\n", ParseError),
        ("sort 1N\n", ParseError),
        ("sort N\nsort N\n", WellFormednessError),
        ("sort N\ncons a : N\ncons a : N\n", WellFormednessError),
        ("cons a : Missing\n", WellFormednessError),
        ("sort N\nfun f : N -> N\nrule x -> x\n", WellFormednessError),
        ("sort N\ncons a : N\nfun f : N -> N\nrule f(x) -> y\n", WellFormednessError),
        ("sort N\ncons a : N\nrule a -> a\n", WellFormednessError),
        ("sort N\ncons a : N\nfun f : N N -> N\nrule f(x, g(x)) -> x\n",
         WellFormednessError),
        ("sort N\ncons a : N\nfun f : N -> N\nrule f(a, a) -> a\n",
         WellFormednessError),
    ],
)
def test_parse_rejects(text, exc):
    with pytest.raises(exc):
        parse_trs(text)


def test_variable_cannot_take_two_sorts():
    with pytest.raises(WellFormednessError):
        parse_trs(
            "sort A\nsort B\ncons a : A\ncons b : B\n"
            "fun f : A B -> A\n"
            "rule f(x, x) -> x\n"
        )


def test_parse_term_in_signature():
    trs = parse_trs(NAT_SYSTEM)
    t = parse_term("plus(S(Z), y)", trs)
    assert format_term(t) == "plus(S(Z), y)"
    assert vars_sorts(t) == {"y": "Nat"}


def vars_sorts(t):
    from redarg import vars_of

    return {v.name: v.sort for v in vars_of(t)}


def test_parse_term_needs_inferable_sort():
    trs = parse_trs(NAT_SYSTEM)
    with pytest.raises(WellFormednessError):
        parse_term("x", trs)  # bare variable, no expected sort
    assert parse_term("x", trs, sort="Nat") == Var("x", "Nat")


def test_format_round_trip():
    trs = parse_trs(NAT_SYSTEM)
    again = parse_trs(format_trs(trs))
    assert again.sorts == trs.sorts
    assert again.symbols == trs.symbols
    assert again.rules == trs.rules
    assert again.attestations == trs.attestations


def test_fun_without_rules_is_fine():
    # erased specialized programs may be bare constants
    trs = parse_trs("sort N\ncons a : N\nfun k : N\n")
    assert trs.rules_for("k") == ()


# --- structural checks ------------------------------------------------------

def test_left_linear_check(applast, noncs):
    assert check_left_linear(applast) == (True, None)
    bad = parse_trs(
        "sort N\ncons a : N\nfun f : N N -> N\nrule f(x, x) -> x\n"
    )
    ok, witness = check_left_linear(bad)
    assert not ok
    rule, name = witness
    assert name == "x" and rule is bad.rules[0]


def test_constructor_system_check(applast, noncs):
    assert check_constructor_system(applast) == (True, None)
    ok, witness = check_constructor_system(noncs)
    assert not ok
    assert str(witness) == "g(f(b, x)) -> x"


def test_critical_pairs_none_on_disjoint_patterns(applast, bogus):
    assert critical_pairs(applast) == []
    assert critical_pairs(bogus) == []


def test_critical_pairs_overlay(nonconfluent):
    cps = critical_pairs(nonconfluent)
    assert len(cps) == 1
    cp = cps[0]
    assert cp.overlay and not cp.trivial
    assert cp.position == ()
    assert {format_term(cp.left), format_term(cp.right)} == {"Z", "S(Z)"}


def test_critical_pairs_rename_apart():
    # nested overlap: the inner rule's x must not be captured by the
    # outer rule's x
    trs = parse_trs(
        "sort N\ncons a : N\ncons w : N -> N\n"
        "fun f : N -> N\nfun g : N -> N\n"
        "rule f(x) -> a\n"
        "rule g(w(x)) -> g(x)\n"
    )
    # no lhs contains a defined symbol below the root, so no overlaps
    assert critical_pairs(trs) == []


def test_confluence_orthogonal(applast, noncs):
    assert check_confluence(applast) == ("yes-orthogonal", None)
    # noncs is left-linear with no overlaps; orthogonality does not
    # need the constructor discipline
    assert check_confluence(noncs) == ("yes-orthogonal", None)


def test_confluence_no(nonconfluent):
    verdict, witness = check_confluence(nonconfluent)
    assert verdict == "no"
    assert str(witness) in ("<Z, S(Z)>", "<S(Z), Z>")


OVERLAPPING = (
    "sort N\ncons Z : N\ncons S : N -> N\n"
    "fun f : N -> N\n"
    "{pragma}"
    "rule f(S(x)) -> f(x)\n"
    "rule f(y) -> Z\n"
)


def test_confluence_knuth_bendix():
    trs = parse_trs(OVERLAPPING.format(pragma="pragma terminating\n"))
    cps = critical_pairs(trs)
    assert len(cps) == 1 and cps[0].overlay and not cps[0].trivial
    assert check_confluence(trs) == ("yes-knuth-bendix", None)


def test_confluence_unknown_without_attestation():
    trs = parse_trs(OVERLAPPING.format(pragma=""))
    assert check_confluence(trs) == ("unknown", None)


def test_completely_defined(applast, partial):
    assert check_completely_defined(applast) == (True, None, None)
    ok, witness, reason = check_completely_defined(partial)
    assert not ok
    assert format_term(witness) == "g(Z)"
    assert "g is not reducible" in reason


def test_completely_defined_requires_cs(noncs):
    with pytest.raises(NotAConstructorSystem):
        check_completely_defined(noncs)


def test_completely_defined_wildcard_row_terminates():
    # a column of bare variables must not be case-split forever on a
    # recursive constructor
    trs = parse_trs(
        "sort N\nsort L\n"
        "cons Z : N\ncons S : N -> N\ncons nil : L\ncons cons : N L -> L\n"
        "fun g : N L -> N\n"
        "rule g(x, nil) -> x\n"
        "rule g(x, cons(y, ys)) -> y\n"
    )
    assert check_completely_defined(trs) == (True, None, None)


def test_completely_defined_empty_arg_sort():
    # no ground constructor term of sort A exists at all
    trs = parse_trs(
        "sort A\nsort N\ncons Z : N\ncons box : A -> A\n"
        "fun f : A -> N\n"
        "rule f(x) -> Z\n"
    )
    ok, witness, reason = check_completely_defined(trs)
    assert not ok and witness is None
    assert "no ground constructor terms" in reason


def test_seval_defined(applast, partial, bogus):
    assert check_seval_defined(applast) == (True, None)
    ok, reason = check_seval_defined(partial)
    assert not ok and reason == "not completely defined (witness g(Z))"
    no_pragma = parse_trs("sort N\ncons a : N\nfun f : N -> N\nrule f(x) -> a\n")
    assert check_seval_defined(no_pragma) == (False, "termination not attested")


def test_property_report(applast):
    rep = build_property_report(applast)
    assert rep.left_linear and rep.constructor_system
    assert rep.completely_defined and rep.seval_defined
    assert rep.confluent == "yes-orthogonal"
    assert rep.terminating_attested


# --- designated constants ---------------------------------------------------

def test_designated_constant_prefers_nullary(applast):
    assert format_term(designated_constant(applast, "Nat")) == "Z"
    assert format_term(designated_constant(applast, "List")) == "nil"


def test_designated_constant_composite():
    trs = parse_trs(
        "sort E\nsort P\ncons mk : P\ncons pair : P E\n"  # no nullary E
    )
    # smallest ground E term is pair(mk)
    assert format_term(designated_constant(trs, "E")) == "pair(mk)"


def test_designated_constant_missing():
    trs = parse_trs("sort A\ncons box : A -> A\n")
    with pytest.raises(NoGroundConstant):
        designated_constant(trs, "A")
    assert designated_constants(trs) == {}


# --- alpha-equivalence ------------------------------------------------------

def test_canonical_rule_ignores_names():
    a = parse_trs("sort N\ncons c : N\nfun f : N N -> N\nrule f(x, y) -> x\n")
    b = parse_trs("sort N\ncons c : N\nfun f : N N -> N\nrule f(p, q) -> p\n")
    assert canonical_rule(a.rules[0]) == canonical_rule(b.rules[0])
    c = parse_trs("sort N\ncons c : N\nfun f : N N -> N\nrule f(x, y) -> y\n")
    assert canonical_rule(a.rules[0]) != canonical_rule(c.rules[0])


def test_rules_alpha_equal_is_order_insensitive():
    a = parse_trs(NAT_SYSTEM)
    b = parse_trs(NAT_SYSTEM.replace("x", "u").replace("y", "v"))
    assert rules_alpha_equal(a.rules, b.rules)
    assert rules_alpha_equal(a.rules, tuple(reversed(b.rules)))
    assert not rules_alpha_equal(a.rules, a.rules[:1])
