import math
import random

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kummersum.errors import ArityError, LexError, ParseError, UnknownFunction
from kummersum.expr import (
    MAX_DEPTH,
    BinOp,
    Call,
    Const,
    Neg,
    Var,
    evaluate,
    parse,
    to_text,
    tokenize,
)
from kummersum.series import catalog_lookup, catalog_names, from_expression, term


def kinds(text):
    return [(t.kind, t.text) for t in tokenize(text)]


def test_tokenize_term_expression():
    assert kinds("log(n+1)/n^1.5") == [
        ("ident", "log"), ("lparen", "("), ("ident", "n"), ("op", "+"), ("number", "1"),
        ("rparen", ")"), ("op", "/"), ("ident", "n"), ("op", "^"), ("number", "1.5"),
    ]


def test_tokenize_empty():
    assert tokenize("") == []
    assert tokenize("   \t\n") == []


def test_token_positions_increase():
    toks = tokenize("  pow( n , 2.5e-1 )")
    pos = [t.pos for t in toks]
    assert pos == sorted(pos) and len(set(pos)) == len(pos)
    assert toks[0].pos == 2


@pytest.mark.parametrize("text, pos", [("2 @ n", 2), ("n$", 1), ("#", 0), ("n + é", 4)])
def test_lex_error_position(text, pos):
    with pytest.raises(LexError) as info:
        tokenize(text)
    assert info.value.pos == pos


def test_lex_rejects_oversized_input():
    with pytest.raises(LexError):
        tokenize("n+" * 40000 + "n")


def test_lex_rejects_overflowing_literal():
    with pytest.raises(LexError):
        tokenize("1e999")


def test_right_associative_power():
    e = parse("2^3^2")
    # pow goes through exp(y ln x), so the result is within a few ulps of 512
    assert evaluate(e, 1) == pytest.approx(512, rel=1e-15)
    assert evaluate(e, 1) == evaluate(parse("2^(3^2)"), 1)
    assert evaluate(parse("(2^3)^2"), 1) == pytest.approx(64, rel=1e-15)


@pytest.mark.parametrize(
    "text, n, expected",
    [
        ("n^2", 7, 49),
        ("n*n", 7, 49),
        ("1+2*3", 1, 7),
        ("(1+2)*3", 1, 9),
        ("8/4/2", 1, 1),
        ("10-3-2", 1, 5),
        ("-n^2", 3, -9),
        ("2^-1", 1, 0.5),
        ("--n", 4, 4),
        ("sqrt(n)", 16, 4),
        ("pow(n, 2)", 3, 9),
        ("exp(0)", 1, 1),
        ("log2(n)", 8, 3),
        ("log10(n)", 1000, 3),
    ],
)
def test_evaluate_small_cases(text, n, expected):
    assert evaluate(parse(text), n) == pytest.approx(expected, rel=1e-15, abs=1e-15)


def test_evaluate_against_mpmath():
    mpmath.mp.dps = 30
    # at n=1 the denominator is 1, so this is log 2 (same as term(logA, 1))
    got = evaluate(parse("log(n+1)/(n*sqrt(n))"), 1)
    assert abs(got - float(mpmath.log(2))) < 1e-15
    got = evaluate(parse("log(n+1)/(n*sqrt(n))"), 2)
    assert abs(got - float(mpmath.log(3) / mpmath.mpf(2) ** 1.5)) < 1e-15
    got = evaluate(parse("1/(n*log(n)^2)"), 2)
    want = 1 / (2 * mpmath.log(2) ** 2)
    assert abs(got - float(want)) < 1e-15


def test_loglog_is_composition():
    for n in (3, 10, 1000):
        assert evaluate(parse("loglog(n)"), n) == math.log(math.log(n))


def test_non_finite_values_are_returned():
    assert math.isinf(evaluate(parse("1/(n-1)"), 1))
    assert math.isnan(evaluate(parse("log(0-n)"), 1))
    assert math.isinf(evaluate(parse("exp(n)"), 1000))


@pytest.mark.parametrize("text", ["pow(n,)", "n+", "(n", "n)", "2n", "", "log n", "n,2", "()"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse("pow(n,)")
    assert info.value.pos == 6


def test_unknown_function():
    with pytest.raises(UnknownFunction) as info:
        parse("sin(n)")
    assert info.value.name == "sin"


@pytest.mark.parametrize("text", ["pow(n)", "log(n, 2)", "sqrt()"])
def test_arity(text):
    with pytest.raises(ArityError):
        parse(text)


def test_unknown_variable():
    with pytest.raises(ParseError):
        parse("x+1")


def test_depth_limit():
    ok = "(" * (MAX_DEPTH - 2) + "n" + ")" * (MAX_DEPTH - 2)
    parse(ok)
    with pytest.raises(ParseError):
        parse("(" * 200 + "n" + ")" * 200)
    with pytest.raises(ParseError):
        parse("-" * 200 + "n")


def test_literal_folding_only():
    assert parse("2*3") == Const(6.0)
    assert parse("-2") == Const(-2.0)
    assert parse("n*(2*3)") == BinOp("*", Var(), Const(6.0))
    # (n*2)*3 is not a literal-literal operation
    assert parse("n*2*3") == BinOp("*", BinOp("*", Var(), Const(2.0)), Const(3.0))


@pytest.mark.parametrize("name", ["logA", "logB", "boasC", "loglogD", "invsq", "telescope"])
def test_catalog_round_trip_bitwise(name):
    cat = catalog_lookup(name)
    mine = from_expression(cat.text, cat.n0)
    for n in range(cat.n0, 10**4 + 1):
        assert term(mine, n) == term(cat, n), n


def test_catalog_names_cover_texts():
    for name in catalog_names():
        if name.startswith("geom"):
            continue
        assert parse(catalog_lookup(name).text)


TOKENS = ["n", "1", "2.5", "log", "pow", "sqrt", "loglog", "(", ")", ",", "+", "-", "*", "/", "^", " "]


@settings(max_examples=300, deadline=None)
@given(st.lists(st.sampled_from(TOKENS), max_size=400))
def test_fuzz_parse_terminates(tokens):
    text = "".join(tokens)[:1024]
    try:
        expr = parse(text)
    except ParseError:
        return
    evaluate(expr, 3)


@settings(max_examples=200, deadline=None)
@given(st.binary(max_size=1024))
def test_fuzz_bytes(data):
    text = data.decode("latin-1")
    try:
        parse(text)
    except (ParseError, LexError):
        pass


def random_tree(rng, d=0):
    if d > 5 or rng.random() < 0.25:
        return Var() if rng.random() < 0.5 else Const(float(rng.randint(1, 9)))
    r = rng.random()
    if r < 0.1:
        return Neg(random_tree(rng, d + 1))
    if r < 0.25:
        name = rng.choice(["log", "sqrt", "exp", "pow", "loglog"])
        arity = 2 if name == "pow" else 1
        return Call(name, tuple(random_tree(rng, d + 1) for _ in range(arity)))
    return BinOp(rng.choice("+-*/^"), random_tree(rng, d + 1), random_tree(rng, d + 1))


def same(a, b):
    return a == b or (math.isnan(a) and math.isnan(b))


def test_print_reparse_precedence_oracle():
    rng = random.Random(20240611)
    for _ in range(1000):
        tree = random_tree(rng)
        text = to_text(tree)
        back = parse(text)
        for n in [rng.randint(1, 10**6) for _ in range(10)]:
            a, b = evaluate(tree, n), evaluate(back, n)
            assert same(a, b), (text, n, a, b)
