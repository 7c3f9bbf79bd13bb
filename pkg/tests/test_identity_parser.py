"""
HeckMort - Identity language tests
"""

from fractions import Fraction

import numpy as np
import pytest

from engine_errors import ParseError
from identity_parser import (
    SIGNATURES,
    BinaryOp,
    Call,
    Equation,
    Monomial,
    Neg,
    Number,
    Power,
    format_monomial,
    parse,
    parse_expression,
    parse_file,
    parse_monomial,
    to_source,
    tokenize,
    walk,
)


def test_theta_quotient_expression():
    node = parse_expression("J(1,2)*Jbar(3,8)/Jm(2)")
    expected = BinaryOp(
        "/",
        BinaryOp("*", Call("J", ((1, 2),)), Call("Jbar", ((3, 8),))),
        Call("Jm", ((2,),)),
    )
    assert node == expected


def test_literals():
    assert parse_expression("-q^2") == Monomial(Fraction(-1), Fraction(2))
    assert parse_expression("q^1/2") == Monomial(Fraction(1), Fraction(1, 2))
    assert parse_expression("3/4*q^(-2)") == Monomial(Fraction(3, 4), Fraction(-2))
    assert parse_expression("q") == Monomial(Fraction(1), Fraction(1))
    assert parse_expression("5/3") == Number(Fraction(5, 3))


def test_unary_minus_and_powers():
    assert parse_expression("-J(1,2)") == Neg(Call("J", ((1, 2),)))
    assert parse_expression("Jm(1)^-3") == Power(Call("Jm", ((1,),)), -3)
    node = parse_expression("1 - q*Jm(1)")
    q_times_eta = BinaryOp("*", Monomial(Fraction(1), Fraction(1)), Call("Jm", ((1,),)))
    assert node == BinaryOp("-", Number(Fraction(1)), q_times_eta)


def test_call_argument_groups():
    node = parse_expression("f(1,2,1; q, -q^1/3) + builtin(f0_lhs) + AL(q^1/2; q; -1)")
    calls = [n for n in walk(node) if isinstance(n, Call)]
    assert [c.name for c in calls] == ["f", "builtin", "AL"]
    assert calls[0].groups[1] == (
        Monomial(Fraction(1), Fraction(1)),
        Monomial(Fraction(-1), Fraction(1, 3)),
    )
    assert calls[2].groups[2] == (Monomial(Fraction(-1), Fraction(0)),)


def test_labelled_equation():
    node = parse("andrews: builtin(andrews114_lhs) == builtin(andrews114_rhs)")
    assert isinstance(node, Equation)
    assert node.label == "andrews"
    assert node.rhs == Call("builtin", (("andrews114_rhs",),))


def test_positions_are_recorded():
    node = parse_expression("1 +\n  J(1,2)")
    assert node.right.position == (2, 3)
    tokens = tokenize("J(1, 2)")
    assert tokens[-1].kind == "end"


@pytest.mark.parametrize(
    "source, position",
    [
        ("J(2,)", (1, 5)),
        ("J(1,2,3)", (1, 6)),
        ("Jm(1", (1, 5)),
        ("foo(1)", (1, 1)),
        ("q^1/2 $ 3", (1, 7)),
        ("label: J(1,2)", (1, 14)),
        ("Jm(1)^1/2", (1, 7)),
    ],
)
def test_parse_errors_carry_positions(source, position):
    with pytest.raises(ParseError) as info:
        parse(source)
    assert info.value.position == position
    assert info.value.exit_code == 2


def test_parse_error_lists_expected_tokens():
    with pytest.raises(ParseError) as info:
        parse("J(2,)")
    assert "number" in info.value.expected
    assert "line 1, column 5" in str(info.value)


def test_monomial_arguments():
    assert parse_monomial("-q^(1/2)") == Monomial(Fraction(-1), Fraction(1, 2))
    assert parse_monomial("7") == Monomial(Fraction(7), Fraction(0))
    with pytest.raises(ParseError):
        parse_monomial("0*q^2")
    with pytest.raises(ParseError):
        parse_monomial("q q")
    assert format_monomial(Monomial(Fraction(-2, 3), Fraction(5))) == "-2/3*q^(5)"


def test_identity_file():
    text = "# header\n\nfirst: J(1,2) == J(1,2)  # trailing\n   \nJm(1) == Jm(1)\n"
    equations = parse_file(text)
    assert [e.label for e in equations] == ["first", None]
    assert equations[1].position == (5, 1)
    with pytest.raises(ParseError) as info:
        parse_file("J(1,2) == J(1,2)\nJm(1)\n")
    assert info.value.position[0] == 2


def _random_rational(rng, allow_zero=True):
    num = int(rng.integers(-6, 7))
    if num == 0 and not allow_zero:
        num = 1
    return Fraction(num, int(rng.integers(1, 5)))


def _random_monomial(rng):
    return Monomial(_random_rational(rng, allow_zero=False), _random_rational(rng))


def _random_call(rng):
    name = str(rng.choice(sorted(SIGNATURES)))
    groups = []
    for kinds in SIGNATURES[name]:
        args = []
        for kind in kinds:
            if kind == "int":
                args.append(int(rng.integers(-4, 9)))
            elif kind == "name":
                args.append(str(rng.choice(["f0_lhs", "slater39_rhs", "g_neg_q_rhs"])))
            else:
                args.append(_random_monomial(rng))
        groups.append(tuple(args))
    return Call(name, tuple(groups))


def _random_ast(rng, depth):
    if depth == 0:
        leaf = int(rng.integers(3))
        if leaf == 0:
            return Number(_random_rational(rng))
        if leaf == 1:
            return _random_monomial(rng)
        return _random_call(rng)
    choice = int(rng.integers(3))
    if choice == 0:
        return Neg(_random_ast(rng, depth - 1))
    if choice == 1:
        return Power(_random_ast(rng, depth - 1), int(rng.integers(-3, 4)))
    op = str(rng.choice(["+", "-", "*", "/"]))
    left = _random_ast(rng, depth - 1)
    return BinaryOp(op, left, _random_ast(rng, int(rng.integers(depth))))


def test_printer_output_parses_back_to_the_same_tree():
    rng = np.random.default_rng(7)
    for _ in range(200):
        tree = _random_ast(rng, int(rng.integers(0, 5)))
        assert parse_expression(to_source(tree)) == tree
    equation = Equation(_random_ast(rng, 2), _random_ast(rng, 2), "named")
    assert parse(to_source(equation)) == equation
