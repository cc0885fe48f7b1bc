import pytest
from hypothesis import given, settings, strategies as st

from wzproof.expr import (Binomial, ExprSemanticError, ExprSyntaxError, Int, Mul, Pow, Sum, Sym, parse,
                          parse_identity, symbols, to_text)

CORPUS = [
    "sum(k, 0, n, binomial(n, k)*a^k*b^(n - k)) = (a + b)^n",
    "sum(k, -n, n, (-1)^k*binomial(2*n, n + k)^3) = factorial(3*n)/factorial(n)^3",
    "sum(k, -n, n, (-1)^k*binomial(2*n, n + k)^3) = product_form",
    "sum(k, 0, n, binomial(n, k)^2) = binomial(2*n, n) + 1",
    "factorial(n)/(factorial(k)*factorial(n - k)) = binomial(n, k)",
    "sum(j, 0, n, sum(k, 0, n, binomial(n, j)*binomial(n, k)/4^n)) = 1",
]


def test_dixon_summand_tree():
    e = parse("(-1)^k * binomial(2*n, n+k)^3")
    assert isinstance(e, Mul)
    assert e.left == Pow(Int(-1), Sym("k"))
    assert isinstance(e.right, Pow) and isinstance(e.right.base, Binomial) and e.right.exp == Int(3)


def test_nonlinear_binomial_argument():
    with pytest.raises(ExprSemanticError) as info:
        parse("binomial(n, k*k)")
    assert info.value.position == 13


@pytest.mark.parametrize("text", CORPUS)
def test_roundtrip(text):
    lhs, rhs = parse_identity(text)
    printed = f"{to_text(lhs)} = {to_text(rhs)}"
    assert parse_identity(printed) == (lhs, rhs)
    assert printed == text


def test_whitespace_is_canonicalized():
    assert to_text(parse("binomial( n,k )  *  2^ n")) == "binomial(n, k)*2^n"
    assert to_text(parse("a-(b-c)")) == "a - (b - c)"
    assert to_text(parse("-x^2")) == "-x^2"


@pytest.mark.parametrize("text,pos", [
    ("sum(k,0,n", 10),
    ("2 +* 3", 4),
    ("(n + 1", 7),
    ("n $ k", 3),
    ("", 1),
])
def test_syntax_errors_have_positions(text, pos):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text)
    assert info.value.position == pos


@pytest.mark.parametrize("text", ["sum(2, 0, n, k)", "sum(k, 0, n*n, k)", "factorial(n/2)"])
def test_semantic_errors(text):
    with pytest.raises(ExprSemanticError):
        parse(text)


def test_sum_binds_its_variable():
    e = parse("sum(k, 0, n, binomial(n, k)*x^k)")
    assert isinstance(e, Sum)
    assert symbols(e) == {"n", "x"}


names = st.sampled_from(["n", "k", "a", "b"])


@st.composite
def exprs(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        if draw(st.booleans()):
            return str(draw(st.integers(-5, 9)))
        return draw(names)
    kind = draw(st.sampled_from(["+", "-", "*", "/", "^", "binom", "fact", "neg"]))
    x = draw(exprs(depth=depth - 1))
    if kind == "^":
        return f"({x})^{draw(st.integers(0, 4))}"
    if kind == "binom":
        return f"binomial({draw(names)} + {draw(st.integers(0, 3))}, {draw(names)})"
    if kind == "fact":
        return f"factorial(2*{draw(names)} - 1)"
    if kind == "neg":
        return f"-({x})"
    y = draw(exprs(depth=depth - 1))
    return f"({x}) {kind} ({y})"


@settings(max_examples=200, deadline=None)
@given(exprs())
def test_roundtrip_property(text):
    e = parse(text)
    assert parse(to_text(e)) == e
    assert to_text(parse(to_text(e))) == to_text(e)
