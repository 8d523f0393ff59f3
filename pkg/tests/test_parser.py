"""Grammar coverage and error reporting."""

import pytest

from vjp import expr as E
from vjp.errors import ExprSyntaxError, JetOrderExceededError, UnknownCoordinateError
from vjp.jetspace import JetSpaceDescriptor


@pytest.fixture
def sp():
    return JetSpaceDescriptor(["t"], ["u"], 2)


def test_jet_brace_and_bare_suffix(sp):
    assert (E.parse("u_{tt}", sp) - E.parse("u_{t t}", sp)).is_zero()
    assert (E.parse("u_t", sp) - E.parse("u_{t}", sp)).is_zero()


def test_spec_example_symbols(sp):
    e = E.parse("u_{tt} + u*u_t", sp)
    orders = sorted(s.jet for s in e.free_symbols())
    assert orders == [(), (1,), (1, 1)]


def test_multichar_base_names():
    sp = JetSpaceDescriptor(["tau", "x"], ["phi"], 2)
    e = E.parse("phi_{tau x} - phi_{x tau}", sp)
    assert e.is_zero()
    e2 = E.parse("phi_taux", sp)  # greedy split: tau then x
    assert len(e2.free_symbols()) == 1


def test_homotopy_parameter(sp):
    e = E.parse("@t^2*u", sp)
    assert any(s.name == "@t" for s in e.free_symbols())


def test_integer_exponents_only(sp):
    with pytest.raises(ExprSyntaxError):
        E.parse("u^u", sp)
    assert (E.parse("u^-1*u", sp) - E.parse("1", sp)).is_zero()
    assert (E.parse("u^(-2)*u^2", sp) - E.parse("1", sp)).is_zero()


def test_no_decimal_literals(sp):
    with pytest.raises(ExprSyntaxError):
        E.parse("0.5*u", sp)


def test_syntax_error_position(sp):
    with pytest.raises(ExprSyntaxError) as err:
        E.parse("u + (u_t", sp)
    assert err.value.position is not None


def test_unknown_coordinate(sp):
    with pytest.raises(UnknownCoordinateError):
        E.parse("w + u", sp)
    with pytest.raises(UnknownCoordinateError):
        E.parse("u_{z}", sp)


def test_jet_order_cap(sp):
    with pytest.raises(JetOrderExceededError):
        E.parse("u_{ttt}", sp)  # declared order 2
    # but allowed when the caller raises the bound (source forms on J_2r)
    e = E.parse("u_{ttt}", sp, max_order=3)
    assert not e.is_zero()


def test_constants():
    sp = JetSpaceDescriptor(["t"], ["u"], 1)
    g = E.from_fraction(2)
    e = E.parse("g*u", sp, constants={"g": g})
    assert (e - E.parse("2*u", sp)).is_zero()
    with pytest.raises(UnknownCoordinateError):
        E.parse("h*u", sp)


def test_function_calls(sp):
    e = E.parse("sin(cos(u) + exp(t))", sp)
    assert not e.is_zero()
    with pytest.raises(ExprSyntaxError):
        E.parse("sin u", sp)
