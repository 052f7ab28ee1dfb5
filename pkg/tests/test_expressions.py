import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from higher_holonomy import expressions as xp
from higher_holonomy.errors import ExpressionError


def ev(text, **env):
    return xp.parse(text).evaluate(env)


class TestParsing:
    def test_precedence(self):
        assert ev("1 + 2*3") == 7
        assert ev("(1 + 2)*3") == 9
        assert ev("2*x1^2", x1=3.0) == 18.0
        assert ev("-x1^2", x1=2.0) == -4.0

    def test_division_and_unary(self):
        assert ev("6/3/2") == 1.0
        assert ev("--2") == 2
        assert ev("3 - -2") == 5

    def test_functions_and_constants(self):
        assert abs(ev("sin(pi/2)") - 1.0) < 1e-15
        assert abs(ev("exp(0)") - 1.0) < 1e-15
        assert ev("i*i") == -1.0 + 0j

    def test_negative_powers(self):
        assert ev("x1^-2", x1=2.0) == 0.25

    def test_scientific_notation(self):
        assert ev("1e-3 + 2.5e2") == pytest.approx(250.001)

    def test_rejects_garbage(self):
        for bad in ("1 +", "foo(2)", "x1^t", "(1", "2 @ 3", "sin 2", "x1 x2"):
            with pytest.raises(ExpressionError):
                xp.parse(bad)

    def test_unbound_variable(self):
        with pytest.raises(ExpressionError):
            ev("x1 + x2", x1=1.0)

    def test_free_vars(self):
        assert xp.parse("sin(x1)*t + z").free_vars() == {"x1", "t", "z"}


class TestEvaluation:
    def test_broadcasts_over_arrays(self):
        t = np.linspace(0, 1, 7)
        out = ev("t^2 + 1", t=t)
        assert np.allclose(out, t**2 + 1)

    def test_complex_arrays(self):
        x = np.array([0.0, 0.5])
        out = ev("i*(1 + x1)", x1=x)
        assert np.allclose(out, 1j * (1 + x))


class TestDifferentiation:
    CASES = [
        ("x1^3", "x1", lambda x: 3 * x**2),
        ("sin(2*x1)", "x1", lambda x: 2 * np.cos(2 * x)),
        ("exp(x1^2)", "x1", lambda x: 2 * x * np.exp(x**2)),
        ("cos(x1)/x1", "x1", lambda x: (-np.sin(x) * x - np.cos(x)) / x**2),
        ("x1*sin(x1)", "x1", lambda x: np.sin(x) + x * np.cos(x)),
    ]

    @pytest.mark.parametrize("text,var,deriv", CASES)
    def test_symbolic_matches_closed_form(self, text, var, deriv):
        d = xp.derivative(xp.parse(text), var)
        for x in (0.3, 0.9, 1.7):
            assert d.evaluate({var: x}) == pytest.approx(deriv(x), rel=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(min_value=0.1, max_value=2.0))
    def test_derivative_matches_finite_difference(self, x):
        e = xp.parse("sin(x1)*exp(0.3*x1) + x1^3/(1 + x1^2)")
        d = xp.derivative(e, "x1")
        h = 1e-6
        fd = (e.evaluate({"x1": x + h}) - e.evaluate({"x1": x - h})) / (2 * h)
        assert d.evaluate({"x1": x}) == pytest.approx(fd, rel=1e-7, abs=1e-8)

    def test_other_variable_is_constant(self):
        d = xp.derivative(xp.parse("x1*x2"), "x2")
        assert d.evaluate({"x1": 4.0, "x2": 0.0}) == 4.0

    def test_simplify_folds_constants(self):
        e = xp.simplify(xp.parse("0*x1 + 1*(2 + 3)"))
        assert isinstance(e, xp.Num) and e.value == 5
