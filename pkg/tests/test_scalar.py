import gmpy2
import pytest
from hypothesis import given, settings, strategies as st

from conncalc.scalar import (Case, ConfigError, ScalarDomainError, ScalarParseError, defining_residual,
                             fast_context, format_scalar, make_context, parse_scalar, sqrt)


def val(text, ctx):
    return complex(parse_scalar(text, ctx))


@pytest.mark.parametrize("text, expected", [
    ("1+2", 3), ("2*3-4", 2), ("-2^2", -4), ("(-2)^2", 4), ("2^-1", 0.5), ("1/4", 0.25),
    ("sqrt(16)", 4), ("i*i", -1), ("3*i", 3j), ("1.5e1", 15), ("0", 0),
])
def test_grammar_examples(ctx13, text, expected):
    assert val(text, ctx13) == pytest.approx(expected)


def test_generator_values(ctx13, ctx17):
    assert val("lambda^2", ctx13) == pytest.approx((5 + 13 ** 0.5) / 2)
    assert val("beta^2", ctx17) == pytest.approx((5 + 17 ** 0.5) / 2)
    assert defining_residual(ctx13) < 1e-55
    assert defining_residual(ctx17) < 1e-55


def test_table_entry_and_rho(ctx13):
    assert val("-1/(lambda^2-1)", ctx13) == pytest.approx(-0.30277563773199464)
    rho = parse_scalar("(1/2)*(-sqrt(lambda^2-4)+i*sqrt(8-lambda^2))", ctx13)
    with ctx13.workspace():
        assert abs(abs(rho) - 1) < ctx13.tol
        assert abs(rho - ctx13.constants["rho"]) < ctx13.tol
        tau = ctx13.constants["tau"]
        assert abs(tau.conjugate() ** 3 - rho) < ctx13.tol


@pytest.mark.parametrize("lhs, rhs", [
    ("beta^2+1", "2*(beta^2-1)^2/beta^2"),
    ("beta^2-2", "2*beta^2/(beta^2-1)"),
    ("2*beta^2-1", "beta^2*(beta^2-1)/2"),
    ("3*beta^2-1", "(beta^2-1)^2"),
    ("beta^2-4", "2/(beta^2-1)"),
    ("5-beta^2", "2/beta^2"),
    ("beta^2+2", "4*beta^4/(beta^2-1)^2"),
    ("beta^2+3", "(beta^2-1)^2*(beta^4+4)/(2*beta^4)"),
    ("3*beta^2-4", "(beta^2-1)*(beta^4+4)/(2*beta^2)"),
])
def test_beta_identities(ctx17, lhs, rhs):
    with ctx17.workspace():
        assert abs(parse_scalar(lhs, ctx17) - parse_scalar(rhs, ctx17)) < ctx17.tol


def test_field_axioms_random(ctx13):
    import numpy as np
    rng = np.random.default_rng(3)
    zs = [ctx13.scalar(complex(*rng.normal(size=2) * 10.0 ** rng.integers(-3, 4))) for _ in range(1000)]
    with ctx13.workspace():
        for a, b, c in zip(zs, zs[1:] + zs[:1], zs[2:] + zs[:2]):
            m = max(1, abs(a) * abs(b) * abs(c))
            assert abs((a * b) * c - a * (b * c)) < ctx13.tol * m
            assert abs(a * a.conjugate() - abs(a) ** 2) < ctx13.tol * max(1, abs(a) ** 2)


def test_wrong_case_symbol_rejected(ctx13, ctx17):
    with pytest.raises(ScalarParseError):
        parse_scalar("beta", ctx13)
    with pytest.raises(ScalarParseError):
        parse_scalar("lambda+1", ctx17)


@pytest.mark.parametrize("text", ["1+", "(1", "2**3", "sqrt 2", "2^x", "1 2", "", "2^1.5", "2^3^2"])
def test_malformed_input(ctx13, text):
    with pytest.raises(ScalarParseError):
        parse_scalar(text, ctx13)


def test_parse_error_position(ctx13):
    with pytest.raises(ScalarParseError) as e:
        parse_scalar("1+*2", ctx13)
    assert e.value.position == 2


@pytest.mark.parametrize("text", ["sqrt(-1)", "sqrt(lambda^2-5)", "sqrt(i)"])
def test_domain_errors(ctx13, text):
    with pytest.raises(ScalarDomainError):
        parse_scalar(text, ctx13)


def test_sqrt_of_rounding_noise_is_zero(ctx13):
    # lambda^4 - 5 lambda^2 + 3 is zero up to rounding, possibly slightly negative
    assert abs(parse_scalar("sqrt(lambda^4-5*lambda^2+3)", ctx13)) < 1e-25
    with pytest.raises(ScalarDomainError):
        sqrt(-1, ctx13)


def test_context_policy():
    ctx = make_context("sqrt13")
    assert ctx.tol == pytest.approx(1e-40)
    assert make_context("sqrt13", 80).tol == pytest.approx(1e-60)
    with pytest.raises(ConfigError):
        make_context("sqrt13", 20)
    with pytest.raises(ConfigError):
        make_context("sqrt13", 60, 1e-55)
    f = fast_context(Case.SQRT17)
    assert f.fast and f.tol == 1e-9 and f.case is Case.SQRT17
    with pytest.raises(ValueError):
        make_context("sqrt19")


def test_workspace_precision(ctx13):
    with ctx13.workspace():
        assert gmpy2.get_context().precision == ctx13.bits
    assert ctx13.bits >= 60 * 3.32


@settings(max_examples=60, deadline=None)
@given(st.complex_numbers(max_magnitude=1e12, allow_nan=False, allow_infinity=False))
def test_format_round_trip(z):
    ctx = make_context("sqrt13")
    x = ctx.scalar(z)
    back = parse_scalar(format_scalar(x, ctx), ctx)
    with ctx.workspace():
        assert abs(back - x) <= 1e-58 * max(1, abs(x))


@settings(max_examples=40, deadline=None)
@given(st.integers(-50, 50), st.integers(1, 50), st.integers(0, 6))
def test_rational_powers_of_generator(p, q, n):
    ctx = make_context("sqrt13")
    expr = f"({p}/{q})*lambda^{n}"
    lam = parse_scalar("lambda", ctx)
    with ctx.workspace():
        assert abs(parse_scalar(expr, ctx) - gmpy2.mpfr(p) / q * lam ** n) < 1e-50
