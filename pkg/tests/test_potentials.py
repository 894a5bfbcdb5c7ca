import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radialbc.potentials import (
    Coulomb,
    DomainError,
    FiniteWell,
    Harmonic,
    InverseSquare,
    OriginKind,
    PowerLaw,
    Sum,
    Tabulated,
    UnsupportedExtrapolation,
    classify_origin,
    effective_potential,
    evaluate,
    from_spec,
)


@pytest.mark.parametrize("p, r, expected", [
    (Coulomb(1.0), 2.0, -0.5),
    (InverseSquare(0.25), 0.5, -1.0),
    (Harmonic(1.0, mass=1.0), 3.0, 4.5),
    (FiniteWell(5.0, 1.0), 0.5, -5.0),
    (FiniteWell(5.0, 1.0), 1.5, 0.0),
    (Sum([Coulomb(1.0), Harmonic(1.0)]), 2.0, -0.5 + 2.0),
])
def test_evaluate_examples(p, r, expected):
    assert evaluate(p, r) == pytest.approx(expected, rel=1e-15)


def test_evaluate_is_vectorised():
    r = np.array([0.5, 1.0, 2.0])
    np.testing.assert_allclose(Coulomb(2.0)(r), -2.0 / r)


@pytest.mark.parametrize("r", [0.0, -1.0, np.array([1.0, 0.0])])
def test_nonpositive_radius_is_a_domain_error(r):
    with pytest.raises(DomainError):
        evaluate(Coulomb(1.0), r)


@pytest.mark.parametrize("p, kind, lam", [
    (Coulomb(1.0), OriginKind.REGULAR, 0.0),
    (InverseSquare(0.25), OriginKind.INVERSE_SQUARE, -0.25),
    (Harmonic(1.0), OriginKind.REGULAR, 0.0),
    (FiniteWell(5.0, 1.0), OriginKind.REGULAR, 0.0),
    (InverseSquare(-0.125), OriginKind.INVERSE_SQUARE, 0.125),
    (PowerLaw(1.0, 3.0), OriginKind.UNSUPPORTED, None),
    (PowerLaw(-2.0, 1.5), OriginKind.REGULAR, 0.0),
])
def test_classify_examples(p, kind, lam):
    c = classify_origin(p)
    assert c.kind is kind
    assert c.lam == lam


def test_attraction_flag_follows_sign_of_V0():
    assert classify_origin(InverseSquare(0.25)).attractive
    assert classify_origin(InverseSquare(0.25)).V0 == 0.25
    assert not classify_origin(InverseSquare(-0.25)).attractive
    assert not classify_origin(Coulomb(1.0)).attractive


def test_sum_with_unsupported_member_is_unsupported():
    c = classify_origin(Sum([Coulomb(1.0), PowerLaw(-1.0, 4.0)]))
    assert c.kind is OriginKind.UNSUPPORTED


def _extrapolated_r2V(p):
    # quadratic fit of r^2 V(r) over r = 1e-4 .. 1e-8, read off at r = 0
    r = 10.0 ** -np.arange(4, 9)
    y = r**2 * evaluate(p, r)
    return np.polynomial.polynomial.polyfit(r, y, 2)[0], y


@pytest.mark.parametrize("p", [
    Coulomb(1.0), Coulomb(-3.0), InverseSquare(0.25), InverseSquare(-0.125), Harmonic(2.0),
    FiniteWell(5.0, 1.0), Sum([Coulomb(1.0), InverseSquare(0.1), Harmonic(1.0)]),
])
def test_r2V_converges_to_classified_lambda(p):
    lam = classify_origin(p).lam
    limit, y = _extrapolated_r2V(p)
    if lam == 0:
        assert abs(limit) < 1e-10
    else:
        assert limit == pytest.approx(lam, rel=1e-6)
    # the raw samples approach the limit monotonically
    dev = np.abs(y - lam)
    assert np.all(np.diff(dev) <= 1e-300 + 1e-12 * abs(lam))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-2.0, 2.0, allow_nan=False), min_size=1, max_size=5),
       st.floats(-3.0, 3.0, allow_nan=False))
def test_sum_lambda_is_sum_of_member_lambdas(V0s, alpha):
    parts = [InverseSquare(v) for v in V0s] + [Coulomb(alpha)]
    total = classify_origin(Sum(parts)).lam
    expected = sum(classify_origin(q).lam for q in parts)
    assert total == pytest.approx(expected, abs=1e-12)
    assert (classify_origin(Sum(parts)).kind is OriginKind.REGULAR) == (total == 0.0)


def test_effective_potential_adds_centrifugal_term():
    r = np.array([0.5, 2.0])
    np.testing.assert_allclose(effective_potential(Coulomb(1.0), 1, 0.5, r), 2.0 / r**2 - 1.0 / r)


# ---------------------------------------------------------------- tabulated

def _tab(lam=-0.1):
    r = np.linspace(0.1, 5.0, 50)
    return Tabulated(r, -0.1 / r**2 - 1.0 / r, lam=lam)


def test_tabulated_interpolates_inside_the_samples():
    t = _tab()
    r = np.linspace(0.2, 4.9, 17)
    np.testing.assert_allclose(t(r), -0.1 / r**2 - 1.0 / r, rtol=2e-3)
    np.testing.assert_allclose(t(t.r), t.V, rtol=1e-14)


def test_tabulated_is_monotone_between_monotone_samples():
    t = _tab()
    r = np.linspace(0.1, 5.0, 2001)
    assert np.all(np.diff(t(r)) >= 0)


def test_tabulated_inner_continuation_is_continuous_inverse_square():
    t = _tab(lam=-0.1)
    r0 = t.r[0]
    assert t(r0 * (1 - 1e-12)) == pytest.approx(t.V[0], rel=1e-9)
    r = np.array([1e-3, 1e-2])
    c = t.V[0] + 0.1 / r0**2
    np.testing.assert_allclose(t(r), -0.1 / r**2 + c)
    assert classify_origin(t).lam == -0.1


def test_tabulated_outer_value_is_constant():
    t = _tab()
    assert t(100.0) == t.V[-1]
    assert t.asymptotic_value() == t.V[-1]


def test_tabulated_without_lambda_refuses_inner_queries():
    t = _tab(lam=None)
    t(1.0)
    with pytest.raises(UnsupportedExtrapolation):
        t(0.01)
    assert classify_origin(t).kind is OriginKind.UNSUPPORTED


@pytest.mark.parametrize("r, V", [
    ([0.1, 0.1, 0.2], [1.0, 2.0, 3.0]),
    ([0.2, 0.1], [1.0, 2.0]),
    ([0.0, 0.1], [1.0, 2.0]),
    ([0.1, 0.2], [1.0, math.nan]),
    ([0.1], [1.0]),
])
def test_tabulated_rejects_bad_samples(r, V):
    with pytest.raises(ValueError):
        Tabulated(np.array(r), np.array(V), lam=0.0)


def test_tabulated_from_csv_file(tmp_path):
    path = tmp_path / "pot.csv"
    path.write_text("r,V\n0.5,-2.0\n1.0,-1.0\n2.0,-0.5\n")
    p = from_spec({"model": "tabulated", "file": "pot.csv", "lambda": 0.0}, base_dir=tmp_path)
    assert p(1.0) == -1.0
    assert classify_origin(p).kind is OriginKind.REGULAR


# ---------------------------------------------------------------- grammar

@pytest.mark.parametrize("spec, expected", [
    ({"model": "coulomb", "alpha": 1.0}, Coulomb(1.0)),
    ({"model": "inverse_square", "V0": 0.25}, InverseSquare(0.25)),
    ({"model": "harmonic", "omega": 1.0}, Harmonic(1.0)),
    ({"model": "well", "depth": 5.0, "radius": 1.0}, FiniteWell(5.0, 1.0)),
    ({"model": "power", "g": 1.0, "n": 3}, PowerLaw(1.0, 3.0)),
    ({"model": "sum", "parts": [{"model": "coulomb", "alpha": 1.0}, {"model": "harmonic", "omega": 2.0}]},
     Sum([Coulomb(1.0), Harmonic(2.0)])),
])
def test_from_spec_grammar_round_trips(spec, expected):
    p = from_spec(spec)
    assert p == expected
    assert from_spec(p.to_spec()) == p


@pytest.mark.parametrize("spec", [
    {"model": "coulomb"},
    {"model": "coulomb", "alpha": 1.0, "beta": 2.0},
    {"model": "yukawa", "g": 1.0},
    {"alpha": 1.0},
    {"model": "tabulated", "lambda": 0.0},
])
def test_from_spec_rejects_bad_specs(spec):
    with pytest.raises(ValueError):
        from_spec(spec)
