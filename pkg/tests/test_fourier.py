import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import direct_sum, random_series
from fqsp.fourier import (
    FourierSeries,
    coefficients_by_quadrature,
    evaluate,
    l1_norm,
    sup_error_on_grid,
    sup_norm,
)


def test_constant_series_evaluates_everywhere():
    s = FourierSeries(0, [0.3 - 0.2j])
    assert evaluate(s, 1.7) == pytest.approx(0.3 - 0.2j)
    assert np.allclose(evaluate(s, np.linspace(-3, 3, 7)), 0.3 - 0.2j)


def test_cosine_from_two_harmonics():
    s = FourierSeries.from_dict({-1: 0.5, 1: 0.5})
    x = np.linspace(-np.pi, np.pi, 101)
    assert np.allclose(evaluate(s, x), np.cos(x), atol=1e-15)


def test_rejects_wrong_length():
    with pytest.raises(ValueError):
        FourierSeries(2, np.zeros(4))
    with pytest.raises(ValueError):
        FourierSeries(-1, np.zeros(1))
    with pytest.raises(ValueError):
        FourierSeries(0, [np.nan])


def test_coefficients_are_read_only():
    s = FourierSeries(1, [1, 2, 3])
    with pytest.raises(ValueError):
        s.coefficients[0] = 5


def test_evaluate_matches_direct_sum(rng):
    for h in (0, 1, 5, 40):
        c = rng.normal(size=2 * h + 1) + 1j * rng.normal(size=2 * h + 1)
        x = rng.uniform(-4, 4, size=50)
        assert np.allclose(evaluate(FourierSeries(h, c), x), direct_sum(c, x), atol=1e-12)


def test_scalar_and_array_shapes():
    s = FourierSeries(1, [1, 0, 1])
    assert isinstance(evaluate(s, 0.1), complex)
    assert evaluate(s, np.zeros((3, 2))).shape == (3, 2)


def test_quadrature_recovers_trig_polynomial(rng):
    c = rng.normal(size=9) + 1j * rng.normal(size=9)
    s = FourierSeries(4, c)
    got = coefficients_by_quadrature(s, 4)
    assert np.allclose(got.coefficients, c, atol=1e-14)
    # asking for more harmonics pads with zeros
    wider = coefficients_by_quadrature(s, 6)
    assert np.allclose(wider.coefficients[2:-2], c, atol=1e-14)
    assert np.allclose(wider.coefficients[[0, 1, -2, -1]], 0, atol=1e-14)


def test_quadrature_of_exponential_of_cos():
    # exp(cos x) has coefficients I_m(1) (modified Bessel)
    from scipy.special import iv

    s = coefficients_by_quadrature(lambda x: np.exp(np.cos(x)), 6, 64)
    assert np.allclose(s.coefficients.real, iv(np.arange(-6, 7), 1.0), atol=1e-14)
    assert np.allclose(s.coefficients.imag, 0, atol=1e-14)


def test_quadrature_rejects_aliasing():
    with pytest.raises(ValueError):
        coefficients_by_quadrature(np.cos, 4, 16)


def test_sup_error_report_locates_maximum():
    s = FourierSeries.from_dict({1: 1.0})
    rep = sup_error_on_grid(s, lambda x: np.zeros_like(x))
    assert rep.max_abs_error == pytest.approx(1.0)
    assert rep.grid_points == 1001
    rep = sup_error_on_grid(FourierSeries(0, [0.0]), lambda x: x)
    assert rep.max_abs_error == pytest.approx(math.pi)
    assert abs(rep.argmax_x) == pytest.approx(math.pi)


def test_sup_norm_of_known_series():
    assert sup_norm(FourierSeries.from_dict({-1: 0.5, 1: 0.5})) == pytest.approx(1.0, abs=1e-12)
    # |0.6 + 0.4 e^{ix}| peaks at 1 for x = 0
    assert sup_norm(FourierSeries.from_dict({0: 0.6, 1: 0.4})) == pytest.approx(1.0, abs=1e-12)


def test_sup_norm_refinement_beats_coarse_grid(rng):
    s = random_series(rng, 20, peak=1.0)
    x = np.linspace(-np.pi, np.pi, 200001)
    dense = float(np.max(np.abs(direct_sum(s.coefficients, x))))
    assert sup_norm(s) >= dense - 1e-12


def test_conj_and_arithmetic(rng):
    a = random_series(rng, 3)
    b = random_series(rng, 1)
    x = rng.uniform(-3, 3, 20)
    assert np.allclose(a.conj()(x), np.conj(a(x)))
    assert np.allclose((a + b)(x), a(x) + b(x))
    assert np.allclose((a - b)(x), a(x) - b(x))
    assert np.allclose((2j * a)(x), 2j * a(x))


def test_truncate_and_pad():
    s = FourierSeries(2, [1, 2, 3, 4, 5])
    assert list(s.truncated(1).coefficients) == [2, 3, 4]
    assert s.padded(3).coefficient(3) == 0
    assert s.coefficient(-2) == 1
    assert s.coefficient(7) == 0
    assert s.q == 4
    assert FourierSeries(2, [0, 0, 1, 1e-20, 0]).effective_half_order(1e-15) == 0


def test_json_round_trip(tmp_path, rng):
    s = random_series(rng, 5)
    path = tmp_path / "s.json"
    s.save(path)
    data = json.loads(path.read_text())
    assert data["half_order"] == 5 and len(data["coefficients"]) == 11
    back = FourierSeries.load(path)
    assert back == s


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
             min_size=1, max_size=15).filter(lambda c: len(c) % 2 == 1),
    st.floats(-10, 10),
)
def test_sup_bounded_by_l1_and_pointwise(coeffs, x):
    s = FourierSeries.from_coefficients(coeffs)
    assert abs(evaluate(s, x)) <= l1_norm(s) + 1e-9
    assert sup_norm(s) <= l1_norm(s) + 1e-9
    assert abs(evaluate(s, x) - evaluate(s, x + 2 * math.pi)) <= 1e-9 * (1 + l1_norm(s))
