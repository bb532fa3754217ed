import math

import numpy as np
import pytest
from scipy.special import erf

from boussinesq_lab.continuum import (
    ClosedFormSpectrum,
    ContinuumInit,
    DecayCase,
    adaptive_quadrature,
    check_hypotheses,
    closed_form_norm,
    decay_report,
    divergence_free_pair,
    graded_breaks,
    norm_by_quadrature,
    predicted_terms,
)
from boussinesq_lab.errors import HypothesisError, InvalidInputError


class TestSpectra:
    def test_gaussian_l2_norm(self):
        assert closed_form_norm(ClosedFormSpectrum()) == pytest.approx(math.sqrt(math.pi / 2))

    def test_amplitude_and_width_scaling(self):
        base = closed_form_norm(ClosedFormSpectrum(kind="xi1sq_weighted_gaussian"))
        scaled = closed_form_norm(ClosedFormSpectrum(kind="xi1sq_weighted_gaussian", amplitude=-3.0, width=2.0))
        # weight of degree 2 in a plane integral: width^(2 + 1)
        assert scaled == pytest.approx(3.0 * 2.0**3 * base)

    def test_norm_matches_quadrature_of_the_weight(self):
        spec = ClosedFormSpectrum(kind="xi1xi2_weighted_gaussian")
        breaks = np.linspace(-6.0, 6.0, 13)
        result = adaptive_quadrature(
            lambda x, y: (x**2 + y**2) * spec(x, y) ** 2, breaks, breaks, rtol=1e-10
        )
        assert math.sqrt(result.integral) == pytest.approx(closed_form_norm(spec, s=1.0), rel=1e-8)

    def test_anisotropic_norm_finiteness(self):
        assert math.isinf(closed_form_norm(ClosedFormSpectrum(), sigma=2.0))
        assert not ClosedFormSpectrum().supports(0.0, 2.0)
        assert ClosedFormSpectrum(kind="xi1sq_weighted_gaussian").supports(0.0, 2.0)
        assert closed_form_norm(ClosedFormSpectrum(amplitude=0.0)) == 0.0
        with pytest.raises(InvalidInputError):
            closed_form_norm(ClosedFormSpectrum(), axis=3)

    def test_divergence_free_pair(self):
        pair = divergence_free_pair(width=1.5)
        pair.check_divergence_free()
        with pytest.raises(InvalidInputError):
            ContinuumInit(u2=ClosedFormSpectrum(kind="xi1sq_weighted_gaussian")).check_divergence_free()


class TestQuadrature:
    def test_polynomial_is_exact(self):
        result = adaptive_quadrature(lambda x, y: x**2 * y, [0.0, 1.0], [0.0, 1.0])
        assert result.integral == pytest.approx(1.0 / 6.0, rel=1e-13)
        assert result.converged
        assert result.panels == 1

    def test_gaussian_box(self):
        result = adaptive_quadrature(lambda x, y: np.exp(-(x**2) - y**2), graded_breaks(5.0), graded_breaks(5.0), rtol=1e-10)
        assert result.integral == pytest.approx((math.sqrt(math.pi) / 2 * erf(5.0)) ** 2, rel=1e-9)

    def test_panel_budget(self):
        result = adaptive_quadrature(
            lambda x, y: np.cos(80.0 * x) * np.cos(80.0 * y), [0.0, 1.0], [0.0, 1.0], rtol=1e-12, max_panels=20
        )
        assert not result.converged

    def test_breakpoint_validation(self):
        with pytest.raises(InvalidInputError):
            adaptive_quadrature(lambda x, y: x, [0.0], [0.0, 1.0])
        with pytest.raises(InvalidInputError):
            adaptive_quadrature(lambda x, y: x, [1.0, 0.0], [0.0, 1.0])

    def test_graded_breaks(self):
        b = graded_breaks(2.0, finest=1e-3, count=4)
        assert b[0] == 0.0 and b[-1] == pytest.approx(2.0)
        assert b[1] == pytest.approx(2e-3)
        assert b.size == 5

    def test_solution_norm_starts_at_the_data(self, params):
        theta0 = ClosedFormSpectrum()
        result = norm_by_quadrature("theta", ContinuumInit(theta=theta0), 0.0, 1e-9, params, rtol=1e-9)
        assert result.value == pytest.approx(closed_form_norm(theta0), rel=1e-6)

    def test_norm_decreases_in_time(self, params):
        init = ContinuumInit(theta=ClosedFormSpectrum(kind="xi1sq_weighted_gaussian"))
        values = [norm_by_quadrature("theta", init, 0.0, t, params, rtol=1e-6).value for t in (1.0, 10.0)]
        assert values[1] < values[0]

    def test_missing_data_gives_zero(self, params):
        init = ContinuumInit(theta=ClosedFormSpectrum())
        result = norm_by_quadrature("u1", ContinuumInit(), 0.0, 1.0, params)
        assert result.integral == 0.0 and result.converged
        with pytest.raises(InvalidInputError):
            norm_by_quadrature("omega", init, 0.0, 1.0, params)
        with pytest.raises(InvalidInputError):
            norm_by_quadrature("theta", init, 0.0, -1.0, params)
        with pytest.raises(InvalidInputError):
            norm_by_quadrature("theta", init, -1.0, 1.0, params)


class TestEnvelopes:
    def test_predicted_exponents(self):
        theta = predicted_terms("theta", 0.0, 2.0)
        assert [t.exponent for t in theta] == [0.0, -1.0, -1.0, -1.0]
        assert [t.source for t in theta] == ["u2", "u2", "theta", "theta"]
        assert [t.exponent for t in predicted_terms("u2", 1.0, 2.0)] == [-1.5, -1.0, -0.5, -2.0]
        with pytest.raises(InvalidInputError):
            predicted_terms("omega", 0.0, 2.0)

    def test_hypotheses(self):
        terms = check_hypotheses(DecayCase())
        assert {t.source for t in terms} == {"theta"}
        with pytest.raises(HypothesisError):
            check_hypotheses(DecayCase(s=0.5, sigma=1.0))
        with pytest.raises(HypothesisError):
            check_hypotheses(DecayCase(init=ContinuumInit(theta=ClosedFormSpectrum())))

    def test_report_envelope_holds_on_a_short_window(self, params):
        times = np.geomspace(10.0, 80.0, 4)
        report = decay_report(DecayCase(), times, params, rtol=1e-5)
        assert report.converged
        assert report.holds
        assert report.predicted_exponent == -1.0
        assert report.dominant_exponent == -1.0
        assert math.isnan(report.slope)  # too few samples to fit
        assert np.all(np.diff(report.measured) < 0)
        rows = report.rows()
        assert len(rows) == 4
        assert rows[0]["case"] == "theta-xi1sq"
        assert report.flags == []

    def test_report_input_checks(self, params):
        with pytest.raises(InvalidInputError):
            decay_report(DecayCase(), [0.0, 1.0], params)
        with pytest.raises(InvalidInputError):
            decay_report(DecayCase(), [2.0, 1.0], params)
        empty = DecayCase(component="u1", init=ContinuumInit(u2=ClosedFormSpectrum(kind="xi1sq_weighted_gaussian")))
        with pytest.raises(InvalidInputError):
            decay_report(empty, [1.0, 2.0], params)
