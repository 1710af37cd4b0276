import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from selfrecovery.model_core import (AnnulusFluid, BearingGeometry, ConfigurationError,
                                     DampingLaw, DampingVariant, DomainError, InertiaParams,
                                     PDGains, RampProfile, RigidState, SimulationTrace,
                                     damping_coefficient, damping_induced_momentum,
                                     damping_potential, ramp_position, ramp_rate)

angles = st.floats(-20.0, 20.0, allow_nan=False)
scales = st.floats(0.0, 10.0, allow_nan=False)
variants = st.sampled_from([DampingVariant.CONSTANT, DampingVariant.RAISED_COSINE,
                            DampingVariant.COSINE_SQUARED])


def test_constant_law_uses_two_pi_normalization():
    law = DampingLaw(DampingVariant.CONSTANT, 1.0)
    assert damping_coefficient(law, 7.3) == pytest.approx(0.159155, abs=1e-6)


def test_raw_constant_returns_the_coefficient():
    assert damping_coefficient(DampingLaw.raw_constant(1.0), 0.4) == pytest.approx(1.0, rel=1e-15)


def test_shaped_laws_vanish_at_their_zeros():
    assert damping_coefficient(DampingLaw(DampingVariant.RAISED_COSINE, 1.0), math.pi) == pytest.approx(0, abs=1e-16)
    assert damping_coefficient(DampingLaw(DampingVariant.COSINE_SQUARED, 1.0), math.pi / 2) == pytest.approx(0, abs=1e-16)


def test_empty_table_is_rejected():
    with pytest.raises(ConfigurationError):
        DampingLaw.tabulated([], [])


def test_tabulated_law_interpolates_and_clamps():
    law = DampingLaw.tabulated([0.0, 1.0, 3.0], [1.0, 3.0, 0.0])
    assert damping_coefficient(law, 0.5) == pytest.approx(2.0)
    assert damping_coefficient(law, 2.0) == pytest.approx(1.5)
    assert damping_coefficient(law, -4.0) == 1.0
    assert damping_coefficient(law, 9.0) == 0.0


@pytest.mark.parametrize("bad", [dict(angles=[0, 0], values=[1, 1]),
                                 dict(angles=[0, 1], values=[1, -1]),
                                 dict(angles=[0, 1], values=[1])])
def test_malformed_tables_are_rejected(bad):
    with pytest.raises(ConfigurationError):
        DampingLaw.tabulated(bad["angles"], bad["values"])


def test_potential_closed_form_examples():
    assert damping_potential(DampingLaw(DampingVariant.CONSTANT, 1.0), 2 * math.pi) == pytest.approx(1.0)
    assert damping_potential(DampingLaw(DampingVariant.RAISED_COSINE, 1.0), 2 * math.pi) == pytest.approx(1.0)
    for v in DampingVariant:
        law = (DampingLaw.tabulated([0, 1], [1, 2]) if v is DampingVariant.TABULATED
               else DampingLaw(v, 1.0))
        assert damping_potential(law, 0.0) == 0.0


@given(variants, scales, angles)
def test_potential_matches_quadrature(variant, scale, phi):
    law = DampingLaw(variant, scale)
    ref = quad(lambda p: damping_coefficient(law, p), 0.0, phi, limit=200)[0]
    assert damping_potential(law, phi) == pytest.approx(ref, rel=1e-9, abs=1e-11)


@given(st.lists(st.floats(0.0, 5.0), min_size=2, max_size=8), angles)
def test_tabulated_potential_matches_quadrature(values, phi):
    grid = np.linspace(-3.0, 4.0, len(values))
    law = DampingLaw.tabulated(grid, values)
    breaks = [g for g in grid if min(0, phi) < g < max(0, phi)]
    ref = quad(lambda p: damping_coefficient(law, p), 0.0, phi, points=breaks or None, limit=200)[0]
    assert damping_potential(law, phi) == pytest.approx(ref, rel=1e-9, abs=1e-11)


@given(variants, scales)
def test_revolution_means(variant, scale):
    law = DampingLaw(variant, scale)
    factor = 2.0 if variant is DampingVariant.COSINE_SQUARED else 1.0
    mean = damping_potential(law, 2 * math.pi) / (2 * math.pi)
    assert mean == pytest.approx(factor * scale / (2 * math.pi), abs=1e-12)


@given(variants, scales, angles)
def test_damping_is_nonnegative(variant, scale, phi):
    assert damping_coefficient(DampingLaw(variant, scale), phi) >= 0


def test_coefficient_is_vectorized():
    law = DampingLaw(DampingVariant.RAISED_COSINE, 2.0)
    phis = np.linspace(-3, 3, 7)
    out = damping_coefficient(law, phis)
    assert out.shape == (7,)
    assert np.allclose(out, [damping_coefficient(law, p) for p in phis])


def test_ramp_examples():
    p = RampProfile(2.0, 5.0)
    assert ramp_position(p, 0.0) == 0.0 and ramp_rate(p, 0.0) == 2.0
    assert ramp_position(p, 3.0) == 6.0 and ramp_rate(p, 3.0) == 2.0
    assert ramp_position(p, 9.0) == 10.0 and ramp_rate(p, 9.0) == 0.0
    with pytest.raises(DomainError):
        ramp_position(p, -1e-3)
    with pytest.raises(DomainError):
        ramp_rate(p, -1.0)


@given(st.floats(-50, 50), st.floats(0.01, 20), st.floats(0, 40))
def test_ramp_position_is_integral_of_rate(rate, stop, t):
    p = RampProfile(rate, stop)
    assert ramp_position(p, t) == pytest.approx(rate * min(t, stop), rel=1e-12, abs=1e-12)


def test_momentum_examples():
    inertias = InertiaParams(0.0625, 0.625)
    zero_law = DampingLaw.raw_constant(0.0)
    assert damping_induced_momentum(RigidState.rest(), inertias, zero_law) == 0.0
    rate = -2 * 0.0625 / inertias.total
    state = RigidState(1.0, 3.0, 2.0, 11.0, rate)
    assert damping_induced_momentum(state, inertias, zero_law) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("kwargs", [dict(wheel_inertia=0.0, stool_inertia=1.0),
                                    dict(wheel_inertia=1.0, stool_inertia=-1.0),
                                    dict(wheel_inertia=math.nan, stool_inertia=1.0)])
def test_inertias_must_be_positive(kwargs):
    with pytest.raises(ConfigurationError):
        InertiaParams(**kwargs)


def test_inertia_matrix_is_symmetric_positive_definite():
    m = InertiaParams(0.0625, 0.625).matrix()
    assert np.allclose(m, m.T)
    assert np.all(np.linalg.eigvalsh(m) > 0)


def test_annulus_invariants():
    with pytest.raises(ConfigurationError, match="R_i < R_o"):
        AnnulusFluid(1000.0, 1e-6, 0.2, 0.1)
    with pytest.raises(ConfigurationError):
        AnnulusFluid(-1.0, 1e-6, 0.1, 0.2)
    with pytest.raises(ConfigurationError):
        AnnulusFluid(1000.0, 0.0, 0.1, 0.2)
    f = AnnulusFluid(1000.0, 1e-6, 0.135, 0.14)
    assert f.gap == pytest.approx(0.005)
    assert f.gap_ratio == pytest.approx(0.005 / 0.135)


def test_other_invariants():
    with pytest.raises(ConfigurationError):
        PDGains(-1.0, 1.0)
    with pytest.raises(ConfigurationError):
        RampProfile(1.0, 0.0)
    with pytest.raises(ConfigurationError):
        BearingGeometry(0.05, 0.0, 0.01)


def test_empty_trace_has_no_samples():
    trace = SimulationTrace.empty()
    assert len(trace) == 0
