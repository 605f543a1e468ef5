"""The three integrand forms against the scalar-curvature reference,
the chi-dual contraction against an independently grouped
reimplementation, and the symmetry behavior of all forms under frame
rotations, rescalings and parity."""

import numpy as np
import pytest

from octograv import geometry, lagrangian, scenarios, tables
from octograv.lagrangian import (
    CouplingConstants,
    eh_report,
    elementary_boost,
    elementary_rotation,
    kronecker_reduction_check,
    lagrangian_chi_dual_8d,
    lagrangian_double_dual_4d,
    lagrangian_standard_eh,
    lagrangian_vierbein_4d,
    rotated_frame,
    rotation_sensitivity_8d,
)

CONSTS = CouplingConstants()
DS = scenarios.scenario("de-sitter", H=0.1)
SCHW = scenarios.scenario("schwarzschild", M=1.0)


def test_couplings_validated():
    assert CouplingConstants(kappa=2.5).kappa == 2.5
    with pytest.raises(ValueError):
        CouplingConstants(kappa=0.0)
    with pytest.raises(ValueError):
        CouplingConstants(kappa=-1.0)


def test_expanding_universe_closed_form():
    # kappa * 12 H^2 * e^{3Ht}, and 0.12 exactly at t=0 with kappa=1
    frame = DS.frame_field()
    H = 0.1
    for t in (-0.5, 0.0, 0.8):
        point = np.array([t, 0.2, -0.1, 0.4])
        expected = 12.0 * H * H * np.exp(3.0 * H * t)
        rep = lagrangian_double_dual_4d(frame, point, CONSTS)
        assert abs(rep.value.real - expected) < 1e-12 * max(expected, 1.0)
        assert rep.im_magnitude == 0.0
    at_origin = lagrangian_double_dual_4d(frame, np.zeros(4), CONSTS)
    assert abs(at_origin.value.real - 0.12) < 1e-8


def test_three_forms_agree_on_curved_4d():
    rng = np.random.default_rng(17)
    for scen in (DS, SCHW):
        frame = scen.frame_field()
        for point in scen.sample_points(6, rng):
            eh = lagrangian_standard_eh(frame, point, CONSTS)
            dd = lagrangian_double_dual_4d(frame, point, CONSTS)
            vb = lagrangian_vierbein_4d(frame, point, CONSTS)
            scale = max(abs(eh), 1.0)
            assert abs(dd.value.real - eh) / scale < 1e-10
            assert abs(vb.value.real - eh) / scale < 1e-10
            # rel_delta is raw, so it only means something off vacuum
            for rep in (dd, vb):
                assert rep.rel_delta < 1e-10 or rep.abs_delta < 1e-12


def test_vacuum_values_vanish():
    frame = SCHW.frame_field()
    rng = np.random.default_rng(23)
    for point in SCHW.sample_points(6, rng):
        assert abs(lagrangian_double_dual_4d(frame, point, CONSTS).value) < 1e-8
        assert abs(lagrangian_vierbein_4d(frame, point, CONSTS).value) < 1e-8


def test_kappa_scales_linearly():
    frame = DS.frame_field()
    point = np.array([0.1, 0.0, 0.0, 0.0])
    one = lagrangian_double_dual_4d(frame, point, CONSTS).value
    three = lagrangian_double_dual_4d(frame, point, CouplingConstants(kappa=3.0)).value
    assert abs(three - 3.0 * one) < 1e-14


def test_eh_report_shape():
    rep = eh_report(DS.frame_field(), np.zeros(4), CONSTS)
    assert rep.form == "eh4"
    assert rep.value == rep.oracle
    assert rep.abs_delta == 0.0


def test_kronecker_reduction():
    for scen, point in ((DS, np.array([0.3, 0.1, 0.0, -0.2])),
                        (SCHW, np.array([0.0, 5.0, 1.2, 0.4]))):
        result = kronecker_reduction_check(scen.frame_field(), point)
        assert result["ok"], result
        assert result["raw_residual"] < 1e-10
        assert result["integrand_residual"] < 1e-10


def _chi_dual_by_metric_raising(frame, point, constants):
    """Same integrand, independently grouped: raise the chi indices with
    the inverse metric after pulling back, and contract against the
    curvature before the pair sum."""
    geom = geometry.geometry_at(frame, point)
    e = geom.e
    chi_L_lo = np.einsum("am,bn,cr,ds,abcd->mnrs", e, e, e, e, tables.table("chiL"))
    chi_R_lo = np.einsum("am,bn,cr,ds,abcd->mnrs", e, e, e, e, tables.table("chiR"))
    gi = geom.g_inv
    chi_L_up = np.einsum("ma,nb,rc,sd,abcd->mnrs", gi, gi, gi, gi, chi_L_lo)
    # R_{mn}{}^{rs} in coordinates
    r_mixed = np.einsum("mnab,ra,sb->mnrs", geom.curvature, geom.e_inv, geom.e_inv)
    first = np.einsum("abmn,mnrs->abrs", chi_L_up, r_mixed)
    raw = np.einsum("abrs,rsab->", first, chi_R_lo)
    return (-constants.kappa / 4.0) * raw * geom.det_e


def test_chi_dual_matches_independent_grouping():
    rng = np.random.default_rng(31)
    for name in ("diagonal-warped-8d", "random-smooth-8d"):
        scen = scenarios.scenario(name)
        frame = scen.frame_field()
        for point in scen.sample_points(3, rng):
            rep = lagrangian_chi_dual_8d(frame, point, CONSTS)
            other = _chi_dual_by_metric_raising(frame, point, CONSTS)
            scale = max(abs(rep.value), 1e-30)
            assert abs(rep.value - other) / scale < 1e-12


def test_chi_dual_real_on_real_frames():
    rng = np.random.default_rng(37)
    for name in ("flat-8d", "diagonal-warped-8d", "random-smooth-8d"):
        scen = scenarios.scenario(name)
        frame = scen.frame_field()
        for point in scen.sample_points(4, rng):
            rep = lagrangian_chi_dual_8d(frame, point, CONSTS)
            bound = 1e-12 * max(abs(rep.value.real), 1.0)
            assert rep.im_magnitude <= bound


def test_chi_swap_conjugates_the_value():
    scen = scenarios.scenario("random-smooth-8d")
    frame = scen.frame_field()
    point = np.full(8, 0.15)
    chiL, chiR = tables.table("chiL"), tables.table("chiR")
    forward = lagrangian_chi_dual_8d(frame, point, CONSTS).value
    swapped = lagrangian_chi_dual_8d(frame, point, CONSTS, chi_L=chiR, chi_R=chiL).value
    assert abs(swapped - np.conj(forward)) < 1e-12 * max(abs(forward), 1.0)


def test_chi_dual_flat_vanishes():
    frame = scenarios.scenario("flat-8d").frame_field()
    rep = lagrangian_chi_dual_8d(frame, np.zeros(8), CONSTS)
    assert rep.value == 0.0


def test_rotation_invariance_4d():
    # a rigid spatial frame rotation is a local Lorentz transformation;
    # every form must be blind to it
    frame = DS.frame_field()
    point = np.array([0.25, 0.3, -0.4, 0.1])
    base = lagrangian_double_dual_4d(frame, point, CONSTS).value.real
    for rot in (elementary_rotation(4, 1, 2, 0.7),
                elementary_rotation(4, 2, 3, -1.1),
                elementary_boost(4, 1, 0.5)):
        rotated = rotated_frame(frame, rot)
        for form in (lagrangian_double_dual_4d, lagrangian_vierbein_4d):
            val = form(rotated, point, CONSTS).value.real
            assert abs(val - base) < 1e-10 * max(abs(base), 1.0)


def test_rescaling_covariance():
    # constant rescale e -> lam e multiplies the integrand by lam^(D-2)
    lam = 1.7

    def scaled(frame):
        base = frame.provider

        class Scaled:
            def value(self, p):
                return lam * base.value(p)

            def jet(self, p):
                e, de, dde = base.jet(p)
                return lam * e, lam * de, lam * dde

        return geometry.FrameField(dim=frame.dim, provider=Scaled())

    f4 = DS.frame_field()
    p4 = np.array([0.2, 0.1, -0.3, 0.05])
    v0 = lagrangian_double_dual_4d(f4, p4, CONSTS).value.real
    v1 = lagrangian_double_dual_4d(scaled(f4), p4, CONSTS).value.real
    assert abs(v1 - lam ** 2 * v0) < 1e-12 * abs(v0)

    f8 = scenarios.scenario("random-smooth-8d").frame_field()
    p8 = np.full(8, 0.1)
    w0 = lagrangian_chi_dual_8d(f8, p8, CONSTS).value.real
    w1 = lagrangian_chi_dual_8d(scaled(f8), p8, CONSTS).value.real
    assert abs(w1 - lam ** 6 * w0) < 1e-12 * abs(w0)


def test_orientation_flip_splits_the_forms():
    # parity: sqrt(-g) is blind to it, det e is not
    base = DS.frame_field()

    class Flipped:
        def value(self, p):
            e = base.provider.value(p).copy()
            e[:, 1] = -e[:, 1]
            return e

        def jet(self, p):
            e, de, dde = base.provider.jet(p)
            e, de, dde = e.copy(), de.copy(), dde.copy()
            e[:, 1] = -e[:, 1]
            de[:, :, 1] = -de[:, :, 1]
            dde[:, :, :, 1] = -dde[:, :, :, 1]
            return e, de, dde

    flipped = geometry.FrameField(dim=4, provider=Flipped())
    point = np.array([0.3, 0.1, 0.0, -0.2])
    dd = lagrangian_double_dual_4d(flipped, point, CONSTS)
    vb = lagrangian_vierbein_4d(flipped, point, CONSTS)
    ref = lagrangian_double_dual_4d(base, point, CONSTS).value.real
    assert dd.orientation_sign == -1
    assert vb.orientation_sign == -1
    assert abs(dd.value.real - ref) < 1e-12
    assert abs(vb.value.real + ref) < 1e-12


def test_chirality_sensitivity_pattern_8d():
    # the chi contraction feels boosts but not rotations inside an
    # associative plane
    scen = scenarios.scenario("random-smooth-8d")
    frame = scen.frame_field()
    point = np.full(8, 0.12)
    rotations = [
        elementary_rotation(8, 1, 2, 0.4),
        elementary_rotation(8, 4, 7, 0.4),
        elementary_boost(8, 3, 0.4),
    ]
    report = rotation_sensitivity_8d(frame, point, CONSTS, rotations)
    assert len(report) == 3
    for rec in report:
        assert np.isfinite(rec["rel_change"])
    # the boost moves the value; no invariance is claimed either way
    assert report[2]["rel_change"] > 1e-3


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        lagrangian_double_dual_4d(scenarios.scenario("flat-8d").frame_field(), np.zeros(8), CONSTS)
    with pytest.raises(ValueError):
        lagrangian_chi_dual_8d(DS.frame_field(), np.zeros(4), CONSTS)
