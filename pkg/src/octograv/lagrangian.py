"""Pointwise Lagrangian densities and their cross-checks.

Three integrands are evaluated, all against the same curvature data:

  double-dual 4D    (-kappa/4) eps^{uv mn} R_{mn}^{rs} eps_{rs uv} * sqrt(-g)
  vierbein 4D       same contraction with frame-pulled epsilons, measure det(e)
  chi-dual 8D       (-kappa/4) chi_L^{uv mn} E^r_a E^s_b R_{mn}^{ab} chi_R,{rs uv} * det(E)

with the standard Einstein-Hilbert integrand kappa * R * sqrt(-g) as the
oracle for the 4D pair.  kappa is the single stored coupling; the 1/4 in
the displayed prefactors is applied where the contraction needs it.

The vierbein and chi-dual measures use the frame determinant as is.  An
orientation-reversing frame (det < 0) therefore differs from the
density-measure form by a sign; the report carries an explicit
orientation_sign field instead of hiding that under an absolute value.

The 8D value is complex.  Its imaginary part vanishes for the geometry
produced here because the lowered curvature is symmetric under swapping
its index pairs; reality is reported as a measured remainder, never
assumed, so the value is serialized with both parts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry, tables
from .geometry import FrameField, GeometryAtPoint


@dataclass(frozen=True)
class CouplingConstants:
    kappa: float = 1.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")


@dataclass(frozen=True)
class LagrangianReport:
    point: np.ndarray
    form: str
    value: complex
    oracle: float
    abs_delta: float
    rel_delta: float
    im_magnitude: float
    orientation_sign: int


def _report(point, form, value: complex, oracle: float, orientation_sign: int) -> LagrangianReport:
    value = complex(value)
    abs_delta = abs(value - oracle)
    scale = max(abs(value), abs(oracle))
    return LagrangianReport(
        point=np.asarray(point, dtype=float),
        form=form,
        value=value,
        oracle=float(oracle),
        abs_delta=float(abs_delta),
        rel_delta=float(abs_delta / scale) if scale > 0.0 else 0.0,
        im_magnitude=abs(value.imag),
        orientation_sign=orientation_sign,
    )


def _orientation(geom: GeometryAtPoint) -> int:
    return 1 if geom.det_e > 0 else -1


def _raised_curvature(geom: GeometryAtPoint) -> np.ndarray:
    """R_{mn}^{rs}: frame indices traded for raised coordinate ones."""
    return np.einsum("mnab,ra,sb->mnrs", geom.curvature, geom.e_inv, geom.e_inv)


def lagrangian_standard_eh(frame: FrameField, point, constants: CouplingConstants) -> float:
    """Oracle integrand kappa * R * sqrt(-g)."""
    geom = geometry.geometry_at(frame, point)
    return constants.kappa * geometry.ricci_scalar(geom) * geom.sqrt_minus_g


def eh_report(frame: FrameField, point, constants: CouplingConstants) -> LagrangianReport:
    """Reference integrand packaged in report shape; it is its own oracle."""
    geom = geometry.geometry_at(frame, point)
    value = constants.kappa * geometry.ricci_scalar(geom) * geom.sqrt_minus_g
    return _report(point, "eh4", complex(value), value, _orientation(geom))


def lagrangian_double_dual_4d(frame: FrameField, point, constants: CouplingConstants) -> LagrangianReport:
    geom = geometry.geometry_at(frame, point)
    if geom.dim != 4:
        raise ValueError("double-dual form needs a 4D frame")
    dens = geometry.levi_civita_density_at(geom)
    raw = np.einsum("abmn,mnrs,rsab->", dens.upper, _raised_curvature(geom), dens.lower)
    value = (-constants.kappa / 4.0) * raw * geom.sqrt_minus_g
    oracle = constants.kappa * geometry.ricci_scalar(geom) * geom.sqrt_minus_g
    return _report(point, "dd4", value, oracle, _orientation(geom))


def lagrangian_vierbein_4d(frame: FrameField, point, constants: CouplingConstants) -> LagrangianReport:
    geom = geometry.geometry_at(frame, point)
    if geom.dim != 4:
        raise ValueError("vierbein form needs a 4D frame")
    eps = tables.table("eps4")
    e, e_inv = geom.e, geom.e_inv
    eps_lower = np.einsum("am,bn,cr,ds,abcd->mnrs", e, e, e, e, eps)
    eps_upper = np.einsum("ma,nb,rc,sd,abcd->mnrs", e_inv, e_inv, e_inv, e_inv, -eps)
    raw = np.einsum("abmn,mnrs,rsab->", eps_upper, _raised_curvature(geom), eps_lower)
    value = (-constants.kappa / 4.0) * raw * geom.det_e
    oracle = constants.kappa * geometry.ricci_scalar(geom) * geom.sqrt_minus_g
    return _report(point, "vierbein4", value, oracle, _orientation(geom))


def _chi_pull_upper(geom: GeometryAtPoint, chi: np.ndarray) -> np.ndarray:
    up = tables.raise_frame_indices(chi)
    i = geom.e_inv
    return np.einsum("ma,nb,rc,sd,abcd->mnrs", i, i, i, i, up)


def _chi_pull_lower(geom: GeometryAtPoint, chi: np.ndarray) -> np.ndarray:
    e = geom.e
    return np.einsum("am,bn,cr,ds,abcd->mnrs", e, e, e, e, chi)


def lagrangian_chi_dual_8d(
    frame: FrameField,
    point,
    constants: CouplingConstants,
    chi_L: np.ndarray | None = None,
    chi_R: np.ndarray | None = None,
) -> LagrangianReport:
    """Achtbein integrand; the oracle column restates the real part.

    The testable content of this form is that the imaginary part is a
    numerical remainder, so abs_delta equals im_magnitude and rel_delta
    is the Im/Re ratio.  chi_L and chi_R default to the extracted tables
    and may be swapped by the caller to probe the conjugation symmetry.
    """
    geom = geometry.geometry_at(frame, point)
    if geom.dim != 8:
        raise ValueError("chi-dual form needs an 8D frame")
    if chi_L is None:
        chi_L = tables.table("chiL")
    if chi_R is None:
        chi_R = tables.table("chiR")
    chi_up = _chi_pull_upper(geom, chi_L)
    chi_lo = _chi_pull_lower(geom, chi_R)
    # pair contraction first keeps the sum at O(dim^6) instead of O(dim^8)
    pair = np.einsum("abmn,rsab->mnrs", chi_up, chi_lo)
    raw = np.einsum("mnrs,mnrs->", pair, _raised_curvature(geom))
    value = (-constants.kappa / 4.0) * raw * geom.det_e
    return _report(point, "chi8", value, float(np.real(value)), _orientation(geom))


def kronecker_reduction_check(frame: FrameField, point) -> dict:
    """The eps-eps contraction must collapse the double dual to -4 R."""
    geom = geometry.geometry_at(frame, point)
    if geom.dim != 4:
        raise ValueError("reduction check needs a 4D frame")
    dens = geometry.levi_civita_density_at(geom)
    raw = float(np.einsum("abmn,mnrs,rsab->", dens.upper, _raised_curvature(geom), dens.lower))
    ricci = geometry.ricci_scalar(geom)
    scale = max(4.0 * abs(ricci), float(np.abs(geom.curvature).max()), 1e-300)
    raw_residual = abs(raw + 4.0 * ricci) / scale
    integrand = -0.25 * raw * geom.sqrt_minus_g
    oracle = ricci * geom.sqrt_minus_g
    integrand_residual = abs(integrand - oracle) / max(abs(oracle), geom.sqrt_minus_g * scale)
    ok = raw_residual < 1e-10 and integrand_residual < 1e-10
    return {
        "raw_residual": raw_residual,
        "integrand_residual": integrand_residual,
        "ok": ok,
    }


# ---------------------------------------------------------------------
# frame transformations


def elementary_rotation(dim: int, i: int, j: int, angle: float) -> np.ndarray:
    """Rotation in the spatial (i, j) plane; 1 <= i < j < dim."""
    if not 1 <= i < j < dim:
        raise ValueError("need spatial plane indices 1 <= i < j < dim")
    rot = np.eye(dim)
    c, s = np.cos(angle), np.sin(angle)
    rot[i, i] = rot[j, j] = c
    rot[i, j], rot[j, i] = -s, s
    return rot


def elementary_boost(dim: int, i: int, rapidity: float) -> np.ndarray:
    """Boost in the (0, i) plane; preserves eta = diag(-1, +1, ..)."""
    if not 1 <= i < dim:
        raise ValueError("need a spatial index 1 <= i < dim")
    boost = np.eye(dim)
    c, s = np.cosh(rapidity), np.sinh(rapidity)
    boost[0, 0] = boost[i, i] = c
    boost[0, i] = boost[i, 0] = s
    return boost


class _RotatedProvider:
    def __init__(self, base, rotation: np.ndarray):
        self.base = base
        self.rotation = rotation

    def value(self, point):
        return self.rotation @ self.base.value(point)

    def jet(self, point):
        e, de, dde = self.base.jet(point)
        rot = self.rotation
        return (
            rot @ e,
            np.einsum("ab,nbm->nam", rot, de),
            np.einsum("ab,nrbm->nram", rot, dde),
        )


def rotated_frame(frame: FrameField, rotation: np.ndarray) -> FrameField:
    """Apply a constant frame-index transformation e -> rotation @ e."""
    rotation = np.asarray(rotation, dtype=float)
    if rotation.shape != (frame.dim, frame.dim):
        raise ValueError("rotation shape does not match the frame dimension")
    return FrameField(frame.dim, _RotatedProvider(frame.provider, rotation))


def rotation_sensitivity_8d(
    frame: FrameField, point, constants: CouplingConstants, rotations
) -> list[dict]:
    """Measure (not assert) how the 8D integrand moves under frame rotations.

    The chi tensors are not invariant under the full pseudo-orthogonal
    group, so no invariance is claimed; this returns the observed
    relative change for each supplied rotation.
    """
    base = lagrangian_chi_dual_8d(frame, point, constants).value
    scale = max(abs(base), 1e-300)
    out = []
    for rotation in rotations:
        value = lagrangian_chi_dual_8d(rotated_frame(frame, rotation), point, constants).value
        out.append({"value": value, "rel_change": abs(value - base) / scale})
    return out
