"""Pointwise frame geometry: metric, connection and curvature from a frame.

Array conventions, fixed once for the whole package:

    frame value      e[a, mu]          row a frame index, column mu coordinate
    first jet        de[nu, a, mu]     = d_nu e^a_mu
    second jet       dde[nu, rho, a, mu], symmetric in (nu, rho)
    metric           g[mu, nu]         = eta_ab e^a_mu e^b_nu
    inverse frame    e_inv[mu, a]      = e^mu_a
    christoffel      christoffel[l, m, n] = Gamma^l_{mn}
    spin connection  omega[mu, a, b]   = omega_mu^{ab}, both frame indices up
    curvature        R[mu, nu, a, b]   = R_{mu nu}^{ab}

The spin connection is the minimal one, omega_mu^{ab} = g^{rho sigma}
e^a_rho nabla_mu e^b_sigma with the Levi-Civita nabla; its antisymmetry
in (a, b) is not imposed, it emerges from metric compatibility and is
checked by the test suite.  The curvature sign convention is anchored by
the Lagrangian cross-checks: the contraction e^mu_a e^nu_b R_{mu nu}^{ab}
is the Ricci scalar that is positive (12 H^2) on an expanding de Sitter
frame.

Everything is evaluated at one point at a time from the frame jet; there
is no grid and no global state.  Frames with |det e| < 1e-12 are
rejected, not regularized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tables

DEGENERACY_CUTOFF = 1e-12


class GeometryError(RuntimeError):
    pass


class DegenerateFrameError(GeometryError):
    """Frame determinant at (or numerically at) zero."""


class SignatureError(GeometryError):
    """Metric signature is not (-, +, ..., +) at the queried point."""


def minkowski_eta(dim: int) -> np.ndarray:
    h = np.eye(dim)
    h[0, 0] = -1.0
    return h


class AnalyticProvider:
    """Frame jet from closed-form callbacks.

    value(point) -> e[a, mu]; d_value(point) -> de[nu, a, mu];
    dd_value(point) -> dde[nu, rho, a, mu] symmetric in (nu, rho).
    """

    def __init__(self, value, d_value, dd_value):
        self.value = value
        self.d_value = d_value
        self.dd_value = dd_value

    def jet(self, point: np.ndarray):
        return self.value(point), self.d_value(point), self.dd_value(point)


class FiniteDifferenceProvider:
    """Frame jet by second-order central differences of the value callback.

    First derivatives use step h, second derivatives difference the
    first-derivative map with step h2 (defaults 1e-5 and 1e-4, the usual
    truncation/round-off balance for double precision).  If an analytic
    d_value is supplied it replaces the inner differencing, so only the
    second derivatives are numerical.  Steps may be scalars or one value
    per coordinate.
    """

    def __init__(self, value, h: float = 1e-5, h2: float = 1e-4, d_value=None):
        self.value = value
        self.h = h
        self.h2 = h2
        self.d_value = d_value

    def _first(self, point: np.ndarray) -> np.ndarray:
        if self.d_value is not None:
            return self.d_value(point)
        dim = point.shape[0]
        steps = np.broadcast_to(np.asarray(self.h, dtype=float), (dim,))
        e0 = self.value(point)
        out = np.empty((dim,) + e0.shape)
        for nu in range(dim):
            shift = np.zeros(dim)
            shift[nu] = steps[nu]
            out[nu] = (self.value(point + shift) - self.value(point - shift)) / (2.0 * steps[nu])
        return out

    def jet(self, point: np.ndarray):
        point = np.asarray(point, dtype=float)
        dim = point.shape[0]
        steps = np.broadcast_to(np.asarray(self.h2, dtype=float), (dim,))
        e = self.value(point)
        de = self._first(point)
        dde = np.empty((dim,) + de.shape)
        for nu in range(dim):
            shift = np.zeros(dim)
            shift[nu] = steps[nu]
            dde[nu] = (self._first(point + shift) - self._first(point - shift)) / (2.0 * steps[nu])
        # mixed partials commute; symmetrize away the differencing noise
        dde = 0.5 * (dde + np.transpose(dde, (1, 0, 2, 3)))
        return e, de, dde


@dataclass(frozen=True)
class FrameField:
    dim: int
    provider: AnalyticProvider | FiniteDifferenceProvider

    def value(self, point) -> np.ndarray:
        # singular points may divide by zero inside the callbacks; the
        # finiteness check downstream turns that into a clean rejection
        with np.errstate(divide="ignore", invalid="ignore"):
            e = np.asarray(self.provider.value(np.asarray(point, dtype=float)), dtype=float)
        if e.shape != (self.dim, self.dim):
            raise ValueError(f"provider returned frame shape {e.shape}, wanted {(self.dim, self.dim)}")
        return e

    def jet(self, point):
        with np.errstate(divide="ignore", invalid="ignore"):
            e, de, dde = self.provider.jet(np.asarray(point, dtype=float))
        d = self.dim
        e, de, dde = (np.asarray(a, dtype=float) for a in (e, de, dde))
        if e.shape != (d, d) or de.shape != (d, d, d) or dde.shape != (d, d, d, d):
            raise ValueError(f"provider returned wrong jet shapes for dim {d}")
        return e, de, dde


@dataclass(frozen=True)
class GeometryAtPoint:
    point: np.ndarray
    e: np.ndarray
    e_inv: np.ndarray
    det_e: float
    g: np.ndarray
    g_inv: np.ndarray
    dg: np.ndarray
    sqrt_minus_g: float
    christoffel: np.ndarray
    spin_connection: np.ndarray
    curvature: np.ndarray

    @property
    def dim(self) -> int:
        return self.e.shape[0]


def _checked_frame(e: np.ndarray) -> float:
    if not np.isfinite(e).all():
        raise DegenerateFrameError("frame has non-finite entries")
    det_e = float(np.linalg.det(e))
    if not abs(det_e) >= DEGENERACY_CUTOFF:  # also catches nan
        raise DegenerateFrameError(f"frame determinant {det_e:.3e} below cutoff")
    return det_e


def _checked_metric(g: np.ndarray) -> float:
    det_g = float(np.linalg.det(g))
    if not -det_g > 0.0:
        raise SignatureError(f"-det(g) = {-det_g:.3e} is not positive")
    eigs = np.linalg.eigvalsh(g)
    if int((eigs < 0).sum()) != 1:
        raise SignatureError(f"metric eigenvalue signs {np.sign(eigs).tolist()} are not (-,+,..,+)")
    return float(np.sqrt(-det_g))


def metric_at(frame: FrameField, point) -> tuple[np.ndarray, np.ndarray, float]:
    """Metric, inverse metric and sqrt(-g); needs no frame derivatives."""
    point = np.asarray(point, dtype=float)
    e = frame.value(point)
    _checked_frame(e)
    g = np.einsum("ab,am,bn->mn", minkowski_eta(frame.dim), e, e)
    sqrt_mg = _checked_metric(g)
    return g, np.linalg.inv(g), sqrt_mg


def geometry_at(frame: FrameField, point) -> GeometryAtPoint:
    """Full geometric data at one point from the frame jet."""
    point = np.asarray(point, dtype=float)
    e, de, dde = frame.jet(point)
    det_e = _checked_frame(e)
    h = minkowski_eta(frame.dim)

    g = np.einsum("ab,am,bn->mn", h, e, e)
    sqrt_mg = _checked_metric(g)
    g_inv = np.linalg.inv(g)
    e_inv = np.linalg.inv(e)

    dg = np.einsum("ab,ram,bn->rmn", h, de, e) + np.einsum("ab,am,rbn->rmn", h, e, de)
    christoffel = 0.5 * (
        np.einsum("lr,mrn->lmn", g_inv, dg)
        + np.einsum("lr,nrm->lmn", g_inv, dg)
        - np.einsum("lr,rmn->lmn", g_inv, dg)
    )

    # nabla_m e^b_s, then omega_m^{ab} = g^{rs} e^a_r nabla_m e^b_s
    cov_de = de - np.einsum("lms,bl->mbs", christoffel, e)
    omega = np.einsum("rs,ar,mbs->mab", g_inv, e, cov_de)

    ddg = (
        np.einsum("ab,nram,bs->nrms", h, dde, e)
        + np.einsum("ab,ram,nbs->nrms", h, de, de)
        + np.einsum("ab,nam,rbs->nrms", h, de, de)
        + np.einsum("ab,am,nrbs->nrms", h, e, dde)
    )
    dg_inv = -np.einsum("ma,nab,bs->nms", g_inv, dg, g_inv)
    dgamma = 0.5 * (
        np.einsum("nlr,mrs->nlms", dg_inv, dg)
        + np.einsum("nlr,srm->nlms", dg_inv, dg)
        - np.einsum("nlr,rms->nlms", dg_inv, dg)
        + np.einsum("lr,nmrs->nlms", g_inv, ddg)
        + np.einsum("lr,nsrm->nlms", g_inv, ddg)
        - np.einsum("lr,nrms->nlms", g_inv, ddg)
    )
    dcov = dde - np.einsum("nlms,bl->nmbs", dgamma, e) - np.einsum("lms,nbl->nmbs", christoffel, de)
    domega = (
        np.einsum("nrs,ar,mbs->nmab", dg_inv, e, cov_de)
        + np.einsum("rs,nar,mbs->nmab", g_inv, de, cov_de)
        + np.einsum("rs,ar,nmbs->nmab", g_inv, e, dcov)
    )

    omega_mixed = np.einsum("mab,bc->mac", omega, h)  # omega_m^a{}_c
    quad = np.einsum("mac,ncb->mnab", omega_mixed, omega)
    curvature = (
        domega
        - np.transpose(domega, (1, 0, 2, 3))
        + quad
        - np.transpose(quad, (1, 0, 2, 3))
    )

    return GeometryAtPoint(
        point=point,
        e=e,
        e_inv=e_inv,
        det_e=det_e,
        g=g,
        g_inv=g_inv,
        dg=dg,
        sqrt_minus_g=sqrt_mg,
        christoffel=christoffel,
        spin_connection=omega,
        curvature=curvature,
    )


def christoffel_at(frame: FrameField, point) -> np.ndarray:
    return geometry_at(frame, point).christoffel


def spin_connection_at(frame: FrameField, point) -> np.ndarray:
    return geometry_at(frame, point).spin_connection


def curvature_at(frame: FrameField, point) -> np.ndarray:
    return geometry_at(frame, point).curvature


def ricci_scalar(geom: GeometryAtPoint) -> float:
    return float(np.einsum("ma,nb,mnab->", geom.e_inv, geom.e_inv, geom.curvature))


# ---------------------------------------------------------------------
# Levi-Civita densities and coordinate-index chi


@dataclass(frozen=True)
class LeviCivitaDensityAtPoint:
    lower: np.ndarray  # eps_{mnrs} = +sqrt(-g) [mnrs]
    upper: np.ndarray  # eps^{mnrs} = -[mnrs] / sqrt(-g)


def levi_civita_density_at(geom: GeometryAtPoint) -> LeviCivitaDensityAtPoint:
    if geom.dim != 4:
        raise ValueError("Levi-Civita densities are defined for the 4D frame only")
    symbol = tables.permutation_symbol(4)
    return LeviCivitaDensityAtPoint(
        lower=geom.sqrt_minus_g * symbol,
        upper=-symbol / geom.sqrt_minus_g,
    )


@dataclass(frozen=True)
class ChiCoordinateAtPoint:
    chirality: str
    lower: np.ndarray  # chi_{mnrs} = e^a_m e^b_n e^c_r e^d_s chi_{abcd}
    upper: np.ndarray  # frame indices raised with eta, then pulled with e_inv


def chi_coordinate_at(geom: GeometryAtPoint, chirality: str) -> ChiCoordinateAtPoint:
    if geom.dim != 8:
        raise ValueError("chi pullbacks need an 8D frame")
    chi = tables.table(f"chi{chirality}")
    e, e_inv = geom.e, geom.e_inv
    lower = np.einsum("am,bn,cr,ds,abcd->mnrs", e, e, e, e, chi)
    chi_up = tables.raise_frame_indices(chi)
    upper = np.einsum("ma,nb,rc,sd,abcd->mnrs", e_inv, e_inv, e_inv, e_inv, chi_up)
    return ChiCoordinateAtPoint(chirality=chirality, lower=lower, upper=upper)


# ---------------------------------------------------------------------
# residuals for the invariants the suite checks at every point


def lowered_curvature(geom: GeometryAtPoint) -> np.ndarray:
    """R_{mnrs}: frame indices lowered with eta and pulled with the frame."""
    h = minkowski_eta(geom.dim)
    return np.einsum("mnab,ac,cr,bd,ds->mnrs", geom.curvature, h, geom.e, h, geom.e)


def _relative(deviation: float, scale: float) -> float:
    return 0.0 if scale == 0.0 else deviation / scale


def pair_symmetry_residual(geom: GeometryAtPoint) -> float:
    """max |R_{mnrs} - R_{rsmn}| over max |R|, 0 for flat frames."""
    low = lowered_curvature(geom)
    dev = float(np.abs(low - np.transpose(low, (2, 3, 0, 1))).max())
    return _relative(dev, float(np.abs(low).max()))

def first_bianchi_residual(geom: GeometryAtPoint) -> float:
    low = lowered_curvature(geom)
    cyc = low + np.transpose(low, (1, 2, 0, 3)) + np.transpose(low, (2, 0, 1, 3))
    return _relative(float(np.abs(cyc).max()), float(np.abs(low).max()))


def spin_antisymmetry_residual(geom: GeometryAtPoint) -> float:
    omega = geom.spin_connection
    dev = float(np.abs(omega + np.transpose(omega, (0, 2, 1))).max())
    return _relative(dev, max(float(np.abs(omega).max()), 1.0))


def metric_compatibility_residual(geom: GeometryAtPoint) -> float:
    nabla_g = (
        geom.dg
        - np.einsum("rlm,rn->lmn", geom.christoffel, geom.g)
        - np.einsum("rln,mr->lmn", geom.christoffel, geom.g)
    )
    return _relative(float(np.abs(nabla_g).max()), max(float(np.abs(geom.dg).max()), 1.0))
