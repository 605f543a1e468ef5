"""Constant tensors extracted from the algebra: eps3, psi, phi, eps4, chi.

Nothing here is typed in.  Each table is decomposed out of commutators,
associators or triple cross products of basis units, then validated to
hold exact (Gaussian-)integer entries before anything downstream may use
it.  A failed decomposition or a non-integer entry raises
TableExtractionError: that means the multiplication table itself is
broken, and there is no sensible recovery.

Index conventions: eps3/psi/phi are stored 0-based over the imaginary
units, so entry (i, j, k) of psi() is psi_{i+1, j+1, k+1}; dumps of
those tables print 1-based indices.  eps4 and chi carry frame indices
0..3 / 0..7 directly.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from . import algebra
from .algebra import OCTONIONIC, QUATERNIONIC

TABLE_NAMES = ("eps3", "psi", "phi", "eps4", "chiL", "chiR")
INDEX_BASE = {"eps3": 1, "psi": 1, "phi": 1, "eps4": 0, "chiL": 0, "chiR": 0}


class TableExtractionError(RuntimeError):
    """A structure-constant decomposition failed or produced non-integers."""


@functools.lru_cache(maxsize=None)
def permutation_symbol(n: int) -> np.ndarray:
    """Dense rank-n permutation symbol [i_1 ... i_n], entries in {-1, 0, +1}."""
    sym = np.zeros((n,) * n)
    for perm in itertools.permutations(range(n)):
        inversions = sum(
            1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b]
        )
        sym[perm] = -1.0 if inversions % 2 else 1.0
    sym.setflags(write=False)
    return sym


def _require_integer(arr: np.ndarray, what: str) -> None:
    # extraction must land on exact integers; anything else is a table bug
    re, im = np.real(arr), np.imag(arr)
    if not (np.array_equal(re, np.round(re)) and np.array_equal(im, np.round(im))):
        raise TableExtractionError(f"{what} has non-integer entries")


def _pure_imaginary_coeffs(x: algebra.CayleyElement, what: str) -> np.ndarray:
    coeffs = x.coeffs
    if coeffs[0] != 0:
        raise TableExtractionError(f"{what} has a scalar component: {coeffs[0]}")
    if np.any(np.imag(coeffs) != 0):
        raise TableExtractionError(f"{what} has complex coefficients")
    return np.real(coeffs[1:])


def extract_epsilon3() -> np.ndarray:
    """eps_ij^k from commutator(e_i, e_j) = 2 eps_ij^k e_k; eps_123 = +1."""
    units = [algebra.CayleyElement.unit(QUATERNIONIC, k) for k in range(4)]
    table = np.zeros((3, 3, 3))
    for i in range(1, 4):
        for j in range(1, 4):
            comm = algebra.commutator(units[i], units[j])
            table[i - 1, j - 1] = _pure_imaginary_coeffs(comm, f"[e_{i}, e_{j}]") / 2.0
    _require_integer(table, "eps3")
    return table


def extract_psi() -> np.ndarray:
    """psi_ij^k from commutator(E_i, E_j) = 2 psi_ij^k E_k."""
    units = [algebra.CayleyElement.unit(OCTONIONIC, k) for k in range(8)]
    table = np.zeros((7, 7, 7))
    for i in range(1, 8):
        for j in range(1, 8):
            comm = algebra.commutator(units[i], units[j])
            table[i - 1, j - 1] = _pure_imaginary_coeffs(comm, f"[E_{i}, E_{j}]") / 2.0
    _require_integer(table, "psi")
    return table


def extract_phi() -> np.ndarray:
    """phi_ijk^l from associator(E_i, E_j, E_k) = 2 phi_ijk^l E_l."""
    units = [algebra.CayleyElement.unit(OCTONIONIC, k) for k in range(8)]
    table = np.zeros((7, 7, 7, 7))
    for i in range(1, 8):
        for j in range(1, 8):
            for k in range(1, 8):
                assoc = algebra.associator(units[i], units[j], units[k])
                table[i - 1, j - 1, k - 1] = (
                    _pure_imaginary_coeffs(assoc, f"[E_{i}, E_{j}, E_{k}]") / 2.0
                )
    _require_integer(table, "phi")
    return table


def epsilon4_from_cross() -> np.ndarray:
    """eps_abcd = i <X(e_a, e_b, e_c), e_d> over the quaternionic frame.

    The quaternionic left and right cross products coincide, so either
    chirality may serve as X here; cross_left is used.
    """
    frame = algebra.basis_frame(QUATERNIONIC)
    table = np.zeros((4, 4, 4, 4), dtype=complex)
    for a in range(4):
        for b in range(4):
            for c in range(4):
                x = algebra.cross_left(frame[a], frame[b], frame[c])
                for d in range(4):
                    table[a, b, c, d] = 1j * algebra.inner(x, frame[d])
    _require_integer(table, "eps4")
    if np.any(np.imag(table) != 0):
        raise TableExtractionError("eps4 has imaginary entries")
    return np.real(table)


def build_chi(chirality: str) -> np.ndarray:
    """chi_abcd = i <X(E_a, E_b, E_c), E_d> over the octonionic frame."""
    if chirality not in ("L", "R"):
        raise ValueError(f"chirality must be 'L' or 'R', got {chirality!r}")
    cross = algebra.cross_left if chirality == "L" else algebra.cross_right
    frame = algebra.basis_frame(OCTONIONIC)
    table = np.zeros((8, 8, 8, 8), dtype=complex)
    for a in range(8):
        for b in range(8):
            for c in range(8):
                x = cross(frame[a], frame[b], frame[c])
                for d in range(8):
                    table[a, b, c, d] = 1j * algebra.inner(x, frame[d])
    _require_integer(table, f"chi{chirality}")
    return table


_CACHE: dict[str, np.ndarray] = {}

_BUILDERS = {
    "eps3": extract_epsilon3,
    "psi": extract_psi,
    "phi": extract_phi,
    "eps4": epsilon4_from_cross,
    "chiL": lambda: build_chi("L"),
    "chiR": lambda: build_chi("R"),
}


def table(name: str) -> np.ndarray:
    """Cached, read-only copy of a named table."""
    if name not in _BUILDERS:
        raise KeyError(f"unknown table {name!r}; known: {', '.join(TABLE_NAMES)}")
    if name not in _CACHE:
        arr = _BUILDERS[name]()
        arr.setflags(write=False)
        _CACHE[name] = arr
    return _CACHE[name]


def all_tables() -> dict[str, np.ndarray]:
    return {name: table(name) for name in TABLE_NAMES}


# ---------------------------------------------------------------------
# identity verification


def _antisymmetry_residual(arr: np.ndarray) -> float:
    rank = arr.ndim
    worst = 0.0
    for perm in itertools.permutations(range(rank)):
        inversions = sum(
            1 for a in range(rank) for b in range(a + 1, rank) if perm[a] > perm[b]
        )
        sign = -1.0 if inversions % 2 else 1.0
        worst = max(worst, float(np.abs(np.transpose(arr, perm) - sign * arr).max()))
    return worst


def _eta(dim: int) -> np.ndarray:
    h = np.eye(dim)
    h[0, 0] = -1.0
    return h


def raise_frame_indices(arr: np.ndarray) -> np.ndarray:
    """Raise all indices of a rank-4 frame table with eta = diag(-1, +1, ..)."""
    h = _eta(arr.shape[0])
    return np.einsum("ae,bf,cg,dh,efgh->abcd", h, h, h, h, arr)


def generalized_kronecker() -> np.ndarray:
    """delta^{mn}_{rs} = delta^m_r delta^n_s - delta^m_s delta^n_r (4D)."""
    d = np.eye(4)
    return np.einsum("mr,ns->mnrs", d, d) - np.einsum("ms,nr->mnrs", d, d)


def verify_kronecker_identity(tables: dict[str, np.ndarray] | None = None) -> dict:
    """-1/2 eps^{ab mn} eps_{ab rs} against the generalized Kronecker delta."""
    eps_lo = (tables or all_tables())["eps4"]
    eps_up = raise_frame_indices(eps_lo)
    contracted = -0.5 * np.einsum("abmn,abrs->mnrs", eps_up, eps_lo)
    resid = float(np.abs(contracted - generalized_kronecker()).max())
    return {"name": "kronecker-identity", "max_residual": resid, "tolerance": 0.0, "ok": resid == 0.0}


def table_suite(tables: dict[str, np.ndarray] | None = None) -> list[dict]:
    """Every exact identity the constant tables must satisfy.

    All tolerances are zero: the entries are integers and the checks are
    pure sign bookkeeping, so any deviation at all means extraction or
    the multiplication table went wrong.
    """
    t = tables or all_tables()
    records = []

    def exact(name, resid):
        resid = float(resid)
        records.append({"name": name, "max_residual": resid, "tolerance": 0.0, "ok": resid == 0.0})

    exact("eps3-permutation-symbol", np.abs(t["eps3"] - permutation_symbol(3)).max())
    exact("eps4-permutation-symbol", np.abs(t["eps4"] - permutation_symbol(4)).max())
    exact("eps4-raise-is-negate", np.abs(raise_frame_indices(t["eps4"]) + t["eps4"]).max())

    for name in ("psi", "phi", "eps4"):
        exact(f"{name}-antisymmetry", _antisymmetry_residual(t[name]))

    # phi is minus one sixth of the rank-7 permutation symbol contracted
    # with psi under this labeling of the imaginary units
    dual = np.einsum("ijklmnp,mnp->ijkl", permutation_symbol(7), t["psi"]) / 6.0
    exact("phi-psi-duality", np.abs(t["phi"] + dual).max())

    counts = {"eps3": 6, "psi": 42, "phi": 168, "eps4": 24, "chiL": 336, "chiR": 336}
    for name, expected in counts.items():
        exact(f"{name}-nonzero-count", abs(int(np.count_nonzero(t[name])) - expected))

    records.append(verify_kronecker_identity(t))

    for ch in ("L", "R"):
        exact(f"chi{ch}-antisymmetry", _antisymmetry_residual(t[f"chi{ch}"]))
    exact("chi-conjugacy", np.abs(t["chiL"] - np.conj(t["chiR"])).max())
    exact("chi-real-imag-disjoint", np.abs(np.real(t["chiL"]) * np.imag(t["chiL"])).max())

    # chi_{0ijk} = psi_{ijk} for both chiralities; chi_{ijkl} = +/- i phi_{ijkl}
    for ch in ("L", "R"):
        exact(f"chi{ch}-0ijk-is-psi", np.abs(t[f"chi{ch}"][0, 1:, 1:, 1:] - t["psi"]).max())
    exact("chiL-ijkl-is-i-phi", np.abs(t["chiL"][1:, 1:, 1:, 1:] - 1j * t["phi"]).max())
    exact("chiR-ijkl-is-minus-i-phi", np.abs(t["chiR"][1:, 1:, 1:, 1:] + 1j * t["phi"]).max())

    # restricting chi to indices 0..3 embeds the quaternionic frame
    sub = np.ix_(range(4), range(4), range(4), range(4))
    exact("chi-restriction-eps4", np.abs(t["chiL"][sub] - t["eps4"]).max())

    return records


# ---------------------------------------------------------------------
# dumps


def nonzero_entries(name: str, tables: dict[str, np.ndarray] | None = None) -> list[dict]:
    """Sorted nonzero entries as {"indices": [...], "re": r, "im": m}.

    Indices are printed 1-based for eps3/psi/phi and 0-based for
    eps4/chi, matching how the tensors are written with their index
    ranges.
    """
    arr = (tables or all_tables())[name]
    base = INDEX_BASE[name]
    entries = []
    for idx in sorted(zip(*np.nonzero(arr))):
        value = complex(arr[idx])
        entries.append(
            {
                "indices": [int(i) + base for i in idx],
                "re": float(value.real),
                "im": float(value.imag),
            }
        )
    return entries


def entries_to_text(name: str, entries: list[dict]) -> str:
    lines = [f"# table {name}  nonzero {len(entries)}  index-base {INDEX_BASE[name]}"]
    for e in entries:
        idx = " ".join(str(i) for i in e["indices"])
        lines.append(f"{idx}  {e['re']!r} {e['im']!r}")
    return "\n".join(lines) + "\n"


def rebuild_from_entries(name: str, entries: list[dict]) -> np.ndarray:
    """Inverse of nonzero_entries; used to round-trip dumps."""
    reference = table(name)
    arr = np.zeros(reference.shape, dtype=reference.dtype)
    base = INDEX_BASE[name]
    for e in entries:
        idx = tuple(int(i) - base for i in e["indices"])
        arr[idx] = e["re"] + 1j * e["im"] if np.iscomplexobj(arr) else e["re"]
    return arr
