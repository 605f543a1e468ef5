"""Complex quaternion and complex octonion arithmetic.

An element carries 4 or 8 complex coefficients on the real basis
(1, e_1, e_2, e_3) or (1, E_1, ..., E_7).  The real multiplication table
is generated by Cayley-Dickson doubling R -> C -> H -> O with the rule

    (a, b)(c, d) = (ac - d~b, da + bc~)

where ~ conjugates in the half-size algebra.  Products of elements with
complex coefficients extend the table bilinearly.  Every structure
constant used elsewhere in this package is derived from this one rule,
never typed in.

The distinguished frame (i*1, e_1, ..) returned by basis_frame() has
Minkowski inner products diag(-1, +1, ..., +1): the timelike direction
is the complex unit i times the real unit.
"""

from __future__ import annotations

import numbers

import numpy as np

QUATERNIONIC = "quaternionic"
OCTONIONIC = "octonionic"

_DIMS = {QUATERNIONIC: 4, OCTONIONIC: 8}
_KINDS = {4: QUATERNIONIC, 8: OCTONIONIC}


class AlgebraMismatchError(ValueError):
    """Operands belong to different algebras."""


def _cd_conjugate(x: np.ndarray) -> np.ndarray:
    out = -x
    out[0] = x[0]
    return out


def _cd_multiply(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    if n == 1:
        return x * y
    h = n // 2
    a, b = x[:h], x[h:]
    c, d = y[:h], y[h:]
    lo = _cd_multiply(a, c) - _cd_multiply(_cd_conjugate(d), b)
    hi = _cd_multiply(d, a) + _cd_multiply(b, _cd_conjugate(c))
    return np.concatenate([lo, hi])


_TABLE_CACHE: dict[int, np.ndarray] = {}


def multiplication_table(dim: int) -> np.ndarray:
    """Rank-3 table M with unit_i * unit_j = sum_k M[i, j, k] unit_k.

    Entries are exact integers in {-1, 0, +1}; the array is cached and
    read-only.
    """
    if dim not in _KINDS:
        raise ValueError(f"dimension must be 4 or 8, got {dim}")
    if dim not in _TABLE_CACHE:
        table = np.zeros((dim, dim, dim))
        eye = np.eye(dim)
        for i in range(dim):
            for j in range(dim):
                table[i, j] = _cd_multiply(eye[i].copy(), eye[j].copy())
        table.setflags(write=False)
        _TABLE_CACHE[dim] = table
    return _TABLE_CACHE[dim]


class CayleyElement:
    """One element of the complex quaternions or complex octonions."""

    __slots__ = ("kind", "coeffs")

    def __init__(self, kind: str, coeffs) -> None:
        if kind not in _DIMS:
            raise ValueError(f"unknown algebra kind: {kind!r}")
        arr = np.array(coeffs, dtype=complex)
        if arr.shape != (_DIMS[kind],):
            raise ValueError(
                f"{kind} element needs {_DIMS[kind]} coefficients, got shape {arr.shape}"
            )
        arr.setflags(write=False)
        self.kind = kind
        self.coeffs = arr

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, kind: str) -> "CayleyElement":
        return cls(kind, np.zeros(_DIMS[kind]))

    @classmethod
    def unit(cls, kind: str, index: int) -> "CayleyElement":
        """Real basis unit: index 0 is 1, index k >= 1 the k-th imaginary unit."""
        coeffs = np.zeros(_DIMS[kind])
        coeffs[index] = 1.0
        return cls(kind, coeffs)

    # -- structure -----------------------------------------------------

    @property
    def dim(self) -> int:
        return _DIMS[self.kind]

    @property
    def scalar_part(self) -> complex:
        """Coefficient of the real unit 1 (a complex number)."""
        return complex(self.coeffs[0])

    def conjugate(self) -> "CayleyElement":
        out = -self.coeffs
        out[0] = self.coeffs[0]
        return CayleyElement(self.kind, out)

    # -- arithmetic ----------------------------------------------------

    def _check(self, other: "CayleyElement") -> None:
        if self.kind != other.kind:
            raise AlgebraMismatchError(
                f"cannot combine {self.kind} and {other.kind} elements"
            )

    def __add__(self, other: "CayleyElement") -> "CayleyElement":
        self._check(other)
        return CayleyElement(self.kind, self.coeffs + other.coeffs)

    def __sub__(self, other: "CayleyElement") -> "CayleyElement":
        self._check(other)
        return CayleyElement(self.kind, self.coeffs - other.coeffs)

    def __neg__(self) -> "CayleyElement":
        return CayleyElement(self.kind, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, CayleyElement):
            return multiply(self, other)
        if isinstance(other, numbers.Complex):
            return CayleyElement(self.kind, self.coeffs * complex(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Complex):
            return CayleyElement(self.kind, self.coeffs * complex(other))
        return NotImplemented

    def __eq__(self, other) -> bool:
        # exact comparison; float tolerance is the caller's business
        if not isinstance(other, CayleyElement):
            return NotImplemented
        return self.kind == other.kind and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.kind, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        return f"CayleyElement({self.kind!r}, {self.coeffs.tolist()!r})"


def multiply(x: CayleyElement, y: CayleyElement) -> CayleyElement:
    """Algebra product: bilinear over C, table from Cayley-Dickson doubling."""
    if x.kind != y.kind:
        raise AlgebraMismatchError(f"cannot multiply {x.kind} by {y.kind}")
    table = multiplication_table(x.dim)
    return CayleyElement(x.kind, np.einsum("i,j,ijk->k", x.coeffs, y.coeffs, table))


def conjugate(x: CayleyElement) -> CayleyElement:
    """Negate the imaginary-unit coefficients, fix the scalar one."""
    return x.conjugate()


def inner(x: CayleyElement, y: CayleyElement) -> complex:
    """Symmetric C-bilinear form: scalar part of (x y~ + y x~) / 2.

    With y~ the algebra conjugate.  On the distinguished basis frame this
    produces diag(-1, +1, ..., +1); it is bilinear, not sesquilinear, so
    <x, x> can vanish for nonzero x.
    """
    if x.kind != y.kind:
        raise AlgebraMismatchError(f"cannot pair {x.kind} with {y.kind}")
    s = multiply(x, y.conjugate()) + multiply(y, x.conjugate())
    return s.scalar_part / 2.0


def norm(x: CayleyElement) -> complex:
    """Quadratic form <x, x>; multiplicative, but with zero divisors."""
    return inner(x, x)


def commutator(x: CayleyElement, y: CayleyElement) -> CayleyElement:
    return multiply(x, y) - multiply(y, x)


def associator(x: CayleyElement, y: CayleyElement, z: CayleyElement) -> CayleyElement:
    """(xy)z - x(yz); zero for quaternions, alternating for octonions."""
    return multiply(multiply(x, y), z) - multiply(x, multiply(y, z))


def cross_left(x: CayleyElement, y: CayleyElement, z: CayleyElement) -> CayleyElement:
    """Triple cross product 6 X_L(x,y,z) = x(y~ z - z~ y) + cyclic."""
    terms = CayleyElement.zero(x.kind)
    for u, v, w in ((x, y, z), (y, z, x), (z, x, y)):
        terms = terms + multiply(u, multiply(v.conjugate(), w) - multiply(w.conjugate(), v))
    return (1.0 / 6.0) * terms


def cross_right(x: CayleyElement, y: CayleyElement, z: CayleyElement) -> CayleyElement:
    """Triple cross product 6 X_R(x,y,z) = (x y~ - y x~)z + cyclic."""
    terms = CayleyElement.zero(x.kind)
    for u, v, w in ((x, y, z), (y, z, x), (z, x, y)):
        terms = terms + multiply(multiply(u, v.conjugate()) - multiply(v, u.conjugate()), w)
    return (1.0 / 6.0) * terms


def basis_frame(kind: str) -> tuple[CayleyElement, ...]:
    """Distinguished frame (i*1, e_1, ..., e_n) with eta = diag(-1, +1, ..)."""
    units = [1j * CayleyElement.unit(kind, 0)]
    units.extend(CayleyElement.unit(kind, k) for k in range(1, _DIMS[kind]))
    return tuple(units)


def random_element(kind: str, rng: np.random.Generator) -> CayleyElement:
    """Coefficients with re and im drawn uniformly from [-1, 1]."""
    dim = _DIMS[kind]
    re = rng.uniform(-1.0, 1.0, dim)
    im = rng.uniform(-1.0, 1.0, dim)
    return CayleyElement(kind, re + 1j * im)


# ---------------------------------------------------------------------
# Batched randomized invariant suite.
#
# The scalar CayleyElement operations above are the reference
# implementation; the checks below re-express each law directly on
# stacked coefficient arrays so that 10^4-element sweeps stay fast.
# test_algebra.py pins the two routes against each other.


def _batch_random(kind: str, n: int, rng: np.random.Generator) -> np.ndarray:
    dim = _DIMS[kind]
    return rng.uniform(-1.0, 1.0, (n, dim)) + 1j * rng.uniform(-1.0, 1.0, (n, dim))


def _bmul(table: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.einsum("ijk,ni,nj->nk", table, x, y)


def _bconj(x: np.ndarray) -> np.ndarray:
    out = -x
    out[:, 0] = x[:, 0]
    return out


def _bscale(*arrays: np.ndarray) -> np.ndarray:
    s = 1.0
    for a in arrays:
        s = s * (1.0 + np.abs(a).max(axis=1))
    return s


def _bcross(table, x, y, z, chirality):
    acc = np.zeros_like(x)
    for u, v, w in ((x, y, z), (y, z, x), (z, x, y)):
        if chirality == "L":
            acc = acc + _bmul(table, u, _bmul(table, _bconj(v), w) - _bmul(table, _bconj(w), v))
        else:
            acc = acc + _bmul(table, _bmul(table, u, _bconj(v)) - _bmul(table, v, _bconj(u)), w)
    return acc / 6.0


def _binner(table, x, y):
    s = _bmul(table, x, _bconj(y)) + _bmul(table, y, _bconj(x))
    return s[:, 0] / 2.0


def invariant_suite(n: int = 10000, seed: int = 42) -> list[dict]:
    """Run every randomized algebra law; returns one record per check.

    Each record has name, max_residual, tolerance and ok fields.
    Residuals are relative: raw deviation divided by (1 + scale) factors
    built from the operand magnitudes.
    """
    rng = np.random.default_rng(seed)
    records = []

    def record(name, resid, tol):
        resid = float(resid)
        records.append(
            {"name": name, "max_residual": resid, "tolerance": tol, "ok": resid <= tol}
        )

    for kind in (QUATERNIONIC, OCTONIONIC):
        table = multiplication_table(_DIMS[kind])
        x = _batch_random(kind, n, rng)
        y = _batch_random(kind, n, rng)
        z = _batch_random(kind, n, rng)

        nx = _binner(table, x, x)
        ny = _binner(table, y, y)
        nxy = _binner(table, _bmul(table, x, y), _bmul(table, x, y))
        resid = np.abs(nxy - nx * ny) / (1.0 + np.abs(nx * ny))
        record(f"composition-law-{kind}", resid.max(), 1e-12)

        if kind == OCTONIONIC:
            def bassoc(a, b, c):
                return _bmul(table, _bmul(table, a, b), c) - _bmul(table, a, _bmul(table, b, c))

            alt = np.maximum(
                np.abs(bassoc(x, x, y)).max(axis=1),
                np.abs(bassoc(x, y, y)).max(axis=1),
            )
            record("alternativity-octonionic", (alt / _bscale(x, x, y)).max(), 1e-10)
        else:
            assoc = _bmul(table, _bmul(table, x, y), z) - _bmul(table, x, _bmul(table, y, z))
            resid = np.abs(assoc).max(axis=1) / _bscale(x, y, z)
            record("associativity-quaternionic", resid.max(), 1e-10)

        two_sided = _binner(table, x, y) - (
            _bmul(table, _bconj(x), y) + _bmul(table, _bconj(y), x)
        )[:, 0] / 2.0
        record(f"two-sided-inner-{kind}", (np.abs(two_sided) / _bscale(x, y)).max(), 1e-12)

        for chirality in ("L", "R"):
            X = _bcross(table, x, y, z, chirality)
            ortho = np.stack([np.abs(_binner(table, X, v)) for v in (x, y, z)]).max(axis=0)
            record(
                f"cross-orthogonality-{kind}-{chirality}",
                (ortho / _bscale(X, x)).max(),
                1e-10,
            )

            gram = np.empty((n, 3, 3), dtype=complex)
            for i, u in enumerate((x, y, z)):
                for j, v in enumerate((x, y, z)):
                    gram[:, i, j] = _binner(table, u, v)
            pyth = np.abs(np.linalg.det(gram) - _binner(table, X, X))
            record(
                f"cross-pythagorean-{kind}-{chirality}",
                (pyth / _bscale(x, y, z) ** 2).max(),
                1e-10,
            )

            swapped = _bcross(table, y, x, z, chirality)
            resid = np.abs(X + swapped).max(axis=1) / _bscale(x, y, z)
            record(f"cross-antisymmetry-{kind}-{chirality}", resid.max(), 1e-10)

        # frame orthonormality is exact, checked through the scalar ops
        units = basis_frame(kind)
        eta = np.diag([-1.0] + [1.0] * (_DIMS[kind] - 1))
        worst = 0.0
        for a, ua in enumerate(units):
            for b, ub in enumerate(units):
                worst = max(worst, abs(inner(ua, ub) - eta[a, b]))
        record(f"frame-orthonormality-{kind}", worst, 0.0)

    return records
