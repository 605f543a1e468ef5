"""Built-in frame-field catalog with analytic jets and point samplers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import AnalyticProvider, FiniteDifferenceProvider, FrameField


@dataclass(frozen=True)
class Scenario:
    name: str
    dim: int
    params: dict = field(default_factory=dict)
    callbacks: tuple = ()  # (value, d_value, dd_value)
    sampler: object = None

    def frame_field(self, provider: str = "analytic", h: float = 1e-5, h2: float = 1e-4) -> FrameField:
        value, d_value, dd_value = self.callbacks
        if provider == "analytic":
            return FrameField(self.dim, AnalyticProvider(value, d_value, dd_value))
        if provider == "fd":
            # value-only on purpose: the finite-difference route must be
            # independent of the analytic derivatives it is checked against
            return FrameField(self.dim, FiniteDifferenceProvider(value, h=h, h2=h2))
        raise ValueError(f"provider must be 'analytic' or 'fd', got {provider!r}")

    def sample_points(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.sampler(n, rng)


def _flat(dim):
    eye = np.eye(dim)
    zero3 = np.zeros((dim, dim, dim))
    zero4 = np.zeros((dim, dim, dim, dim))
    return (lambda p: eye.copy(), lambda p: zero3.copy(), lambda p: zero4.copy())


def _de_sitter(H):
    def value(p):
        s = np.exp(H * p[0])
        return np.diag([1.0, s, s, s])

    def d_value(p):
        de = np.zeros((4, 4, 4))
        s = np.exp(H * p[0])
        for i in (1, 2, 3):
            de[0, i, i] = H * s
        return de

    def dd_value(p):
        dde = np.zeros((4, 4, 4, 4))
        s = np.exp(H * p[0])
        for i in (1, 2, 3):
            dde[0, 0, i, i] = H * H * s
        return dde

    return value, d_value, dd_value


def _schwarzschild(M):
    def value(p):
        _, r, th, _ = p
        f = 1.0 - 2.0 * M / r
        return np.diag([np.sqrt(f), 1.0 / np.sqrt(f), r, r * np.sin(th)])

    def d_value(p):
        _, r, th, _ = p
        f = 1.0 - 2.0 * M / r
        df = 2.0 * M / r**2
        de = np.zeros((4, 4, 4))
        de[1, 0, 0] = 0.5 * df / np.sqrt(f)
        de[1, 1, 1] = -0.5 * df * f**-1.5
        de[1, 2, 2] = 1.0
        de[1, 3, 3] = np.sin(th)
        de[2, 3, 3] = r * np.cos(th)
        return de

    def dd_value(p):
        _, r, th, _ = p
        f = 1.0 - 2.0 * M / r
        df = 2.0 * M / r**2
        ddf = -4.0 * M / r**3
        dde = np.zeros((4, 4, 4, 4))
        dde[1, 1, 0, 0] = 0.5 * ddf / np.sqrt(f) - 0.25 * df * df * f**-1.5
        dde[1, 1, 1, 1] = -0.5 * ddf * f**-1.5 + 0.75 * df * df * f**-2.5
        dde[1, 2, 3, 3] = np.cos(th)
        dde[2, 1, 3, 3] = np.cos(th)
        dde[2, 2, 3, 3] = -r * np.sin(th)
        return dde

    return value, d_value, dd_value


def _warped_8d(strength):
    # diagonal achtbein, leg a warped as exp(alpha_a x_{a+1 mod 8})
    alphas = strength * (1.0 + np.arange(8) / 7.0)
    dirs = (np.arange(8) + 1) % 8

    def value(p):
        return np.diag(np.exp(alphas * p[dirs]))

    def d_value(p):
        de = np.zeros((8, 8, 8))
        s = np.exp(alphas * p[dirs])
        for a in range(8):
            de[dirs[a], a, a] = alphas[a] * s[a]
        return de

    def dd_value(p):
        dde = np.zeros((8, 8, 8, 8))
        s = np.exp(alphas * p[dirs])
        for a in range(8):
            dde[dirs[a], dirs[a], a, a] = alphas[a] ** 2 * s[a]
        return dde

    return value, d_value, dd_value


def _random_smooth_8d(amplitude, seed):
    # identity plus a seeded quadratic polynomial in the coordinates
    rng = np.random.default_rng(seed)
    lin = rng.uniform(-amplitude, amplitude, (8, 8, 8))
    quad = rng.uniform(-amplitude, amplitude, (8, 8, 8, 8))
    quad = 0.5 * (quad + np.transpose(quad, (0, 1, 3, 2)))
    eye = np.eye(8)

    def value(p):
        return eye + np.einsum("amn,n->am", lin, p) + np.einsum("amnr,n,r->am", quad, p, p)

    def d_value(p):
        return np.transpose(lin + 2.0 * np.einsum("amnr,r->amn", quad, p), (2, 0, 1))

    def dd_value(p):
        return np.transpose(2.0 * quad, (2, 3, 0, 1))

    return value, d_value, dd_value


def _box_sampler(dim, low, high):
    def sample(n, rng):
        return rng.uniform(low, high, (n, dim))

    return sample


def _schwarzschild_sampler(M):
    # exterior points only: r in [3M, 20M] clears the horizon at 2M, and
    # theta stays away from the axis where the frame degenerates
    def sample(n, rng):
        t = rng.uniform(-1.0, 1.0, n)
        r = rng.uniform(3.0 * M, 20.0 * M, n)
        th = rng.uniform(0.3, np.pi - 0.3, n)
        ph = rng.uniform(0.0, 2.0 * np.pi, n)
        return np.stack([t, r, th, ph], axis=1)

    return sample


_DEFAULTS = {
    "flat-4d": {},
    "schwarzschild": {"M": 1.0},
    "de-sitter": {"H": 0.1},
    "flat-8d": {},
    "diagonal-warped-8d": {"strength": 0.3},
    "random-smooth-8d": {"amplitude": 0.05, "seed": 7},
}


def scenario_names() -> tuple[str, ...]:
    return tuple(_DEFAULTS)


def scenario(name: str, **overrides) -> Scenario:
    """Build a catalog scenario; keyword overrides replace default parameters."""
    if name not in _DEFAULTS:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(_DEFAULTS)}")
    params = dict(_DEFAULTS[name])
    unknown = set(overrides) - set(params)
    if unknown:
        raise ValueError(f"scenario {name!r} does not take parameters {sorted(unknown)}")
    params.update(overrides)

    if name == "flat-4d":
        return Scenario(name, 4, params, _flat(4), _box_sampler(4, -1.0, 1.0))
    if name == "schwarzschild":
        M = float(params["M"])
        if M <= 0:
            raise ValueError("M must be positive")
        return Scenario(name, 4, params, _schwarzschild(M), _schwarzschild_sampler(M))
    if name == "de-sitter":
        return Scenario(name, 4, params, _de_sitter(float(params["H"])), _box_sampler(4, -1.0, 1.0))
    if name == "flat-8d":
        return Scenario(name, 8, params, _flat(8), _box_sampler(8, -1.0, 1.0))
    if name == "diagonal-warped-8d":
        strength = float(params["strength"])
        return Scenario(name, 8, params, _warped_8d(strength), _box_sampler(8, -1.0, 1.0))
    callbacks = _random_smooth_8d(float(params["amplitude"]), int(params["seed"]))
    return Scenario(name, 8, params, callbacks, _box_sampler(8, -0.5, 0.5))
