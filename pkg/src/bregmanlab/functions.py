"""Analytic test functions with closed-form Fourier transforms.

Transform convention throughout the package:  fhat(xi) = integral of
f(x) exp(-i xi . x) dx,  so the kernel transform is exp(-t psi(xi)) and
P_t acts by multiplication with that symbol.

Three families, all in L^p for every p > 1:

* GaussianBump / GaussianMixture: closed values, gradients, Laplacians,
  L^p norms, and a closed heat-semigroup action (variance 2t per unit
  time, matching the speed-doubled Gaussian model);
* BandLimited: a smooth compactly supported spectral window, optionally
  modulated by a carrier frequency; its generator action is spectrally
  exact because the band is finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .quadrules import gl_panels

__all__ = ["GaussianBump", "GaussianMixture", "BandLimited", "is_gaussian_family"]


def _as_center(center, d):
    c = np.atleast_1d(np.asarray(center, dtype=float))
    if c.shape != (d,):
        raise ParameterError(f"center must have {d} coordinates")
    return c


@dataclass(frozen=True)
class GaussianBump:
    """amp * exp(-|x - center|^2 / (2 sigma^2)) on R^d."""

    amp: float = 1.0
    center: tuple = (0.0,)
    sigma: float = 1.0
    d: int = 1

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise ParameterError("width must be positive")
        if self.d not in (1, 2):
            raise ParameterError("dimension must be 1 or 2")
        object.__setattr__(self, "center", tuple(float(c) for c in np.atleast_1d(self.center)))
        if len(self.center) != self.d:
            raise ParameterError("center dimension mismatch")

    def _offsets(self, x):
        c = np.asarray(self.center)
        x = np.asarray(x, dtype=float)
        if self.d == 1:
            return x - c[0]
        return x - c

    def value(self, x):
        y = self._offsets(x)
        r2 = y * y if self.d == 1 else np.sum(y * y, axis=-1)
        return self.amp * np.exp(-r2 / (2.0 * self.sigma**2))

    def gradient(self, x):
        y = self._offsets(x)
        if self.d == 1:
            return -y / self.sigma**2 * self.value(x)
        return -y / self.sigma**2 * self.value(x)[..., None]

    def laplacian(self, x):
        y = self._offsets(x)
        r2 = y * y if self.d == 1 else np.sum(y * y, axis=-1)
        s2 = self.sigma**2
        return (r2 / s2 - self.d) / s2 * self.value(x)

    def fourier(self, xi):
        xi = np.asarray(xi, dtype=float)
        c = np.asarray(self.center)
        if self.d == 1:
            phase = xi * c[0]
            q = xi * xi
        else:
            phase = xi @ c
            q = np.sum(xi * xi, axis=-1)
        peak = self.amp * (2.0 * np.pi) ** (self.d / 2.0) * self.sigma**self.d
        return peak * np.exp(-self.sigma**2 * q / 2.0) * np.exp(-1j * phase)

    def lp_norm(self, p) -> float:
        """Closed form: |amp|^p (2 pi sigma^2 / p)^{d/2}, to the power 1/p."""
        return float(
            (abs(self.amp) ** p * (2.0 * np.pi * self.sigma**2 / p) ** (self.d / 2.0)) ** (1.0 / p)
        )

    def mass(self) -> float:
        return float(self.amp * (2.0 * np.pi) ** (self.d / 2.0) * self.sigma**self.d)

    def abs_mass(self) -> float:
        return abs(self.mass())

    def evolve_gaussian(self, t) -> "GaussianBump":
        """Heat-semigroup action of the speed-doubled Gaussian model."""
        if t < 0.0:
            raise ParameterError("time must be nonnegative")
        v = self.sigma**2 + 2.0 * t
        return GaussianBump(
            amp=self.amp * (self.sigma**2 / v) ** (self.d / 2.0),
            center=self.center,
            sigma=float(np.sqrt(v)),
            d=self.d,
        )

    def spectral_radius(self, tol=1e-17) -> float:
        return float(np.sqrt(2.0 * np.log(1.0 / tol)) / self.sigma)

    def support_radius(self, tol=1e-15) -> float:
        r = self.sigma * np.sqrt(2.0 * np.log(max(abs(self.amp), 1.0) / tol))
        return float(r + np.max(np.abs(self.center)))

    @property
    def components(self):
        return (self,)


@dataclass(frozen=True)
class GaussianMixture:
    """Finite signed combination of Gaussian bumps (shared dimension)."""

    bumps: tuple = ()

    def __post_init__(self):
        if not self.bumps:
            raise ParameterError("a mixture needs at least one component")
        dims = {b.d for b in self.bumps}
        if len(dims) != 1:
            raise ParameterError("mixture components must share the dimension")
        object.__setattr__(self, "bumps", tuple(self.bumps))

    @property
    def d(self) -> int:
        return self.bumps[0].d

    @property
    def components(self):
        return self.bumps

    def value(self, x):
        return sum(b.value(x) for b in self.bumps)

    def gradient(self, x):
        return sum(b.gradient(x) for b in self.bumps)

    def laplacian(self, x):
        return sum(b.laplacian(x) for b in self.bumps)

    def fourier(self, xi):
        return sum(b.fourier(xi) for b in self.bumps)

    def mass(self) -> float:
        return float(sum(b.mass() for b in self.bumps))

    def abs_mass(self) -> float:
        return float(sum(b.abs_mass() for b in self.bumps))

    def evolve_gaussian(self, t) -> "GaussianMixture":
        return GaussianMixture(tuple(b.evolve_gaussian(t) for b in self.bumps))

    def spectral_radius(self, tol=1e-17) -> float:
        return max(b.spectral_radius(tol) for b in self.bumps)

    def support_radius(self, tol=1e-15) -> float:
        return max(b.support_radius(tol) for b in self.bumps)


def _window(s):
    """C-infinity bump on (-1, 1), equal to 1 at 0, identically 0 outside."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - si * si))
    return out


@dataclass(frozen=True)
class BandLimited:
    """Wave packet with compactly supported spectrum (one dimension).

    The transform is a smooth window of half-width ``cutoff`` centered at
    ``+-carrier`` and shifted to ``center`` in space, so every symbol
    integral over it is finite and exactly band-limited to
    ``carrier + cutoff``.
    """

    amp: float = 1.0
    center: float = 0.0
    cutoff: float = 4.0
    carrier: float = 0.0
    d: int = field(default=1)

    def __post_init__(self):
        if self.d != 1:
            raise ParameterError("the band-limited family is one-dimensional")
        if self.cutoff <= 0.0 or self.carrier < 0.0:
            raise ParameterError("need cutoff > 0 and carrier >= 0")

    @property
    def band_limit(self) -> float:
        return self.carrier + self.cutoff

    def fourier(self, xi):
        xi = np.asarray(xi, dtype=float)
        window = 0.5 * (
            _window((xi - self.carrier) / self.cutoff) + _window((xi + self.carrier) / self.cutoff)
        )
        return self.amp * window * np.exp(-1j * xi * self.center)

    def value(self, x):
        return self._inverse(x, power=0)

    def gradient(self, x):
        return self._inverse(x, power=1)

    def laplacian(self, x):
        return self._inverse(x, power=2)

    def _inverse(self, x, power):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xf = np.atleast_1d(x)
        xmax = float(np.max(np.abs(xf - self.center))) if xf.size else 1.0
        n_panels = int(np.ceil(self.band_limit * max(xmax, 1.0) / 4.0)) + 16
        nodes, weights = gl_panels(0.0, self.band_limit, n_panels, n_nodes=12)
        fh = self.fourier(nodes)
        if power == 1:
            fh = fh * (1j * nodes)
        elif power == 2:
            fh = fh * (-(nodes**2))
        phase = np.outer(xf, nodes)
        out = (np.cos(phase) @ (weights * fh.real) - np.sin(phase) @ (weights * fh.imag)) / np.pi
        return float(out[0]) if scalar else out

    def mass(self) -> float:
        return float(self.fourier(np.array([0.0]))[0].real)

    def spectral_radius(self, tol=1e-17) -> float:
        return self.band_limit

    def support_radius(self, tol=1e-12) -> float:
        """Radius beyond which |f| stays below tol, found by coarse probing."""
        scale = max(1.0, 1.0 / self.cutoff)
        for r in np.geomspace(10.0 * scale, 4e3 * scale, 24):
            probe = np.linspace(0.9 * r, r, 8) + abs(self.center)
            if np.max(np.abs(self.value(probe))) < tol * max(abs(self.amp), 1e-30):
                return float(r + abs(self.center))
        return float(4e3 * scale + abs(self.center))

    @property
    def components(self):
        return (self,)


def is_gaussian_family(f) -> bool:
    return isinstance(f, (GaussianBump, GaussianMixture))
