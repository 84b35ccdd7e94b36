"""Closed-form Bregman divergences, the co-divergence, and their convex splittings.

Every function here is a pure, vectorized map on floating-point arrays.
Points of R^n live on the *last* axis; scalars are points of R^1.  Batched
evaluation over sample clouds is done by stacking points along leading axes.

Conventions baked in (they matter, do not "simplify" them away):

* signed powers send 0 to 0 exactly, via an explicit branch;
* the Jacobian of the signed power at 0 is the zero matrix, via an explicit
  branch;
* the Heaviside function takes the value 1/2 at 0 (the second splitting of
  the co-divergence is wrong otherwise);
* ``0**0 == 1`` (numpy's native behaviour) is relied upon so that the
  co-divergence at p == 2 collapses to the product of increments;
* divergences that are nonnegative by convexity may round to tiny negative
  numbers; they are clamped to 0 only inside the documented rounding floor
  ``NEG_FLOOR * (1 + |w|^p + |z|^p)`` so that genuine sign violations stay
  visible.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError

__all__ = [
    "NEG_FLOOR",
    "heaviside",
    "spow",
    "signed_power",
    "signed_power_jacobian",
    "signed_power_remainder",
    "bregman_F",
    "bregman_H",
    "comparison_G",
    "codivergence_J",
    "codivergence_J_plus",
    "codivergence_J_minus",
    "codivergence_J_pp",
    "codivergence_J_mp",
    "convexity_witness_Y",
    "witness_hessian",
    "subgradient_d",
    "magnitude_scale",
]

# Rounding floor for quantities that are nonnegative in exact arithmetic.
NEG_FLOOR = 1e-12


def _check_p(p, minimum, strict=True, name="p"):
    p = float(p)
    if not np.isfinite(p):
        raise ParameterError(f"{name} must be finite, got {p}")
    if strict and not p > minimum:
        raise ParameterError(f"{name} must be > {minimum}, got {p}")
    if not strict and not p >= minimum:
        raise ParameterError(f"{name} must be >= {minimum}, got {p}")
    return p


def heaviside(a):
    """Step function with the midpoint convention: 1 for a>0, 0 for a<0, 1/2 at 0."""
    a = np.asarray(a, dtype=float)
    return np.where(a > 0, 1.0, np.where(a < 0, 0.0, 0.5))


def spow(a, kappa):
    """Elementwise signed power ``a |a|^{kappa-1}`` with ``spow(0, kappa) = 0``.

    This is the scalar map applied entrywise; for the R^n map along an axis
    use :func:`signed_power`.
    """
    kappa = _check_p(kappa, 0.0, name="kappa")
    a = np.asarray(a, dtype=float)
    if kappa >= 1.0:
        # |a|^(kappa-1) is finite at 0 (0**0 == 1), and the product restores 0.
        out = np.abs(a) ** (kappa - 1.0) * a
    else:
        out = np.zeros_like(a)
        mask = a != 0.0
        am = a[mask]
        out[mask] = np.abs(am) ** (kappa - 1.0) * am
    return out if out.ndim else float(out)


def _norm(z):
    return np.sqrt(np.sum(z * z, axis=-1))


def _as_points(w, z):
    """Broadcast w, z to a common (..., n) float shape (scalars become R^1 points)."""
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    if w.ndim == 0:
        w = w[None]
    if z.ndim == 0:
        z = z[None]
    w, z = np.broadcast_arrays(w, z)
    return w, z


def signed_power(z, kappa):
    """Signed power of a point of R^n: ``|z|^{kappa-1} z``, with 0 mapped to 0.

    The last axis of ``z`` is the coordinate axis; a bare scalar is a point
    of R^1 (where the map reduces to ``a |a|^{kappa-1}``).
    """
    kappa = _check_p(kappa, 0.0, name="kappa")
    z = np.asarray(z, dtype=float)
    scalar_in = z.ndim == 0
    if scalar_in:
        return spow(float(z), kappa)
    r = _norm(z)
    out = np.zeros_like(z)
    mask = r > 0.0
    if np.any(mask):
        out[mask] = r[mask, None] ** (kappa - 1.0) * z[mask]
    return out


def signed_power_jacobian(z, kappa):
    """Jacobian of the signed power map, ``|z|^{k-1}((k-1) zhat⊗zhat + Id)``.

    Returns an (..., n, n) array; the value at z = 0 is the zero matrix by
    convention (explicit branch, no reliance on 0*inf).
    """
    kappa = _check_p(kappa, 1.0, name="kappa")
    z = np.asarray(z, dtype=float)
    if z.ndim == 0:
        # One dimension: the map is a |a|^{kappa-1} with derivative kappa |a|^{kappa-1}.
        return 0.0 if z == 0.0 else float(kappa * np.abs(z) ** (kappa - 1.0))
    n = z.shape[-1]
    r = _norm(z)
    out = np.zeros(z.shape + (n,), dtype=float)
    mask = r > 0.0
    if np.any(mask):
        zm = z[mask]
        rm = r[mask]
        zhat = zm / rm[:, None]
        outer = zhat[:, :, None] * zhat[:, None, :]
        eye = np.eye(n)
        out[mask] = rm[:, None, None] ** (kappa - 1.0) * ((kappa - 1.0) * outer + eye)
    return out


def signed_power_remainder(w, z, kappa):
    """First-order Taylor remainder of the signed power map between w and z.

    ``z^<k> - w^<k> - J_<k>(w)(z - w)``; vector valued and sign changing.
    """
    kappa = _check_p(kappa, 1.0, name="kappa")
    w = np.asarray(w, dtype=float)
    scalar_in = w.ndim == 0 and np.ndim(z) == 0
    w, z = _as_points(w, z)
    delta = z - w
    r = _norm(w)
    jdelta = np.zeros_like(w)
    mask = r > 0.0
    if np.any(mask):
        wm = w[mask]
        rm = r[mask][:, None]
        dm = delta[mask]
        what = wm / rm
        proj = np.sum(what * dm, axis=-1, keepdims=True) * what
        jdelta[mask] = rm ** (kappa - 1.0) * ((kappa - 1.0) * proj + dm)
    out = signed_power(z, kappa) - signed_power(w, kappa) - jdelta
    if scalar_in:
        return float(out[0])
    return out


def magnitude_scale(w, z, p):
    """Conditioning scale 1 + |w|^p + |z|^p used by rounding floors and tolerances."""
    w, z = _as_points(w, z)
    return 1.0 + _norm(w) ** p + _norm(z) ** p


def _clamp_rounding(val, scale):
    """Clamp tiny negatives (within the rounding floor) to 0; keep larger ones."""
    floor = -NEG_FLOOR * scale
    return np.where((val < 0.0) & (val >= floor), 0.0, val)


def bregman_F(w, z, p):
    """Bregman divergence of |.|^p between points of R^n.

    ``|z|^p - |w|^p - p w^<p-1> . (z - w)``, nonnegative by convexity.
    At p == 2 this is evaluated through the exact identity |z - w|^2, which
    is cancellation-free; the generic formula is used otherwise, with tiny
    negative rounding clamped inside the documented floor.
    """
    p = _check_p(p, 1.0)
    w = np.asarray(w, dtype=float)
    scalar_in = w.ndim == 0 and np.ndim(z) == 0
    w, z = _as_points(w, z)
    if p == 2.0:
        out = np.sum((z - w) ** 2, axis=-1)
        return float(out) if scalar_in else out
    a = _norm(w)
    b = _norm(z)
    ip = np.sum(w * z, axis=-1)
    out = b**p
    mask = a > 0.0
    if np.any(mask):
        am = a[mask]
        out = np.asarray(out)
        out[mask] = (
            b[mask] ** p - am**p - p * am ** (p - 2.0) * (ip[mask] - am * am)
        )
    out = _clamp_rounding(out, 1.0 + a**p + b**p)
    return float(out) if scalar_in else out


def bregman_H(w, z, p):
    """Symmetrized Bregman divergence ``(p/2)(z - w).(z^<p-1> - w^<p-1>)``."""
    p = _check_p(p, 1.0)
    w = np.asarray(w, dtype=float)
    scalar_in = w.ndim == 0 and np.ndim(z) == 0
    w, z = _as_points(w, z)
    out = (p / 2.0) * np.sum(
        (z - w) * (signed_power(z, p - 1.0) - signed_power(w, p - 1.0)), axis=-1
    )
    out = _clamp_rounding(out, magnitude_scale(w, z, p))
    return float(out) if scalar_in else out


def comparison_G(w, z, p):
    """Comparison envelope ``|z - w|^2 (|w| v |z|)^{p-2}``.

    The point w = z = 0 is a removable singularity for p < 2 and returns 0.
    """
    p = _check_p(p, 1.0)
    w = np.asarray(w, dtype=float)
    scalar_in = w.ndim == 0 and np.ndim(z) == 0
    w, z = _as_points(w, z)
    gap = np.sum((z - w) ** 2, axis=-1)
    m = np.maximum(_norm(w), _norm(z))
    out = np.zeros_like(gap)
    mask = m > 0.0
    if np.any(mask):
        out[mask] = gap[mask] * m[mask] ** (p - 2.0)
    return float(out) if scalar_in else out


# ---------------------------------------------------------------------------
# Co-divergence of the pairing map (z1, z2) -> z1 z2^<p-1> and its splittings.
# Arguments w, z are points of R^2 on the last axis; first coordinates carry
# the "f" role, second coordinates the "g" role.
# ---------------------------------------------------------------------------


def _as_pairs(w, z):
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    if w.shape[-1] != 2 or z.shape[-1] != 2:
        raise ParameterError("co-divergence arguments must be points of R^2")
    w, z = np.broadcast_arrays(w, z)
    return w, z


def codivergence_J(w, z, p):
    """Second-order Taylor remainder of ``(z1, z2) -> z1 z2^<p-1>``; signed.

    ``z1 z2^<p-1> - w1 w2^<p-1> - w2^<p-1>(z1-w1) - (p-1) w1 |w2|^{p-2} (z2-w2)``.
    """
    p = _check_p(p, 2.0, strict=False)
    w, z = _as_pairs(w, z)
    w1, w2 = w[..., 0], w[..., 1]
    z1, z2 = z[..., 0], z[..., 1]
    sw2 = spow(w2, p - 1.0)
    return (
        z1 * spow(z2, p - 1.0)
        - w1 * sw2
        - sw2 * (z1 - w1)
        - (p - 1.0) * w1 * np.abs(w2) ** (p - 2.0) * (z2 - w2)
    )


def codivergence_J_plus(w, z, p):
    """Taylor remainder of ``z1 ((z2)_+)^{p-1}`` (first convex splitting, + side)."""
    p = _check_p(p, 2.0)
    w, z = _as_pairs(w, z)
    w1, w2 = w[..., 0], w[..., 1]
    z1, z2 = z[..., 0], z[..., 1]
    w2p = np.maximum(w2, 0.0)
    z2p = np.maximum(z2, 0.0)
    return (
        z1 * z2p ** (p - 1.0)
        - w1 * w2p ** (p - 1.0)
        - w2p ** (p - 1.0) * (z1 - w1)
        - (p - 1.0) * w1 * w2p ** (p - 2.0) * (z2 - w2)
    )


def codivergence_J_minus(w, z, p):
    """Taylor remainder of ``z1 ((z2)_-)^{p-1}`` (first convex splitting, - side)."""
    p = _check_p(p, 2.0)
    w, z = _as_pairs(w, z)
    w1, w2 = w[..., 0], w[..., 1]
    z1, z2 = z[..., 0], z[..., 1]
    w2m = np.maximum(-w2, 0.0)
    z2m = np.maximum(-z2, 0.0)
    return (
        z1 * z2m ** (p - 1.0)
        - w1 * w2m ** (p - 1.0)
        - w2m ** (p - 1.0) * (z1 - w1)
        + (p - 1.0) * w1 * w2m ** (p - 2.0) * (z2 - w2)
    )


def codivergence_J_pp(w, z, p):
    """Quasi-remainder of ``(z1)_+ ((z2)_+)^{p-1}``; needs the 1(0) = 1/2 convention."""
    p = _check_p(p, 2.0)
    w, z = _as_pairs(w, z)
    w1, w2 = w[..., 0], w[..., 1]
    z1, z2 = z[..., 0], z[..., 1]
    w1p = np.maximum(w1, 0.0)
    w2p = np.maximum(w2, 0.0)
    return (
        np.maximum(z1, 0.0) * np.maximum(z2, 0.0) ** (p - 1.0)
        - w1p * w2p ** (p - 1.0)
        - heaviside(w1) * w2p ** (p - 1.0) * (z1 - w1)
        - (p - 1.0) * w1p * w2p ** (p - 2.0) * (z2 - w2)
    )


def codivergence_J_mp(w, z, p):
    """Quasi-remainder of ``(z1)_- ((z2)_+)^{p-1}``; needs the 1(0) = 1/2 convention."""
    p = _check_p(p, 2.0)
    w, z = _as_pairs(w, z)
    w1, w2 = w[..., 0], w[..., 1]
    z1, z2 = z[..., 0], z[..., 1]
    w1m = np.maximum(-w1, 0.0)
    w2p = np.maximum(w2, 0.0)
    return (
        np.maximum(-z1, 0.0) * np.maximum(z2, 0.0) ** (p - 1.0)
        - w1m * w2p ** (p - 1.0)
        + heaviside(-w1) * w2p ** (p - 1.0) * (z1 - w1)
        - (p - 1.0) * w1m * w2p ** (p - 2.0) * (z2 - w2)
    )


_Y_VARIANTS = ("plain", "plus", "minus", "plusplus")


def convexity_witness_Y(z, p, variant="plain"):
    """The convex witnesses behind the co-divergence splittings.

    variant "plain":     z1 z2^{p-1} + |z|^p on the closed positive quadrant;
    variant "plus":      z1 ((z2)_+)^{p-1} + |z|^p (convex for z1 >= 0);
    variant "minus":     z1 ((z2)_-)^{p-1} + |z|^p (convex for z1 >= 0);
    variant "plusplus":  (z1)_+ ((z2)_+)^{p-1} + |z|^p (convex on all of R^2).

    Evaluation is global except for "plain", whose domain is the quadrant.
    """
    p = _check_p(p, 2.0, strict=False)
    if variant not in _Y_VARIANTS:
        raise ParameterError(f"unknown variant {variant!r}; expected one of {_Y_VARIANTS}")
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != 2:
        raise ParameterError("witness argument must be a point of R^2")
    z1, z2 = z[..., 0], z[..., 1]
    if variant == "plain":
        if np.any(z1 < 0.0) or np.any(z2 < 0.0):
            raise ParameterError("variant 'plain' is only defined on the closed positive quadrant")
        first = z1 * z2 ** (p - 1.0)
    elif variant == "plus":
        first = z1 * np.maximum(z2, 0.0) ** (p - 1.0)
    elif variant == "minus":
        first = z1 * np.maximum(-z2, 0.0) ** (p - 1.0)
    else:
        first = np.maximum(z1, 0.0) * np.maximum(z2, 0.0) ** (p - 1.0)
    return first + _norm(z) ** p


def witness_hessian(z, p):
    """Closed-form Hessian of the plain witness on the open positive quadrant.

    Returns an (..., 2, 2) array; raises off the open quadrant where the
    closed form does not apply.
    """
    p = _check_p(p, 2.0, strict=False)
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != 2:
        raise ParameterError("witness argument must be a point of R^2")
    z1, z2 = z[..., 0], z[..., 1]
    if np.any(z1 <= 0.0) or np.any(z2 <= 0.0):
        raise ParameterError("the closed-form Hessian needs z in the open positive quadrant")
    r = _norm(z)
    rp4 = r ** (p - 4.0)
    rp2 = r ** (p - 2.0)
    h = np.empty(z.shape[:-1] + (2, 2), dtype=float)
    h[..., 0, 0] = p * rp2 + p * (p - 2.0) * z1 * z1 * rp4
    off = (p - 1.0) * z2 ** (p - 2.0) + p * (p - 2.0) * z1 * z2 * rp4
    h[..., 0, 1] = off
    h[..., 1, 0] = off
    h[..., 1, 1] = (
        (p - 1.0) * (p - 2.0) * z1 * z2 ** (p - 3.0)
        + p * rp2
        + p * (p - 2.0) * z2 * z2 * rp4
    )
    return h


def subgradient_d(w, p):
    """Subgradient of the global witness ``(z1)_+((z2)_+)^{p-1} + |z|^p``.

    ``(1(w1)((w2)_+)^{p-1}, (p-1)(w1)_+((w2)_+)^{p-2}) + p w^<p-1>``; exactly
    the zero vector at w = 0.
    """
    p = _check_p(p, 2.0)
    w = np.asarray(w, dtype=float)
    if w.shape[-1] != 2:
        raise ParameterError("subgradient argument must be a point of R^2")
    w1, w2 = w[..., 0], w[..., 1]
    w2p = np.maximum(w2, 0.0)
    d = np.empty_like(w)
    d[..., 0] = heaviside(w1) * w2p ** (p - 1.0)
    d[..., 1] = (p - 1.0) * np.maximum(w1, 0.0) * w2p ** (p - 2.0)
    return d + p * signed_power(w, p - 1.0)
