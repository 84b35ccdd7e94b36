"""Randomized verification of the inequality and convexity layer.

Every routine here reports *observed* constants and worst cases; none of
them proves anything.  Empirical lower constants are upper bounds on the
true lower constant and vice versa, and the reports label them accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bregman as bg
from .errors import DegenerateSampleError, ParameterError
from .sampling import SampleStrategy, iter_blocks, sample_pairs

__all__ = [
    "ConstantEstimate",
    "VerificationReport",
    "COMPARABILITY_PAIRS",
    "LEMMA_A1_INEQUALITIES",
    "estimate_comparability",
    "check_lemma_A1",
    "counterexample_scan",
    "counterexample_ratio_formula",
    "check_convexity_suite",
    "midpoint_convexity_probe",
]

# Denominators below this are treated as underflow and skipped (counted).
UNDERFLOW_SKIP = 1e-280


@dataclass
class ConstantEstimate:
    """Observed two-sided comparability constants for a ratio scan."""

    pair: str
    p: float
    n: int
    lower: float  # largest observed c with c * denom <= numer
    upper: float  # smallest observed C with numer <= C * denom
    samples_used: int
    samples_skipped: int
    seed: int

    def bounded(self) -> bool:
        return (
            self.samples_used > 0
            and np.isfinite(self.lower)
            and np.isfinite(self.upper)
            and self.lower > 0.0
        )


@dataclass
class VerificationReport:
    """Outcome of one randomized campaign: observed extremes plus witnesses."""

    name: str
    passed: bool
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)


COMPARABILITY_PAIRS = ("F_vs_G", "H_vs_G", "F_vs_halfpower", "absJ_vs_G")


def _ratio_arrays(pair, w, z, p):
    if pair == "F_vs_G":
        return bg.bregman_F(w, z, p), bg.comparison_G(w, z, p)
    if pair == "H_vs_G":
        return bg.bregman_H(w, z, p), bg.comparison_G(w, z, p)
    if pair == "F_vs_halfpower":
        half = bg.signed_power(z, p / 2.0) - bg.signed_power(w, p / 2.0)
        return bg.bregman_F(w, z, p), np.sum(half * half, axis=-1)
    if pair == "absJ_vs_G":
        return np.abs(bg.codivergence_J(w, z, p)), bg.comparison_G(w, z, p)
    raise ParameterError(f"unknown comparability pair {pair!r}; expected one of {COMPARABILITY_PAIRS}")


def estimate_comparability(pair, p, n, strategy: SampleStrategy) -> ConstantEstimate:
    """Scan numerator/denominator ratios and report their observed range.

    The domination of |J_p| by the comparison envelope holds only for p >= 3
    and p = 2, and that precondition is enforced here.
    """
    p = float(p)
    if pair == "absJ_vs_G":
        if n != 2:
            raise ParameterError("the co-divergence comparison lives on pairs in R^2")
        if not (p >= 3.0 or p == 2.0):
            raise ParameterError("absJ_vs_G needs p >= 3 or p = 2 (it fails in between)")
    lower = np.inf
    upper = -np.inf
    used = 0
    skipped = 0
    for w, z in iter_blocks(strategy, n):
        numer, denom = _ratio_arrays(pair, w, z, p)
        ok = denom > UNDERFLOW_SKIP
        skipped += int(np.size(denom) - np.count_nonzero(ok))
        if not np.any(ok):
            continue
        ratios = numer[ok] / denom[ok]
        lower = min(lower, float(np.min(ratios)))
        upper = max(upper, float(np.max(ratios)))
        used += int(np.count_nonzero(ok))
    if used == 0:
        raise DegenerateSampleError(
            f"comparability scan {pair} produced no usable samples ({skipped} skipped)"
        )
    return ConstantEstimate(
        pair=pair,
        p=p,
        n=n,
        lower=lower,
        upper=upper,
        samples_used=used,
        samples_skipped=skipped,
        seed=strategy.seed,
    )


# name -> (kappa floor, lambda ceiling, numerator callable)
LEMMA_A1_INEQUALITIES = {
    "remainder_abs_power": (1.0, 2.0, lambda w, z, k: bg.bregman_F(w, z, k)),
    "remainder_signed_power": (
        1.0,
        2.0,
        lambda w, z, k: np.linalg.norm(bg.signed_power_remainder(w, z, k), axis=-1),
    ),
    "difference_abs_power": (
        0.0,
        1.0,
        lambda w, z, k: np.abs(
            np.linalg.norm(z, axis=-1) ** k - np.linalg.norm(w, axis=-1) ** k
        ),
    ),
    "difference_signed_power": (
        0.0,
        1.0,
        lambda w, z, k: np.linalg.norm(bg.signed_power(z, k) - bg.signed_power(w, k), axis=-1),
    ),
}


def check_lemma_A1(kappa, lam, strategy: SampleStrategy, n: int = 2) -> VerificationReport:
    """Observe the constants in the four mixed-power remainder/difference bounds.

    Each applicable inequality is scanned for the maximal ratio
    LHS / (|z-w|^lam (|w| v |z|)^{kappa-lam}); the scan fails only if a ratio
    is unbounded (non-finite), since the statement asserts finite constants.
    """
    kappa = float(kappa)
    lam = float(lam)
    if not 0.0 <= lam <= 2.0:
        raise ParameterError("lambda must lie in [0, 2]")
    if kappa <= 0.0:
        raise ParameterError("kappa must be positive")
    checks = {}
    failures = []
    for name, (kfloor, lam_max, numer_fn) in LEMMA_A1_INEQUALITIES.items():
        if kappa <= kfloor or lam > lam_max:
            continue
        worst = 0.0
        used = 0
        skipped = 0
        for w, z in iter_blocks(strategy, n):
            gap = np.linalg.norm(z - w, axis=-1)
            mx = np.maximum(np.linalg.norm(w, axis=-1), np.linalg.norm(z, axis=-1))
            denom = np.zeros_like(gap)
            ok = (gap > 0.0) & (mx > 0.0)
            denom[ok] = gap[ok] ** lam * mx[ok] ** (kappa - lam)
            ok &= denom > UNDERFLOW_SKIP
            skipped += int(np.size(denom) - np.count_nonzero(ok))
            if not np.any(ok):
                continue
            ratios = numer_fn(w[ok], z[ok], kappa) / denom[ok]
            worst = max(worst, float(np.max(ratios)))
            used += int(np.count_nonzero(ok))
        finite = bool(np.isfinite(worst)) and used > 0
        checks[name] = {
            "observed_constant": worst,
            "samples_used": used,
            "samples_skipped": skipped,
        }
        if not finite:
            failures.append({"inequality": name, "observed_constant": worst})
    return VerificationReport(
        name="lemma-A1",
        passed=not failures,
        checks=checks,
        failures=failures,
        meta={"kappa": kappa, "lambda": lam, "n": n, "seed": strategy.seed},
    )


def counterexample_ratio_formula(p, k):
    """Closed form of |J_p|/G_p along the family w=(1,1/k), z=(1,2/k)."""
    k = np.asarray(k, dtype=float)
    return k ** (3.0 - p) * abs(2.0 ** (p - 1.0) - p) / (1.0 + 4.0 / k**2) ** ((p - 2.0) / 2.0)


def counterexample_scan(p, k_values):
    """Evaluate |J_p|/G_p on the divergence family that defeats domination.

    Only p in (1,3) away from 2 makes the ratio blow up; other exponents are
    rejected because the scan would not demonstrate anything there.
    """
    p = float(p)
    if not (1.0 < p < 3.0) or p == 2.0:
        raise ParameterError("the counterexample family diverges only for p in (1,3) with p != 2")
    rows = []
    for k in k_values:
        k = float(k)
        if k < 1:
            raise ParameterError("k must be a positive integer scale")
        w = np.array([1.0, 1.0 / k])
        z = np.array([1.0, 2.0 / k])
        num = abs(float(bg.codivergence_J(w, z, p))) if p >= 2.0 else abs(
            float(_codivergence_any_p(w, z, p))
        )
        den = float(bg.comparison_G(w, z, p))
        ratio = num / den
        formula = float(counterexample_ratio_formula(p, k))
        rows.append(
            {
                "k": k,
                "ratio": ratio,
                "formula": formula,
                "rel_err": abs(ratio - formula) / formula,
            }
        )
    return rows


def _codivergence_any_p(w, z, p):
    # The Taylor remainder of z1 z2^<p-1> makes sense pointwise for 1 < p < 2
    # (away from w2 = 0); used only by the counterexample scan.
    w1, w2 = w[..., 0], w[..., 1]
    z1, z2 = z[..., 0], z[..., 1]
    sw2 = bg.spow(w2, p - 1.0)
    return (
        z1 * bg.spow(z2, p - 1.0)
        - w1 * sw2
        - sw2 * (z1 - w1)
        - (p - 1.0) * w1 * np.abs(w2) ** (p - 2.0) * (z2 - w2)
    )


def check_convexity_suite(p, strategy: SampleStrategy) -> VerificationReport:
    """Sample the convexity layer: splitting nonnegativity and the subgradient.

    Global samples exercise J_pp + F >= 0 and J_mp + F >= 0; samples with
    nonnegative first coordinates exercise J_plus + F >= 0 and
    J_minus + F >= 0; the subgradient inequality is checked globally and on
    the vertical semi-axis {w1 = 0, w2 > 0}, in both first-coordinate
    directions, where the witness is not differentiable.
    """
    p = float(p)
    if p <= 2.0:
        raise ParameterError("the splitting suite needs p > 2")
    checks = {}
    failures = []
    worst = {
        "split2_pp": np.inf,
        "split2_mp": np.inf,
        "split_plus": np.inf,
        "split_minus": np.inf,
        "subgradient": np.inf,
        "subgradient_axis": np.inf,
    }
    count = 0

    def record(key, values, wpts, zpts):
        floor = -bg.NEG_FLOOR * bg.magnitude_scale(wpts, zpts, p)
        worst[key] = min(worst[key], float(np.min(values)))
        bad = values < floor
        if np.any(bad):
            idx = int(np.argmin(values - floor))
            failures.append(
                {
                    "check": key,
                    "value": float(values[idx]),
                    "floor": float(floor[idx]),
                    "w": wpts[idx].tolist(),
                    "z": zpts[idx].tolist(),
                }
            )

    for w, z in iter_blocks(strategy, 2):
        count += w.shape[0]
        f = bg.bregman_F(w, z, p)
        record("split2_pp", bg.codivergence_J_pp(w, z, p) + f, w, z)
        record("split2_mp", bg.codivergence_J_mp(w, z, p) + f, w, z)

        wq = w.copy()
        zq = z.copy()
        wq[:, 0] = np.abs(wq[:, 0])
        zq[:, 0] = np.abs(zq[:, 0])
        fq = bg.bregman_F(wq, zq, p)
        record("split_plus", bg.codivergence_J_plus(wq, zq, p) + fq, wq, zq)
        record("split_minus", bg.codivergence_J_minus(wq, zq, p) + fq, wq, zq)

        gap = (
            bg.convexity_witness_Y(z, p, "plusplus")
            - bg.convexity_witness_Y(w, p, "plusplus")
            - np.sum(bg.subgradient_d(w, p) * (z - w), axis=-1)
        )
        record("subgradient", gap, w, z)

        # Pin w to the vertical semi-axis; pair with both signs of (z1 - w1).
        wa = w.copy()
        wa[:, 0] = 0.0
        wa[:, 1] = np.abs(wa[:, 1]) + 1e-3
        za = z.copy()
        half = z.shape[0] // 2
        za[:half, 0] = np.abs(za[:half, 0])
        za[half:, 0] = -np.abs(za[half:, 0])
        gap_axis = (
            bg.convexity_witness_Y(za, p, "plusplus")
            - bg.convexity_witness_Y(wa, p, "plusplus")
            - np.sum(bg.subgradient_d(wa, p) * (za - wa), axis=-1)
        )
        record("subgradient_axis", gap_axis, wa, za)

    checks = {key: {"worst_value": val} for key, val in worst.items()}
    return VerificationReport(
        name="convexity-suite",
        passed=not failures,
        checks=checks,
        failures=failures[:20],
        meta={"p": p, "samples": count, "seed": strategy.seed},
    )


def midpoint_convexity_probe(p, strategy: SampleStrategy) -> VerificationReport:
    """Midpoint convexity of the splitting witnesses on their convex domains."""
    p = float(p)
    if p < 2.0:
        raise ParameterError("the witnesses need p >= 2")
    failures = []
    worst = {}
    for variant, restrict in (("plus", True), ("minus", True), ("plusplus", False)):
        worst_gap = -np.inf
        for a, b in iter_blocks(strategy, 2):
            if restrict:
                a = a.copy()
                b = b.copy()
                a[:, 0] = np.abs(a[:, 0])
                b[:, 0] = np.abs(b[:, 0])
            mid = bg.convexity_witness_Y(0.5 * (a + b), p, variant)
            avg = 0.5 * (
                bg.convexity_witness_Y(a, p, variant) + bg.convexity_witness_Y(b, p, variant)
            )
            viol = mid - avg
            scale = bg.magnitude_scale(a, b, p)
            worst_gap = max(worst_gap, float(np.max(viol / scale)))
            bad = viol > bg.NEG_FLOOR * scale
            if np.any(bad):
                idx = int(np.argmax(viol / scale))
                failures.append({"variant": variant, "a": a[idx].tolist(), "b": b[idx].tolist()})
        worst[variant] = {"worst_scaled_violation": worst_gap}
    return VerificationReport(
        name="midpoint-convexity",
        passed=not failures,
        checks=worst,
        failures=failures[:20],
        meta={"p": p, "seed": strategy.seed},
    )
