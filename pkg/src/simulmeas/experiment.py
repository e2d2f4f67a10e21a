"""Digital twin of the photon-pair experiment.

A down-conversion source emits polarization-singlet pairs; coincidence
post-selection keeps only the two-photon component. A partial polarizer --
a stack of glass plates at the Brewster angle -- sits in the object arm,
transmitting its high axis fully (t_p = 1) and the orthogonal axis with
amplitude t_s set by the plate count. Rotated by alpha from the vertical
|A+> direction, it turns the post-selected singlet into the protocol's
partially entangled family: alpha = 0 leaves the probe conditionals
orthogonal (c = 0) while biasing w_a_plus above 1/2; a perfect polarizer at
alpha = pi/4 gives a product state (c = 1) with w_a_plus = 1/2. For a fixed
stack, w and c cannot be tuned independently: only the rotation angles where
c matches sqrt(delta_a/(delta_a+delta_b)) reach the minimum simultaneous
uncertainty product, and `calibrate_alpha` finds them.

Coincidence counting is modeled as seeded multinomial sampling over the four
joint outcomes, with an optional visibility knob mixing in a uniform
background to mimic imperfect state purity. `estimate_report` rebuilds the
uncertainty product from raw counts exactly the way the measured data would
be processed: empirical marginals, rescaled two-point distributions, then
standard deviations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import protocol, qmath
from .errors import (
    CalibrationInfeasibleError,
    EmptyEnsembleError,
    RescalingSingularError,
    UsageError,
)

__all__ = [
    "PolarizerConfig",
    "PreparedState",
    "CoincidenceCounts",
    "NoiseModel",
    "RunResult",
    "singlet",
    "plate_transmittance",
    "polarizer_operator",
    "prepare",
    "calibrate_alpha",
    "sample_coincidences",
    "report_from_probabilities",
    "estimate_report",
    "run_setting",
    "run_state_setting",
]

DEFAULT_REFRACTIVE_INDEX = 1.5
DEFAULT_SHOTS = 100_000


# --------------------------------------------------------------------------
# source and polarizer

def singlet() -> np.ndarray:
    """Post-selected two-photon polarization singlet, (0, 1, -1, 0)/sqrt(2)."""
    return np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)


def plate_transmittance(refractive_index: float) -> float:
    """Per-plate s-polarization amplitude transmittance at Brewster incidence.

    Each plate has two air/glass interfaces; at the Brewster angle the
    single-interface s intensity transmittance is 4n^2/(1+n^2)^2, so the
    per-plate amplitude sqrt(T1*T2) equals that same expression. The p
    polarization passes without reflection.
    """
    n = float(refractive_index)
    if not n > 1.0:
        raise UsageError(f"refractive index must exceed 1, got {n}")
    return 4.0 * n * n / (1.0 + n * n) ** 2


@dataclass(frozen=True)
class PolarizerConfig:
    """Brewster-stack partial polarizer: plate count, glass index, rotation.

    ``alpha`` is the angle of the high-transmission axis measured from the
    vertical |A+> direction; ``t_p``/``t_s`` are the amplitude
    transmittances along/orthogonal to that axis. Use `from_plates` to
    derive ``t_s`` from the stack; direct construction allows idealized
    values such as a perfect polarizer (t_s = 0).
    """

    plate_count: int
    refractive_index: float
    alpha: float
    t_p: float = 1.0
    t_s: float = 0.0

    def __post_init__(self):
        if not (isinstance(self.plate_count, int) and self.plate_count >= 1):
            raise UsageError(f"plate_count must be a positive integer, got {self.plate_count}")
        if not self.refractive_index > 1.0:
            raise UsageError(f"refractive index must exceed 1, got {self.refractive_index}")
        if not math.isfinite(self.alpha):
            raise UsageError("alpha must be finite")
        if not 0.0 <= self.t_s <= self.t_p <= 1.0:
            raise UsageError(
                f"need 0 <= t_s <= t_p <= 1, got t_s={self.t_s}, t_p={self.t_p}")

    @classmethod
    def from_plates(cls, plate_count: int, alpha: float,
                    refractive_index: float = DEFAULT_REFRACTIVE_INDEX) -> "PolarizerConfig":
        t_s = plate_transmittance(refractive_index) ** plate_count
        return cls(plate_count=plate_count, refractive_index=float(refractive_index),
                   alpha=float(alpha), t_p=1.0, t_s=t_s)


def polarizer_operator(cfg: PolarizerConfig) -> np.ndarray:
    """Jones operator of the rotated stack in the A basis.

    R(alpha) diag(t_p, t_s) R(-alpha): Hermitian with eigenvalues
    {t_p, t_s}; the t_p eigenvector is the high-transmission axis at angle
    alpha from |A+>.
    """
    c, s = math.cos(cfg.alpha), math.sin(cfg.alpha)
    rot = np.array([[c, -s], [s, c]])
    return (rot @ np.diag([cfg.t_p, cfg.t_s]) @ rot.T).astype(complex)


@dataclass(frozen=True, eq=False)
class PreparedState:
    """Normalized post-selected state with its yield and decomposition."""

    state: np.ndarray
    success_probability: float
    decomposition: protocol.EntangledDecomposition


def prepare(cfg: PolarizerConfig) -> PreparedState:
    """Send the singlet's object photon through the polarizer and post-select.

    The squared norm of the filtered state is the post-selection yield,
    (t_p^2 + t_s^2)/2 independent of alpha by singlet isotropy.
    """
    raw = qmath.apply_to_object(polarizer_operator(cfg), singlet())
    p_ok = float(np.vdot(raw, raw).real)
    if p_ok < 1e-30:
        raise EmptyEnsembleError("polarizer blocks both axes; post-selection keeps nothing")
    state = raw / math.sqrt(p_ok)
    return PreparedState(state=state, success_probability=p_ok,
                         decomposition=protocol.decompose(state))


# --------------------------------------------------------------------------
# calibration to the minimum-product condition

_ALPHA_EDGE = 1e-4
_CALIBRATION_POINTS = 2000


def _optimality_residual(cfg: PolarizerConfig) -> float:
    d = prepare(cfg).decomposition
    delta_a, delta_b = protocol.sharp_deltas(d.w_a_plus)
    _, c_opt = protocol.min_product(delta_a, delta_b)
    return d.c - c_opt


def calibrate_alpha(plate_count: int,
                    refractive_index: float = DEFAULT_REFRACTIVE_INDEX,
                    bracket_points: int = _CALIBRATION_POINTS,
                    tol: float = 1e-10) -> list[float]:
    """Rotation angles where the prepared state attains the minimum product.

    Scans the optimality residual c(alpha) - sqrt(delta_a/(delta_a+delta_b))
    over alpha in (0, pi/4) on a ``bracket_points`` grid and bisects every
    sign change to ``tol``. Two roots are expected per stack; a different
    count triggers a warning, no root at all an error carrying the residual
    curve for diagnosis.
    """
    if plate_count < 1:
        raise UsageError(f"plate_count must be >= 1, got {plate_count}")

    def residual(alpha: float) -> float:
        return _optimality_residual(
            PolarizerConfig.from_plates(plate_count, alpha, refractive_index))

    grid = np.linspace(_ALPHA_EDGE, math.pi / 4.0 - _ALPHA_EDGE, bracket_points)
    values = [residual(a) for a in grid]

    roots: list[float] = []
    for i in range(len(grid) - 1):
        f_lo, f_hi = values[i], values[i + 1]
        if f_lo == 0.0:
            roots.append(float(grid[i]))
            continue
        if f_lo * f_hi < 0.0:
            lo, hi = float(grid[i]), float(grid[i + 1])
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                if residual(mid) * f_lo <= 0.0:
                    hi = mid
                else:
                    lo = mid
            roots.append(0.5 * (lo + hi))
    if values[-1] == 0.0:
        roots.append(float(grid[-1]))

    if not roots:
        k = int(np.argmax(values))
        raise CalibrationInfeasibleError(
            f"no rotation angle reaches the optimal product for {plate_count} plates "
            f"at index {refractive_index:g}: residual peaks at {values[k]:+.6f} "
            f"(alpha = {grid[k]:.6f} rad)",
            alpha_grid=grid, residuals=values)
    if len(roots) != 2:
        warnings.warn(
            f"{plate_count} plates at index {refractive_index:g}: expected 2 calibration "
            f"roots, found {len(roots)}", stacklevel=2)
    return sorted(roots)


# --------------------------------------------------------------------------
# coincidence sampling and estimation

@dataclass(frozen=True)
class NoiseModel:
    """Outcome-level noise: mix the ideal distribution with a uniform floor."""

    visibility: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.visibility <= 1.0:
            raise UsageError(f"visibility must be in [0, 1], got {self.visibility}")

    def apply(self, p: np.ndarray) -> np.ndarray:
        return self.visibility * p + (1.0 - self.visibility) / 4.0


@dataclass(frozen=True)
class CoincidenceCounts:
    """Joint outcome counts, ordered (B+,M+), (B+,M-), (B-,M+), (B-,M-)."""

    n_pp: int
    n_pm: int
    n_mp: int
    n_mm: int
    shots: int
    seed: int

    def __post_init__(self):
        counts = (self.n_pp, self.n_pm, self.n_mp, self.n_mm)
        if any(n < 0 for n in counts):
            raise UsageError("counts must be non-negative")
        if sum(counts) != self.shots or self.shots <= 0:
            raise UsageError(f"counts sum to {sum(counts)}, shots = {self.shots}")

    def as_array(self) -> np.ndarray:
        return np.array([self.n_pp, self.n_pm, self.n_mp, self.n_mm], dtype=float)


def sample_coincidences(p, shots: int, seed: int,
                        noise: NoiseModel = NoiseModel()) -> CoincidenceCounts:
    """Draw seeded multinomial coincidence counts from the joint distribution."""
    probs = np.asarray(p, dtype=float).ravel()
    if probs.shape != (4,):
        raise UsageError(f"expected 4 joint probabilities, got shape {probs.shape}")
    if np.any(probs < -1e-12) or abs(probs.sum() - 1.0) > 1e-9:
        raise UsageError(f"not a probability distribution: {probs} (sum {probs.sum():.12g})")
    if shots < 1:
        raise UsageError(f"shots must be >= 1, got {shots}")
    mixed = noise.apply(np.clip(probs, 0.0, None))
    mixed = mixed / mixed.sum()
    counts = np.random.default_rng(seed).multinomial(int(shots), mixed)
    return CoincidenceCounts(n_pp=int(counts[0]), n_pm=int(counts[1]),
                             n_mp=int(counts[2]), n_mm=int(counts[3]),
                             shots=int(shots), seed=int(seed))


def report_from_probabilities(p_hat, shots: int, c_measured: float) -> protocol.UncertaintyReport:
    """Uncertainty report from (empirical) joint outcome frequencies.

    Marginals give the two-point outcome distributions; rescaling by
    1/c and 1/sqrt(1-c^2) and taking standard deviations mirrors how
    measured coincidence data are reduced. The sharp uncertainties are
    recovered by inverting the closed forms (clamped at zero), and the
    product's standard error comes from the multinomial delta method.
    """
    c = float(c_measured)
    if not 0.0 < c < 1.0:
        raise RescalingSingularError(f"measured overlap c = {c} is singular")
    probs = np.asarray(p_hat, dtype=float).ravel()
    if probs.shape != (4,):
        raise UsageError(f"expected 4 outcome frequencies, got shape {probs.shape}")
    if shots < 1:
        raise UsageError(f"shots must be >= 1, got {shots}")

    x = float(probs[0] + probs[1])  # object B+ marginal
    y = float(probs[0] + probs[2])  # probe M+ marginal
    if min(x, 1.0 - x, y, 1.0 - y) <= 0.0:
        warnings.warn("a marginal has zero weight; uncertainty estimate is degenerate",
                      stacklevel=2)

    one_minus = 1.0 - c * c
    x_var = max(x * (1.0 - x), 0.0)
    y_var = max(y * (1.0 - y), 0.0)
    db_prime = 2.0 / c * math.sqrt(x_var)
    da_prime = 2.0 / math.sqrt(one_minus) * math.sqrt(y_var)
    product = da_prime * db_prime

    delta_a = math.sqrt(max(da_prime ** 2 - c * c / one_minus, 0.0))
    delta_b = math.sqrt(max(db_prime ** 2 - one_minus / (c * c), 0.0))

    # delta-method standard error of the product; x and y share the (B+,M+)
    # cell, hence the covariance term
    if x_var > 0.0 and y_var > 0.0:
        k2 = product / (2.0 * x_var) * (1.0 - 2.0 * x), product / (2.0 * y_var) * (1.0 - 2.0 * y)
        var_x = x_var / shots
        var_y = y_var / shots
        cov_xy = (float(probs[0]) - x * y) / shots
        variance = k2[0] ** 2 * var_x + k2[1] ** 2 * var_y + 2.0 * k2[0] * k2[1] * cov_xy
        stderr = math.sqrt(max(variance, 0.0))
    else:
        stderr = 0.0

    return protocol.UncertaintyReport(
        delta_a=delta_a, delta_b=delta_b,
        delta_a_prime=da_prime, delta_b_prime=db_prime,
        product_sharp=delta_a * delta_b,
        product_simultaneous=product,
        c_used=c, product_stderr=stderr,
    )


def estimate_report(counts: CoincidenceCounts, c_measured: float) -> protocol.UncertaintyReport:
    """Reduce raw coincidence counts to an uncertainty report."""
    return report_from_probabilities(counts.as_array() / counts.shots,
                                     counts.shots, c_measured)


# --------------------------------------------------------------------------
# end-to-end settings

class RunResult(NamedTuple):
    prepared: PreparedState
    counts: CoincidenceCounts
    report: protocol.UncertaintyReport


def run_setting(cfg: PolarizerConfig, shots: int, seed: int,
                noise: NoiseModel = NoiseModel()) -> RunResult:
    """Prepare, measure, sample and estimate one polarizer setting.

    The report's c_used is the prepared decomposition's overlap, i.e. a
    perfectly calibrated "measured" c.
    """
    prepared = prepare(cfg)
    c = prepared.decomposition.c
    if not 0.0 < c < 1.0:
        raise RescalingSingularError(
            f"prepared state has singular overlap c = {c:.6g} "
            f"(alpha = {cfg.alpha:.6g}, t_s = {cfg.t_s:.6g}); outcomes cannot be rescaled")
    basis = protocol.probe_basis(prepared.decomposition)
    pair = protocol.observable_pair()
    p = protocol.joint_probabilities(prepared.state, pair, basis)
    counts = sample_coincidences(p.ravel(), shots, seed, noise)
    return RunResult(prepared, counts, estimate_report(counts, c))


def run_state_setting(w_a_plus: float, c: float, shots: int, seed: int,
                      noise: NoiseModel = NoiseModel(), sign: int = +1
                      ) -> tuple[CoincidenceCounts, protocol.UncertaintyReport]:
    """Simulate a coincidence measurement at an explicit (w, c) point.

    The probe basis comes from the overlap's canonical conditional pair, so
    object eigenstates (w of 0 or 1) are measurable too.
    """
    if not 0.0 < float(c) < 1.0:
        raise RescalingSingularError(f"overlap c = {c} is singular; outcomes cannot be rescaled")
    s = protocol.make_equatorial(w_a_plus, sign)
    state = protocol.entangle(s, c)
    basis = protocol.probe_basis_for_overlap(c)
    p = protocol.joint_probabilities(state, protocol.observable_pair(), basis)
    counts = sample_coincidences(p.ravel(), shots, seed, noise)
    return counts, estimate_report(counts, c)
