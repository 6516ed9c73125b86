"""Closed-form Wigner model of a conditionally photon-subtracted squeezed vacuum.

The heralded state produced by tapping a below-threshold OPO output and
conditioning on a trigger click is, in this model, a normalized difference of
two centered axis-aligned phase-space Gaussians,

    W(x, p) = [R0(x, p) - R1(x, p)] / (1 - N),

where R0 is the unconditioned (no-click-information) component with unit
weight, and R1 is the click-conditioned component with weight N < 1.  Units
follow x_hat p_hat - p_hat x_hat = i, so the vacuum is pi^-1 exp(-x^2 - p^2).

Both components are nearly identical at realistic trigger efficiencies
(1 - N ~ 1e-7), so every public evaluator here works with log-space
differences (expm1/log1p) instead of subtracting the two Gaussians directly;
naive subtraction loses half the significand exactly where the physics lives.

All rates are field decay rates in 1/s.  The cavity amplitude FWHM in Hz is
zeta0/pi, which is how a "57 MHz" output-coupler rate coexists with a
"9.3 MHz" cavity bandwidth.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateParameterError,
    PumpDomainError,
    UnphysicalDensityError,
    UnphysicalLossError,
)

DEGENERACY_FLOOR = 1e-12


@dataclass(frozen=True)
class CavityParams:
    """OPO cavity rates: output coupling, intracavity loss, free spectral range."""

    gamma_t: float  # output-coupler field decay rate, 1/s
    gamma_l: float = 0.0  # intracavity-loss field decay rate, 1/s
    fsr: float = 573e6  # free spectral range, Hz

    def __post_init__(self):
        if not self.gamma_t > 0:
            raise PumpDomainError(f"gamma_t must be > 0, got {self.gamma_t}")
        if self.gamma_l < 0:
            raise PumpDomainError(f"gamma_l must be >= 0, got {self.gamma_l}")
        if not self.fsr > 0:
            raise PumpDomainError(f"fsr must be > 0, got {self.fsr}")

    @property
    def zeta0(self) -> float:
        """Total field decay rate (gamma_t + gamma_l) / 2, 1/s."""
        return (self.gamma_t + self.gamma_l) / 2

    @property
    def fwhm_hz(self) -> float:
        """Cavity amplitude FWHM in Hz (zeta0 / pi)."""
        return self.zeta0 / np.pi


@dataclass(frozen=True)
class DetectorModel:
    """Trigger-channel detection: efficiency chain and noise counts per window."""

    eta0: float  # intrinsic detector quantum efficiency
    eta_f: float  # filter-path transmittance
    b: float  # squeezed-vacuum half-bandwidth, Hz
    t: float  # trigger time window, s
    nu: float = 0.0  # mean noise count per window

    def __post_init__(self):
        for name in ("eta0", "eta_f"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise PumpDomainError(f"{name} must lie in [0, 1], got {v}")
        if not self.b > 0 or not self.t > 0:
            raise PumpDomainError("detector bandwidth b and window t must be > 0")
        if self.nu < 0:
            raise PumpDomainError(f"nu must be >= 0, got {self.nu}")
        if not 0.0 < self.eta <= 1.0:
            raise PumpDomainError(
                f"total trigger efficiency eta = eta0*eta_f*b*t = {self.eta:.3e} "
                "must lie in (0, 1]"
            )
        if self.b * self.t > 0.1:
            warnings.warn(
                f"b*t = {self.b * self.t:.3g} is not << 1; the single-trigger-mode "
                "description degrades",
                stacklevel=2,
            )

    @property
    def eta(self) -> float:
        """Total quantum efficiency of the trigger mode, eta0*eta_f*b*t."""
        return self.eta0 * self.eta_f * self.b * self.t


@dataclass(frozen=True)
class LossModel:
    """Tapping, homodyne-channel, and squeezing-level-dependent losses."""

    tau: float  # tapping-beam-splitter transmittance toward the signal
    tau_h: float  # homodyne-channel effective transmittance
    tau_s0: float  # intercept of the squeezing-dependent loss
    kappa: float  # quadratic loss coefficient

    def __post_init__(self):
        for name in ("tau", "tau_h"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise PumpDomainError(f"{name} must lie in (0, 1], got {v}")

    def tau_s(self, z):
        """Squeezing-level-dependent transmittance tau_s0 - kappa z^2.

        Hard error outside [0, 1]; clamping would silently change the model.
        """
        z = np.asarray(z, dtype=float)
        ts = self.tau_s0 - self.kappa * z * z
        if np.any(ts < 0.0) or np.any(ts > 1.0):
            raise UnphysicalLossError(
                f"unphysical loss model at this z: tau_s(z) outside [0, 1] "
                f"(tau_s0={self.tau_s0}, kappa={self.kappa})"
            )
        return ts if ts.ndim else float(ts)


@dataclass(frozen=True)
class PumpRatio:
    """Pump amplitude relative to threshold, z = sqrt(P_pump / P_th)."""

    z: float

    def __post_init__(self):
        if not 0.0 <= self.z < 1.0:
            raise PumpDomainError(f"pump ratio must lie in [0, 1), got {self.z}")


@dataclass(frozen=True)
class GaussianComponent:
    """One axis-aligned Gaussian, density = weight/(pi sqrt(vx vp)) exp(-x^2/vx - p^2/vp)."""

    vx: float
    vp: float
    weight: float

    def __post_init__(self):
        if not (self.vx > 0 and self.vp > 0):
            raise DegenerateParameterError("Gaussian component variances must be > 0")
        if self.weight < 0:
            raise DegenerateParameterError("Gaussian component weight must be >= 0")


@dataclass(frozen=True)
class ModelParams:
    """Full parameter set of the conditional-state model."""

    cavity: CavityParams
    detector: DetectorModel
    loss: LossModel


def _check_signed_pump(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if np.any(z <= -1.0):
        raise PumpDomainError("pump ratio z <= -1 is outside the model domain")
    if np.any(np.abs(z) >= 1.0):
        raise PumpDomainError("need |z| < 1 (below threshold)")
    return z


def signal_variance(z, cavity: CavityParams, loss: LossModel):
    """Unconditioned quadrature variance a(z) of the tapped signal mode.

    Evaluate at +z for the squeezed quadrature and at -z for the
    antisqueezed one.  a(0) = 1 (vacuum).
    """
    z = _check_signed_pump(z)
    ts = loss.tau_s(np.abs(z))
    shape = (2.0 * ts * cavity.gamma_t / cavity.zeta0) * z * (z + 3.0) / ((z + 1.0) * (z + 2.0) ** 2)
    out = 1.0 - loss.tau + loss.tau * (1.0 - shape)
    return out if np.ndim(out) else float(out)


def trigger_excess(z, cavity: CavityParams, detector: DetectorModel, loss: LossModel):
    """b(z) - 1: photon-statistics coefficient of the trigger mode, minus one.

    Returned in this form because the model only ever uses b - 1, and b is so
    close to 1 that forming it first would discard precision.
    """
    z = _check_signed_pump(z)
    ts = loss.tau_s(np.abs(z))
    out = (1.0 - loss.tau) * (-ts * cavity.gamma_t * detector.t * z / (z + 1.0))
    return out if np.ndim(out) else float(out)


def trigger_variance(z, cavity: CavityParams, detector: DetectorModel, loss: LossModel):
    """b(z) = tau + (1-tau)(1 - tau_s(|z|) gamma_t T z/(z+1))."""
    out = 1.0 + np.asarray(trigger_excess(z, cavity, detector, loss))
    return out if np.ndim(z) else float(out)


def cross_correlation(z, cavity: CavityParams, detector: DetectorModel, loss: LossModel):
    """Signal-trigger coupling amplitude c(z); zero at z=0 and at tau=1."""
    z = _check_signed_pump(z)
    ts = loss.tau_s(np.abs(z))
    pref = np.sqrt((1.0 - loss.tau) * loss.tau)
    scale = 2.0 * ts * cavity.gamma_t * np.sqrt(detector.t) / np.sqrt(cavity.zeta0)
    out = pref * scale * z / ((z + 1.0) * (z + 2.0))
    return out if np.ndim(out) else float(out)


def _variance_drop(z, params: ModelParams, eta):
    """a(z) - sigma^2(z) = c^2 eta / (2 + (b-1) eta), computed without cancellation."""
    c = cross_correlation(z, params.cavity, params.detector, params.loss)
    denom = 2.0 + trigger_excess(z, params.cavity, params.detector, params.loss) * eta
    if np.any(np.abs(denom) < DEGENERACY_FLOOR):
        raise DegenerateParameterError("vanishing denominator 2 + (b(z)-1) eta")
    return c * c * eta / denom


def conditioned_variance(z, params: ModelParams, eta: float | None = None):
    """Click-conditioned variance sigma^2(z) = a(z) - c^2 eta / (2 + (b-1) eta).

    Never exceeds a(z); equality holds iff eta = 0 or c(z) = 0.
    """
    if eta is None:
        eta = params.detector.eta
    a = signal_variance(z, params.cavity, params.loss)
    out = a - _variance_drop(z, params, eta)
    return out if np.ndim(out) else float(out)


def _log_heralding_weight(z, params: ModelParams, eta, nu):
    ex_p = trigger_excess(z, params.cavity, params.detector, params.loss) * eta
    ex_m = trigger_excess(-np.asarray(z), params.cavity, params.detector, params.loss) * eta
    if np.any(ex_p <= -2.0) or np.any(ex_m <= -2.0):
        raise DegenerateParameterError("negative radicand in the heralding weight")
    return -nu - 0.5 * (np.log1p(ex_p / 2.0) + np.log1p(ex_m / 2.0))


def heralding_weight(z, params: ModelParams, eta: float | None = None, nu: float | None = None):
    """Weight N(eta, nu) of the click-conditioned Gaussian component.

    1 - N is the click probability per trigger window; N -> 1 as the trigger
    information vanishes (eta -> 0 and nu -> 0 at z = 0).
    """
    if eta is None:
        eta = params.detector.eta
    if nu is None:
        nu = params.detector.nu
    out = np.exp(_log_heralding_weight(z, params, eta, nu))
    return out if np.ndim(out) else float(out)


def gaussian_component(
    z, params: ModelParams, eta: float | None = None, nu: float | None = None
) -> GaussianComponent:
    """Phase-space Gaussian R(x, p; eta, nu) after the homodyne channel.

    With (eta, nu) = (0, 0) this is the unconditioned component of weight
    exactly 1.
    """
    if eta is None:
        eta = params.detector.eta
    if nu is None:
        nu = params.detector.nu
    th = params.loss.tau_h
    vx = 1.0 - th + th * conditioned_variance(z, params, eta)
    vp = 1.0 - th + th * conditioned_variance(-z, params, eta)
    if eta == 0.0 and nu == 0.0:
        weight = 1.0
    else:
        weight = heralding_weight(z, params, eta, nu)
    return GaussianComponent(vx=float(vx), vp=float(vp), weight=float(weight))


def _stable_pieces(z, params: ModelParams):
    """Shared precomputation for wigner/marginal: variances, drops, log N."""
    eta = params.detector.eta
    nu = params.detector.nu
    th = params.loss.tau_h
    a_p = signal_variance(z, params.cavity, params.loss)
    a_m = signal_variance(-z, params.cavity, params.loss)
    vx1 = 1.0 - th + th * a_p  # unconditioned
    vp1 = 1.0 - th + th * a_m
    dvx = th * _variance_drop(z, params, eta)  # vx1 - vx2 >= 0
    dvp = th * _variance_drop(-z, params, eta)
    ln_n = _log_heralding_weight(z, params, eta, nu)
    one_minus_n = -np.expm1(ln_n)
    if np.any(np.abs(one_minus_n) <= DEGENERACY_FLOOR):
        raise DegenerateParameterError(
            "no heralding events: conditional state undefined (1 - N below 1e-12)"
        )
    return vx1, vp1, dvx, dvp, ln_n, one_minus_n


def wigner(x, p, z, params: ModelParams):
    """Wigner function W(x, p) of the heralded state at pump ratio z.

    Accepts scalars or broadcastable arrays for x and p (and for z, provided
    x and p stay scalar).  The vacuum peak under this unit convention is
    1/pi, and |W| <= 1/pi everywhere.
    """
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    vx1, vp1, dvx, dvp, ln_n, one_minus_n = _stable_pieces(z, params)
    vx2, vp2 = vx1 - dvx, vp1 - dvp
    g1 = np.exp(-x * x / vx1 - p * p / vp1) / (np.pi * np.sqrt(vx1 * vp1))
    # ln of the (unit-weight) conditioned/unconditioned Gaussian ratio
    ln_ratio = (
        -0.5 * (np.log1p(-dvx / vx1) + np.log1p(-dvp / vp1))
        - x * x * dvx / (vx1 * vx2)
        - p * p * dvp / (vp1 * vp2)
    )
    out = g1 * (-np.expm1(ln_n + ln_ratio)) / one_minus_n
    return out if out.ndim else float(out)


def wigner_origin_curve(z_values, params: ModelParams) -> np.ndarray:
    """W(0, 0) evaluated pointwise over a grid of pump ratios in [0, 1)."""
    z_values = np.asarray(z_values, dtype=float)
    if np.any(z_values < 0.0) or np.any(z_values >= 1.0):
        raise PumpDomainError("origin-curve grid must lie within [0, 1)")
    return np.atleast_1d(wigner(0.0, 0.0, z_values, params))


def marginal_density(theta, q, z, params: ModelParams):
    """Homodyne quadrature density P_theta(q) at local-oscillator phase theta.

    The marginal of the Gaussian difference along the rotated quadrature:
    each component contributes a unit-norm 1-D Gaussian of variance
    (vx cos^2 theta + vp sin^2 theta)/2.
    """
    theta = np.asarray(theta, dtype=float)
    q = np.asarray(q, dtype=float)
    vx1, vp1, dvx, dvp, ln_n, one_minus_n = _stable_pieces(z, params)
    cs, sn = np.cos(theta) ** 2, np.sin(theta) ** 2
    v1 = (vx1 * cs + vp1 * sn) / 2.0
    dv = (dvx * cs + dvp * sn) / 2.0
    v2 = v1 - dv
    n1 = np.exp(-0.5 * q * q / v1) / np.sqrt(2.0 * np.pi * v1)
    ln_ratio = -0.5 * np.log1p(-dv / v1) - 0.5 * q * q * dv / (v1 * v2)
    out = n1 * (-np.expm1(ln_n + ln_ratio)) / one_minus_n
    if np.any(out < -1e-9):
        raise UnphysicalDensityError(
            f"unphysical parameter combination: marginal density reached {np.min(out):.3e}"
        )
    return out if np.ndim(out) else float(out)


def squeezing_db(z, params: ModelParams) -> tuple[float, float]:
    """(squeezed, antisqueezed) mode-integrated variances in dB re vacuum."""
    a_p = signal_variance(z, params.cavity, params.loss)
    a_m = signal_variance(-z, params.cavity, params.loss)
    return float(10.0 * np.log10(a_p)), float(10.0 * np.log10(a_m))


def pump_ratio_for_db(target_db: float, params: ModelParams, z_max: float = 0.999) -> float:
    """Invert squeezing_db on its decreasing branch: z with 10 log10 a(z) = target.

    The squeezing-dependent loss makes a(z) non-monotone; only targets above
    the global minimum (reached before the loss takes over) are resolvable.
    """
    from scipy.optimize import brentq, minimize_scalar

    if target_db >= 0.0:
        raise PumpDomainError("target squeezing must be negative (in dB)")

    def db_of(zz):
        return squeezing_db(zz, params)[0]

    res = minimize_scalar(db_of, bounds=(1e-6, z_max), method="bounded")
    if target_db < res.fun:
        raise PumpDomainError(
            f"target {target_db} dB below the model's reachable minimum {res.fun:.3f} dB"
        )
    return float(brentq(lambda zz: db_of(zz) - target_db, 1e-9, res.x, xtol=1e-12))
