"""Experiment configuration: flat key=value sections, paper-style defaults.

The config file is INI-style with sections cavity, detector, loss, pump,
sampling, output.  Every key is optional; omitted keys take the defaults
below, which reproduce the published setup (57 MHz output coupler, 5%
tapping, tau_h = 78%, tau_s0 = 0.95, kappa = 0.93).

Two defaults are assumptions rather than published numbers and are flagged
in every output header:

* eta0 = 0.5 - the trigger APD's intrinsic quantum efficiency is not stated.
* nu = 1e-9  - the effective mean noise count per trigger window for the
  single-trigger-mode description.  The naive dark-count estimate
  100 cps * 1 ns = 1e-7 overstates the noise fraction by roughly the ratio
  of the true multimode trigger rate to the single-mode one (~100x) and
  suppresses the Wigner negativity entirely; 1e-9 reproduces the observed
  dark-count-to-trigger-rate fraction.  Set detector.nu, or
  detector.noise_rate_cps to use rate * t directly.
"""

from __future__ import annotations

import configparser
import hashlib
import io
from dataclasses import dataclass, field
from math import pi

from .errors import ConfigError
from .model_core import (
    CavityParams,
    DetectorModel,
    LossModel,
    ModelParams,
    PumpRatio,
    pump_ratio_for_db,
)

_DEFAULTS: dict[str, dict[str, float]] = {
    "cavity": {"gamma_t": 57e6, "gamma_l": 1.2e6, "fsr": 573e6},
    # detector.b defaults to zeta0 / (2 pi), resolved after the cavity is known
    "detector": {"eta0": 0.5, "eta_f": 0.3, "t": 1e-9, "nu": 1e-9},
    "loss": {"tau": 0.95, "tau_h": 0.78, "tau_s0": 0.95, "kappa": 0.93},
    "pump": {"z": 0.3},
    "sampling": {"n": 50000, "seed": 12345},
}

_ALLOWED_KEYS = {
    "cavity": {"gamma_t", "gamma_l", "fsr"},
    "detector": {"eta0", "eta_f", "b", "t", "nu", "noise_rate_cps"},
    "loss": {"tau", "tau_h", "tau_s0", "kappa"},
    "pump": {"z", "target_db"},
    "sampling": {"n", "seed"},
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated bundle of model parameters plus pump and sampling settings."""

    model: ModelParams
    z: float
    target_db: float | None
    n_samples: int
    seed: int
    assumed_defaults: tuple[str, ...] = field(default=())

    @property
    def cavity(self) -> CavityParams:
        return self.model.cavity

    @property
    def detector(self) -> DetectorModel:
        return self.model.detector

    @property
    def loss(self) -> LossModel:
        return self.model.loss

    def canonical_items(self) -> list[tuple[str, str]]:
        c, d, l = self.cavity, self.detector, self.loss
        return [
            ("cavity.gamma_t", repr(c.gamma_t)),
            ("cavity.gamma_l", repr(c.gamma_l)),
            ("cavity.fsr", repr(c.fsr)),
            ("detector.eta0", repr(d.eta0)),
            ("detector.eta_f", repr(d.eta_f)),
            ("detector.b", repr(d.b)),
            ("detector.t", repr(d.t)),
            ("detector.nu", repr(d.nu)),
            ("loss.tau", repr(l.tau)),
            ("loss.tau_h", repr(l.tau_h)),
            ("loss.tau_s0", repr(l.tau_s0)),
            ("loss.kappa", repr(l.kappa)),
            ("pump.z", repr(self.z)),
            ("sampling.n", repr(self.n_samples)),
            ("sampling.seed", repr(self.seed)),
        ]

    def config_hash(self) -> str:
        text = "\n".join(f"{k}={v}" for k, v in self.canonical_items())
        return hashlib.sha256(text.encode()).hexdigest()[:12]

    def replace(self, **overrides) -> "ExperimentConfig":
        """Rebuild the config with section.key overrides (e.g. loss_tau=0.9)."""
        raw = {sec: dict(vals) for sec, vals in _sections_from(self).items()}
        for key, value in overrides.items():
            sec, _, k = key.partition("_")
            if sec not in raw or k not in _ALLOWED_KEYS.get(sec, set()):
                raise ConfigError(f"unknown config override {key!r}")
            raw[sec][k] = value
            if sec == "pump":  # keep exactly one of z / target_db
                raw[sec].pop("z" if k == "target_db" else "target_db", None)
        return _build(raw)


def _sections_from(cfg: ExperimentConfig) -> dict[str, dict]:
    c, d, l = cfg.cavity, cfg.detector, cfg.loss
    pump = {"target_db": cfg.target_db} if cfg.target_db is not None else {"z": cfg.z}
    return {
        "cavity": {"gamma_t": c.gamma_t, "gamma_l": c.gamma_l, "fsr": c.fsr},
        "detector": {"eta0": d.eta0, "eta_f": d.eta_f, "b": d.b, "t": d.t, "nu": d.nu},
        "loss": {"tau": l.tau, "tau_h": l.tau_h, "tau_s0": l.tau_s0, "kappa": l.kappa},
        "pump": pump,
        "sampling": {"n": cfg.n_samples, "seed": cfg.seed},
    }


def _to_float(section: str, key: str, value) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"config field [{section}] {key} = {value!r} is not a number") from None


def _build(raw: dict[str, dict]) -> ExperimentConfig:
    assumed = []
    vals: dict[str, dict[str, float]] = {}
    for section, allowed in _ALLOWED_KEYS.items():
        given = raw.get(section, {})
        for key in given:
            if key not in allowed:
                raise ConfigError(f"unknown config field [{section}] {key}")
        vals[section] = {k: _to_float(section, k, v) for k, v in given.items()}

    cav_v = {**_DEFAULTS["cavity"], **vals["cavity"]}
    cavity = CavityParams(**cav_v)

    det_v = {**_DEFAULTS["detector"], **vals["detector"]}
    if "noise_rate_cps" in det_v:
        if "nu" in vals["detector"]:
            raise ConfigError("config fields [detector] nu and noise_rate_cps are exclusive")
        det_v["nu"] = det_v.pop("noise_rate_cps") * det_v["t"]
    if "b" not in det_v:
        det_v["b"] = cavity.zeta0 / (2 * pi)
    if "eta0" not in vals["detector"]:
        assumed.append("eta0=0.5 (APD intrinsic efficiency not published)")
    if "nu" not in vals["detector"] and "noise_rate_cps" not in vals["detector"]:
        assumed.append("nu=1e-9 (effective single-mode noise count per window)")
    try:
        detector = DetectorModel(**det_v)
        loss = LossModel(**{**_DEFAULTS["loss"], **vals["loss"]})
    except Exception as exc:  # surface domain violations as config errors
        raise ConfigError(str(exc)) from exc
    model = ModelParams(cavity=cavity, detector=detector, loss=loss)

    pump_v = vals["pump"] if raw.get("pump") else dict(_DEFAULTS["pump"])
    if ("z" in pump_v) == ("target_db" in pump_v):
        raise ConfigError("config section [pump] needs exactly one of z, target_db")
    if "target_db" in pump_v:
        target_db = pump_v["target_db"]
        try:
            z = pump_ratio_for_db(target_db, model)
        except Exception as exc:
            raise ConfigError(f"config field [pump] target_db: {exc}") from exc
    else:
        target_db = None
        z = PumpRatio(pump_v["z"]).z

    samp = {**_DEFAULTS["sampling"], **vals["sampling"]}
    n = int(samp["n"])
    if n < 0 or samp["n"] != n:
        raise ConfigError(f"config field [sampling] n must be a nonnegative integer, got {samp['n']}")
    seed = int(samp["seed"])
    if samp["seed"] != seed:
        raise ConfigError(f"config field [sampling] seed must be an integer, got {samp['seed']}")

    return ExperimentConfig(
        model=model,
        z=z,
        target_db=target_db,
        n_samples=n,
        seed=seed,
        assumed_defaults=tuple(assumed),
    )


def default_config() -> ExperimentConfig:
    return _build({})


def load_config(path: str | None = None, text: str | None = None) -> ExperimentConfig:
    """Parse a config file (or literal text); missing keys take paper defaults."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if text is None:
        if path is None:
            return default_config()
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except OSError:
            raise
        except configparser.Error as exc:
            raise ConfigError(f"malformed config file {path}: {exc}") from exc
    else:
        try:
            parser.read_file(io.StringIO(text))
        except configparser.Error as exc:
            raise ConfigError(f"malformed config text: {exc}") from exc

    raw: dict[str, dict] = {}
    for section in parser.sections():
        if section not in _ALLOWED_KEYS:
            raise ConfigError(f"unknown config section [{section}]")
        raw[section] = dict(parser.items(section))
    return _build(raw)


def example_config_text() -> str:
    """A fully commented config with every default spelled out."""
    cfg = default_config()
    d = cfg.detector
    return (
        "# photonsub experiment configuration (all values optional)\n"
        "[cavity]\n"
        "gamma_t = 57e6      # output-coupler field decay rate, 1/s\n"
        "gamma_l = 1.2e6     # intracavity-loss field decay rate, 1/s\n"
        "fsr = 573e6         # free spectral range, Hz\n"
        "\n"
        "[detector]\n"
        "eta0 = 0.5          # APD quantum efficiency (assumed; not published)\n"
        "eta_f = 0.3         # trigger-path transmittance\n"
        f"b = {d.b!r}   # squeezed-vacuum half-bandwidth, Hz (default zeta0/2pi)\n"
        "t = 1e-9            # trigger window, s\n"
        "nu = 1e-9           # effective noise count per window (see README)\n"
        "# noise_rate_cps = 100   # alternative: nu = rate * t\n"
        "\n"
        "[loss]\n"
        "tau = 0.95          # tapping transmittance toward the signal (5% tap)\n"
        "tau_h = 0.78        # homodyne-channel transmittance\n"
        "tau_s0 = 0.95       # squeezing-dependent loss intercept\n"
        "kappa = 0.93        # quadratic loss coefficient\n"
        "\n"
        "[pump]\n"
        "z = 0.3             # pump amplitude ratio; or use target_db = -2.6\n"
        "\n"
        "[sampling]\n"
        "n = 50000\n"
        "seed = 12345\n"
    )
