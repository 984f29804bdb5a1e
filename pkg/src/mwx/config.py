"""Scenario configuration: JSON parsing, schema and physics validation.

Positions in the ``fdtd`` block (window, taper, probes) are measured in
source wavelengths 2*pi/k, and the grid length is ``wavelengths`` of them.
"""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from importlib import resources

import jsonschema

from .errors import DomainError
from .params import ModeSpec, derive_constitutive

SUBCOMMANDS = ("params", "planewave", "fdtd", "circuit", "quantum")
SCHEMA_VERSION = "1"


class ConfigError(Exception):
    """Invalid configuration. ``errors`` lists every problem found."""

    exit_code = 2

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class PhysicsError(ConfigError):
    exit_code = 3


def load_schema():
    text = resources.files("mwx").joinpath("schema/scenario-v1.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _pointer(path):
    return "/" + "/".join(str(p) for p in path)


def _schema_errors(doc):
    validator = jsonschema.Draft202012Validator(load_schema())
    out = []
    for err in validator.iter_errors(doc):
        if err.validator == "additionalProperties":
            allowed = set(err.schema.get("properties", {}))
            for key in sorted(set(err.instance) - allowed):
                out.append(f"{_pointer([*err.absolute_path, key])}: unknown key")
        else:
            out.append(f"{_pointer(err.absolute_path)}: {err.message}")
    return sorted(out)


def _complex_pair(v):
    return [float(v), 0.0] if isinstance(v, (int, float)) else [float(v[0]), float(v[1])]


def _defaults(sub, block, mode):
    b = copy.deepcopy(block)
    if sub == "planewave":
        b["J0"] = _complex_pair(b.get("J0", 1.0))
        b.setdefault("x", [0.0])
        b.setdefault("t", [0.0])
    elif sub == "fdtd":
        g = b.setdefault("grid", {})
        g.setdefault("wavelengths", 16.0)
        g.setdefault("nx", 512)
        g.setdefault("cfl", 0.5)
        g.setdefault("periods", 20.0)
        s = b.setdefault("source", {})
        s["J0"] = _complex_pair(s.get("J0", 1.0))
        s.setdefault("window", [0.5, g["wavelengths"] - 0.5])
        s.setdefault("ramp_periods", 8.0)
        s.setdefault("taper", 4.5)
        s.setdefault("taper_shape", "blackman-harris")
        s.setdefault("ramp_shape", "blackman-harris")
        b.setdefault("probes", [0.5 * g["wavelengths"]])
    elif sub == "circuit":
        s = b.setdefault("source", {})
        s.setdefault("Vs", 1.0)
        s.setdefault("Rs", 50.0)
        b.setdefault("network", [{"Zc": 50.0, "kl": 1.0}])
        b.setdefault("sweep", {"RL_min": 10.0, "RL_max": 100.0, "points": 91})
        b.setdefault("area", 1.0)
    elif sub == "quantum":
        b["alpha"] = _complex_pair(b.get("alpha", 2.0))
        if "reservoir" in b:
            b["reservoir"].setdefault("raisings", 1)
            b["reservoir"].setdefault("depth", 8)
    return b


@dataclass(frozen=True)
class ScenarioConfig:
    mode: dict
    subcommand: str
    block: dict
    output: dict

    def mode_spec(self) -> ModeSpec:
        m = self.mode
        kwargs = {k: m[k] for k in ("hbar", "charge", "charge_convention", "eps_singular") if k in m}
        return ModeSpec(mass=m["mass"], drive_frequency=m["nu"], particle_frequency=m["omega"], **kwargs)

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "mode": self.mode,
            self.subcommand: self.block,
            "output": self.output,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _physics_errors(cfg: ScenarioConfig):
    errs = []
    try:
        spec = cfg.mode_spec()
        c = derive_constitutive(spec)
    except DomainError as exc:
        label = "n = 1 singularity: " if "n = 1" in str(exc) else ""
        return [f"/mode: {label}{exc}"]
    b, sub = cfg.block, cfg.subcommand
    if sub == "fdtd":
        if c.n >= 1:
            errs.append("/mode: fdtd runs need nu < omega (n < 1)")
        g = b["grid"]
        if g["cfl"] > 0.95:
            errs.append(f"/fdtd/grid/cfl: {g['cfl']} exceeds 0.95")
        ppw = g["nx"] / g["wavelengths"]
        if ppw < 16:
            errs.append(f"/fdtd/grid/nx: {ppw:.1f} points per wavelength, need >= 16")
        lo, hi = b["source"]["window"]
        if not 0 <= lo < hi <= g["wavelengths"]:
            errs.append("/fdtd/source/window: must satisfy 0 <= lo < hi <= wavelengths")
        elif 2 * b["source"]["taper"] > hi - lo:
            errs.append("/fdtd/source/taper: tapers overlap inside the window")
        rp = b["source"]["ramp_periods"]
        if rp != 0 and rp < 2:
            errs.append("/fdtd/source/ramp_periods: must be 0 or >= 2")
        for i, p in enumerate(b["probes"]):
            if not 0 <= p <= g["wavelengths"]:
                errs.append(f"/fdtd/probes/{i}: outside the domain")
    elif sub == "circuit":
        if b["source"]["Rs"] == 0:
            errs.append("/circuit/source/Rs: must be nonzero")
        uses_mode = any(seg["Zc"] == "mode" for seg in b["network"])
        if (uses_mode or "flux" in b) and not c.n < 1:
            errs.append("/mode: matter-wave impedance and flux need n < 1")
        if "step" in b:
            z1, z2 = b["step"]["Z1"], b["step"]["Z2"]
            if z1 == 0 or z2 == 0 or z1 * z2 < 0:
                errs.append("/circuit/step: impedances must be nonzero with the same sign")
        sw = b["sweep"]
        if not sw["RL_min"] < sw["RL_max"]:
            errs.append("/circuit/sweep: RL_min must be below RL_max")
    elif sub == "quantum":
        from .quantum import required_truncation

        if "truncation" in b:
            need = required_truncation(complex(*b["alpha"]))
            if b["truncation"] < need:
                errs.append(f"/quantum/truncation: need N >= {need} for this alpha")
    return errs


def parse_config(text) -> ScenarioConfig:
    """Parse and fully validate a JSON scenario.

    Raises ConfigError (syntax or schema, every violation listed) or
    PhysicsError (inputs that break a physical precondition).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"JSON syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}"]) from None
    errs = _schema_errors(doc) if isinstance(doc, dict) else ["/: top level must be an object"]
    present = [s for s in SUBCOMMANDS if isinstance(doc, dict) and s in doc]
    if len(present) != 1:
        errs.append(f"/: exactly one subcommand block required, found {present or 'none'}")
    if errs:
        raise ConfigError(errs)

    sub = present[0]
    mode = dict(doc["mode"])
    for k in ("mass", "nu", "omega", "hbar", "charge", "eps_singular"):
        if k in mode:
            mode[k] = float(mode[k])
    out = dict(doc.get("output", {}))
    out.setdefault("format", "csv" if sub in ("fdtd", "circuit") else "json")
    out.setdefault("path", f"{sub}.{out['format']}")
    out.setdefault("stride", 1)
    cfg = ScenarioConfig(mode=mode, subcommand=sub, block=_defaults(sub, doc[sub], mode), output=out)

    errs = _physics_errors(cfg)
    if errs:
        raise PhysicsError(errs)
    return cfg


def wavelength(cfg: ScenarioConfig):
    c = derive_constitutive(cfg.mode_spec())
    return 2.0 * math.pi / c.k
