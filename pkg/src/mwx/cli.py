"""``mwx <subcommand> --config <path> [--out <dir>] [--jobs N]``.

Exit codes: 0 success, 2 config error, 3 physics or singularity error,
4 numerical blowup. ``MWX_LOG`` (error, info, debug) sets the log level.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import circuit, fdtd, planewave, quantum
from .config import SUBCOMMANDS, ConfigError, ScenarioConfig, parse_config
from .errors import ConsistencyError, DomainError, NumericalBlowupError
from .params import as_dict, derive_constitutive

log = logging.getLogger("mwx")

EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS, EXIT_BLOWUP = 0, 2, 3, 4


@dataclass
class Report:
    """Scalar summary plus an optional table destined for the output file."""

    constitutive: dict
    summary: dict = field(default_factory=dict)
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)


def fmt(v):
    """17 significant digits, so every double survives a text round trip."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return "%.17g" % float(v)


def _native(v):
    """JSON-ready scalar; floats keep their shortest exact repr, NaN becomes null."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, str):
        return v
    v = float(v)
    return v if math.isfinite(v) else None


def _cplx(pair):
    return complex(pair[0], pair[1])


def _split(prefix, z):
    return {prefix + "_re": z.real, prefix + "_im": z.imag}


def _points(spec):
    if isinstance(spec, dict):
        return np.linspace(spec["start"], spec["stop"], spec["num"])
    return np.asarray(spec, dtype=float)


# -- subcommands ---------------------------------------------------------


def _run_params(cfg, c, jobs):
    s = cfg.mode_spec()
    return Report(as_dict(c), {"q": s.q, "k_dB_ref": planewave.de_broglie_reference_wavenumber(c)})


def _run_planewave(cfg, c, jobs):
    b = cfg.block
    amps = planewave.plane_wave(_cplx(b["J0"]), c)
    summary = {}
    for name in ("J0", "rho0", "phi0", "A0", "F0", "G0"):
        summary.update(_split(name, getattr(amps, name)))
    summary["power_sign"] = planewave.wave_power_sign(amps.J0, c)
    cols = ["x", "t"] + [f"{q}_{p}" for q in ("J", "rho", "phi", "A", "F") for p in ("re", "im")]
    rows = []
    for x in _points(b["x"]):
        for t in _points(b["t"]):
            vals = planewave.evaluate_wave(amps, x, t)
            rows.append([x, t] + [getattr(vals[q], p) for q in ("J", "rho", "phi", "A", "F") for p in ("real", "imag")])
    return Report(as_dict(c), summary, cols, rows)


def _run_fdtd(cfg, c, jobs):
    b, g, s = cfg.block, cfg.block["grid"], cfg.block["source"]
    lam = 2.0 * math.pi / c.k
    grid = fdtd.Grid1D.for_drive(g["wavelengths"] * lam, g["nx"], c.v0, c.spec.nu, g["periods"], cfl=g["cfl"])
    src = fdtd.SourceSpec.from_constitutive(
        c, _cplx(s["J0"]), [w * lam for w in s["window"]],
        ramp_periods=s["ramp_periods"], taper=s["taper"] * lam,
        taper_shape=s["taper_shape"], ramp_shape=s["ramp_shape"],
    )
    rec = fdtd.run(grid, src, c, [p * lam for p in b["probes"]], stride=cfg.output["stride"])
    summary = {"nx": grid.nx, "nt": grid.nt, "dt": grid.dt, "cfl": grid.cfl,
               "points_per_wavelength": grid.points_per_wavelength(c.k)}
    summary.update(fdtd.residual_diagnostics(rec))
    summary["residual_spike"] = rec.residual_spike
    amps = planewave.plane_wave(src.J0, c)
    summary.update(_split("phi0_analytic", amps.phi0))
    try:
        region = (rec.probe_x.min(), rec.probe_x.max())
        ss = fdtd.steady_state_amplitude(rec, region, c.spec.nu, k=c.k)
        summary.update(_split("phi0_measured", ss["phi"]))
    except DomainError as exc:
        log.info("steady-state amplitude skipped: %s", exc)
    F = rec.F if rec.F is not None else np.full_like(rec.phi, np.nan)
    res = rec.residual_series
    rows = []
    for j, t in enumerate(rec.times):
        for p, x in enumerate(rec.probe_x):
            rows.append([t, x, rec.phi[j, p], rec.A[j, p], F[j, p],
                         res["gauss"][j], res["lorenz"][j], res["continuity"][j]])
    cols = ["t", "x", "phi", "A", "F", "gauss_res", "lorenz_res", "continuity_res"]
    return Report(as_dict(c), summary, cols, rows)


def _sweep_chunk(args):
    Vs, Rs, abcd, loads = args
    return circuit.load_sweep(Vs, Rs, circuit.TwoPort(np.asarray(abcd)), loads).tolist()


def _run_circuit(cfg, c, jobs):
    b = cfg.block
    Vs, Rs = b["source"]["Vs"], b["source"]["Rs"]
    # kl is the electrical length, so k = 1 and length = kl
    segs = [circuit.abcd_line_segment(c.Zf if seg["Zc"] == "mode" else seg["Zc"], 1.0, seg["kl"]) for seg in b["network"]]
    tp = circuit.cascade(segs)
    sw = b["sweep"]
    loads = np.linspace(sw["RL_min"], sw["RL_max"], sw["points"])
    if jobs > 1:
        chunks = [ch for ch in np.array_split(loads, jobs) if ch.size]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_sweep_chunk, [(Vs, Rs, tp.abcd, ch) for ch in chunks])
            PL = np.concatenate([np.asarray(p) for p in parts])
    else:
        PL = circuit.load_sweep(Vs, Rs, tp, loads)
    best = int(np.argmax(PL))
    summary = {"Rs": Rs, "RL_at_max": loads[best], "PL_max": PL[best], "det_abcd": tp.det.real}
    if "step" in b:
        st = circuit.step_reflection(b["step"]["Z1"], b["step"]["Z2"])
        summary.update({"step_r": st["r"], "step_t": st["t"], "step_R": st["R_power"], "step_T": st["T_power"]})
    if "flux" in b:
        pq = circuit.PortQuantities.from_flux(b["flux"], b["area"], c)
        summary.update(_split("I0", pq.I0))
        summary.update(_split("V0", pq.V0))
        summary["Pf"] = pq.Pf
    return Report(as_dict(c), summary, ["RL", "PL"], [[r, p] for r, p in zip(loads, PL)])


def _run_quantum(cfg, c, jobs):
    b, s = cfg.block, cfg.mode_spec()
    alpha = _cplx(b["alpha"])
    st = quantum.coherent_state(alpha, b.get("truncation"))
    H = quantum.matterwave_hamiltonian(s.omega, s.nu, st.dim, hbar=s.hbar)
    direct, _ = quantum.coherent_energy_closed_form(alpha, s.omega, s.nu, hbar=s.hbar)
    summary = {
        "N": st.dim, "norm": st.norm,
        "mean_n": quantum.expectation(quantum.number_operator(st.dim), st),
        "energy": quantum.expectation(H, st), "energy_closed_form": direct,
        "eigen_residual": quantum.eigen_residual(st, alpha),
    }
    if "mu_B" in b:
        summary["emits"] = quantum.emission_threshold(b["mu_B"], s.nu, s.hbar)
    if "reservoir" in b:
        r = b["reservoir"]
        js = quantum.joint_raising(r["Nr"], N=r["raisings"] + 2, times=r["raisings"], depth=r["depth"])
        if js.norm > 0:
            summary["reservoir_deficit"] = js.mean_reservoir_deficit()
            summary["mode_occupation"] = js.mean_mode_occupation()
        summary["removed_energy"] = quantum.removed_energy(r["raisings"], s.nu, s.hbar)
    amps = st.amplitudes
    rows = [[n, a.real, a.imag, abs(a) ** 2] for n, a in enumerate(amps)]
    return Report(as_dict(c), summary, ["n", "re", "im", "prob"], rows)


RUNNERS = {
    "params": _run_params,
    "planewave": _run_planewave,
    "fdtd": _run_fdtd,
    "circuit": _run_circuit,
    "quantum": _run_quantum,
}


# -- output --------------------------------------------------------------


def render(report: Report, fmt_name):
    if fmt_name == "json":
        doc = {
            "constitutive": {k: _native(v) for k, v in report.constitutive.items()},
            "summary": {k: _native(v) for k, v in report.summary.items()},
            "columns": report.columns,
            "rows": [[_native(v) for v in row] for row in report.rows],
        }
        return json.dumps(doc, indent=1) + "\n"
    lines = []
    if report.columns:
        lines.append(",".join(report.columns))
        lines.extend(",".join(fmt(v) for v in row) for row in report.rows)
    else:
        lines.append("key,value")
        items = {**report.constitutive, **report.summary}
        lines.extend(f"{k},{fmt(v)}" for k, v in items.items())
    return "\n".join(lines) + "\n"


def write_atomic(path, text):
    """Write via a temp file in the same directory, renamed into place."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".mwx-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def summary_table(cfg: ScenarioConfig, report: Report):
    rows = [("subcommand", cfg.subcommand)]
    rows += [(k, fmt(v)) for k, v in report.constitutive.items()]
    rows += [(k, fmt(v)) for k, v in report.summary.items()]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows) + "\n"


def run_scenario(cfg: ScenarioConfig, out_dir=".", jobs=1, stream=None):
    """Run ``cfg``, write its output file and print the summary. Returns (path, report)."""
    c = derive_constitutive(cfg.mode_spec())
    report = RUNNERS[cfg.subcommand](cfg, c, jobs)
    path = os.path.join(out_dir, cfg.output["path"])
    write_atomic(path, render(report, cfg.output["format"]))
    (stream or sys.stdout).write(summary_table(cfg, report))
    log.info("wrote %s", path)
    return path, report


def _parser():
    p = argparse.ArgumentParser(prog="mwx", description="Matter-wave field scenarios.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", required=True, help="scenario JSON file")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    return p


def main(argv=None):
    level = os.environ.get("MWX_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), format="%(levelname)s %(name)s: %(message)s")
    args = _parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text)
        if cfg.subcommand != args.subcommand:
            raise ConfigError([f"/: config holds a '{cfg.subcommand}' block but '{args.subcommand}' was requested"])
        if args.jobs < 1:
            raise ConfigError(["--jobs must be >= 1"])
        run_scenario(cfg, args.out, args.jobs)
    except ConfigError as exc:
        for e in exc.errors:
            print(f"error: {e}", file=sys.stderr)
        return exc.exit_code
    except NumericalBlowupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except (DomainError, ConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
