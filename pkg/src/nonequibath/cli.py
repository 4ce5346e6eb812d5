"""Command line interface.

    nonequibath {stationary|evolve|flux|sweep} --config run.json [--out path]

Data goes to stdout (or ``--out``), summaries to stderr. Exit codes:
0 ok, 2 configuration error, 3 model error, 4 numerics error.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import closedform, flux, kinetics
from .config import RunConfig, load_config
from .errors import ConfigError, MissingFieldEntry, ModelError, NumericsError
from .field import FieldSpec
from .levels import default_generic_tol

EXIT_OK, EXIT_CONFIG, EXIT_MODEL, EXIT_NUMERICS = 0, 2, 3, 4

# keep evolve output below roughly this many rows unless a stride is given
DEFAULT_MAX_ROWS = 1000


def fmt(x) -> str:
    """17 significant digits, round-trip exact and platform independent."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _csv(header, rows, trailer) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    lines.extend(f"# {t}" for t in trailer)
    return "\n".join(lines) + "\n"


def _resolved(cfg: RunConfig, command: str, **extra) -> list[str]:
    generic_tol = cfg.generic_tol if cfg.generic_tol is not None else default_generic_tol(cfg.system)
    out = [f"command={command}", "schema_version=1", f"field_mode={cfg.field.mode}"]
    if cfg.field.beta0 is not None:
        out.append(f"beta0={fmt(cfg.field.beta0)}")
    out += [f"tol={fmt(cfg.tol)}", f"generic_tol={fmt(generic_tol)}"]
    out += [f"{k}={v}" for k, v in extra.items()]
    return out


def _ratio(a, b):
    return math.inf if b == 0 else a / b


def _stationary_parts(cfg: RunConfig):
    gen = kinetics.build_generator(cfg.system, cfg.field, cfg.generic_tol)
    return gen, kinetics.stationary_state(gen)


def balance_satisfied(gen, residuals, tol) -> tuple[bool, float]:
    scale = gen.rate_scale
    worst = max((abs(r) for _, r in residuals), default=0.0)
    rel = 0.0 if scale == 0 else worst / scale
    return rel <= tol, rel


def cmd_stationary(cfg: RunConfig) -> tuple[str, str]:
    gen, rho = _stationary_parts(cfg)
    n = cfg.system.n_levels
    closed = None
    if n == 3:
        p = closedform.ThreeLevelParams.from_model(cfg.system, cfg.field)
        closed = closedform.normalized_stationary_3level(p)

    header = ["level", "energy", "rho"] + (["rho_closed_form"] if closed is not None else [])
    rows = []
    for i in range(n):
        row = [str(i), fmt(cfg.system.energies[i]), fmt(rho[i])]
        if closed is not None:
            row.append(fmt(closed[i]))
        rows.append(row)

    residuals = kinetics.detailed_balance_residuals(gen, rho)
    ok, rel = balance_satisfied(gen, residuals, cfg.tol)
    trailer = _resolved(cfg, "stationary")
    for line, r in residuals:
        trailer.append(f"residual lower={line.lower} upper={line.upper} omega={fmt(line.omega)} value={fmt(r)}")
    for rates in gen.lines:
        line = rates.line
        N = cfg.field.entry(line.omega).occupation
        predicted = math.inf if N == 0 else (N + 1.0) / N
        observed = _ratio(rho[line.lower], rho[line.upper])
        trailer.append(f"einstein_quotient lower={line.lower} upper={line.upper} omega={fmt(line.omega)} "
                       f"predicted={fmt(predicted)} observed={fmt(observed)}")
    if closed is not None:
        d = cfg.system.dipole_strengths
        if d[0, 1] == 0 and d[0, 2] > 0 and d[1, 2] > 0:
            p = closedform.ThreeLevelParams.from_model(cfg.system, cfg.field)
            predicted = closedform.double_einstein_quotient(p.beta2, p.beta3)
            trailer.append(f"double_einstein_quotient predicted={fmt(predicted)} "
                           f"observed={fmt(_ratio(rho[1], rho[0]))}")
            trailer.append(f"inversion={'yes' if closedform.inversion_condition(p.beta3, p.beta2) else 'no'}")
        dev = float(np.max(np.abs(closed - rho) / np.where(rho > 0, rho, 1.0)))
        trailer.append(f"closed_form_max_rel_dev={fmt(dev)}")
    trailer.append(f"detailed balance: {'satisfied' if ok else 'violated'} (max |residual| / rate scale = {fmt(rel)})")

    summary = (f"stationary state: {', '.join(f'{x:.6g}' for x in rho)}; "
               f"detailed balance {'satisfied' if ok else 'violated'}")
    return _csv(header, rows, trailer), summary


def _initial(cfg: RunConfig):
    if cfg.initial is not None:
        return np.array(cfg.initial)
    rho0 = np.zeros(cfg.system.n_levels)
    rho0[0] = 1.0
    return rho0


def cmd_evolve(cfg: RunConfig) -> tuple[str, str]:
    gen = kinetics.build_generator(cfg.system, cfg.field, cfg.generic_tol)
    max_rate = gen.max_escape_rate
    if max_rate == 0:
        raise ModelError("the field drives no transition; nothing to evolve")
    dt = cfg.dt if cfg.dt is not None else 0.05 / max_rate
    if cfg.t_final is not None:
        t_final = cfg.t_final
    else:
        nonzero = [r for lr in gen.lines for r in (lr.rate_down, lr.rate_up) if r > 0]
        t_final = 50.0 / min(nonzero)
    n_steps = math.ceil(t_final / dt) if t_final > 0 else 0
    stride = cfg.stride if cfg.stride is not None else max(1, math.ceil(n_steps / DEFAULT_MAX_ROWS))

    times, states = kinetics.evolve(gen, _initial(cfg), t_final, dt, stride)
    header = ["t"] + [f"rho_{i}" for i in range(cfg.system.n_levels)]
    rows = []
    for t, rho in zip(times, states):
        # roundoff clean-up happens here, never inside the integrator
        rho = np.clip(rho, 0.0, None)
        rho = rho / rho.sum()
        rows.append([fmt(t)] + [fmt(x) for x in rho])
    trace_drift = float(np.max(np.abs(states.sum(axis=1) - 1.0)))
    trailer = _resolved(cfg, "evolve", dt=fmt(dt), t_final=fmt(t_final), steps=n_steps, stride=stride)
    trailer.append(f"trace_drift={fmt(trace_drift)}")
    summary = f"evolved {n_steps} RK4 steps to t={t_final:.6g}; trace drift {trace_drift:.3g}"
    return _csv(header, rows, trailer), summary


def _flux_report(cfg: RunConfig, field: FieldSpec):
    gen = kinetics.build_generator(cfg.system, field, cfg.generic_tol)
    rho = kinetics.stationary_state(gen)
    fluxes = flux.line_fluxes(cfg.system, field, rho)
    regime = None
    s = None
    if cfg.system.n_levels == 3:
        p = closedform.ThreeLevelParams.from_model(cfg.system, field)
        if all(math.isfinite(b) for b in (p.beta1, p.beta2, p.beta3)):
            s = p.regime_gap
            regime = closedform.regime_classifier(p.beta1, p.beta2, p.beta3, cfg.tol)
    return rho, fluxes, s, regime


def cmd_flux(cfg: RunConfig) -> tuple[str, str]:
    rho, fluxes, s, regime = _flux_report(cfg, cfg.field)
    total = flux.total_photon_rate(fluxes)
    rows = [[fmt(w), fmt(phi)] for w, phi in fluxes.items()]
    trailer = [f"total_photon_rate={fmt(total)}", f"energy_rate={fmt(flux.energy_rate(fluxes))}"]
    if regime is not None:
        trailer.append(f"regime: {regime.value}, s={fmt(s)}")
    trailer += _resolved(cfg, "flux")
    summary = f"total photon rate {total:.6g}" + (f"; regime {regime.value}" if regime is not None else "")
    return _csv(["omega", "flux"], rows, trailer), summary


def _swept_field(field: FieldSpec, omega: float, beta: float) -> FieldSpec:
    k = field.index(omega)
    rows = [(e.omega, e.intensity, field.beta_at(e.omega)) for e in field.entries]
    rows[k] = (rows[k][0], rows[k][1], beta)
    return FieldSpec.from_betas(rows)


def cmd_sweep(cfg: RunConfig, jobs: int = 1) -> tuple[str, str]:
    if cfg.sweep is None:
        raise ConfigError("sweep", "missing required key for the sweep command")
    sweep = cfg.sweep
    cfg.field.index(sweep.omega)  # fail early on an unknown frequency
    n = cfg.system.n_levels
    values = sweep.values()

    def point(beta):
        return _flux_report(cfg, _swept_field(cfg.field, sweep.omega, beta))

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(point, values))

    header = [sweep.label, "s", "regime", "total_rate"] + [f"rho_{i}" for i in range(n)]
    rows = []
    for beta, (rho, fluxes, s, regime) in zip(values, results):
        rows.append([fmt(beta), "" if s is None else fmt(s), "" if regime is None else regime.value,
                     fmt(flux.total_photon_rate(fluxes))] + [fmt(x) for x in rho])
    trailer = _resolved(cfg, "sweep", param=sweep.label, omega=fmt(sweep.omega),
                        start=fmt(sweep.start), stop=fmt(sweep.stop), steps=sweep.steps)
    return _csv(header, rows, trailer), f"swept {sweep.label} over {len(values)} points"


COMMANDS = {
    "stationary": cmd_stationary,
    "evolve": cmd_evolve,
    "flux": cmd_flux,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nonequibath", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", required=True, help="path to the JSON run configuration")
    ap.add_argument("--out", default=None, help="write data here instead of stdout")
    ap.add_argument("--jobs", type=int, default=1, help="worker threads for sweep points")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "sweep":
            text, summary = cmd_sweep(cfg, jobs=args.jobs)
        else:
            text, summary = COMMANDS[args.command](cfg)
    except (ConfigError, MissingFieldEntry) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except NumericsError as exc:
        print(f"numerics error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS

    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(summary, file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
