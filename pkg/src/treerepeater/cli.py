"""Command-line interface: ``treerepeater {rate,optimize,sweep-emitters,sweep-distance,validate-mc}``."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict
from pathlib import Path

from .channel import ChannelParams
from .config import CONFIG_KEYS, ConfigError, HardwareParams, load_config
from .errors import DomainError, InfeasibleConfigError, ParameterError
from .mc import McConfig
from .optimize import OptimizationProblem, optimize, sweep_distance, sweep_emitters
from .rate import RepeaterConfig, evaluate
from .report import CSV_FIELDS, fmt, manifest_path, outcome_row, render_csv, render_manifest
from .timing import GateTimes, Scheme, SchemeKind
from .tree import TreeParams
from .validation import DEFAULT_MUS, compare, default_trees

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_INFEASIBLE = 4
EXIT_IO = 5

OUTPUT_DIR_ENV = "TREEREPEATER_OUTPUT_DIR"


class UsageError(Exception):
    pass


def parse_numbers(text: str, kind=float) -> list:
    """Comma list whose items are numbers or inclusive ``start:stop:step`` ranges."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            if ":" in item:
                start, stop, step = (kind(p) for p in item.split(":"))
                if step <= 0 or stop < start:
                    raise ValueError
                count = int((stop - start) / step + 1e-9)
                out.extend(start + i * step for i in range(count + 1))
            else:
                out.append(kind(item))
        except ValueError:
            raise UsageError(f"cannot parse {item!r} as a number or start:stop:step range") from None
    if not out:
        raise UsageError(f"empty list {text!r}")
    return out


def _add_hardware_flags(p: argparse.ArgumentParser, skip=()):
    p.add_argument("--config", type=Path, help="flat key = value parameter file")
    for key in CONFIG_KEYS:
        if key in skip:
            continue
        p.add_argument("--" + key.replace("_", "-"), dest=key, type=float, default=None,
                       help=f"override {key}")


def _add_search_flags(p: argparse.ArgumentParser):
    p.add_argument("--min-spacing", type=float, default=1.0, help="minimum node spacing in km (default 1)")
    p.add_argument("--d-max", type=int, default=5)
    p.add_argument("--n-max", type=int, default=24)
    p.add_argument("--n-node-max", type=int, default=None)
    p.add_argument("--no-rounds", action="store_true", help="exclude the m-round multiplexed variant")
    p.add_argument("--workers", type=int, default=1)


def _hardware(args) -> HardwareParams:
    values = load_config(args.config) if getattr(args, "config", None) else {}
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return HardwareParams.from_flat(values)


def _search_kwargs(args, hw: HardwareParams) -> dict:
    return dict(min_spacing_km=args.min_spacing, d_max=args.d_max, n_max=args.n_max,
                n_node_max=args.n_node_max, allow_rounds=not args.no_rounds,
                efficiencies=hw.efficiencies, l_att_km=hw.l_att_km)


def _output_path(path: Path) -> Path:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        return Path(base) / path
    return path


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc


def _write_csv(path: Path, body: str, subcommand: str, params: dict, argv) -> None:
    path = _output_path(path)
    _write(path, body)
    _write(manifest_path(path), render_manifest(subcommand, params, [path], argv))
    print(f"wrote {path}")


def _resolved(hw: HardwareParams, extra: dict) -> dict:
    params = dict(hw.as_flat())
    params.update(extra)
    return params


def cmd_rate(args, argv) -> int:
    hw = _hardware(args)
    tree = TreeParams.parse(args.tree)
    kind = SchemeKind(args.scheme)
    scheme = Scheme(kind, args.m if kind is SchemeKind.ROUNDS else 1)
    config = RepeaterConfig(tree, ChannelParams(args.distance, args.n_node, hw.l_att_km),
                            hw.efficiencies, hw.gates, scheme, hw.eps_r)
    result = evaluate(config)
    for key, value in asdict(result).items():
        print(f"{key}={fmt(value)}")
    if args.csv:
        row = {
            "distance_km": fmt(float(args.distance)), "emitter_budget": fmt(result.emitters),
            "eps_r": fmt(float(hw.eps_r)), "scheme": scheme.label(), "m": fmt(scheme.m),
            "depth": fmt(tree.depth), "branching": tree.label(), "n_node": fmt(args.n_node),
            "spacing_km": fmt(config.channel.spacing_km), "t_gen_ns": fmt(float(result.t_gen_ns)),
            "mu": fmt(result.mu), "eta_t": fmt(result.eta_t), "qber": fmt(result.qber),
            "key_fraction": fmt(result.key_fraction), "rate_hz": fmt(result.rate_hz),
        }
        params = _resolved(hw, {"tree": tree.label(), "distance_km": float(args.distance),
                                "n_node": args.n_node, "scheme": scheme.label(), "m": scheme.m})
        _write_csv(args.csv, render_csv([row]), "rate", params, argv)
    return EXIT_OK


def _search_params(args, hw, **extra) -> dict:
    return _resolved(hw, {"min_spacing_km": args.min_spacing, "d_max": args.d_max, "n_max": args.n_max,
                          "n_node_max": "auto" if args.n_node_max is None else args.n_node_max,
                          "allow_rounds": not args.no_rounds, **extra})


def cmd_optimize(args, argv) -> int:
    hw = _hardware(args)
    problem = OptimizationProblem(args.distance, args.budget, hw.eps_r, gates=hw.gates, **_search_kwargs(args, hw))
    outcome = optimize(problem, workers=args.workers)
    row = outcome_row(outcome)
    for key in CSV_FIELDS:
        print(f"{key}={row[key]}")
    print(f"emitters={outcome.best.emitters if outcome.best else ''}")
    print(f"explored={outcome.explored}")
    if args.out:
        params = _search_params(args, hw, distance_km=float(args.distance), emitter_budget=args.budget)
        _write_csv(args.out, render_csv([row]), "optimize", params, argv)
    return EXIT_OK if outcome.feasible else EXIT_INFEASIBLE


def cmd_sweep_emitters(args, argv) -> int:
    hw = _hardware(args)
    budgets = parse_numbers(args.budgets, int)
    rows = sweep_emitters(args.distance, budgets, hw.eps_r, workers=args.workers, gates=hw.gates,
                          **_search_kwargs(args, hw))
    body = render_csv([outcome_row(o) for _, o in rows])
    params = _search_params(args, hw, distance_km=float(args.distance), budgets=args.budgets)
    _write_csv(args.out, body, "sweep-emitters", params, argv)
    return EXIT_OK


def _parse_gate_sets(text: str | None, hw: HardwareParams) -> list[GateTimes]:
    if not text:
        return [hw.gates]
    sets = []
    for item in text.split(","):
        try:
            t_e, t_cz = (float(x) for x in item.split(":"))
        except ValueError:
            raise UsageError(f"gate set {item!r} must look like T_E:T_CZ (ns)") from None
        sets.append(GateTimes(hw.gates.t_p, t_e, t_cz, hw.gates.beta))
    return sets


def cmd_sweep_distance(args, argv) -> int:
    hw = _hardware(args)
    distances = parse_numbers(args.distances, float)
    eps_list = parse_numbers(args.eps_r_list, float) if args.eps_r_list else [hw.eps_r]
    gate_sets = _parse_gate_sets(args.gate_sets, hw)
    rows = sweep_distance(distances, args.budget, eps_list, gate_sets, workers=args.workers,
                          **_search_kwargs(args, hw))
    out = _output_path(args.out)
    params = _search_params(args, hw, distances=args.distances, emitter_budget=args.budget,
                            eps_r_list=",".join(fmt(e) for e in eps_list))
    for gi, gates in enumerate(gate_sets):
        body = render_csv([outcome_row(r.outcome) for r in rows if r.gates is gates])
        path = out if len(gate_sets) == 1 else out.with_name(f"{out.stem}.gates{gi}{out.suffix}")
        extra = {"gate_set": f"t_e_ns={fmt(gates.t_e)} t_cz_ns={fmt(gates.t_cz)}"}
        _write(path, body)
        _write(manifest_path(path), render_manifest("sweep-distance", {**params, **extra}, [path], argv))
        print(f"wrote {path}")
    return EXIT_OK


def cmd_validate_mc(args, argv) -> int:
    trees = [TreeParams.parse(t) for t in args.trees.split(",")] if args.trees else default_trees()
    mus = parse_numbers(args.mu, float) if args.mu else list(DEFAULT_MUS)
    cfg = McConfig(samples=args.samples, seed=args.seed, workers=args.workers)
    cells = compare(trees, mus, cfg, max_photons=args.max_photons, corrupt=args.corrupt)
    fields = ["branching", "mu", "analytic", "mc", "sigma", "deviation_sigmas", "result"]
    rows = []
    for c in cells:
        z = c.deviation / c.sigma if c.sigma > 0 else (0.0 if c.deviation == 0 else float("inf"))
        rows.append({"branching": c.tree.label(), "mu": fmt(float(c.mu)), "analytic": fmt(c.analytic),
                     "mc": fmt(c.estimate), "sigma": fmt(c.sigma), "deviation_sigmas": fmt(z),
                     "result": "PASS" if c.passed else "FAIL"})
        print(f"{c.tree.label():>10} mu={c.mu:<6g} analytic={c.analytic:.6f} mc={c.estimate:.6f} "
              f"sigma={c.sigma:.2e} dev={z:5.2f}sigma {'PASS' if c.passed else 'FAIL'}")
    failed = sum(not c.passed for c in cells)
    print(f"{len(cells) - failed}/{len(cells)} cells within 4 sigma")
    if args.out:
        params = {"samples": args.samples, "seed": args.seed, "max_photons": args.max_photons,
                  "trees": ",".join(t.label() for t in trees), "mu": ",".join(fmt(float(m)) for m in mus)}
        _write_csv(args.out, render_csv(rows, fields), "validate-mc", params, argv)
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treerepeater", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="evaluate one configuration")
    p.add_argument("--tree", required=True, help="branching vector, e.g. 4-4-4")
    p.add_argument("--distance", type=float, required=True, help="total distance in km")
    p.add_argument("--n-node", type=int, required=True, help="number of intermediate repeater stations")
    p.add_argument("--scheme", choices=[k.value for k in SchemeKind], default="multiplexed")
    p.add_argument("--m", type=int, default=1, help="rounds for --scheme rounds")
    p.add_argument("--csv", type=Path, help="also write a one-row CSV")
    _add_hardware_flags(p)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("optimize", help="best configuration for one distance and budget")
    p.add_argument("--distance", type=float, required=True)
    p.add_argument("--budget", type=int, required=True, help="emitter budget")
    p.add_argument("--out", type=Path)
    _add_hardware_flags(p)
    _add_search_flags(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep-emitters", help="best rate versus emitter budget")
    p.add_argument("--distance", type=float, required=True)
    p.add_argument("--budgets", required=True, help="e.g. 10:200:10 or 20,100")
    p.add_argument("--out", type=Path, default=Path("sweep_emitters.csv"))
    _add_hardware_flags(p)
    _add_search_flags(p)
    p.set_defaults(func=cmd_sweep_emitters)

    p = sub.add_parser("sweep-distance", help="best rate versus distance, eps_r and gate times")
    p.add_argument("--distances", required=True, help="e.g. 100:3000:100")
    p.add_argument("--budget", type=int, default=100)
    p.add_argument("--eps-r", dest="eps_r_list", default=None, help="comma list, e.g. 1e-5,1e-4,1e-3")
    p.add_argument("--gate-sets", default=None, help="comma list of T_E:T_CZ pairs in ns, e.g. 10:10,100:100")
    p.add_argument("--out", type=Path, default=Path("sweep_distance.csv"))
    _add_hardware_flags(p, skip=("eps_r",))
    _add_search_flags(p)
    p.set_defaults(func=cmd_sweep_distance)

    p = sub.add_parser("validate-mc", help="compare the analytic transmission with Monte Carlo")
    p.add_argument("--trees", default=None, help="comma list of branchings (default: d in {2,3}, n_i in {2,3,4})")
    p.add_argument("--mu", default=None, help="comma list of loss probabilities (default 0.05,0.1,0.3,0.5)")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=McConfig.seed)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-photons", type=int, default=10_000)
    p.add_argument("--out", type=Path)
    p.add_argument("--corrupt", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_validate_mc)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, argv)
    except UsageError as exc:
        parser.error(str(exc))
    except ConfigError as exc:
        print(f"error: bad configuration key {exc.key!r}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleConfigError as exc:
        print(f"error: infeasible configuration: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ParameterError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
