"""CSV rows and run manifests."""

from __future__ import annotations

import csv
import datetime as _dt
import io
from pathlib import Path

from . import __version__
from .optimize import OptimizationOutcome

CSV_FIELDS = [
    "distance_km", "emitter_budget", "eps_r", "scheme", "m", "depth", "branching", "n_node",
    "spacing_km", "t_gen_ns", "mu", "eta_t", "qber", "key_fraction", "rate_hz",
]


def fmt(value) -> str:
    """Shortest round-trip text for floats; plain text otherwise."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def outcome_row(outcome: OptimizationOutcome) -> dict[str, str]:
    p = outcome.problem
    row = {"distance_km": fmt(float(p.total_distance_km)), "emitter_budget": fmt(p.emitter_budget),
           "eps_r": fmt(float(p.eps_r))}
    if outcome.best is None:
        row.update({k: "" for k in CSV_FIELDS[3:]})
        row["scheme"] = "none"
        return row
    cfg, res = outcome.best_config, outcome.best
    row.update(
        scheme=cfg.scheme.label(),
        m=fmt(cfg.scheme.m),
        depth=fmt(cfg.tree.depth),
        branching=cfg.tree.label(),
        n_node=fmt(cfg.channel.n_node),
        spacing_km=fmt(cfg.channel.spacing_km),
        t_gen_ns=fmt(float(res.t_gen_ns)),
        mu=fmt(res.mu),
        eta_t=fmt(res.eta_t),
        qber=fmt(res.qber),
        key_fraction=fmt(res.key_fraction),
        rate_hz=fmt(res.rate_hz),
    )
    return row


def render_csv(rows: list[dict[str, str]], fields: list[str] = CSV_FIELDS) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def manifest_path(csv_path: Path) -> Path:
    return csv_path.with_name(csv_path.stem + ".manifest.txt")


def render_manifest(subcommand: str, params: dict[str, object], outputs: list[Path],
                    argv: list[str] | None = None) -> str:
    now = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    lines = [
        "# resolved parameters for this run; re-running with them reproduces the CSV exactly",
        f"tool = treerepeater {__version__}",
        f"timestamp = {now}",
        f"subcommand = {subcommand}",
    ]
    if argv is not None:
        lines.append("argv = " + " ".join(argv))
    lines += [f"output = {p}" for p in outputs]
    lines += [f"{k} = {fmt(v)}" for k, v in params.items()]
    return "\n".join(lines) + "\n"
