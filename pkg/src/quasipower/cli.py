"""Command-line front end.

Commands: ``partitions``, ``kernel``, ``bound``, ``rate``, ``demo``.  Settings
can come from flags or from a ``key = value`` file given with ``--config``;
flags win.  Reports are CSV or JSON and embed the resolved configuration and
the package version.  Exit status: 0 success, 2 configuration error, 3 model
error, 4 numeric error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .berry_esseen import QuadConfig, verify_bound
from .errors import ConfigurationError, NumericError, QuasiPowerError
from .partition_lattice import enumerate_partitions, moebius_coefficient, weisner_sums
from .quasi_power import fit_log_slope
from . import smoothing_kernel as sk

log = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_MODEL, EXIT_NUMERIC = 0, 2, 3, 4
COMMANDS = ("partitions", "kernel", "bound", "rate", "demo")
MODELS = ("binomial", "correlated", "iid", "grammar", "dissection", "rademacher")
# all-pairs checks are quadratic in Bell(m); 877^2 meets at m = 7 is the practical limit
WEISNER_MAX_M = 7
CSV_COLUMNS = ("n", "phi_n", "sup_distance", "integral_term", "marginal_term_total", "kernel_term",
               "rhs_total", "holds")
DEFAULTS = {"m": None, "model": "binomial", "n": "16,32,...,1024", "T": "sqrt", "nodes": None, "panels": 2,
            "output": None, "format": "csv", "grammar": None, "classes": "all", "step_law": None}


@dataclass
class ExperimentConfig:
    command: str
    model: str = "binomial"
    m: int | None = None
    n_list: list[int] = field(default_factory=list)
    T_policy: str = "sqrt"
    nodes: int | None = None
    panels: int = 2
    output: str | None = None
    format: str = "csv"
    grammar: str | None = None
    classes: str = "all"
    step_law: str | None = None

    @property
    def quad(self) -> QuadConfig:
        return QuadConfig(self.nodes, self.panels)

    def T_for(self, phi_n: float) -> float:
        return math.sqrt(phi_n) if self.T_policy == "sqrt" else float(self.T_policy)

    def as_dict(self) -> dict:
        return {"command": self.command, "model": self.model, "m": self.m, "n_list": list(self.n_list),
                "T_policy": self.T_policy, "nodes": self.nodes, "panels": self.panels, "format": self.format,
                "grammar": self.grammar, "classes": self.classes, "step_law": self.step_law}


# --- parsing -------------------------------------------------------------------

def parse_n_list(text: str) -> list[int]:
    """Comma list of integers; ``a,b,...,c`` continues the progression from ``a, b`` up to ``c``.

    The progression is geometric when ``b = r a`` for an integer ``r > 1`` and
    ``c`` is hit exactly by it, arithmetic otherwise.
    """
    parts = [p.strip() for p in str(text).replace("…", "...").split(",") if p.strip()]
    try:
        if "..." in parts:
            i = parts.index("...")
            if i < 2 or i != len(parts) - 2:
                raise ConfigurationError(f"cannot expand {text!r}: use a,b,...,c")
            head = [int(p) for p in parts[:i]]
            a, b, end = head[-2], head[-1], int(parts[-1])
            out = head[:-1]
            if a > 0 and b % a == 0 and b // a > 1 and _geometric_hits(a, b // a, end):
                x = b
                while x <= end:
                    out.append(x)
                    x *= b // a
            else:
                step = b - a
                if step <= 0:
                    raise ConfigurationError("n list must increase")
                out += list(range(b, end + 1, step))
        else:
            out = [int(p) for p in parts]
    except ValueError as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"bad n list {text!r}") from exc
    if not out:
        raise ConfigurationError("empty n list")
    if any(b <= a for a, b in zip(out, out[1:])):
        raise ConfigurationError("n list must be strictly increasing")
    if out[0] < 1:
        raise ConfigurationError("n must be positive")
    return out


def _geometric_hits(a: int, r: int, end: int) -> bool:
    x = a
    while x < end:
        x *= r
    return x == end


def read_config_file(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment.  Dashes in keys become underscores."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quasipower", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--m", type=int, help="dimension")
    p.add_argument("--model", choices=MODELS)
    p.add_argument("--n", help="indices, e.g. 16,64,256 or 16,32,...,1024")
    p.add_argument("--T", help="truncation radius: a number or 'sqrt' for sqrt(phi_n)")
    p.add_argument("--nodes", type=int, help="Gauss-Legendre nodes per axis (even per panel)")
    p.add_argument("--panels", type=int, help="panels per axis")
    p.add_argument("--output", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--grammar", help="grammar file for --model grammar")
    p.add_argument("--classes", help="dissection size classes, e.g. '3;4+' or 'all'")
    p.add_argument("--step-law", dest="step_law", help="step-law table for --model iid")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(read_config_file(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    try:
        m = None if merged["m"] in (None, "") else int(merged["m"])
        nodes = None if merged["nodes"] in (None, "") else int(merged["nodes"])
        panels = int(merged["panels"])
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc
    if merged["model"] not in MODELS:
        raise ConfigurationError(f"unknown model {merged['model']!r}")
    if merged["format"] not in ("csv", "json"):
        raise ConfigurationError(f"unknown format {merged['format']!r}")
    T = str(merged["T"]).strip()
    if T != "sqrt":
        try:
            value = float(T)
        except ValueError as exc:
            raise ConfigurationError(f"T must be a number or 'sqrt', got {T!r}") from exc
        if not value > 0 or not math.isfinite(value):
            raise ConfigurationError("T must be positive and finite")
    cfg = ExperimentConfig(command=args.command, model=merged["model"], m=m, T_policy=T, nodes=nodes,
                           panels=panels, output=merged["output"], format=merged["format"],
                           grammar=merged["grammar"], classes=str(merged["classes"]), step_law=merged["step_law"])
    if args.command in ("bound", "rate", "demo"):
        cfg.n_list = parse_n_list(merged["n"])
    if args.command in ("bound", "rate"):
        for dim in (1, 2, 3):
            cfg.quad.rule(dim, 1.0)  # odd per-panel counts fail here
    return cfg


# --- models --------------------------------------------------------------------

def build_model(cfg: ExperimentConfig):
    from . import models

    if cfg.model == "binomial":
        model = models.binomial_model(cfg.m or 1)
    elif cfg.model == "correlated":
        model = models.correlated_model()
    elif cfg.model == "iid":
        if not cfg.step_law:
            raise ConfigurationError("--model iid needs --step-law")
        model = models.iid_model(models.parse_step_law(_read(cfg.step_law)))
    elif cfg.model == "grammar":
        g = models.GrammarSpec.parse(_read(cfg.grammar)) if cfg.grammar else models.example_grammar()
        model = models.grammar_model(g)
    elif cfg.model == "dissection":
        model = models.dissection_model(models.DissectionSpec.parse(cfg.classes))
    else:
        model = models.rademacher_model()
    if cfg.m is not None and cfg.m != model.dimension:
        raise ConfigurationError(f"--m {cfg.m} does not match the {cfg.model} model's dimension {model.dimension}")
    return model


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc}") from exc


# --- commands ------------------------------------------------------------------

def cmd_partitions(cfg: ExperimentConfig) -> dict:
    m = cfg.m or 3
    parts = enumerate_partitions(m)
    rows = [{"rgs": "".join(str(i + 1) for i in a.rgs()), "partition": str(a), "blocks": len(a.blocks),
             "moebius": moebius_coefficient(a)} for a in parts]
    checks = []
    if m <= WEISNER_MAX_M:
        for beta in parts[1:]:  # parts[0] is the top partition
            checks.extend(weisner_sums(beta).values())
    return {"m": m, "count": len(parts), "moebius_total": sum(r["moebius"] for r in rows), "rows": rows,
            "weisner_checked": m <= WEISNER_MAX_M, "weisner_pairs": len(checks), "weisner_max_abs": max((abs(c) for c in checks), default=0)}


def cmd_kernel(cfg: ExperimentConfig) -> dict:
    m = cfg.m or 1
    T = 1.0 if cfg.T_policy == "sqrt" else float(cfg.T_policy)
    kc = sk.kernel_constants(m, T)
    grid = np.round(np.arange(-12, 13) / 10.0, 12)
    fourier = max(abs(sk.fourier_transform_f_P(t) - float(sk.charfn_phi_P(t))) for t in grid)
    rows = {
        "lambda": kc.lam,
        "C1": kc.C1,
        "C2": kc.C2,
        "lambda_le_C1": kc.lam <= kc.C1,
        "quantile_residual": abs(sk.cdf_P(kc.lam) - 0.75 ** (1.0 / m)),
        "branch_residual": abs(1 - 6 * 0.25 + 6 * 0.125 - 2 * 0.5**3),
        "fourier_residual": fourier,
        "second_moment_charfn": sk.second_moment_from_charfn(),
        "orthant_residual": max(abs(sk.shifted_orthant_mass(m, T, th, kc.lam) - 0.75) for th in (1, -1)),
    }
    return {"m": m, "T": T, "values": rows}


def _bound_rows(cfg: ExperimentConfig, model) -> list[dict]:
    rows = []
    for n in cfg.n_list:
        x, y = model.standardized(n)
        phi_n = float(model.phi(n))
        rep = verify_bound(x, y, cfg.T_for(phi_n), cfg.quad)
        if not rep.holds:
            raise NumericError(f"bound violated at n={n}: lhs={rep.lhs_sup_distance!r} rhs={rep.rhs_total!r}")
        row = {"n": n, "phi_n": phi_n, "sup_distance": rep.lhs_sup_distance}
        row.update(rep.as_dict())
        rows.append(row)
    return rows


def cmd_bound(cfg: ExperimentConfig) -> dict:
    model = build_model(cfg)
    return {"model": model.name, "metadata": _jsonable(model.metadata), "rows": _bound_rows(cfg, model)}


def cmd_rate(cfg: ExperimentConfig) -> dict:
    out = cmd_bound(cfg)
    rows = out["rows"]
    out["slope"] = fit_log_slope([r["phi_n"] for r in rows], [r["sup_distance"] for r in rows]) \
        if len(rows) > 1 else None
    out["doubling_ratios"] = [b["sup_distance"] / a["sup_distance"] for a, b in zip(rows, rows[1:])
                              if b["n"] == 2 * a["n"]]
    return out


def cmd_demo(cfg: ExperimentConfig) -> dict:
    from .models import rademacher_demo

    rows = []
    for n in cfg.n_list:
        law, dist = rademacher_demo(n)
        rows.append({"n": n, "atom": float(law.coords(0)[-1]), "sup_distance": dist})
    return {"model": "rademacher", "rows": rows}


HANDLERS = {"partitions": cmd_partitions, "kernel": cmd_kernel, "bound": cmd_bound, "rate": cmd_rate,
            "demo": cmd_demo}


# --- output --------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _fmt(v) -> str:
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def render_json(cfg: ExperimentConfig, result: dict) -> str:
    doc = {"version": __version__, "config": cfg.as_dict(), "result": _jsonable(result)}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render_csv(cfg: ExperimentConfig, result: dict) -> str:
    buf = io.StringIO()
    buf.write(f"# quasipower {__version__}\n")
    buf.write("# config " + json.dumps(cfg.as_dict(), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    if cfg.command in ("bound", "rate"):
        w.writerow(CSV_COLUMNS)
        for r in result["rows"]:
            w.writerow([_fmt(r[c]) for c in CSV_COLUMNS])
        if cfg.command == "rate":
            buf.write(f"# slope {_fmt(result['slope']) if result['slope'] is not None else 'nan'}\n")
    elif cfg.command == "partitions":
        w.writerow(("rgs", "partition", "blocks", "moebius"))
        for r in result["rows"]:
            w.writerow([r["rgs"], r["partition"], r["blocks"], r["moebius"]])
        buf.write(f"# weisner_checked {_fmt(result['weisner_checked'])} weisner_pairs {result['weisner_pairs']} weisner_max_abs {result['weisner_max_abs']} "
                  f"moebius_total {result['moebius_total']}\n")
    elif cfg.command == "kernel":
        w.writerow(("quantity", "value"))
        for k, v in result["values"].items():
            w.writerow([k, _fmt(v)])
    else:
        w.writerow(("n", "atom", "sup_distance"))
        for r in result["rows"]:
            w.writerow([r["n"], _fmt(r["atom"]), _fmt(r["sup_distance"])])
    return buf.getvalue()


def run(cfg: ExperimentConfig) -> str:
    """Execute ``cfg`` and return the rendered report (also written to ``cfg.output`` if set)."""
    result = HANDLERS[cfg.command](cfg)
    text = render_json(cfg, result) if cfg.format == "json" else render_csv(cfg, result)
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(text)
    return text


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        text = run(cfg)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (QuasiPowerError, ValueError, MemoryError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    if not cfg.output:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
