"""nuspectra command line: spectrum, wavefunction, validate, sweep.

Settings are merged in this order, later winning: built-in defaults, the
file named by NUSPECTRA_DEFAULTS, the file given with --config, flags.
Config files hold flat ``key = value`` lines; ``#`` starts a comment.

Exit codes: 0 success, 1 usage or config error, 2 domain or validation failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import radial, tables, validation
from .angular import RingParams

ENV_VAR = "NUSPECTRA_DEFAULTS"
DIGITS = 12

# key -> (parser, default); None default means "must be supplied" for physics inputs
KEYS = {
    "D": (int, 3),
    "A": (float, None),
    "B": (float, None),
    "lambda": (float, None),
    "gamma": (float, 0.0),
    "zeta": (float, 0.0),
    "kappa": (float, 0.0),
    "mu": (float, 1.0),
    "hbar": (float, 1.0),
    "Lam": (float, 0.0),
    "n_max": (int, 0),
    "l_max": (int, 0),
    "numeric": ("bool", False),
    "format": (str, None),  # csv for tables, json for validation reports
    "out": (str, None),
    "rmax_factor": (float, 20.0),
    "grid_points": (int, 4000),
    "form": (str, "corrected"),
    "n": (int, 0),
    "l": (float, 0.0),
    "samples": (int, 2001),
    "steps": (int, None),
    "omega": (float, None),
    "alpha": (float, None),
}
RANGEABLE = ("D", "A", "B", "lambda", "gamma", "zeta", "kappa", "mu", "hbar", "Lam")
_CANON = {k.lower(): k for k in KEYS}


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def canonical_key(raw: str) -> str:
    k = raw.strip().replace("-", "_")
    if k in KEYS:
        return k
    if k.lower() in _CANON:
        return _CANON[k.lower()]
    raise ConfigError(f"unknown config key {raw.strip()!r}")


def read_config_file(path: str) -> dict[str, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    out = {}
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected key=value")
        key, value = line.split("=", 1)
        out[canonical_key(key)] = value.strip()
    return out


def _convert(key: str, raw):
    kind = KEYS[key][0]
    if raw is None or not isinstance(raw, str):
        return raw
    if kind == "bool":
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
    try:
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {raw!r}") from exc


def parse_values(key: str, raw, steps: int | None) -> list:
    """A scalar, a comma list, or ``a:b`` with ``steps`` points."""
    if not isinstance(raw, str):
        return [raw]
    text = raw.strip()
    if "," in text:
        return [_convert(key, part) for part in text.split(",") if part.strip()]
    if ":" in text[1:]:
        cut = text.index(":", 1)
        lo, hi = _convert(key, text[:cut]), _convert(key, text[cut + 1:])
        if not steps or steps < 1:
            raise ConfigError(f"range {key}={text} needs --steps >= 1")
        vals = np.linspace(lo, hi, steps)
        return [int(round(v)) if KEYS[key][0] is int else float(v) for v in vals]
    return [_convert(key, text)]


def merge_config(args: argparse.Namespace) -> dict:
    raw: dict = {k: d for k, (_, d) in KEYS.items()}
    env = os.environ.get(ENV_VAR)
    if env:
        raw.update(read_config_file(env))
    if getattr(args, "config", None):
        raw.update(read_config_file(args.config))
    for k in KEYS:
        v = getattr(args, k, None)
        if v is not None and v is not False:
            raw[k] = v
    if raw["format"] not in (None, "csv", "json"):
        raise ConfigError(f"format must be csv or json, got {raw['format']!r}")
    if raw["form"] not in radial.FORMS:
        raise ConfigError(f"form must be one of {radial.FORMS}")
    return raw


def resolve(raw: dict, allow_range: bool = False) -> tuple[dict, str | None, list]:
    """Scalar config plus the ranged key (if any) and its values."""
    steps = _convert("steps", raw["steps"])
    cfg, ranged = {}, []
    for k, v in raw.items():
        if k in RANGEABLE:
            vals = parse_values(k, v, steps)
            if len(vals) > 1 or (isinstance(v, str) and ("," in v or ":" in v.strip()[1:])):
                ranged.append((k, vals))
            cfg[k] = vals[0] if vals else None
        else:
            cfg[k] = _convert(k, v)
    if len(ranged) > 1:
        raise ConfigError("exactly one ranged parameter is allowed, got " + ", ".join(k for k, _ in ranged))
    if ranged and not allow_range:
        raise ConfigError(f"{ranged[0][0]} is ranged; only sweep accepts ranges")
    key, values = ranged[0] if ranged else (None, [])
    return cfg, key, values


def _params(cfg: dict) -> radial.PotentialParams:
    missing = [k for k in ("A", "B", "lambda") if cfg.get(k) is None]
    if missing:
        raise ConfigError("missing required parameter(s): " + ", ".join(missing))
    try:
        return radial.PotentialParams(cfg["A"], cfg["B"], cfg["lambda"], cfg["gamma"], cfg["zeta"], cfg["kappa"],
                                      cfg["mu"], cfg["hbar"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _ring(cfg: dict) -> RingParams:
    return RingParams.from_physical(cfg["gamma"], cfg["zeta"], cfg["kappa"], cfg["mu"], cfg["hbar"])


# --- formatting -------------------------------------------------------------

def fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if v == 0:
            return "0"
        return f"{v:.{DIGITS}g}"
    return str(v)


def to_csv(rows: list[dict], comments: list[str] = ()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        cols = list(rows[0])
        w.writerow(cols)
        for r in rows:
            w.writerow([fmt(r.get(c, "")) for c in cols])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return None if math.isnan(v) or math.isinf(v) else float(fmt(v))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- commands ---------------------------------------------------------------

def _spectrum_rows(cfg):
    p = _params(cfg)
    ring = _ring(cfg)
    return tables.spectrum_rows(p, cfg["D"], cfg["n_max"], cfg["l_max"], cfg["numeric"], cfg["form"],
                                ring, cfg["Lam"], cfg["rmax_factor"], cfg["grid_points"])


def cmd_spectrum(raw: dict) -> int:
    cfg, _, _ = resolve(raw)
    rows = _spectrum_rows(cfg)
    emit(to_json(rows) if cfg["format"] == "json" else to_csv(rows), cfg["out"])
    return 2 if any(r["error"] for r in rows) else 0


def cmd_wavefunction(raw: dict) -> int:
    cfg, _, _ = resolve(raw)
    p = _params(cfg)
    try:
        header, r, g = tables.wavefunction_table(p, cfg["D"], cfg["n"], cfg["l"], cfg["samples"],
                                                 cfg["rmax_factor"], cfg["form"])
    except tables.STATE_ERRORS as exc:
        print(f"nuspectra: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if cfg["format"] == "json":
        text = to_json({"header": header, "r": r.tolist(), "g": g.tolist()})
    else:
        comments = [", ".join(f"{k}={fmt(v)}" for k, v in header.items())]
        text = to_csv([{"r": a, "g": b} for a, b in zip(r, g)], comments)
    emit(text, cfg["out"])
    return 0


def _settings(cfg) -> validation.Settings:
    base = validation.Settings()
    kw = {}
    for src, dst in (("A", "A"), ("B", "B"), ("lambda", "lam")):
        if cfg.get(src) is not None:
            kw[dst] = cfg[src]
    kw.update(D=cfg["D"], mu=cfg["mu"], hbar=cfg["hbar"], rmax_factor=cfg["rmax_factor"],
              grid_points=cfg["grid_points"])
    return validation.Settings(**{**base.__dict__, **kw})


def cmd_validate(raw: dict, suite: str) -> int:
    cfg, _, _ = resolve(raw)
    records = validation.run_suite(suite, _settings(cfg))
    passed = validation.all_passed(records)
    if cfg["format"] == "csv":
        rows = [{**r, "measured": json.dumps(_jsonable(r["measured"])),
                 "tolerance": "" if r["tolerance"] is None else r["tolerance"]} for r in records]
        text = to_csv(rows)
    else:
        text = to_json({"suite": suite, "passed": passed, "records": records})
    emit(text, cfg["out"])
    failed = [r["check"] for r in records if r["status"] == validation.FAIL]
    if failed:
        print("nuspectra: failed checks: " + ", ".join(failed), file=sys.stderr)
    return 0 if passed else 2


def cmd_sweep(raw: dict) -> int:
    cfg, key, values = resolve(raw, allow_range=True)
    if key is None:
        raise ConfigError("sweep needs exactly one ranged parameter (a,b,c or a:b with --steps)")
    oscillator = cfg["omega"] is not None or cfg["alpha"] is not None
    if oscillator and (cfg["omega"] is None or cfg["alpha"] is None):
        raise ConfigError("oscillator mode needs both --omega and --alpha")
    if oscillator and key != "lambda":
        raise ConfigError("oscillator mode sweeps lambda")
    rows = []
    for v in values:
        point = {**cfg, key: v}
        if oscillator:
            block = tables.limiting_rows(cfg["omega"], cfg["alpha"], v, point["D"], cfg["n_max"], cfg["l_max"],
                                         cfg["mu"], cfg["hbar"], cfg["numeric"], cfg["grid_points"])
        else:
            try:
                block = _spectrum_rows(point)
            except ConfigError as exc:
                block = [{"n": "", "l": "", "D": point["D"], "error": f"config: {exc}"}]
        for r in block:  # blocks arrive ordered by n, then l
            rows.append({key: v, **r})
    if rows:
        cols = []
        for r in rows:
            cols.extend(c for c in r if c not in cols)
        rows = [{c: r.get(c, "") for c in cols} for r in rows]
    emit(to_json(rows) if cfg["format"] == "json" else to_csv(rows), cfg["out"])
    return 2 if any(r.get("error") for r in rows) else 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    g = shared.add_argument_group("model")
    g.add_argument("--config", metavar="PATH", help="flat key=value file")
    g.add_argument("--D", dest="D", help="dimension (default 3)")
    for name in ("A", "B", "lambda", "gamma", "zeta", "kappa", "mu", "hbar"):
        g.add_argument(f"--{name}", dest=name)
    g.add_argument("--Lam", dest="Lam", help="separation constant of the next angle (ring term only)")
    g.add_argument("--n-max", dest="n_max")
    g.add_argument("--l-max", dest="l_max")
    g.add_argument("--numeric", action="store_true", default=None, help="add finite-difference oracle columns")
    g.add_argument("--form", choices=radial.FORMS)
    o = shared.add_argument_group("output and grid")
    o.add_argument("--format", choices=("csv", "json"))
    o.add_argument("--out", metavar="PATH")
    o.add_argument("--rmax-factor", dest="rmax_factor", help="r_max = factor / lambda (default 20)")
    o.add_argument("--grid-points", dest="grid_points")

    p = _Parser(prog="nuspectra", description="Bound states of tanh/coth potentials with a ring term in D dimensions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("spectrum", parents=[shared], help="energy table over n and l")
    w = sub.add_parser("wavefunction", parents=[shared], help="sampled normalised radial state")
    w.add_argument("--n", dest="n")
    w.add_argument("--l", dest="l")
    w.add_argument("--samples")
    v = sub.add_parser("validate", parents=[shared], help="run a validation suite")
    v.add_argument("suite", choices=sorted(validation.SUITES) + ["all"])
    s = sub.add_parser("sweep", parents=[shared], help="spectra along one ranged parameter")
    s.add_argument("--steps")
    s.add_argument("--omega", help="oscillator mode: sweep lambda with limiting-map A and B")
    s.add_argument("--alpha")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = merge_config(args)
        if args.command == "spectrum":
            return cmd_spectrum(raw)
        if args.command == "wavefunction":
            return cmd_wavefunction(raw)
        if args.command == "validate":
            return cmd_validate(raw, args.suite)
        return cmd_sweep(raw)
    except ConfigError as exc:
        print(f"nuspectra: config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
