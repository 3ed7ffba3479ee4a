"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 unsupported algebra,
4 window or arithmetic error during a computation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .algebras import (AlgebraSpec, UnsupportedAlgebra, algebra_descriptor, algebra_from_descriptor,
                       expand_denominator, parse_algebra, singular_weights)
from .branching import (WindowError, branch, branching_functions, qseries_text,
                        weight_multiplicities)
from .injections import InjectionError, compute_phi, build_fan, injection_from_json, preset
from .lattice import Weight, as_fraction, series_from_json, series_to_json

COMMANDS = ("fan", "branch", "weights", "singular", "denominator-check")
FORMATS = ("text", "json", "qseries")
DEFAULT_LIMIT = 50


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    algebra: Optional[str] = None
    injection: Optional[str] = None
    hw: Optional[str] = None
    cutoff: int = 0
    format: str = "text"
    limit: int = DEFAULT_LIMIT
    source: Optional[str] = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if isinstance(self.cutoff, bool) or not isinstance(self.cutoff, int) or self.cutoff < 0:
            raise ConfigError("cutoff must be a non-negative integer")
        if self.cutoff > self.limit:
            raise ConfigError(f"cutoff {self.cutoff} exceeds the safety limit {self.limit}")
        needs = {"fan": ("injection",), "branch": ("injection", "hw"),
                 "weights": ("algebra", "hw"), "singular": ("algebra", "hw"),
                 "denominator-check": ("algebra",)}[self.command]
        if self.command == "singular" and self.source:
            needs = ()
        for name in needs:
            if getattr(self, name) in (None, ""):
                raise ConfigError(f"{self.command} needs --{name}")


# -- parsing --------------------------------------------------------------------------

def load_algebra(text: str) -> AlgebraSpec:
    text = text.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"algebra JSON: {exc}") from None
        return algebra_from_descriptor(data)
    return parse_algebra(text)


def load_injection(text: str):
    if text.startswith("preset:"):
        return preset(text[len("preset:"):])
    path = Path(text)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read injection file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"injection JSON: {exc}") from None
    return injection_from_json(data)


def parse_weight(spec: AlgebraSpec, text: str) -> Weight:
    """``fw:c1,...`` (affine: ``c0,c1,...``) or ``ortho:x1,...[;level;grade]``."""
    try:
        kind, _, body = text.partition(":")
        if kind == "fw":
            return spec.from_fw([as_fraction(x) for x in body.split(",")])
        if kind == "ortho":
            parts = body.split(";")
            if len(parts) not in (1, 3):
                raise ConfigError("ortho weights are 'x1,x2,...' or 'x1,...;level;grade'")
            fin = [as_fraction(x) for x in parts[0].split(",")]
            if len(parts) == 3:
                return spec.weight(fin, parts[1], parts[2])
            return spec.weight(fin)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad weight {text!r}: {exc}") from None
    raise ConfigError(f"weights start with 'fw:' or 'ortho:', got {text!r}")


# -- rendering ----------------------------------------------------------------------

def _q(x: Fraction) -> str:
    return str(x)


def fmt_ortho(w: Weight, affine: bool) -> str:
    fin = ", ".join(_q(x) for x in w.finite)
    return f"({fin}; {_q(w.level)}; {_q(w.grade)})" if affine else f"({fin})"


def fmt_fw(spec: AlgebraSpec, w: Weight) -> str:
    labels = ",".join(_q(x) for x in spec.dynkin_labels(w))
    return f"[{labels}]" + (f" n={_q(w.grade)}" if spec.is_affine else "")


def fmt_roots(spec: AlgebraSpec, w: Weight) -> str:
    """Simple-root combination like ``2α1+3α2-δ``; falls back to ortho."""
    try:
        coeffs = spec.simple_root_coords(w)
    except ValueError:
        return fmt_ortho(w, spec.is_affine)
    sym = spec.root_symbol
    parts = []
    names = [f"{sym}{i + 1}" for i in range(len(coeffs))]
    if spec.classical_rank == 1:
        names = [sym]
    for c, name in list(zip(coeffs, names)) + [(w.grade, "δ")]:
        if not c:
            continue
        mag = "" if abs(c) == 1 else _q(abs(c))
        parts.append(("-" if c < 0 else "+") + mag + name)
    if w.level:
        parts.append(f"(level {_q(w.level)})")
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


def _weight_json(spec: AlgebraSpec, w: Weight) -> dict:
    return {"ortho": w.to_json(), "fw": [_q(x) for x in spec.dynkin_labels(w)]}


def _sign(s: int) -> str:
    return "+" if s > 0 else "-"


# -- commands ------------------------------------------------------------------------------

def cmd_fan(cfg: RunConfig) -> tuple[int, str]:
    inj = load_injection(cfg.injection)
    phi = compute_phi(inj, cfg.cutoff)
    fan = build_fan(phi, inj, cfg.cutoff)
    render = inj.ambient if inj.is_identity else inj.sub
    if cfg.format == "json":
        out = {"injection": inj.name,
               "gamma0": _weight_json(inj.sub, fan.gamma0), "s0": fan.s0,
               "cutoff": _q(fan.cutoff),
               "entries": [{"gamma": _weight_json(inj.sub, g), "sign": s} for g, s in fan.entries]}
        return 0, json.dumps(out, indent=2, ensure_ascii=False) + "\n"
    aff = inj.sub.is_affine
    lines = [f"injection {inj.name}: {inj.sub.name} in {inj.ambient.name}, grades <= {fan.cutoff}",
             f"gamma0 = {fmt_roots(render, fan.gamma0)}  ortho {fmt_ortho(fan.gamma0, aff)}  "
             f"s(gamma0) = {fan.s0:+d}",
             f"fan: {len(fan.entries)} vectors"]
    for g, s in fan.entries:
        lines.append(f"  {_sign(s)}  {fmt_roots(render, g):<16} ortho {fmt_ortho(g, aff)}")
    return 0, "\n".join(lines) + "\n"


def cmd_branch(cfg: RunConfig) -> tuple[int, str]:
    inj = load_injection(cfg.injection)
    mu = parse_weight(inj.ambient, cfg.hw)
    run = branch(inj, mu, cfg.cutoff)
    res = run.result
    sub = inj.sub
    if cfg.format == "json":
        data = res.to_json()
        for cls in data["classes"]:
            w = Weight.from_json(cls["highest_weight"])
            cls["highest_weight"] = _weight_json(sub, w)
        data = {"injection": inj.name, "highest_weight": _weight_json(inj.ambient, mu),
                "cutoff": cfg.cutoff, **data}
        return 0, json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    lines = [f"{inj.ambient.name} L{fmt_fw(inj.ambient, mu)} restricted to {sub.name}"
             + (f", grades >= {_q(res.floor)}" if sub.is_affine else "")]
    if cfg.format == "qseries" and sub.is_affine:
        for nu, series in branching_functions(res):
            lines.append(f"  class {fmt_fw(sub, nu)} ortho {fmt_ortho(nu, True)}: {qseries_text(series)}")
        return 0, "\n".join(lines) + "\n"
    render = inj.ambient if inj.is_identity else sub
    for nu, b in sorted(res.coefficients.items(), key=lambda kv: kv[0].sort_key(), reverse=True):
        lines.append(f"  b = {b}  at {fmt_roots(render, nu) if not sub.is_affine else fmt_fw(sub, nu)}"
                     f"  fw {fmt_fw(sub, nu)}  ortho {fmt_ortho(nu, sub.is_affine)}")
    return 0, "\n".join(lines) + "\n"


def cmd_weights(cfg: RunConfig) -> tuple[int, str]:
    spec = load_algebra(cfg.algebra)
    mu = parse_weight(spec, cfg.hw)
    table = weight_multiplicities(spec, mu, cfg.cutoff)
    items = table.coefficients.sorted_items()
    if cfg.format == "json":
        out = {"algebra": algebra_descriptor(spec), "highest_weight": _weight_json(spec, mu),
               "multiplicities": [{"weight": _weight_json(spec, w), "multiplicity": m}
                                  for w, m in items]}
        if not spec.is_affine:
            out["dimension"] = sum(m for _, m in items)
        return 0, json.dumps(out, indent=2, ensure_ascii=False) + "\n"
    lines = [f"{spec.name} L{fmt_fw(spec, mu)} weight diagram"]
    if not spec.is_affine:
        lines[0] += f", dimension {sum(m for _, m in items)}"
    for w, m in items:
        lines.append(f"  m = {m}  at {fmt_ortho(w, spec.is_affine)}  fw {fmt_fw(spec, w)}")
    return 0, "\n".join(lines) + "\n"


def singular_payload(spec: AlgebraSpec, mu: Weight, cutoff: int) -> dict:
    el = singular_weights(spec, mu, cutoff)
    return {"algebra": algebra_descriptor(spec), "highest_weight": mu.to_json(),
            "cutoff": cutoff, "count": len(el.series), "series": series_to_json(el.series)}


def cmd_singular(cfg: RunConfig) -> tuple[int, str]:
    if cfg.source:
        try:
            data = json.loads(Path(cfg.source).read_text())
            spec = algebra_from_descriptor(data["algebra"])
            mu = Weight.from_json(data["highest_weight"])
            cutoff = int(data["cutoff"])
            expected = series_from_json(data["series"])
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ConfigError(f"bad singular fixture: {exc}") from None
        payload = singular_payload(spec, mu, cutoff)
        if series_from_json(payload["series"]) != expected:
            return 1, "fixture does not reproduce\n"
    else:
        spec = load_algebra(cfg.algebra)
        mu = parse_weight(spec, cfg.hw)
        payload = singular_payload(spec, mu, cfg.cutoff)
    if cfg.format == "json":
        return 0, json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    aff = spec.is_affine
    lines = [f"{spec.name} singular weights of L{fmt_fw(spec, mu)}"
             + (f", grades >= {-payload['cutoff']}" if aff else "") + f": {payload['count']}"]
    for t in payload["series"]:
        w = Weight.from_json(t["weight"])
        lines.append(f"  {_sign(t['coefficient'])}  {fmt_ortho(w, aff)}  fw {fmt_fw(spec, w)}")
    return 0, "\n".join(lines) + "\n"


def cmd_denominator(cfg: RunConfig) -> tuple[int, str]:
    spec = load_algebra(cfg.algebra)
    psi = singular_weights(spec, spec.zero(), cfg.cutoff).series
    r = expand_denominator(spec, cfg.cutoff)
    ok = psi == r
    if cfg.format == "json":
        out = {"algebra": algebra_descriptor(spec), "cutoff": cfg.cutoff, "terms": len(r), "equal": ok}
        return (0 if ok else 1), json.dumps(out, indent=2) + "\n"
    return (0 if ok else 1), (f"{spec.name} cutoff {cfg.cutoff}: Weyl sum and product agree "
                              f"on {len(r)} terms\n" if ok else
                              f"{spec.name} cutoff {cfg.cutoff}: MISMATCH\n")


HANDLERS = {"fan": cmd_fan, "branch": cmd_branch, "weights": cmd_weights,
            "singular": cmd_singular, "denominator-check": cmd_denominator}


def run(cfg: RunConfig) -> tuple[int, str]:
    cfg.validate()
    return HANDLERS[cfg.command](cfg)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fanbranch",
                                description="Branching coefficients via the fan of an injection.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--algebra", help='e.g. A2, G2, "A2^(1)", "A2^(2)" or a JSON descriptor')
    p.add_argument("--injection", help="preset:NAME or path to an injection JSON file")
    p.add_argument("--hw", help="highest weight: fw:c1,c2,... or ortho:x1,...[;level;grade]")
    p.add_argument("--cutoff", type=int, help="grade depth for affine algebras (default 0)")
    p.add_argument("--format", choices=FORMATS, help="output format (default text)")
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.add_argument("--config", help="JSON file with any of the above keys")
    p.add_argument("--limit", type=int, help=f"cutoff safety limit (default {DEFAULT_LIMIT})")
    p.add_argument("--from", dest="source", help="singular: re-run a JSON fixture and verify it")
    return p


def _config_from(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        try:
            values = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        if not isinstance(values, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(values) - {"algebra", "injection", "hw", "cutoff", "format", "limit"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if isinstance(values.get("algebra"), dict):
            values["algebra"] = json.dumps(values["algebra"])
    for key in ("algebra", "injection", "hw", "cutoff", "format", "limit", "source"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    return RunConfig(command=args.command, **values)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from(args)
        code, text = run(cfg)
    except UnsupportedAlgebra as exc:
        print(f"fanbranch: unsupported algebra: {exc}", file=sys.stderr)
        return 3
    except (WindowError, ArithmeticError) as exc:
        print(f"fanbranch: computation error: {exc}", file=sys.stderr)
        return 4
    except (ConfigError, InjectionError, ValueError, TypeError) as exc:
        print(f"fanbranch: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
