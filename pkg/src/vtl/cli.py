"""Command-line front end.

    vtl growth    --group nil --rmax 12
    vtl ball      --group sol --radius 6 [--out FILE]
    vtl transport --group nil --domain singleton
    vtl verify    --group nil --count 50 --seed 1
    vtl profile   --group nil --family balls --n-min 3 --n-max 10

Settings come from defaults, then an optional ``--config`` file of
``key=value`` lines, then command-line flags. Exit codes: 0 ok, 2 config
error, 3 resource limit, 4 invariant violation, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import files
from .cayley import DEFAULT_CAP, GeneratorSet, custom_generators, default_generators, enumerate_ball, growth_series
from .cayley import remember_ball
from .domain import Domain, from_ball, from_box, random_connected, singleton
from .errors import BadMatrix, ConfigError, DegenerateFit, IOFailure, MissingRequired, UnknownKey, VTLError
from .group import NAMED_GROUPS, SL2Matrix, TorusBundleGroup, custom_group
from .profiler import Family, ProfileParams, ProfileReport, exponential_growth_rate, growth_exponent
from .profiler import isoperimetric_profile, points_csv
from .transport import verify_bounds

log = logging.getLogger("vtl")

COMMANDS = ("growth", "ball", "transport", "verify", "profile")


@dataclass
class RunConfig:
    command: str
    group: str | None = None
    matrix: tuple[int, int, int, int] | None = None
    gens: tuple[str, ...] | None = None
    rmax: int | None = None
    radius: int | None = None
    fit_lo: int | None = None
    fit_hi: int | None = None
    domain: str = "singleton"
    family: str = "balls"
    n_min: int = 0
    n_max: int | None = None
    seed: int = 0
    max_mult: int = 1
    count: int = 20
    max_target: int = 40
    random_mass_step: int = 20
    transport_budget: int = 500_000_000
    cap: int = DEFAULT_CAP
    out: str | None = None
    ball_cache: str | None = None
    save_domain: str | None = None

    def echo(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(str(x) for x in v)
            lines.append(f"# {f.name}={'none' if v is None else v}")
        return "\n".join(lines) + "\n"


INT_KEYS = {
    "rmax", "radius", "fit_lo", "fit_hi", "n_min", "n_max", "seed", "max_mult", "count",
    "max_target", "random_mass_step", "transport_budget", "cap",
}
KEYS = {f.name for f in fields(RunConfig)} - {"command"}


def _convert(key: str, value: str):
    if key in INT_KEYS:
        try:
            return int(value)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {value!r}") from None
    if key == "matrix":
        try:
            entries = tuple(int(x) for x in value.split(","))
        except ValueError:
            raise BadMatrix(f"matrix must be 4 comma-separated integers, got {value!r}") from None
        if len(entries) != 4:
            raise BadMatrix(f"matrix needs 4 entries, got {len(entries)}")
        SL2Matrix(*entries)
        return entries
    if key == "gens":
        return tuple(w.strip() for w in value.split(",") if w.strip())
    return value


def read_config_file(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot read config {path}: {exc}") from exc
    out = {}
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not eq:
            raise UnknownKey(f"{path}:{n}: expected key=value, got {raw!r}")
        if key not in KEYS:
            raise UnknownKey(f"{path}:{n}: unknown key {key!r}")
        out[key] = _convert(key, value.strip())
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vtl", description="Varopoulos transport on torus-bundle Cayley graphs")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=S, help="key=value file; flags override it")
        p.add_argument("--group", choices=["z2", "nil", "sol", "custom"], default=S)
        p.add_argument("--matrix", default=S, help="m11,m12,m21,m22 for --group custom")
        p.add_argument("--gens", default=S, help="comma-separated words, e.g. b,Ba,t,tb")
        p.add_argument("--cap", type=int, default=S, help="ball element cap")
        p.add_argument("--seed", type=int, default=S)
        p.add_argument("--out", default=S)
        if name == "growth":
            p.add_argument("--rmax", type=int, default=S)
            p.add_argument("--fit-lo", type=int, default=S)
            p.add_argument("--fit-hi", type=int, default=S)
        if name == "ball":
            p.add_argument("--radius", type=int, default=S)
        if name == "transport":
            p.add_argument("--domain", default=S, help="singleton[:m] | ball:N | box:N | random:MASS | file:PATH")
            p.add_argument("--radius", type=int, default=S, help="override the admissible radius")
            p.add_argument("--max-mult", type=int, default=S)
            p.add_argument("--ball-cache", default=S)
            p.add_argument("--save-domain", default=S)
        if name == "verify":
            p.add_argument("--count", type=int, default=S)
            p.add_argument("--max-mult", type=int, default=S)
            p.add_argument("--max-target", type=int, default=S)
        if name == "profile":
            p.add_argument("--family", choices=[f.value for f in Family], default=S)
            p.add_argument("--n-min", type=int, default=S)
            p.add_argument("--n-max", type=int, default=S)
            p.add_argument("--max-mult", type=int, default=S)
            p.add_argument("--random-mass-step", type=int, default=S)
            p.add_argument("--transport-budget", type=int, default=S)
    return parser


def parse_config(argv) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    values = {}
    if "config" in ns:
        values.update(read_config_file(ns.pop("config")))
    for key, v in ns.items():
        if key in KEYS:
            values[key] = _convert(key, v) if isinstance(v, str) else v
    cfg = RunConfig(command=ns["command"], **values)
    if cfg.group is None:
        raise MissingRequired("--group is required")
    if cfg.group not in ("z2", "nil", "sol", "custom"):
        raise ConfigError(f"unknown group {cfg.group!r}")
    if cfg.group == "custom" and cfg.matrix is None:
        raise MissingRequired("--group custom needs --matrix")
    if cfg.cap < 1:
        raise ConfigError("cap must be >= 1")
    required = {"growth": "rmax", "ball": "radius", "profile": "n_max"}
    key = required.get(cfg.command)
    if key and getattr(cfg, key) is None:
        raise MissingRequired(f"{cfg.command} needs --{key.replace('_', '-')}")
    try:
        Family(cfg.family)
    except ValueError:
        raise ConfigError(f"unknown family {cfg.family!r}") from None
    return cfg


def resolve_group(cfg: RunConfig) -> tuple[TorusBundleGroup, GeneratorSet]:
    G = custom_group(cfg.matrix) if cfg.group == "custom" else NAMED_GROUPS[cfg.group]
    S = custom_generators(G, cfg.gens) if cfg.gens else default_generators(G)
    return G, S


def _emit(cfg: RunConfig, body: str, summary: str = ""):
    """Write body to cfg.out (or stdout) and the summary to stdout."""
    sys.stdout.write(cfg.echo())
    if cfg.out:
        files._write(cfg.out, body)
    else:
        sys.stdout.write(body)
    sys.stdout.write(summary)


def make_domain(cfg: RunConfig, G, S) -> Domain:
    kind, _, arg = cfg.domain.partition(":")
    if kind == "singleton":
        return singleton(G, S, int(arg) if arg else 1)
    if kind == "ball":
        return from_ball(enumerate_ball(G, S, int(arg), cfg.cap), int(arg))
    if kind == "box":
        n = int(arg)
        return from_box(G, S, (-n, -n, -n), (n, n, n))
    if kind == "random":
        return random_connected(G, S, int(arg), cfg.max_mult, cfg.seed)
    if kind == "file":
        return files.read_domain(arg, G, S)
    raise ConfigError(f"unknown domain spec {cfg.domain!r}")


def cmd_growth(cfg: RunConfig, G, S) -> int:
    series = growth_series(G, S, cfg.rmax, cfg.cap)
    body = "r,ball_size\n" + "".join(f"{r},{n}\n" for r, n in enumerate(series))
    lo = cfg.fit_lo if cfg.fit_lo is not None else 2
    hi = cfg.fit_hi if cfg.fit_hi is not None else cfg.rmax
    try:
        degree, r2 = growth_exponent(series, lo, hi)
        rate, _, r2e = exponential_growth_rate(series, lo, hi)
        summary = (
            f"fit_window={lo}..{hi}\npolynomial_degree={degree:.9g}\npolynomial_r_squared={r2:.9g}\n"
            f"exponential_rate={rate:.9g}\nexponential_r_squared={r2e:.9g}\n"
        )
    except DegenerateFit as exc:
        summary = f"fit=none ({exc})\n"
    _emit(cfg, body, summary)
    return 0


def cmd_ball(cfg: RunConfig, G, S) -> int:
    ball = enumerate_ball(G, S, cfg.radius, cfg.cap)
    path = cfg.out or str(files.cache_dir() / f"ball-{G}-r{cfg.radius}.txt")
    files.write_ball_cache(ball, path)
    sys.stdout.write(cfg.echo())
    sys.stdout.write(f"cache={path}\nelements={len(ball)}\nsizes={','.join(map(str, ball.sizes))}\n")
    return 0


def cmd_transport(cfg: RunConfig, G, S) -> int:
    D = make_domain(cfg, G, S)
    if cfg.save_domain:
        files.write_domain(D, cfg.save_domain)
    if cfg.ball_cache:
        # seeds the in-memory ball store after validating it against the config
        remember_ball(files.read_ball_cache(cfg.ball_cache, G, S))
    rep = verify_bounds(D, cfg.radius, cfg.cap, check=False)
    rec = rep.to_record()
    _emit(cfg, json.dumps(rec, indent=2, sort_keys=True) + "\n")
    if rep.admissible and not (rep.averaging_bound_holds and rep.length_bound_holds and rep.witness_holds):
        return 4
    return 0


def cmd_verify(cfg: RunConfig, G, S) -> int:
    rng = np.random.default_rng(cfg.seed % 2**64)
    targets = rng.integers(1, cfg.max_target + 1, size=cfg.count)
    ok = {"averaging": 0, "length": 0, "witness": 0}
    failures = []
    rows = ["index,seed,mass,gradient,radius,avg_num,avg_den,max_ratio,ok\n"]
    for i, target in enumerate(targets.tolist()):
        seed = cfg.seed + i
        D = random_connected(G, S, target, cfg.max_mult, seed)
        rep = verify_bounds(D, cap=cfg.cap, check=False)
        checks = {
            "averaging": rep.averaging_bound_holds,
            "length": rep.length_bound_holds,
            "witness": rep.witness_holds,
        }
        for name, held in checks.items():
            ok[name] += held
            if not held:
                failures.append(f"domain {i} (seed {seed}): {name} bound violated")
        m = rep.max_ratio
        rows.append(
            f"{i},{seed},{rep.mass},{rep.gradient},{rep.radius},{rep.average.numerator},"
            f"{rep.average.denominator},{m.numerator}/{m.denominator},{int(all(checks.values()))}\n"
        )
    summary = f"checked={cfg.count}\n" + "".join(f"{k}_holds={v}/{cfg.count}\n" for k, v in ok.items())
    _emit(cfg, "".join(rows), summary)
    for line in failures:
        print(f"violation: {line}", file=sys.stderr)
    return 4 if failures else 0


def cmd_profile(cfg: RunConfig, G, S) -> int:
    params = ProfileParams(
        seed=cfg.seed,
        max_mult=cfg.max_mult,
        random_mass_step=cfg.random_mass_step,
        cap=cfg.cap,
        transport_budget=cfg.transport_budget,
    )
    pts = isoperimetric_profile(G, S, cfg.family, range(cfg.n_min, cfg.n_max + 1), params)
    rep = ProfileReport.build(G, cfg.family, pts)
    _emit(cfg, points_csv(str(G), pts), rep.summary())
    return 0


HANDLERS = {
    "growth": cmd_growth,
    "ball": cmd_ball,
    "transport": cmd_transport,
    "verify": cmd_verify,
    "profile": cmd_profile,
}


def dispatch(cfg: RunConfig) -> int:
    G, S = resolve_group(cfg)
    return HANDLERS[cfg.command](cfg, G, S)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    logging.basicConfig(level=logging.DEBUG if "-v" in argv or "--verbose" in argv else logging.WARNING)
    try:
        return dispatch(parse_config(argv))
    except VTLError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
