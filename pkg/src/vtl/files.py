"""Line-oriented text formats for balls and domains.

Ball cache::

    ball-cache v1 matrix=1,1,0,1 kind=bundle gens=b:0,1,0;c:1,-1,0;... radius=3
    p q k dist          (one line per element, canonical (dist, k, p, q) order)

Domain file::

    domain v1 matrix=1,1,0,1 gens=b:0,1,0;... seed=7 rng=pcg64
    p q k mult          (canonical (k, p, q) order)

``rng=`` is present only for seeded domains. Writing what was read
reproduces the file byte for byte.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .cayley import CayleyBall, GeneratorSet
from .domain import RNG_NAME, Domain
from .errors import ConfigMismatch, CorruptCache, IOFailure, VTLError
from .group import GroupElement, Kind, NAMED_GROUPS, SL2Matrix, TorusBundleGroup

CACHE_ENV = "VTL_CACHE_DIR"


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, ".vtl-cache"))


def _gens_field(S: GeneratorSet) -> str:
    for label in S.labels:
        if not label or any(c in label for c in ":;, \t\n="):
            raise CorruptCache(f"generator label {label!r} cannot be serialised")
    return S.describe()


def _group_for(matrix: SL2Matrix, kind: Kind) -> TorusBundleGroup:
    for G in NAMED_GROUPS.values():
        if G.matrix == matrix and G.kind is kind:
            return G
    return TorusBundleGroup(matrix, kind, "custom")


def _parse_header(line: str, magic: str) -> dict[str, str]:
    parts = line.rstrip("\n").split(" ")
    if parts[:2] != magic.split(" "):
        raise CorruptCache(f"expected header starting {magic!r}, got {line[:40]!r}")
    fields = {}
    for tok in parts[2:]:
        key, eq, value = tok.partition("=")
        if not eq or key in fields:
            raise CorruptCache(f"bad header token {tok!r}")
        fields[key] = value
    return fields


def _parse_matrix(text: str) -> SL2Matrix:
    try:
        return SL2Matrix(*(int(x) for x in text.split(",")))
    except (TypeError, ValueError, VTLError) as exc:
        raise CorruptCache(f"bad matrix field {text!r}: {exc}") from None


def _parse_gens(G: TorusBundleGroup, text: str) -> GeneratorSet:
    pos = []
    try:
        for item in text.split(";"):
            label, _, coords = item.partition(":")
            p, q, k = (int(x) for x in coords.split(","))
            pos.append((label, GroupElement(p, q, k)))
        S = GeneratorSet.from_positives(G, pos)
    except (ValueError, VTLError) as exc:
        raise CorruptCache(f"bad gens field {text!r}: {exc}") from None
    if len(S.positives) != len(pos):
        raise CorruptCache("duplicate generators in header")
    return S


def _records(lines: list[str], width: int, path) -> np.ndarray:
    rows = []
    for n, line in enumerate(lines, start=2):
        parts = line.split(" ")
        if len(parts) != width or not line.endswith("\n"):
            raise CorruptCache(f"{path}:{n}: expected {width} fields")
        try:
            rows.append([int(x) for x in parts])
        except ValueError:
            raise CorruptCache(f"{path}:{n}: non-integer field") from None
    return np.array(rows, dtype=np.int64).reshape(-1, width)


def _read_lines(path) -> list[str]:
    try:
        with open(path, encoding="ascii", newline="") as fh:
            lines = fh.readlines()
    except UnicodeDecodeError as exc:
        raise CorruptCache(f"{path}: not ascii text") from exc
    except OSError as exc:
        raise IOFailure(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise CorruptCache(f"{path}: empty file")
    return lines


def _write(path, text: str):
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


def _check_expected(G, S, expect_group, expect_gens, path):
    if expect_group is not None and (expect_group.matrix != G.matrix or expect_group.kind is not G.kind):
        raise ConfigMismatch(f"{path} was written for matrix {G.matrix} ({G.kind.value}), not {expect_group.matrix}")
    if expect_gens is not None and expect_gens.positives != S.positives:
        raise ConfigMismatch(f"{path} was written for generators {S.describe()}")


def format_ball(ball: CayleyBall) -> str:
    G = ball.group
    out = [
        f"ball-cache v1 matrix={G.matrix} kind={G.kind.value} gens={_gens_field(ball.gens)} radius={ball.radius}\n"
    ]
    out.extend(f"{p} {q} {k} {d}\n" for p, q, k, d in zip(ball.p.tolist(), ball.q.tolist(), ball.k.tolist(), ball.dist.tolist()))
    return "".join(out)


def write_ball_cache(ball: CayleyBall, path):
    _write(path, format_ball(ball))


def read_ball_cache(path, expect_group=None, expect_gens=None) -> CayleyBall:
    lines = _read_lines(path)
    h = _parse_header(lines[0], "ball-cache v1")
    if set(h) != {"matrix", "kind", "gens", "radius"}:
        raise CorruptCache(f"{path}: header fields {sorted(h)}")
    try:
        kind = Kind(h["kind"])
        radius = int(h["radius"])
    except ValueError:
        raise CorruptCache(f"{path}: bad kind or radius") from None
    G = _group_for(_parse_matrix(h["matrix"]), kind)
    S = _parse_gens(G, h["gens"])
    _check_expected(G, S, expect_group, expect_gens, path)
    rec = _records(lines[1:], 4, path)
    P, Q, K, D = rec.T.copy() if len(rec) else (np.empty(0, dtype=np.int64),) * 4
    if len(P) == 0 or (P[0], Q[0], K[0], D[0]) != (0, 0, 0, 0):
        raise CorruptCache(f"{path}: first record must be the identity at distance 0")
    if np.any(D < 0) or np.any(D > radius) or np.any(np.diff(D) < 0):
        raise CorruptCache(f"{path}: distances out of order or range")
    order = np.lexsort((Q, P, K, D))
    if not np.array_equal(order, np.arange(len(P))):
        raise CorruptCache(f"{path}: records not in canonical order")
    counts = np.bincount(D, minlength=radius + 1)
    if np.any(counts == 0):
        raise CorruptCache(f"{path}: some level in 0..{radius} is empty")
    if kind is Kind.ABELIAN2 and np.any(K != 0):
        raise CorruptCache(f"{path}: Z^2 records must have k = 0")
    ball = CayleyBall(G, S, radius, P, Q, K, D, tuple(int(x) for x in np.cumsum(counts)))
    try:
        ball.index  # rejects duplicate elements
    except ValueError:
        raise CorruptCache(f"{path}: duplicate elements") from None
    return ball


def format_domain(D: Domain) -> str:
    G = D.group
    seed = "none" if D.seed is None else f"{D.seed} rng={RNG_NAME}"
    out = [f"domain v1 matrix={G.matrix} gens={_gens_field(D.gens)} seed={seed}\n"]
    out.extend(f"{p} {q} {k} {m}\n" for p, q, k, m in zip(D.p.tolist(), D.q.tolist(), D.k.tolist(), D.mult.tolist()))
    return "".join(out)


def write_domain(D: Domain, path):
    _write(path, format_domain(D))


def read_domain(path, expect_group=None, expect_gens=None) -> Domain:
    lines = _read_lines(path)
    h = _parse_header(lines[0], "domain v1")
    if not {"matrix", "gens", "seed"} <= set(h) <= {"matrix", "gens", "seed", "rng"}:
        raise CorruptCache(f"{path}: header fields {sorted(h)}")
    matrix = _parse_matrix(h["matrix"])
    G = _group_for(matrix, Kind.BUNDLE)
    S = _parse_gens(G, h["gens"])
    # Z^2 is the only supported group whose generators all have k = 0
    if matrix.is_identity and all(g.k == 0 for _, g in S.positives):
        G = _group_for(matrix, Kind.ABELIAN2)
        S = _parse_gens(G, h["gens"])
    _check_expected(G, S, expect_group, expect_gens, path)
    if h["seed"] == "none":
        seed = None
        if "rng" in h:
            raise CorruptCache(f"{path}: rng given without seed")
    else:
        try:
            seed = int(h["seed"])
        except ValueError:
            raise CorruptCache(f"{path}: bad seed {h['seed']!r}") from None
        if h.get("rng") != RNG_NAME:
            raise CorruptCache(f"{path}: unsupported rng {h.get('rng')!r}")
    rec = _records(lines[1:], 4, path)
    try:
        D = Domain.from_arrays(G, S, rec[:, 0], rec[:, 1], rec[:, 2], rec[:, 3], seed)
    except VTLError as exc:
        raise CorruptCache(f"{path}: {exc}") from None
    if np.any(rec[:, 3] < 1) or format_domain(D) != "".join(lines):
        raise CorruptCache(f"{path}: records not canonical (sorted, positive multiplicities)")
    return D
