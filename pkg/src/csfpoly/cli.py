"""Command-line front end.

    csfpoly solve circle.poly --min-size 0.125 --output circle.boxes
    csfpoly solve eq*.poly --le modulus1.poly --domain -1 1 --scheme interval
    csfpoly dft --size 1024 --seed 3
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dft import dft_csf, dft_naive
from .errors import (
    ArityMismatch,
    DimensionUnsupported,
    DuplicateTuple,
    EmptyPolynomial,
    InvalidThreshold,
    NotPowerOfTwo,
    PolySyntaxError,
    UnsupportedOrder,
)
from .interval import Interval
from .opcount import OpCounter
from .poly import read_poly
from .subdivide import INCLUDED, Enclosure, SolveOptions, box_of_index, subdivide_enclose

EXIT_OK, EXIT_PARSE, EXIT_CONFIG = 0, 2, 3


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    equations: list[str] = field(default_factory=list)
    inequalities: list[str] = field(default_factory=list)
    domain: tuple | None = None  # uniform (lo, hi)
    domain_axes: dict = field(default_factory=dict)  # 0-based axis -> (lo, hi)
    min_size: float = 2.0**-5
    max_depth: int | None = None
    taylor_order: int = 2
    scheme: str = "taylor"
    workers: int = 1
    output: str | None = None
    format: str = "boxes"
    count_ops: bool = False

    def validate(self) -> None:
        if not self.equations and not self.inequalities:
            raise ConfigError("give at least one equation or inequality file")
        if not (math.isfinite(self.min_size) and self.min_size > 0):
            raise ConfigError(f"--min-size must be positive, got {self.min_size}")
        if self.max_depth is not None and self.max_depth < 0:
            raise ConfigError("--max-depth must be >= 0")
        if self.taylor_order not in (1, 2, 3):
            raise ConfigError("--taylor-order must be 1, 2 or 3")
        if self.workers < 1:
            raise ConfigError("--workers must be >= 1")

    def domain_for(self, k: int) -> list[tuple[float, float]]:
        lo, hi = self.domain if self.domain is not None else (-2.0, 2.0)
        dom = [(lo, hi)] * k
        for i, ab in self.domain_axes.items():
            if not 0 <= i < k:
                raise ConfigError(f"--domain-axis {i + 1} outside 1..{k}")
            dom[i] = ab
        for a, b in dom:
            if not (math.isfinite(a) and math.isfinite(b) and a < b):
                raise ConfigError(f"empty or unbounded domain edge [{a}, {b}]")
        return dom


# ---------------------------------------------------------------------------
# output formats


def _fmt(x: float) -> str:
    return repr(float(x))


def write_boxes(enc: Enclosure, fh) -> None:
    fh.write("# domain " + " ".join(f"{_fmt(d.lo)} {_fmt(d.hi)}" for d in enc.domain) + "\n")
    fh.write(f"# k {enc.k}\n")
    for status, level, idx in enc.records():
        fh.write(f"{status} {level} {' '.join(map(str, idx))}\n")


def read_boxes(text: str) -> Enclosure:
    domain, k = None, None
    enc = None
    for line in text.splitlines():
        toks = line.split()
        if not toks:
            continue
        if toks[0] == "#":
            if toks[1] == "domain":
                vals = [float(t) for t in toks[2:]]
                domain = tuple(Interval(vals[i], vals[i + 1]) for i in range(0, len(vals), 2))
            elif toks[1] == "k":
                k = int(toks[2])
            continue
        if enc is None:
            if domain is None or k != len(domain):
                raise ValueError("box file lacks a consistent '# domain' / '# k' header")
            enc = Enclosure(domain)
        rec = (int(toks[1]), tuple(int(t) for t in toks[2:]))
        (enc.included if toks[0] == INCLUDED else enc.undetermined).append(rec)
    return enc if enc is not None else Enclosure(domain)


def to_json(enc: Enclosure) -> dict:
    return {
        "domain": [[d.lo, d.hi] for d in enc.domain],
        "k": enc.k,
        "boxes": [{"status": s, "level": lv, "index": list(idx)} for s, lv, idx in enc.records()],
        "stats": [s.as_dict() for s in enc.stats],
    }


def from_json(data: dict) -> Enclosure:
    enc = Enclosure(tuple(Interval(a, b) for a, b in data["domain"]))
    for b in data["boxes"]:
        rec = (int(b["level"]), tuple(b["index"]))
        (enc.included if b["status"] == INCLUDED else enc.undetermined).append(rec)
    return enc


_CUBE_FACES = [
    (0, 2, 1), (1, 2, 3),  # x = lo
    (4, 5, 6), (5, 7, 6),  # x = hi
    (0, 1, 4), (1, 5, 4),  # y = lo
    (2, 6, 3), (3, 6, 7),  # y = hi
    (0, 4, 2), (2, 4, 6),  # z = lo
    (1, 3, 5), (3, 7, 5),  # z = hi
]


def export_mesh(enc: Enclosure, fh) -> None:
    """Wavefront OBJ with one unwelded cube per output box (k = 3 only)."""
    if enc.k != 3:
        raise DimensionUnsupported(f"mesh export needs k = 3, got k = {enc.k}")
    fh.write(f"# {len(enc)} boxes\n")
    base = 1
    for _, level, idx in enc.records():
        B = box_of_index(enc.domain, level, idx)
        for bits in range(8):
            x, y, z = (B[d].hi if bits >> (2 - d) & 1 else B[d].lo for d in range(3))
            fh.write(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}\n")
        for a, b, c in _CUBE_FACES:
            fh.write(f"f {base + a} {base + b} {base + c}\n")
        base += 8


def render(enc: Enclosure, fmt: str) -> str:
    buf = io.StringIO()
    if fmt == "boxes":
        write_boxes(enc, buf)
    elif fmt == "json":
        json.dump(to_json(enc), buf, indent=1)
        buf.write("\n")
    elif fmt == "obj":
        export_mesh(enc, buf)
    else:
        raise ConfigError(f"unknown format {fmt!r}")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands


class ParseError(Exception):
    pass


def _load(paths):
    out = []
    for p in paths:
        if not Path(p).is_file():
            raise ConfigError(f"{p}: no such file")
        try:
            out.append(read_poly(p))
        except (PolySyntaxError, DuplicateTuple, EmptyPolynomial, ArityMismatch) as exc:
            raise ParseError(f"{p}: {exc}" if str(p) not in str(exc) else str(exc)) from None
    return out


def run_solve(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg.validate()
        eqs = _load(cfg.equations)
        ineqs = _load(cfg.inequalities)
        polys = eqs + ineqs
        k = polys[0].nvars
        if any(p.nvars != k for p in polys):
            raise ConfigError("input polynomials have different numbers of variables")
        if cfg.format == "obj" and k != 3:
            raise ConfigError(f"obj output needs 3 variables, got {k}")
        opts = SolveOptions(scheme=cfg.scheme, taylor_order=cfg.taylor_order, workers=cfg.workers)
        enc = subdivide_enclose(eqs, ineqs, cfg.domain_for(k), cfg.min_size, cfg.max_depth, opts)
        text = render(enc, cfg.format)
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_PARSE
    except (ConfigError, ArityMismatch, InvalidThreshold, UnsupportedOrder, DimensionUnsupported, OSError, ValueError) as exc:
        print(f"config error: {exc}", file=stderr)
        return EXIT_CONFIG

    if cfg.output:
        Path(cfg.output).write_text(text)
        info = stdout
    else:
        stdout.write(text)
        info = stderr
    n_z, n_u = len(enc.included), len(enc.undetermined)
    print(f"{len(enc)} boxes ({n_z} included, {n_u} undetermined)", file=info)
    if cfg.count_ops:
        print("level boxes excluded included undetermined bisected adds muls pows", file=info)
        for s in enc.stats:
            d = s.as_dict()
            print(" ".join(str(d[c]) for c in ("level", "boxes", "excluded", "included", "undetermined",
                                                "bisected", "adds", "muls", "pows")), file=info)
        tot = enc.total_ops()
        print(f"total ops {tot.total} (adds {tot.adds}, muls {tot.muls}, pows {tot.pows})", file=info)
    return EXIT_OK


def run_dft(size: int, seed: int = 0, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if size < 2 or size & (size - 1):
        print(f"config error: {NotPowerOfTwo(f'size {size} is not a power of two >= 2')}", file=stderr)
        return EXIT_CONFIG
    rng = np.random.default_rng(seed)
    print("size max_rel_dev adds muls total ops/(N log2 N)", file=stdout)
    n = 2
    while n <= size:
        u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        c = OpCounter()
        v = dft_csf(u, c)
        ref = dft_naive(u)
        dev = float(np.max(np.abs(v - ref)) / max(np.max(np.abs(ref)), 1e-300))
        lg = n.bit_length() - 1
        print(f"{n} {dev:.3e} {c.adds} {c.muls} {c.total} {c.total / (n * lg):.4f}", file=stdout)
        n *= 2
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="csfpoly", description="Enclose zero sets of polynomial systems by subdivision.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="enclose the solutions of F_i = 0, g_j <= 0")
    s.add_argument("files", nargs="*", help="equation files (one polynomial each)")
    s.add_argument("--le", action="append", default=[], metavar="FILE", help="inequality g <= 0")
    s.add_argument("--domain", nargs=2, type=float, metavar=("LO", "HI"), help="same edge on every axis")
    s.add_argument("--domain-axis", nargs=3, action="append", default=[], metavar=("I", "LO", "HI"),
                   help="edge of axis I (1-based); overrides --domain")
    s.add_argument("--min-size", type=float, default=2.0**-5)
    s.add_argument("--max-depth", type=int, default=None)
    s.add_argument("--taylor-order", type=int, default=2)
    s.add_argument("--scheme", choices=("interval", "taylor"), default="taylor")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--output", default=None)
    s.add_argument("--format", choices=("boxes", "json", "obj"), default="boxes")
    s.add_argument("--count-ops", action="store_true")

    d = sub.add_parser("dft", help="compare the polynomial DFT with the direct sum")
    d.add_argument("--size", type=int, required=True)
    d.add_argument("--seed", type=int, default=0)
    return ap


def config_from_args(args) -> RunConfig:
    axes = {}
    for i, lo, hi in args.domain_axis:
        try:
            axes[int(i) - 1] = (float(lo), float(hi))
        except ValueError:
            raise ConfigError(f"bad --domain-axis {i} {lo} {hi}") from None
    return RunConfig(
        equations=list(args.files),
        inequalities=list(args.le),
        domain=tuple(args.domain) if args.domain else None,
        domain_axes=axes,
        min_size=args.min_size,
        max_depth=args.max_depth,
        taylor_order=args.taylor_order,
        scheme=args.scheme,
        workers=args.workers,
        output=args.output,
        format=args.format,
        count_ops=args.count_ops,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "dft":
        return run_dft(args.size, args.seed)
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run_solve(cfg)


if __name__ == "__main__":
    sys.exit(main())
