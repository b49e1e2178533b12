"""Regenerate the polynomial files under systems/ from their symbolic definitions.

    python scripts/make_systems.py [--out systems]

Needs sympy (``pip install -e .[scripts]``).
"""

from __future__ import annotations

import argparse
from pathlib import Path

import sympy as sp


def write_poly(path: Path, expr, gens, header: str) -> None:
    P = sp.Poly(sp.expand(expr), *gens)
    lines = [f"# {header}", f"# variables: {' '.join(map(str, gens))}"]
    for monom, coef in sorted(P.terms()):
        c = sp.nsimplify(coef)
        text = str(int(c)) if c.is_Integer else repr(float(sp.N(c, 30)))
        lines.append(f"{text} {' '.join(map(str, monom))}")
    path.write_text("\n".join(lines) + "\n")


def circle(out: Path) -> None:
    x1, x2 = sp.symbols("x1 x2")
    write_poly(out / "circle.poly", x1**2 + x2**2 - 1, (x1, x2), "unit circle")


def fig4(out: Path) -> None:
    x1, x2 = sp.symbols("x1 x2")
    F = 5 + x2 + 7 * x1 + 3 * x1 * x2 + 8 * x1**3 + 4 * x1**3 * x2**3 + 9 * x1**3 * x2**4
    write_poly(out / "fig4.poly", F, (x1, x2), "bivariate example with a seven-term support")


def robotics(out: Path) -> None:
    Q1, Q2, Q3, Q4 = Q = sp.symbols("Q1 Q2 Q3 Q4")
    s3 = sp.sqrt(3)
    F = (
        -6 * Q2**2 * Q3 * Q1 + 6 * Q2 * Q3**2 * Q4 + 3 * s3 * Q2**2 * Q3 * Q4
        - 6 * Q2 * Q1**2 * Q4 + 6 * Q1 * Q4**2 * Q3
        - 3 * s3 * Q2 * Q1 * Q4**2 + 3 * s3 * Q2 * Q3**2 * Q1
        - 3 * s3 * Q3 * Q1**2 * Q4 + s3 * Q2**3 * Q1
        - s3 * Q2 * Q1**3 + Q4 * s3 * Q3**3 - Q3 * s3 * Q4**3
    )
    d = out / "robotics"
    d.mkdir(parents=True, exist_ok=True)
    write_poly(d / "singular.poly", F, Q, "parallel singularities in quaternion coordinates")
    write_poly(d / "norm.poly", sum(q**2 for q in Q) - 1, Q, "unit quaternion")


def automatic(out: Path) -> None:
    z1, z2, z3 = sp.symbols("z1 z2 z3")
    eqs = [
        z1 * z2**2 - z1 * z3 - 2,
        12 * z2**3 * z3**3 - 2 * z1**2 * z2 * z3**2 + z2**3 * z3**2 - 2 * z2**2 * z3**3 - 12 * z2 * z3**4
        + 2 * z1**2 * z3**2 - z2 * z3**3 - 2 * z1 * z2 * z3 - 7 * z2**3 - 10 * z2**2 * z3 + 14 * z1 * z3
        - 8 * z2**2 + 9 * z2 * z3 + 12 * z3**2 + 30 * z3 + 2,
        z1**3 * z3**3 + z1 * z2 * z3**4 - z1**3 * z3**2 + z1 * z3**4 - 12 * z2**2 * z3**3
        - 6 * z1**2 * z2 * z3 + 3 * z1**2 * z3**2 - z1 * z2 * z3**2 - z2**2 * z3**2 - 10 * z2 * z3**3
        - 7 * z1**2 * z3 - 12 * z1 * z2 * z3 - 2 * z1 * z3**2 - z2 * z3**2 + 2 * z3**3 - z1 * z2
        - 9 * z1 * z3 + 7 * z2**2 + 10 * z2 * z3 - z1 + 15 * z2 + 8 * z3 + 8,
        z1**3 * z2 * z3**2 - z1**3 * z3**2 + z1 * z3**4 + z1**2 * z2 * z3 - 12 * z2 * z3**3
        - 7 * z1**2 * z3 - z1 * z2 * z3 - z1 * z3**2 - z2 * z3**2 + 2 * z3**3 - 11 * z1 * z3
        - z1 + 7 * z2 + 10 * z3 + 8,
    ]
    xs = sp.symbols("x1 y1 x2 y2 x3 y3", real=True)
    sub = {z1: xs[0] + sp.I * xs[1], z2: xs[2] + sp.I * xs[3], z3: xs[4] + sp.I * xs[5]}
    d = out / "automatic"
    d.mkdir(parents=True, exist_ok=True)
    for n, e in enumerate(eqs, start=1):
        w = sp.expand(e.subs(sub))
        write_poly(d / f"eq{n}_re.poly", sp.re(w), xs, f"real part of equation {n}")
        write_poly(d / f"eq{n}_im.poly", sp.im(w), xs, f"imaginary part of equation {n}")
    for j in range(3):
        x, y = xs[2 * j], xs[2 * j + 1]
        write_poly(d / f"modulus{j + 1}.poly", x**2 + y**2 - 1, xs, f"|z{j + 1}|^2 - 1 <= 0")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "systems")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for make in (circle, fig4, robotics, automatic):
        make(args.out)
    print(f"wrote systems to {args.out}")


if __name__ == "__main__":
    main()
