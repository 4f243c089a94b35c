#!/usr/bin/env python3
"""Build the bundled model fixtures.

Constructs each fixture through the library API and serializes it in
canonical form into the fixtures/ directory: the Fibonacci recurrence, the
MOD_k automata, the period-6 sign-pattern recurrence, small probabilistic
machines, and a family of rational-Kraus quantum machines (identity,
dephasing, bit flip, real rotation, amplitude damping, and a genuinely
complex unitary).

Run from the repository root:  python3 demos/build_fixtures.py
"""

from fractions import Fraction as F
from pathlib import Path

from cutpoint import (
    GaussianRational,
    Gfa,
    LinRec,
    Lra,
    Lrva,
    Matrix,
    Pfa,
    Qfa,
    TreeLinRec,
    Vector,
    VectorLinRec,
    mod_k_lra,
    validate,
)
from cutpoint.modelfile import save_model

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    half = F(1, 2)
    i2 = Matrix.identity(2)

    models = {
        # recurrences
        "fib.lrr.json": LinRec((0, 1), (1, 1)),
        "const3.lrr.json": LinRec((3,), (1,)),
        "period6.lrr.json": LinRec((1, 1), (1, -1)),
        "mod2.lra.json": mod_k_lra(2),
        "mod3.lra.json": mod_k_lra(3),
        # Fibonacci as a 2-dimensional depth-1 vector recurrence automaton
        "fib2.lrva.json": Lrva(
            VectorLinRec((Vector([0, 1]),), (Matrix([[1, 1], [1, 0]]),)),
            Vector([1, 0]),
        ),
        # depth-1 binary tree recurrence: t(eps)=1, coefficient 2 under a, 3 under b
        "tree.tlrr.json": TreeLinRec(1, {"": 1}, (2,), (3,)),
        # a tiny GFA: the Fibonacci companion dynamics read directly
        "fib.gfa.json": Gfa(
            ("a",),
            {"a": Matrix([[1, 1], [1, 0]])},
            Vector([1, 0]),
            Vector([0, 1]),
        ),
        # probabilistic machines
        "id.pfa.json": Pfa(
            ("a",), {"a": i2, "$": i2}, Vector([1, 0]), frozenset({0})
        ),
        "mix.pfa.json": Pfa(
            ("a",),
            {"a": Matrix([[half, half], [half, half]]), "$": i2},
            Vector([half, half]),
            frozenset({0}),
        ),
        "mix_e1.pfa.json": Pfa(
            ("a",),
            {"a": Matrix([[half, half], [half, half]]), "$": i2},
            Vector([1, 0]),
            frozenset({0}),
        ),
    }

    # quantum machines (all operation elements Gaussian rational)
    proj1 = Matrix([[1, 0], [0, 0]])
    proj2 = Matrix([[0, 0], [0, 1]])
    flip = Matrix([[0, 1], [1, 0]])
    rot = Matrix([[F(3, 5), F(4, 5)], [F(-4, 5), F(3, 5)]])
    damp_keep = Matrix([[1, 0], [0, F(3, 5)]])
    damp_decay = Matrix([[0, F(4, 5)], [0, 0]])
    cplx = Matrix(
        [
            [GaussianRational(F(3, 5)), GaussianRational(0, F(4, 5))],
            [GaussianRational(F(4, 5)), GaussianRational(0, F(-3, 5))],
        ]
    )
    e1 = Matrix([[1, 0], [0, 0]])
    uniform = Matrix([[half, 0], [0, half]])
    plus = Matrix([[half, half], [half, half]])

    models.update(
        {
            "id.qfa.json": Qfa(
                ("a",), {"a": (i2,), "$": (i2,)}, e1, frozenset({0})
            ),
            "dephase.qfa.json": Qfa(
                ("a",), {"a": (proj1, proj2), "$": (i2,)}, uniform, frozenset({0})
            ),
            "bitflip.qfa.json": Qfa(
                ("a",), {"a": (flip,), "$": (i2,)}, e1, frozenset({0})
            ),
            "rotate.qfa.json": Qfa(
                ("a",), {"a": (rot,), "$": (i2,)}, e1, frozenset({0})
            ),
            "damp.qfa.json": Qfa(
                ("a",), {"a": (damp_keep, damp_decay), "$": (i2,)}, proj2, frozenset({0})
            ),
            "complexrot.qfa.json": Qfa(
                ("a",), {"a": (cplx,), "$": (i2,)}, plus, frozenset({0})
            ),
        }
    )

    for name, model in models.items():
        report = validate(model)
        if not report.ok:
            raise SystemExit(f"{name}: {report.describe()}")
        save_model(model, FIXTURES / name)
        print(f"wrote fixtures/{name}")


if __name__ == "__main__":
    main()
