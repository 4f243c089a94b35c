"""Shared fixtures and random-instance generators for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest

from cutpoint import Gfa, LinRec, Matrix, Pfa, Qfa, Vector

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    assert FIXTURES.is_dir(), "run demos/build_fixtures.py first"
    return FIXTURES


def random_linrec(rng: random.Random, max_depth=5, bound=3) -> LinRec:
    depth = rng.randint(1, max_depth)
    initials = [rng.randint(-bound, bound) for _ in range(depth)]
    coeffs = [rng.randint(-bound, bound) for _ in range(depth)]
    return LinRec(tuple(initials), tuple(coeffs))


def random_rational(rng: random.Random, num_bound=2, denoms=(1, 2)) -> Fraction:
    return Fraction(rng.randint(-num_bound, num_bound), rng.choice(denoms))


def random_unary_gfa(rng: random.Random, max_states=4) -> Gfa:
    n = rng.randint(1, max_states)
    mat = Matrix([[random_rational(rng) for _ in range(n)] for _ in range(n)])
    return Gfa(
        ("a",),
        {"a": mat},
        Vector([random_rational(rng) for _ in range(n)]),
        Vector([random_rational(rng) for _ in range(n)]),
    )


def random_stochastic_matrix(rng: random.Random, n: int, weight=4) -> Matrix:
    cols = []
    for _ in range(n):
        raw = [rng.randint(0, weight) for _ in range(n)]
        if sum(raw) == 0:
            raw[rng.randrange(n)] = 1
        total = sum(raw)
        cols.append([Fraction(v, total) for v in raw])
    return Matrix([[cols[j][i] for j in range(n)] for i in range(n)])


def random_pfa(rng: random.Random, n=3) -> Pfa:
    raw = [rng.randint(0, 4) for _ in range(n)]
    if sum(raw) == 0:
        raw[0] = 1
    total = sum(raw)
    initial = Vector([Fraction(v, total) for v in raw])
    accepting = frozenset(q for q in range(n) if rng.random() < 0.5)
    return Pfa(
        ("a",),
        {
            "a": random_stochastic_matrix(rng, n),
            "$": random_stochastic_matrix(rng, n),
        },
        initial,
        accepting,
    )


PYTHAGOREAN = [
    (Fraction(3, 5), Fraction(4, 5)),
    (Fraction(5, 13), Fraction(12, 13)),
    (Fraction(8, 17), Fraction(15, 17)),
]


def random_rational_unitary(rng: random.Random) -> Matrix:
    a, b = rng.choice(PYTHAGOREAN)
    if rng.random() < 0.5:
        a, b = b, a
    if rng.random() < 0.5:
        b = -b
    return Matrix([[a, b], [-b, a]])


def random_qfa(rng: random.Random) -> Qfa:
    """Random valid 2-state QFA built from rational unitaries and a rational
    amplitude/phase-damping pair."""

    def superop():
        choice = rng.randrange(3)
        if choice == 0:
            return (random_rational_unitary(rng),)
        a, b = rng.choice(PYTHAGOREAN)
        if choice == 1:
            # amplitude damping with rational strengths
            return (
                Matrix([[1, 0], [0, a]]),
                Matrix([[0, b], [0, 0]]),
            )
        # phase damping
        return (
            Matrix([[a, 0], [0, a]]),
            Matrix([[b, 0], [0, -b]]),
        )

    w = Fraction(rng.randint(0, 4), 4)
    rho = Matrix([[w, 0], [0, 1 - w]])
    u = random_rational_unitary(rng)
    rho = u * rho * u.conj_transpose()
    accepting = frozenset({rng.randrange(2)})
    return Qfa(("a",), {"a": superop(), "$": superop()}, rho, accepting)
