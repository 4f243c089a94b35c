"""The conversion lattice, with certificates replayed on sampled words."""

import random
from fractions import Fraction

import pytest

from cutpoint import (
    Gfa,
    LinRec,
    Lra,
    Lrva,
    Matrix,
    Vector,
    VectorLinRec,
    gfa_eval,
    gfa_to_linrec,
    gfa_to_lrva,
    gfa_to_pfa,
    linrec_companion_gfa,
    linrec_to_gfa,
    lr_eval,
    lrva_depth1_gfa,
    lrva_eval,
    lrva_to_gfa,
    mod_k_lra,
    pfa_eval,
    pfa_to_gfa,
    qfa_eval,
    qfa_to_gfa,
    rationalize_to_integer,
    shift_cutpoint,
    validate,
    verify_certificate,
)
from cutpoint.modelfile import load_model
from conftest import random_linrec, random_pfa, random_qfa, random_unary_gfa

FIB = LinRec((0, 1), (1, 1))


def is_integer_matrix(mat: Matrix) -> bool:
    return all(e.denominator == 1 for row in mat.entries for e in row)


class TestLinRecToGfa:
    def test_fibonacci(self):
        g, cert = linrec_to_gfa(FIB)
        assert g.n_states == 3
        assert gfa_eval(g, "a" * 5) == 5
        assert cert.min_length == 1

    def test_bordered_matrix_shape(self):
        # u_n = 2u_{n-1} + 3u_{n-2}, u0=0, u1=1: M1 = [[2,3],[1,0]], z = (2,1)
        u = LinRec((0, 1), (2, 3))
        g, _ = linrec_to_gfa(u)
        assert g.transitions["a"] == Matrix(
            [[0, 0, 0], [2, 2, 3], [1, 1, 0]]
        )
        assert gfa_eval(g, "aaa") == 7

    def test_constant_depth_one(self):
        g, _ = linrec_to_gfa(LinRec((5,), (1,)))
        assert g.n_states == 2
        assert all(gfa_eval(g, "a" * n) == 5 for n in range(1, 10))

    def test_integer_in_integer_out(self):
        rng = random.Random(31)
        for _ in range(20):
            u = random_linrec(rng, max_depth=5)
            g, cert = linrec_to_gfa(u)
            assert is_integer_matrix(g.transitions["a"])
            for n in range(1, 41):
                assert gfa_eval(g, "a" * n) == lr_eval(u, n)
            assert verify_certificate(cert, Lra(u), g, max_length=20)

    def test_companion_form_exact_from_zero(self):
        rng = random.Random(32)
        for _ in range(10):
            u = random_linrec(rng, max_depth=4)
            g, cert = linrec_companion_gfa(u)
            assert g.n_states == u.depth
            assert cert.min_length == 0
            for n in range(30):
                assert gfa_eval(g, "a" * n) == lr_eval(u, n)


class TestGfaToLinRec:
    def test_fibonacci_companion(self):
        g = Gfa(("a",), {"a": Matrix([[1, 1], [1, 0]])}, Vector([1, 0]), Vector([0, 1]))
        u, cert = gfa_to_linrec(g)
        assert u.coeffs == (1, 1)
        assert cert.min_length == 0

    def test_one_state(self):
        g = Gfa(("a",), {"a": Matrix([[1]])}, Vector([2]), Vector([3]))
        u, _ = gfa_to_linrec(g)
        assert u.coeffs == (1,)
        assert all(lr_eval(u, n) == 6 for n in range(5))

    def test_random_oracle(self):
        rng = random.Random(33)
        for _ in range(25):
            g = random_unary_gfa(rng)
            u, _ = gfa_to_linrec(g)
            assert u.depth == g.n_states
            for n in range(41):
                assert lr_eval(u, n) == gfa_eval(g, "a" * n)

    def test_round_trip(self):
        rng = random.Random(34)
        for _ in range(10):
            u = random_linrec(rng, max_depth=3)
            g, _ = linrec_to_gfa(u)
            back, _ = gfa_to_linrec(g)
            for n in range(1, 30):
                assert lr_eval(back, n) == lr_eval(u, n)

    def test_rejects_non_unary(self):
        g = Gfa(
            ("a", "b"),
            {"a": Matrix([[1]]), "b": Matrix([[2]])},
            Vector([1]),
            Vector([1]),
        )
        with pytest.raises(ValueError):
            gfa_to_linrec(g)


class TestShiftCutpoint:
    def test_zero_shift(self):
        g, _ = linrec_to_gfa(FIB)
        g2, cert = shift_cutpoint(g, 0)
        assert cert.offset == 0
        for n in range(10):
            assert gfa_eval(g2, "a" * n) == gfa_eval(g, "a" * n)

    def test_constant_one_to_zero(self):
        g = Gfa(("a",), {"a": Matrix([[1]])}, Vector([1]), Vector([1]))
        g2, _ = shift_cutpoint(g, 1)
        assert all(gfa_eval(g2, "a" * n) == 0 for n in range(8))

    def test_fibonacci_shift(self):
        g, _ = linrec_to_gfa(FIB)
        g2, _ = shift_cutpoint(g, 3)
        assert gfa_eval(g2, "a" * 5) == 2  # 5 - 3

    def test_exact_relation(self):
        rng = random.Random(35)
        for _ in range(10):
            g = random_unary_gfa(rng)
            lam = Fraction(rng.randint(-4, 4), rng.choice([1, 2, 3]))
            g2, cert = shift_cutpoint(g, lam)
            assert g2.n_states == g.n_states + 1
            for n in range(25):
                assert gfa_eval(g2, "a" * n) == gfa_eval(g, "a" * n) - lam
            assert verify_certificate(cert, g, g2, max_length=20)


class TestRationalizeToInteger:
    def test_integer_unchanged(self):
        g, _ = linrec_to_gfa(FIB)
        g2, cert = rationalize_to_integer(g)
        assert cert.scale == 1 and cert.growth == 1
        assert g2.transitions["a"] == g.transitions["a"]

    def test_half_machine(self):
        g = Gfa(("a",), {"a": Matrix([[Fraction(1, 2)]])}, Vector([1]), Vector([1]))
        g2, cert = rationalize_to_integer(g)
        assert g2.transitions["a"] == Matrix([[1]])
        for n in range(10):
            assert gfa_eval(g2, "a" * n) == 1
            assert gfa_eval(g2, "a" * n) == cert.expected(gfa_eval(g, "a" * n), n)

    def test_sign_agreement(self):
        rng = random.Random(36)
        for _ in range(20):
            g = random_unary_gfa(rng)
            g2, cert = rationalize_to_integer(g)
            assert is_integer_matrix(g2.transitions["a"])
            for n in range(31):
                a, b = gfa_eval(g, "a" * n), gfa_eval(g2, "a" * n)
                assert (a > 0) == (b > 0) and (a == 0) == (b == 0)
            assert verify_certificate(cert, g, g2, max_length=25)


class TestGfaToPfa:
    def test_output_validates(self):
        rng = random.Random(37)
        for _ in range(10):
            g = random_unary_gfa(rng, max_states=3)
            p, cut, cert = gfa_to_pfa(g)
            assert validate(p).ok
            assert cut == Fraction(len(p.accepting), p.n_states)
            assert p.n_states == g.n_states + 4

    def test_constant_zero(self):
        g = Gfa(("a",), {"a": Matrix([[0]])}, Vector([1]), Vector([0]))
        p, cut, _ = gfa_to_pfa(g)
        assert all(pfa_eval(p, "a" * n) == cut for n in range(10))

    def test_sign_triple(self):
        rng = random.Random(38)
        for _ in range(15):
            g = random_unary_gfa(rng, max_states=3)
            p, cut, cert = gfa_to_pfa(g)
            for n in range(31):
                fg = gfa_eval(g, "a" * n)
                fp = pfa_eval(p, "a" * n, check=False)
                assert (fp > cut) == (fg > 0)
                assert (fp == cut) == (fg == 0)
                assert (fp < cut) == (fg < 0)
                assert fp == cert.expected(fg, n)


class TestQfaToGfa:
    @pytest.mark.parametrize(
        "name", ["id", "dephase", "bitflip", "rotate", "damp", "complexrot"]
    )
    def test_fixture_agreement(self, fixtures_dir, name):
        q = load_model(fixtures_dir / f"{name}.qfa.json")
        g, cert = qfa_to_gfa(q)
        assert g.n_states == q.n_states**2
        assert g.transitions["a"].is_real()
        for n in range(31):
            assert gfa_eval(g, "a" * n) == qfa_eval(q, "a" * n)
        assert verify_certificate(cert, q, g, max_length=15)

    def test_identity_constant_one(self, fixtures_dir):
        q = load_model(fixtures_dir / "id.qfa.json")
        g, _ = qfa_to_gfa(q)
        assert all(gfa_eval(g, "a" * n) == 1 for n in range(10))

    def test_bitflip_single_step(self, fixtures_dir):
        q = load_model(fixtures_dir / "bitflip.qfa.json")
        g, _ = qfa_to_gfa(q)
        assert gfa_eval(g, "a") == 0

    def test_random_agreement(self):
        rng = random.Random(39)
        for _ in range(10):
            q = random_qfa(rng)
            g, _ = qfa_to_gfa(q)
            for n in range(15):
                assert gfa_eval(g, "a" * n) == qfa_eval(q, "a" * n)


class TestPfaToGfa:
    def test_agreement(self):
        rng = random.Random(40)
        for _ in range(10):
            p = random_pfa(rng)
            g, cert = pfa_to_gfa(p)
            for n in range(25):
                assert gfa_eval(g, "a" * n) == pfa_eval(p, "a" * n, check=False)
            assert verify_certificate(cert, p, g, max_length=20)


class TestLrvaConversions:
    def test_depth1_identity_machine(self):
        v = Lrva(
            VectorLinRec((Vector([1, 0]),), (Matrix.identity(2),)),
            Vector([1, 0]),
        )
        g = lrva_depth1_gfa(v)
        assert g.transitions["a"] == Matrix.identity(2)
        back = gfa_to_lrva(g)
        assert back == v

    def test_depth1_fibonacci(self):
        v = Lrva(
            VectorLinRec((Vector([0, 1]),), (Matrix([[1, 1], [1, 0]]),)),
            Vector([1, 0]),
        )
        g = lrva_depth1_gfa(v)
        for n in range(41):
            assert gfa_eval(g, "a" * n) == lrva_eval(v, "a" * n)

    def test_depth1_requires_depth1(self):
        v = Lrva(
            VectorLinRec(
                (Vector([1]), Vector([2])),
                (Matrix([[1]]), Matrix([[1]])),
            ),
            Vector([1]),
        )
        with pytest.raises(ValueError):
            lrva_depth1_gfa(v)

    def test_stacked_reduces_to_depth1(self):
        v = Lrva(
            VectorLinRec((Vector([0, 1]),), (Matrix([[1, 1], [1, 0]]),)),
            Vector([1, 0]),
        )
        g, cert = lrva_to_gfa(v)
        assert g.n_states == 2 and cert.min_length == 0

    def test_scalar_embedding_reproduces_lr_eval(self):
        v = Lrva(
            VectorLinRec(
                (Vector([0]), Vector([1])),
                (Matrix([[1]]), Matrix([[1]])),
            ),
            Vector([1]),
        )
        g, cert = lrva_to_gfa(v)
        assert g.n_states == 2
        for n in range(30):
            assert gfa_eval(g, "a" * n) == lr_eval(FIB, n)
        assert verify_certificate(cert, v, g, max_length=25)

    def test_shift_dynamics_period_two(self):
        v = Lrva(
            VectorLinRec(
                (Vector([1, 0]), Vector([0, 1])),
                (Matrix.zero(2), Matrix.identity(2)),
            ),
            Vector([2, 3]),
        )
        g, _ = lrva_to_gfa(v)
        values = [gfa_eval(g, "a" * n) for n in range(8)]
        assert values == [2, 3, 2, 3, 2, 3, 2, 3]
        for n in range(8):
            assert values[n] == lrva_eval(v, "a" * n)


class TestModKThroughConversion:
    def test_mod2_language(self):
        g, _ = linrec_to_gfa(mod_k_lra(2).rec)
        for n in range(1, 50):
            assert gfa_eval(g, "a" * n) == (1 if n % 2 == 0 else 0)
