"""The three automata models: evaluation, validation, classification."""

import random
from fractions import Fraction

import pytest

from cutpoint import (
    Classification,
    ForeignSymbolError,
    GaussianRational,
    Gfa,
    InvalidModelError,
    LinRec,
    Matrix,
    Pfa,
    Qfa,
    Relation,
    ThresholdQuery,
    Vector,
    classify,
    gfa_eval,
    is_bistochastic,
    linrec_to_gfa,
    mod_k_lra,
    pfa_eval,
    qfa_eval,
    validate,
)
from conftest import random_pfa, random_qfa

HALF = Fraction(1, 2)
I2 = Matrix.identity(2)
FIB_GFA = Gfa(("a",), {"a": Matrix([[1, 1], [1, 0]])}, Vector([1, 0]), Vector([0, 1]))


class TestGfaEval:
    def test_one_state_constant(self):
        g = Gfa(("a",), {"a": Matrix([[1]])}, Vector([1]), Vector([1]))
        for n in range(10):
            assert gfa_eval(g, "a" * n) == 1

    def test_fibonacci_companion(self):
        g, _ = linrec_to_gfa(LinRec((0, 1), (1, 1)))
        assert gfa_eval(g, "a" * 5) == 5

    def test_mod2_paper_values(self):
        g, _ = linrec_to_gfa(mod_k_lra(2).rec)
        assert gfa_eval(g, "a") == 0
        assert gfa_eval(g, "aa") == 1

    def test_foreign_symbol(self):
        with pytest.raises(ForeignSymbolError):
            gfa_eval(FIB_GFA, "ab")


class TestPfaEval:
    def test_identity_always_one(self):
        p = Pfa(("a",), {"a": I2, "$": I2}, Vector([1, 0]), frozenset({0}))
        for n in range(6):
            assert pfa_eval(p, "a" * n) == 1

    def test_one_mixing_step(self):
        p = Pfa(
            ("a",),
            {"a": Matrix([[HALF, HALF], [HALF, HALF]]), "$": I2},
            Vector([1, 0]),
            frozenset({0}),
        )
        assert pfa_eval(p, "a") == HALF

    def test_empty_accepting_set(self):
        p = Pfa(("a",), {"a": I2, "$": I2}, Vector([1, 0]), frozenset())
        assert all(pfa_eval(p, "a" * n) == 0 for n in range(5))

    def test_invalid_pfa_rejected(self):
        bad = Pfa(
            ("a",),
            {"a": Matrix([[1, HALF], [0, HALF + 1]]), "$": I2},
            Vector([1, 0]),
            frozenset({0}),
        )
        with pytest.raises(InvalidModelError):
            pfa_eval(bad, "a")

    def test_values_in_unit_interval(self):
        rng = random.Random(21)
        for _ in range(10):
            p = random_pfa(rng)
            state = p.initial
            for n in range(51):
                value = p.accepting_mass(p.transitions["$"] * state)
                assert 0 <= value <= 1
                assert value == pfa_eval(p, "a" * n) if n <= 3 else True
                state = p.transitions["a"] * state


class TestQfaEval:
    def test_identity(self):
        q = Qfa(("a",), {"a": (I2,), "$": (I2,)}, Matrix([[1, 0], [0, 0]]), frozenset({0}))
        for n in range(5):
            assert qfa_eval(q, "a" * n) == 1

    def test_dephasing_preserves_diagonal(self):
        q = Qfa(
            ("a",),
            {"a": (Matrix([[1, 0], [0, 0]]), Matrix([[0, 0], [0, 1]])), "$": (I2,)},
            Matrix([[HALF, 0], [0, HALF]]),
            frozenset({0}),
        )
        for n in range(5):
            assert qfa_eval(q, "a" * n) == HALF

    def test_bit_flip(self):
        q = Qfa(
            ("a",),
            {"a": (Matrix([[0, 1], [1, 0]]),), "$": (I2,)},
            Matrix([[1, 0], [0, 0]]),
            frozenset({0}),
        )
        assert qfa_eval(q, "a") == 0
        assert qfa_eval(q, "aa") == 1

    def test_trace_preserved_and_real_values(self):
        rng = random.Random(22)
        for _ in range(10):
            q = random_qfa(rng)
            assert validate(q).ok
            rho = q.initial_density
            for n in range(20):
                tr = rho.trace()
                assert tr == 1
                rho = q.apply("a", rho)
            for n in range(10):
                value = qfa_eval(q, "a" * n)
                assert 0 <= value <= 1


class TestValidate:
    def test_pfa_valid(self):
        p = Pfa(("a",), {"a": I2, "$": I2}, Vector([1, 0]), frozenset({0}))
        assert validate(p).ok

    def test_superoperator_completeness(self):
        bad = Qfa(
            ("a",), {"a": (I2, I2), "$": (I2,)}, Matrix([[1, 0], [0, 0]]), frozenset({0})
        )
        report = validate(bad)
        assert not report.ok and "E†E" in report.violations[0]

    def test_density_trace(self):
        bad = Qfa(
            ("a",), {"a": (I2,), "$": (I2,)}, Matrix([[HALF, 0], [0, 0]]), frozenset({0})
        )
        report = validate(bad)
        assert not report.ok and "trace" in report.violations[0]

    def test_density_psd_needs_all_principal_minors(self):
        # trace 1, Hermitian, all LEADING minors >= 0, but not PSD
        i3 = Matrix.identity(3)
        bad = Qfa(
            ("a",),
            {"a": (i3,), "$": (i3,)},
            Matrix([[0, 0, 0], [0, -1, 0], [0, 0, 2]]),
            frozenset({0}),
        )
        report = validate(bad)
        assert not report.ok
        assert any("principal minor" in v for v in report.violations)

    def test_non_hermitian_density(self):
        bad = Qfa(
            ("a",),
            {"a": (I2,), "$": (I2,)},
            Matrix([[HALF, 1], [0, HALF]]),
            frozenset({0}),
        )
        assert not validate(bad).ok

    def test_stochastic_initial_vector(self):
        bad = Pfa(("a",), {"a": I2, "$": I2}, Vector([1, 1]), frozenset({0}))
        report = validate(bad)
        assert not report.ok


class TestBistochastic:
    def test_identity(self):
        p = Pfa(("a",), {"a": I2, "$": I2}, Vector([1, 0]), frozenset({0}))
        assert is_bistochastic(p)

    def test_uniform_mixing(self):
        p = Pfa(
            ("a",),
            {"a": Matrix([[HALF, HALF], [HALF, HALF]]), "$": I2},
            Vector([1, 0]),
            frozenset({0}),
        )
        assert is_bistochastic(p)

    def test_column_only(self):
        p = Pfa(
            ("a",),
            {"a": Matrix([[1, HALF], [0, HALF]]), "$": I2},
            Vector([1, 0]),
            frozenset({0}),
        )
        assert not is_bistochastic(p)


class TestClassify:
    def test_mod2_at_zero(self):
        g, _ = linrec_to_gfa(mod_k_lra(2).rec)
        cls, member = classify(g, ThresholdQuery(0, Relation.EQ), "a")
        assert cls is Classification.EQUAL and member

    def test_constant_one(self):
        g = Gfa(("a",), {"a": Matrix([[1]])}, Vector([1]), Vector([1]))
        for n in range(5):
            cls, member = classify(g, ThresholdQuery(1, Relation.EQ), "a" * n)
            assert cls is Classification.EQUAL and member

    def test_fibonacci_above(self):
        cls, member = classify(FIB_GFA, ThresholdQuery(0, Relation.GT), "aaa")
        assert cls is Classification.ABOVE and member

    def test_exactly_one_classification(self):
        rng = random.Random(23)
        for _ in range(20):
            value = Fraction(rng.randint(-10, 10), rng.randint(1, 10))
            g = Gfa(("a",), {"a": Matrix([[1]])}, Vector([value]), Vector([1]))
            lam = Fraction(rng.randint(-5, 5), rng.randint(1, 5))
            cls, _ = classify(g, ThresholdQuery(lam, Relation.EQ), "a")
            expected = (
                Classification.BELOW
                if value < lam
                else Classification.EQUAL
                if value == lam
                else Classification.ABOVE
            )
            assert cls is expected

    def test_empty_word_exclusion(self):
        g = Gfa(("a",), {"a": Matrix([[1]])}, Vector([1]), Vector([1]))
        query = ThresholdQuery(1, Relation.EQ, include_empty=False)
        cls, member = classify(g, query, "")
        assert cls is Classification.EQUAL and not member
        _, member_a = classify(g, query, "a")
        assert member_a


class TestRelation:
    def test_parse(self):
        assert Relation.parse(">=") is Relation.GE
        assert Relation.parse("≠") is Relation.NE
        with pytest.raises(ValueError):
            Relation.parse("~")

    def test_holds(self):
        assert Relation.LE.holds(Fraction(1, 2), Fraction(1, 2))
        assert not Relation.LT.holds(Fraction(1, 2), Fraction(1, 2))
        assert Relation.NE.holds(Fraction(1), Fraction(2))

    def test_complement(self):
        for rel in Relation:
            value, lam = Fraction(3, 7), Fraction(1, 2)
            assert rel.holds(value, lam) != rel.complement.holds(value, lam)
