"""Weighted, probabilistic and quantum finite automata with exact evaluation.

Conventions fixed once for the whole library:

* column vectors, left multiplication: one step is v <- A_sigma v;
* probabilistic and quantum machines read w$ — evaluation appends the end
  marker internally, words never contain it;
* "stochastic" means column-stochastic (columns sum to 1, entries >= 0);
* accepting states are 0-based inside the library (1-based only on disk).

Constructors enforce structural invariants (shapes, alphabet consistency);
the semantic invariants (stochasticity, superoperator completeness, density
matrix well-formedness) are checked by :func:`validate`, so ill-formed
machines can be built, inspected and reported on.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .linalg import (
    GaussianRational,
    Matrix,
    Vector,
    imag_part,
    real_part,
)
from .sequences import (
    ForeignSymbolError,
    LinRec,
    Lra,
    Lrva,
    TreeLinRec,
    lr_eval,
    lra_eval,
    lrva_eval,
    plrva_validate,
    tlr_eval,
)
from .validation import InvalidModelError, ValidationReport, require_valid

END_MARKER = "$"


def _check_alphabet(alphabet) -> tuple[str, ...]:
    symbols = tuple(alphabet)
    if not symbols:
        raise ValueError("alphabet must not be empty")
    if len(set(symbols)) != len(symbols):
        raise ValueError("duplicate symbol in alphabet")
    for s in symbols:
        if len(s) != 1:
            raise ValueError("symbols must be single characters")
        if s == END_MARKER:
            raise ValueError("the end marker is reserved")
    return symbols


def _check_word(word: str, alphabet: tuple[str, ...]) -> None:
    for ch in word:
        if ch not in alphabet:
            raise ForeignSymbolError(f"symbol {ch!r} not in alphabet {alphabet}")


class Relation(enum.Enum):
    """Comparison against a cutpoint; names the language L(., relation λ)."""

    LT = "<"
    LE = "<="
    EQ = "="
    NE = "!="
    GE = ">="
    GT = ">"

    def holds(self, value: Fraction, cutpoint: Fraction) -> bool:
        if self is Relation.LT:
            return value < cutpoint
        if self is Relation.LE:
            return value <= cutpoint
        if self is Relation.EQ:
            return value == cutpoint
        if self is Relation.NE:
            return value != cutpoint
        if self is Relation.GE:
            return value >= cutpoint
        return value > cutpoint

    @property
    def complement(self) -> "Relation":
        return {
            Relation.LT: Relation.GE,
            Relation.LE: Relation.GT,
            Relation.EQ: Relation.NE,
            Relation.NE: Relation.EQ,
            Relation.GE: Relation.LT,
            Relation.GT: Relation.LE,
        }[self]

    @classmethod
    def parse(cls, text: str) -> "Relation":
        aliases = {
            "<": cls.LT, "<=": cls.LE, "≤": cls.LE,
            "=": cls.EQ, "==": cls.EQ,
            "!=": cls.NE, "≠": cls.NE, "<>": cls.NE,
            ">=": cls.GE, "≥": cls.GE, ">": cls.GT,
        }
        try:
            return aliases[text.strip()]
        except KeyError:
            raise ValueError(f"unknown relation {text!r}") from None


@dataclass(frozen=True)
class ThresholdQuery:
    """A cutpoint λ with a relation; include_empty=False names L+ (ε removed)."""

    cutpoint: Fraction
    relation: Relation
    include_empty: bool = True

    def __post_init__(self):
        object.__setattr__(self, "cutpoint", Fraction(self.cutpoint))


class Classification(enum.Enum):
    BELOW = "below"
    EQUAL = "equal"
    ABOVE = "above"


@dataclass(frozen=True)
class Gfa:
    """Generalized finite automaton: f(w) = final . A_{w_k} ... A_{w_1} . initial."""

    alphabet: tuple[str, ...]
    transitions: Mapping[str, Matrix]
    initial: Vector
    final: Vector

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _check_alphabet(self.alphabet))
        object.__setattr__(self, "transitions", dict(self.transitions))
        n = self.initial.dim
        if self.final.dim != n:
            raise ValueError("final vector dimension mismatch")
        if set(self.transitions) != set(self.alphabet):
            raise ValueError("transitions must cover exactly the alphabet")
        for sym, mat in self.transitions.items():
            if mat.rows != n or mat.cols != n:
                raise ValueError(f"transition matrix for {sym!r} is not {n}x{n}")

    @property
    def n_states(self) -> int:
        return self.initial.dim

    @property
    def is_unary(self) -> bool:
        return len(self.alphabet) == 1


def gfa_eval(g: Gfa, word: str) -> Fraction:
    """Exact accepting value; the empty word gives final . initial."""
    _check_word(word, g.alphabet)
    state = g.initial
    for ch in word:
        state = g.transitions[ch] * state
    return g.final.dot(state)


@dataclass(frozen=True)
class Pfa:
    """Probabilistic automaton; transitions carry matrices for Σ and "$"."""

    alphabet: tuple[str, ...]
    transitions: Mapping[str, Matrix]
    initial: Vector
    accepting: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _check_alphabet(self.alphabet))
        object.__setattr__(self, "transitions", dict(self.transitions))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        n = self.initial.dim
        expected = set(self.alphabet) | {END_MARKER}
        if set(self.transitions) != expected:
            raise ValueError("transitions must cover the alphabet plus the end marker")
        for sym, mat in self.transitions.items():
            if mat.rows != n or mat.cols != n:
                raise ValueError(f"transition matrix for {sym!r} is not {n}x{n}")
        if any(q < 0 or q >= n for q in self.accepting):
            raise ValueError("accepting state index out of range")

    @property
    def n_states(self) -> int:
        return self.initial.dim

    @property
    def is_unary(self) -> bool:
        return len(self.alphabet) == 1

    def accepting_mass(self, state: Vector) -> Fraction:
        return sum((state[i] for i in sorted(self.accepting)), start=Fraction(0))


def pfa_eval(p: Pfa, word: str, *, check: bool = True) -> Fraction:
    """Accepting probability of w (the end marker is applied internally)."""
    if check:
        require_valid(validate(p))
    _check_word(word, p.alphabet)
    state = p.initial
    for ch in word:
        state = p.transitions[ch] * state
    state = p.transitions[END_MARKER] * state
    return p.accepting_mass(state)


@dataclass(frozen=True)
class Qfa:
    """Quantum automaton over mixed states with one superoperator per symbol."""

    alphabet: tuple[str, ...]
    superoperators: Mapping[str, tuple[Matrix, ...]]
    initial_density: Matrix
    accepting: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _check_alphabet(self.alphabet))
        object.__setattr__(
            self,
            "superoperators",
            {sym: tuple(ops) for sym, ops in dict(self.superoperators).items()},
        )
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        n = self.initial_density.rows
        if self.initial_density.cols != n:
            raise ValueError("initial density matrix must be square")
        expected = set(self.alphabet) | {END_MARKER}
        if set(self.superoperators) != expected:
            raise ValueError("superoperators must cover the alphabet plus the end marker")
        for sym, ops in self.superoperators.items():
            if not ops:
                raise ValueError(f"superoperator for {sym!r} has no operation elements")
            for e in ops:
                if e.rows != n or e.cols != n:
                    raise ValueError(f"operation element for {sym!r} is not {n}x{n}")
        if any(q < 0 or q >= n for q in self.accepting):
            raise ValueError("accepting state index out of range")

    @property
    def n_states(self) -> int:
        return self.initial_density.rows

    @property
    def is_unary(self) -> bool:
        return len(self.alphabet) == 1

    def apply(self, symbol: str, rho: Matrix) -> Matrix:
        out = Matrix.zero(self.n_states)
        for e in self.superoperators[symbol]:
            out = out + e * rho * e.conj_transpose()
        return out

    def accepting_mass(self, rho: Matrix) -> Fraction:
        total = Fraction(0)
        for i in sorted(self.accepting):
            entry = rho[i, i]
            if imag_part(entry) != 0:
                raise ArithmeticError("accepting mass has nonzero imaginary part")
            total += real_part(entry)
        return total


def qfa_eval(q: Qfa, word: str, *, check: bool = True) -> Fraction:
    """Accepting probability: apply each symbol's superoperator, then $."""
    if check:
        require_valid(validate(q))
    _check_word(word, q.alphabet)
    rho = q.initial_density
    for ch in word:
        rho = q.apply(ch, rho)
    rho = q.apply(END_MARKER, rho)
    return q.accepting_mass(rho)


def _validate_pfa(p: Pfa) -> ValidationReport:
    violations = []
    if any(e < 0 for e in p.initial):
        violations.append("initial vector has a negative entry")
    if p.initial.total() != 1:
        violations.append(f"initial vector sums to {p.initial.total()}, not 1")
    for sym in sorted(p.transitions):
        mat = p.transitions[sym]
        for j in range(mat.cols):
            col = mat.col(j)
            if any(e < 0 for e in col):
                violations.append(f"matrix for {sym!r}: negative entry in column {j + 1}")
                break
            if col.total() != 1:
                violations.append(
                    f"matrix for {sym!r}: column {j + 1} sums to {col.total()}, not 1"
                )
                break
    return ValidationReport("pfa", tuple(violations))


def _is_psd_hermitian(rho: Matrix) -> list[str]:
    """All-principal-minors PSD test for an (already Hermitian) matrix."""
    n = rho.rows
    problems = []
    # every principal minor of a Hermitian matrix is real; PSD iff all >= 0
    indices = list(range(n))
    for mask in range(1, 1 << n):
        subset = [i for i in indices if mask >> i & 1]
        minor = rho.submatrix(subset, subset).det()
        if imag_part(minor) != 0:
            problems.append("principal minor is not real")
            break
        if real_part(minor) < 0:
            problems.append(
                f"principal minor on states {[i + 1 for i in subset]} is negative"
            )
            break
    return problems


def _validate_qfa(q: Qfa) -> ValidationReport:
    violations = []
    n = q.n_states
    ident = Matrix.identity(n)
    for sym in sorted(q.superoperators):
        ops = q.superoperators[sym]
        total = Matrix.zero(n)
        for e in ops:
            total = total + e.conj_transpose() * e
        if total != ident:
            violations.append(
                f"superoperator for {sym!r}: sum of E†E is not the identity"
            )
    rho = q.initial_density
    if rho != rho.conj_transpose():
        violations.append("initial density matrix is not Hermitian")
    else:
        tr = rho.trace()
        if imag_part(tr) != 0 or real_part(tr) != 1:
            violations.append(f"initial density matrix has trace {tr}, not 1")
        violations.extend(_is_psd_hermitian(rho))
    return ValidationReport("qfa", tuple(violations))


def validate(model) -> ValidationReport:
    """Exact check of every semantic invariant; reports all violations found."""
    if isinstance(model, Gfa):
        return ValidationReport("gfa")  # structural invariants hold by construction
    if isinstance(model, Pfa):
        return _validate_pfa(model)
    if isinstance(model, Qfa):
        return _validate_qfa(model)
    if isinstance(model, Lrva):
        if model.probabilistic:
            return plrva_validate(model)
        return ValidationReport("lrva")
    if isinstance(model, (LinRec, Lra, TreeLinRec)):
        return ValidationReport(_kind_name(model))
    raise TypeError(f"cannot validate {type(model).__name__}")


def is_bistochastic(p: Pfa) -> bool:
    """True iff every transition matrix also has all row sums equal to 1."""
    require_valid(validate(p))
    for mat in p.transitions.values():
        for i in range(mat.rows):
            if mat.row(i).total() != 1:
                return False
    return True


def _kind_name(model) -> str:
    return {
        LinRec: "lrr", Lra: "lra", TreeLinRec: "tlrr", Lrva: "lrva",
        Gfa: "gfa", Pfa: "pfa", Qfa: "qfa",
    }[type(model)]


def value_of(model, word: str) -> Fraction:
    """Uniform evaluation dispatch: the model's exact value on the word."""
    if isinstance(model, Gfa):
        return gfa_eval(model, word)
    if isinstance(model, Pfa):
        return pfa_eval(model, word)
    if isinstance(model, Qfa):
        return qfa_eval(model, word)
    if isinstance(model, Lra):
        return lra_eval(model, word)
    if isinstance(model, Lrva):
        return lrva_eval(model, word)
    if isinstance(model, TreeLinRec):
        return tlr_eval(model, word)
    if isinstance(model, LinRec):
        # a bare recurrence reads like its unary automaton
        return lra_eval(Lra(model), word)
    raise TypeError(f"cannot evaluate {type(model).__name__}")


def classify(model, query: ThresholdQuery, word: str) -> tuple[Classification, bool]:
    """Compare the model's value on the word against the cutpoint.

    Returns the three-way classification and membership in L(., relation λ)
    (ε is never a member when the query excludes the empty word).
    """
    value = value_of(model, word)
    if value < query.cutpoint:
        cls = Classification.BELOW
    elif value == query.cutpoint:
        cls = Classification.EQUAL
    else:
        cls = Classification.ABOVE
    member = query.relation.holds(value, query.cutpoint)
    if word == "" and not query.include_empty:
        member = False
    return cls, member
