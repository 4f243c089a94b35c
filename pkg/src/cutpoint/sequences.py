"""Linear recurrences and their automaton readings.

Scalar recurrences (LinRec) define u_n = a_1 u_{n-1} + ... + a_k u_{n-k};
an Lra reads the unary word a^j and outputs u_j.  Closure under sum and
product goes through the companion-matrix representation (direct sum /
tensor product, coefficients read back off the characteristic polynomial).
Tree recurrences index values by nodes of the infinite binary tree, vector
recurrences replace scalars by vectors and coefficients by matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterator, Mapping

from .linalg import Matrix, Vector, solve_exact
from .validation import ValidationReport


class ForeignSymbolError(ValueError):
    """A word contains a symbol outside the automaton's alphabet."""


def _fractions(values) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class LinRec:
    """Scalar linear recurrence: k initial values and k coefficients.

    coeffs = (a_1, ..., a_k) multiply (u_{n-1}, ..., u_{n-k}) in that order.
    """

    initials: tuple[Fraction, ...]
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "initials", _fractions(self.initials))
        object.__setattr__(self, "coeffs", _fractions(self.coeffs))
        if len(self.initials) != len(self.coeffs):
            raise ValueError("initials and coeffs must have the same length")
        if not self.initials:
            raise ValueError("depth must be at least 1")

    @property
    def depth(self) -> int:
        return len(self.coeffs)

    def terms(self) -> Iterator[Fraction]:
        """Yield u_0, u_1, ... by forward iteration."""
        window = list(self.initials)
        yield from window
        while True:
            nxt = sum(
                (a * u for a, u in zip(self.coeffs, reversed(window))),
                start=Fraction(0),
            )
            yield nxt
            window.append(nxt)
            window.pop(0)

    def prefix(self, count: int) -> list[Fraction]:
        out = []
        for i, v in enumerate(self.terms()):
            if i >= count:
                break
            out.append(v)
        return out


def lr_eval(u: LinRec, n: int) -> Fraction:
    """The n-th term, exact, by forward iteration."""
    if n < 0:
        raise ValueError("index must be nonnegative")
    if n < u.depth:
        return u.initials[n]
    window = list(u.initials)
    for _ in range(u.depth, n + 1):
        nxt = sum(
            (a * v for a, v in zip(u.coeffs, reversed(window))), start=Fraction(0)
        )
        window.append(nxt)
        window = window[-u.depth :]
    return window[-1]


def lr_constant(c) -> LinRec:
    """The constant sequence c, c, c, ... as a depth-1 recurrence."""
    return LinRec((Fraction(c),), (Fraction(1),))


def companion_matrix(u: LinRec) -> Matrix:
    """The k x k companion matrix: stacked state (u_n, ..., u_{n-k+1})."""
    k = u.depth
    rows = [list(u.coeffs)]
    for i in range(k - 1):
        rows.append(
            [Fraction(1) if j == i else Fraction(0) for j in range(k)]
        )
    return Matrix(rows)


def initial_state(u: LinRec) -> Vector:
    """Column (u_{k-1}, ..., u_0): the stacked state at index k-1."""
    return Vector(tuple(reversed(u.initials)))


def _coeffs_from_char_poly(cp) -> tuple[Fraction, ...]:
    # x^D + c_1 x^{D-1} + ... + c_D annihilates the powers, so the sequence
    # obeys w_n = -c_1 w_{n-1} - ... - c_D w_{n-D}.
    return tuple(-c for c in cp[1:])


def lr_combine(kind: str, u: LinRec, v: LinRec) -> LinRec:
    """Pointwise sum or product of two recurrent sequences.

    Built from the companion representations: direct sum for sums, tensor
    product for products; coefficients come from the characteristic
    polynomial of the combined matrix, initials from direct evaluation.
    Depth is k_u + k_v (sum) or k_u * k_v (product); not necessarily minimal.
    """
    mu, mv = companion_matrix(u), companion_matrix(v)
    if kind == "sum":
        m = mu.direct_sum(mv)
        combine = lambda a, b: a + b
    elif kind == "product":
        m = mu.tensor(mv)
        combine = lambda a, b: a * b
    else:
        raise ValueError(f"unknown combination kind: {kind!r}")
    coeffs = _coeffs_from_char_poly(m.char_poly())
    depth = len(coeffs)
    us, vs = u.prefix(depth), v.prefix(depth)
    initials = tuple(combine(a, b) for a, b in zip(us, vs))
    return LinRec(initials, coeffs)


REDUCTION_KINDS = ("skolem_to_strict_pos", "skolem_to_pos", "strictpos_to_pos")


def lr_reduce(kind: str, u: LinRec) -> LinRec:
    """The problem reductions between zero testing and positivity.

    skolem_to_strict_pos: v_n = 1 - u_n^2   (v_n > 0  iff  u_n = 0)
    skolem_to_pos:        v_n = -u_n^2      (v_n >= 0 iff  u_n = 0)
    strictpos_to_pos:     v_n = 2 u_n + 1   (v_n > 0  iff  u_n >= 0)
    """
    if kind == "skolem_to_strict_pos":
        sq = lr_combine("product", u, u)
        neg = lr_combine("product", sq, lr_constant(-1))
        return lr_combine("sum", neg, lr_constant(1))
    if kind == "skolem_to_pos":
        sq = lr_combine("product", u, u)
        return lr_combine("product", sq, lr_constant(-1))
    if kind == "strictpos_to_pos":
        doubled = lr_combine("product", u, lr_constant(2))
        return lr_combine("sum", doubled, lr_constant(1))
    raise ValueError(f"unknown reduction kind: {kind!r}")


def lr_minimize(u: LinRec) -> LinRec:
    """Smallest-depth recurrence defining the same sequence.

    For candidate depth d, the coefficients must satisfy
    u_{n+d} = sum_i c_i u_{n+d-i} for n = 0..k-1 (k = u.depth).  Because the
    residual sequence obeys u's own depth-k recurrence, vanishing on those k
    windows forces it to vanish everywhere, so a solution is a proof.
    """
    k = u.depth
    need = 2 * k
    vals = u.prefix(need)
    for d in range(1, k):
        rows = [[vals[n + d - i] for i in range(1, d + 1)] for n in range(k)]
        rhs = Vector([vals[n + d] for n in range(k)])
        sol = solve_exact(Matrix(rows), rhs)
        if sol is not None:
            return LinRec(tuple(vals[:d]), tuple(sol.entries))
    return u


def lr_split_constant(u: LinRec) -> tuple[LinRec, Fraction] | None:
    """Write u_n = w_n + C when 1 is a simple root of u's char polynomial.

    Returns (w, C) with w one depth lower, or None when 1 is not a simple
    root.  Expects a minimized recurrence for the simplicity test to be
    meaningful.
    """
    # p(x) = x^d - a_1 x^{d-1} - ... - a_d;  p(1) = 1 - sum(a)
    d = u.depth
    p = [Fraction(1)] + [-a for a in u.coeffs]
    if sum(p, start=Fraction(0)) != 0:
        return None
    # synthetic division by (x - 1): q has degree d-1
    q = [p[0]]
    for c in p[1:-1]:
        q.append(c + q[-1])
    q_at_1 = sum(q, start=Fraction(0))
    if q_at_1 == 0:
        return None  # root 1 has multiplicity >= 2
    vals = u.prefix(2 * d)
    # (q(S) u)_0 = C * q(1) where S is the shift operator; q descending.
    deg = d - 1
    applied = sum(
        (q[j] * vals[deg - j] for j in range(len(q))), start=Fraction(0)
    )
    c_const = applied / q_at_1
    w_coeffs = tuple(-c for c in q[1:])
    w = LinRec(tuple(v - c_const for v in vals[: d - 1]), w_coeffs)
    for n in range(2 * d - 1):
        if lr_eval(w, n) != vals[n] - c_const:  # pragma: no cover - sanity
            raise AssertionError("constant split failed verification")
    return w, c_const


@dataclass(frozen=True)
class Lra:
    """Unary linear recurrence automaton: f(a^j) = u_j."""

    rec: LinRec
    symbol: str = "a"

    def __post_init__(self):
        if len(self.symbol) != 1:
            raise ValueError("alphabet must be a single symbol")


def lra_eval(automaton: Lra, word: str) -> Fraction:
    for ch in word:
        if ch != automaton.symbol:
            raise ForeignSymbolError(f"symbol {ch!r} not in alphabet")
    return lr_eval(automaton.rec, len(word))


def mod_k_lra(k: int, symbol: str = "a") -> Lra:
    """The MOD_k automaton: value 1 exactly on lengths divisible by k."""
    if k < 1:
        raise ValueError("k must be positive")
    initials = [Fraction(1)] + [Fraction(0)] * (k - 1)
    coeffs = [Fraction(0)] * (k - 1) + [Fraction(1)]
    return Lra(LinRec(tuple(initials), tuple(coeffs)), symbol)


@dataclass(frozen=True)
class TreeLinRec:
    """Recurrence on the infinite binary tree of strings over {a, b}.

    initials maps every string of length < depth to its value; coefficient
    c_i for the prefix of length n-i is coeffs_a[i-1] or coeffs_b[i-1]
    according to the symbol at position n-i+1 (the symbol immediately after
    that prefix).
    """

    depth: int
    initials: Mapping[str, Fraction]
    coeffs_a: tuple[Fraction, ...]
    coeffs_b: tuple[Fraction, ...]
    alphabet: tuple[str, str] = ("a", "b")

    def __post_init__(self):
        object.__setattr__(self, "coeffs_a", _fractions(self.coeffs_a))
        object.__setattr__(self, "coeffs_b", _fractions(self.coeffs_b))
        object.__setattr__(
            self,
            "initials",
            {str(k): Fraction(v) for k, v in dict(self.initials).items()},
        )
        if self.depth < 1:
            raise ValueError("depth must be at least 1")
        if len(self.coeffs_a) != self.depth or len(self.coeffs_b) != self.depth:
            raise ValueError("need exactly depth coefficients per symbol")
        if len(set(self.alphabet)) != 2 or any(len(s) != 1 for s in self.alphabet):
            raise ValueError("alphabet must be two distinct symbols")
        expected = {
            "".join(w)
            for n in range(self.depth)
            for w in iproduct(self.alphabet, repeat=n)
        }
        if set(self.initials) != expected:
            raise ValueError(
                "initials must be keyed by every string of length < depth"
            )


def tlr_eval(t: TreeLinRec, word: str) -> Fraction:
    """Value at the tree node labelled by the word."""
    sym_a, sym_b = t.alphabet
    for ch in word:
        if ch not in (sym_a, sym_b):
            raise ForeignSymbolError(f"symbol {ch!r} not in alphabet")
    if len(word) < t.depth:
        return t.initials[word]
    # values along the prefix chain
    vals = [t.initials[word[:j]] for j in range(t.depth)]
    for j in range(t.depth, len(word) + 1):
        acc = Fraction(0)
        for i in range(1, t.depth + 1):
            key = word[j - i]  # symbol at position j-i+1, 1-based
            c = t.coeffs_a[i - 1] if key == sym_a else t.coeffs_b[i - 1]
            acc += c * vals[j - i]
        vals.append(acc)
    return vals[len(word)]


@dataclass(frozen=True)
class VectorLinRec:
    """Vector-valued recurrence v_n = A_1 v_{n-1} + ... + A_k v_{n-k}."""

    initials: tuple[Vector, ...]
    matrices: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "initials", tuple(self.initials))
        object.__setattr__(self, "matrices", tuple(self.matrices))
        if len(self.initials) != len(self.matrices) or not self.initials:
            raise ValueError("need equally many initial vectors and matrices")
        m = self.initials[0].dim
        if any(v.dim != m for v in self.initials):
            raise ValueError("initial vectors must share one dimension")
        if any(a.rows != m or a.cols != m for a in self.matrices):
            raise ValueError("matrices must be m x m")

    @property
    def dimension(self) -> int:
        return self.initials[0].dim

    @property
    def depth(self) -> int:
        return len(self.matrices)


def vlr_eval(v: VectorLinRec, n: int) -> Vector:
    """The n-th vector, exact, by forward iteration."""
    if n < 0:
        raise ValueError("index must be nonnegative")
    if n < v.depth:
        return v.initials[n]
    window = list(v.initials)
    for _ in range(v.depth, n + 1):
        nxt = Vector.zero(v.dimension)
        for a, vec in zip(v.matrices, reversed(window)):
            nxt = nxt + a * vec
        window.append(nxt)
        window = window[-v.depth :]
    return window[-1]


@dataclass(frozen=True)
class Lrva:
    """Vector recurrence automaton: f(a^j) = final . v_j."""

    rec: VectorLinRec
    final: Vector
    symbol: str = "a"
    probabilistic: bool = False

    def __post_init__(self):
        if self.final.dim != self.rec.dimension:
            raise ValueError("final vector dimension mismatch")
        if len(self.symbol) != 1:
            raise ValueError("alphabet must be a single symbol")


def lrva_eval(automaton: Lrva, word: str) -> Fraction:
    for ch in word:
        if ch != automaton.symbol:
            raise ForeignSymbolError(f"symbol {ch!r} not in alphabet")
    return automaton.final.dot(vlr_eval(automaton.rec, len(word)))


def _is_stochastic_vector(v: Vector) -> bool:
    return all(e >= 0 for e in v) and v.total() == 1


def plrva_validate(automaton: Lrva) -> ValidationReport:
    """Check the probabilistic restrictions on a vector recurrence automaton.

    1. every initial vector is stochastic;
    2. each A_i is d_i B_i with d_i >= 0, B_i column-stochastic and
       sum d_i = 1 (d_i recovered as the common column sum of A_i; a zero
       matrix passes with d_i = 0);
    3. every entry of the final vector lies in [0, 1].

    On success every accepting value lies in [0, 1].
    """
    violations: list[str] = []
    for idx, vec in enumerate(automaton.rec.initials):
        if not _is_stochastic_vector(vec):
            violations.append(f"condition 1: initial vector {idx} is not stochastic")
            break
    d_total = Fraction(0)
    for idx, a in enumerate(automaton.rec.matrices):
        if any(e < 0 for row in a.entries for e in row):
            violations.append(f"condition 2: matrix A_{idx + 1} has a negative entry")
            break
        sums = {a.col(j).total() for j in range(a.cols)}
        if len(sums) != 1:
            violations.append(
                f"condition 2: matrix A_{idx + 1} is not a scalar multiple of a "
                "stochastic matrix (unequal column sums)"
            )
            break
        d_total += sums.pop()
    else:
        if not violations and d_total != 1:
            violations.append(
                f"condition 2: column-sum multipliers add to {d_total}, not 1"
            )
    if not violations:
        if any(e < 0 or e > 1 for e in automaton.final):
            violations.append("condition 3: final vector entry outside [0, 1]")
    return ValidationReport("plrva", tuple(violations))
