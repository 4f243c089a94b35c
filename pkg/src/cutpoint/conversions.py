"""Conversions between recurrences and the automata models.

Each conversion returns the target model together with a
:class:`ConversionCertificate` describing exactly how values relate:

    target(w) = growth^{|w|} * scale * source(w) + offset

for every word with |w| >= min_length, with scale > 0 and growth > 0 so that
sign information at shifted cutpoints is preserved.  ``verify_certificate``
replays that relation on sampled words.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .linalg import (
    GaussianRational,
    Matrix,
    Vector,
    imag_part,
    real_part,
)
from .sequences import (
    LinRec,
    Lra,
    Lrva,
    VectorLinRec,
    companion_matrix,
    initial_state,
    lr_eval,
)
from .automata import END_MARKER, Gfa, Pfa, Qfa, gfa_eval, validate, value_of
from .validation import require_valid


@dataclass(frozen=True)
class ConversionCertificate:
    """Machine-checkable value relation between source and target."""

    source: str
    target: str
    scale: Fraction = Fraction(1)
    offset: Fraction = Fraction(0)
    growth: Fraction = Fraction(1)
    min_length: int = 0
    cutpoint: Fraction | None = None
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "scale", Fraction(self.scale))
        object.__setattr__(self, "offset", Fraction(self.offset))
        object.__setattr__(self, "growth", Fraction(self.growth))
        if self.scale <= 0 or self.growth <= 0:
            raise ValueError("certificate scale and growth must be positive")
        if self.cutpoint is not None:
            object.__setattr__(self, "cutpoint", Fraction(self.cutpoint))

    @property
    def exact(self) -> bool:
        return self.scale == 1 and self.offset == 0 and self.growth == 1

    def expected(self, source_value: Fraction, length: int) -> Fraction:
        return self.growth**length * self.scale * source_value + self.offset


def verify_certificate(
    cert: ConversionCertificate,
    source,
    target,
    max_length: int = 30,
    words=None,
) -> bool:
    """Replay the certificate's value relation on sampled words, exactly."""
    if words is None:
        alphabet = getattr(source, "alphabet", None)
        symbol = getattr(source, "symbol", None)
        if alphabet is None:
            alphabet = (symbol,) if symbol else ("a",)
        if len(alphabet) == 1:
            words = [alphabet[0] * n for n in range(max_length + 1)]
        else:
            words = [""]
            frontier = [""]
            while frontier and len(frontier[0]) < max_length:
                frontier = [w + s for w in frontier for s in alphabet]
                words.extend(frontier)
                if len(words) > 2000:
                    break
    for w in words:
        if len(w) < cert.min_length:
            continue
        if value_of(target, w) != cert.expected(value_of(source, w), len(w)):
            return False
    return True


def linrec_companion_gfa(u: LinRec) -> tuple[Gfa, ConversionCertificate]:
    """k-state unary GFA with f(a^n) = u_n for every n >= 0.

    Companion dynamics on the stacked state (u_{n+k-1}, ..., u_n), read off
    by the last coordinate.  Used internally by the decision procedures; the
    public (k+1)-state construction below matches the bordered matrix form
    and is only valid from n = 1.
    """
    k = u.depth
    g = Gfa(
        ("a",),
        {"a": companion_matrix(u)},
        initial_state(u),
        Vector.unit(k, k - 1),
    )
    return g, ConversionCertificate("lrr", "gfa", min_length=0, note="companion form")


def linrec_to_gfa(u: LinRec) -> tuple[Gfa, ConversionCertificate]:
    """(k+1)-state unary GFA with f(a^n) = u_n for every n >= 1.

    The transition matrix is the bordered companion [[0, 0], [z, M1]] with
    z = M1 (u_{k-1}, ..., u_0)^T = (u_k, ..., u_1)^T; the initial vector is
    e_1 and the final functional e_{k+1}.  Integer input gives an integer
    automaton.
    """
    k = u.depth
    m1 = companion_matrix(u)
    z = m1 * initial_state(u)
    rows = [[Fraction(0)] * (k + 1)]
    for i in range(k):
        rows.append([z[i]] + list(m1.entries[i]))
    g = Gfa(
        ("a",),
        {"a": Matrix(rows)},
        Vector.unit(k + 1, 0),
        Vector.unit(k + 1, k),
    )
    return g, ConversionCertificate("lrr", "gfa", min_length=1)


def gfa_to_linrec(g: Gfa) -> tuple[LinRec, ConversionCertificate]:
    """Depth-n recurrence with u_n = f(a^n) for every n >= 0.

    Cayley-Hamilton: the transition matrix satisfies its characteristic
    polynomial, so the value sequence obeys the recurrence with those
    coefficients; initials are read off by evaluation.  Possibly non-integer
    for integer automata (coefficients are the char-poly coefficients).
    """
    if not g.is_unary:
        raise ValueError("gfa_to_linrec requires a unary automaton")
    symbol = g.alphabet[0]
    cp = g.transitions[symbol].char_poly()
    coeffs = tuple(-c for c in cp[1:])
    initials = tuple(gfa_eval(g, symbol * n) for n in range(g.n_states))
    return (
        LinRec(initials, coeffs),
        ConversionCertificate("gfa", "lrr", min_length=0),
    )


def shift_cutpoint(g: Gfa, cutpoint) -> tuple[Gfa, ConversionCertificate]:
    """(n+1)-state automaton with every value shifted down by the cutpoint.

    Appends one state that stays at weight 1 and contributes -λ through the
    final functional, so L(G, λ) = L(G', 0) as a triple.
    """
    lam = Fraction(cutpoint)
    one = Matrix([[Fraction(1)]])
    transitions = {sym: mat.direct_sum(one) for sym, mat in g.transitions.items()}
    g2 = Gfa(
        g.alphabet,
        transitions,
        g.initial.concat(Vector([Fraction(1)])),
        g.final.concat(Vector([-lam])),
    )
    return g2, ConversionCertificate("gfa", "gfa", offset=-lam, cutpoint=Fraction(0))


def rationalize_to_integer(g: Gfa) -> tuple[Gfa, ConversionCertificate]:
    """Integer automaton with the same sign triple at cutpoint 0.

    Transition entries are scaled by D (the lcm of their denominators),
    initial and final vectors by positive integers, so
    f''(w) = scale * D^{|w|} * f(w) and signs agree on every word.
    """
    denoms = [
        e.denominator
        for mat in g.transitions.values()
        for row in mat.entries
        for e in row
    ]
    d = lcm(*denoms) if denoms else 1
    dv = lcm(*(e.denominator for e in g.initial))
    df = lcm(*(e.denominator for e in g.final))
    g2 = Gfa(
        g.alphabet,
        {sym: mat.scale(d) for sym, mat in g.transitions.items()},
        g.initial.scale(dv),
        g.final.scale(df),
    )
    return g2, ConversionCertificate(
        "gfa", "gfa", scale=Fraction(dv) * df, growth=Fraction(d), cutpoint=Fraction(0)
    )


def _pad_zero_sums(mat: Matrix) -> Matrix:
    """Append two slack coordinates making all row and column sums zero.

    The upper-left block is untouched by products: the slack column that
    feeds back into it is identically zero, and so is the slack row that
    could read from it.
    """
    n = mat.rows
    col_sums = [mat.col(j).total() for j in range(n)]
    row_sums = [mat.row(i).total() for i in range(n)]
    total = sum(col_sums, start=Fraction(0))
    rows = []
    for i in range(n):
        rows.append(list(mat.entries[i]) + [Fraction(0), -row_sums[i]])
    rows.append([-s for s in col_sums] + [Fraction(0), total])
    rows.append([Fraction(0)] * (n + 2))
    return Matrix(rows)


def gfa_to_pfa(g: Gfa) -> tuple[Pfa, Fraction, ConversionCertificate]:
    """Stochastic simulation of a GFA at cutpoint 0 (Turakainen-style).

    Three steps: (1) border the matrices with a start and a value coordinate
    so that after reading w$ the value coordinate holds f_G(w) exactly;
    (2) pad with two slack coordinates to make all row and column sums zero;
    (3) mix with the all-ones matrix J: C = (B + cJ)/(c N).  Since JB = BJ = 0
    and J^2 = N J, products collapse to

        f_P(w) = (cN)^(-(|w|+1)) f_G(w) + 1/N,

    a positive multiple of f_G(w) plus the cutpoint 1/N, so the sign triple
    at cutpoint 0 maps onto the triple at 1/N.  N = n + 4 states, one
    accepting state; c is the smallest power of two exceeding every padded
    entry in absolute value, which keeps denominators tame.
    """
    n = g.n_states
    fv0 = g.final.dot(g.initial)
    bordered: dict[str, Matrix] = {}
    for sym, mat in g.transitions.items():
        first_col = mat * g.initial
        rows = [[Fraction(0)] * (n + 2)]
        for i in range(n):
            rows.append([first_col[i]] + list(mat.entries[i]) + [Fraction(0)])
        rows.append([Fraction(0)] * (n + 2))
        bordered[sym] = Matrix(rows)
    end_rows = [[Fraction(0)] * (n + 2) for _ in range(n + 1)]
    end_rows.append([fv0] + list(g.final.entries) + [Fraction(0)])
    bordered[END_MARKER] = Matrix(end_rows)

    padded = {sym: _pad_zero_sums(mat) for sym, mat in bordered.items()}
    n_p = n + 4
    max_abs = max(
        (abs(e) for mat in padded.values() for row in mat.entries for e in row),
        default=Fraction(0),
    )
    c = Fraction(1)
    while c <= max_abs:
        c *= 2
    denom = c * n_p
    ones = Matrix([[Fraction(1)] * n_p for _ in range(n_p)])
    stochastic = {
        sym: (mat + ones.scale(c)).scale(Fraction(1, denom))
        for sym, mat in padded.items()
    }
    value_state = n + 1  # the bordered value coordinate, 0-based
    p = Pfa(
        g.alphabet,
        stochastic,
        Vector.unit(n_p, 0),
        frozenset({value_state}),
    )
    require_valid(validate(p))
    cutpoint = Fraction(1, n_p)
    cert = ConversionCertificate(
        "gfa",
        "pfa",
        scale=Fraction(1, denom),
        growth=Fraction(1, denom),
        offset=cutpoint,
        cutpoint=cutpoint,
        note=f"mixing constant {c}, {n_p} states, one accepting state",
    )
    return p, cutpoint, cert


def _hermitian_basis(n: int) -> list[tuple]:
    labels: list[tuple] = [("d", i) for i in range(n)]
    labels.extend(("re", i, j) for i in range(n) for j in range(i + 1, n))
    labels.extend(("im", i, j) for i in range(n) for j in range(i + 1, n))
    return labels


def _basis_matrix(label: tuple, n: int) -> Matrix:
    rows = [[GaussianRational(0)] * n for _ in range(n)]
    if label[0] == "d":
        rows[label[1]][label[1]] = GaussianRational(1)
    elif label[0] == "re":
        _, i, j = label
        rows[i][j] = GaussianRational(1)
        rows[j][i] = GaussianRational(1)
    else:
        _, i, j = label
        rows[i][j] = GaussianRational(0, 1)
        rows[j][i] = GaussianRational(0, -1)
    return Matrix(rows)


def _density_coords(rho: Matrix, labels) -> Vector:
    coords = []
    for label in labels:
        if label[0] == "d":
            entry = rho[label[1], label[1]]
            if imag_part(entry) != 0:
                raise ArithmeticError("diagonal of a Hermitian matrix must be real")
            coords.append(real_part(entry))
        elif label[0] == "re":
            coords.append(real_part(rho[label[1], label[2]]))
        else:
            coords.append(imag_part(rho[label[1], label[2]]))
    return Vector(coords)


def qfa_to_gfa(q: Qfa) -> tuple[Gfa, ConversionCertificate]:
    """n^2-state rational GFA computing the QFA's value exactly on every word.

    The density matrix is tracked by its coordinates in the real Hermitian
    basis {e_ii, e_ij + e_ji, i e_ij - i e_ji}; a superoperator acts
    R-linearly there, with rational matrix entries because the operation
    elements are Gaussian rational.  The end-marker superoperator is folded
    into the final functional, so the output reads w alone.
    """
    require_valid(validate(q))
    n = q.n_states
    labels = _hermitian_basis(n)
    basis_mats = [_basis_matrix(label, n) for label in labels]

    def superop_matrix(symbol: str) -> Matrix:
        cols = []
        for h in basis_mats:
            image = Matrix.zero(n)
            for e in q.superoperators[symbol]:
                image = image + e * h * e.conj_transpose()
            cols.append(_density_coords(image, labels).entries)
        # columns were computed; transpose into row-major form
        return Matrix([[cols[j][i] for j in range(len(cols))] for i in range(len(labels))])

    transitions = {sym: superop_matrix(sym) for sym in q.alphabet}
    end_matrix = superop_matrix(END_MARKER)
    selector = Vector(
        Fraction(1) if label[0] == "d" and label[1] in q.accepting else Fraction(0)
        for label in labels
    )
    final = end_matrix.left_mul(selector)
    g = Gfa(q.alphabet, transitions, _density_coords(q.initial_density, labels), final)
    return g, ConversionCertificate(
        "qfa", "gfa", note="Hermitian-basis vectorization, end marker folded"
    )


def pfa_to_gfa(p: Pfa) -> tuple[Gfa, ConversionCertificate]:
    """Value-preserving GFA reading w alone: the end-marker step and the
    accepting-mass functional fold into the final vector."""
    require_valid(validate(p))
    n = p.n_states
    selector = Vector(
        Fraction(1) if i in p.accepting else Fraction(0) for i in range(n)
    )
    final = p.transitions[END_MARKER].left_mul(selector)
    g = Gfa(
        p.alphabet,
        {sym: p.transitions[sym] for sym in p.alphabet},
        p.initial,
        final,
    )
    return g, ConversionCertificate("pfa", "gfa", note="end marker folded")


def lrva_depth1_gfa(v: Lrva) -> Gfa:
    """Read a depth-1 vector recurrence automaton as the m-state unary GFA."""
    if v.rec.depth != 1:
        raise ValueError("depth must be exactly 1")
    return Gfa(
        (v.symbol,),
        {v.symbol: v.rec.matrices[0]},
        v.rec.initials[0],
        v.final,
    )


def gfa_to_lrva(g: Gfa) -> Lrva:
    """Read a unary GFA as the depth-1 vector recurrence automaton."""
    if not g.is_unary:
        raise ValueError("gfa_to_lrva requires a unary automaton")
    symbol = g.alphabet[0]
    return Lrva(
        VectorLinRec((g.initial,), (g.transitions[symbol],)),
        g.final,
        symbol,
    )


def lrva_to_gfa(v: Lrva) -> tuple[Gfa, ConversionCertificate]:
    """m*k-state GFA for a depth-k vector recurrence automaton, exact for n >= 0.

    Stacked state (v_n, ..., v_{n-k+1}) under the block companion matrix;
    starting from the stack at index k-1 and reading the LAST block keeps
    f(a^n) = final . v_n valid for every n (the stack holds v_{n+k-1}..v_n).
    """
    m, k = v.rec.dimension, v.rec.depth
    if k == 1:
        return lrva_depth1_gfa(v), ConversionCertificate(
            "lrva", "gfa", note="depth-1 identification"
        )
    zero = Matrix.zero(m)
    ident = Matrix.identity(m)
    block_rows = [list(v.rec.matrices)]
    for i in range(k - 1):
        block_rows.append([ident if j == i else zero for j in range(k)])
    rows = []
    for block_row in block_rows:
        for r in range(m):
            out = []
            for block in block_row:
                out.extend(block.entries[r])
            rows.append(out)
    stacked_initial = v.rec.initials[k - 1]
    for i in range(k - 2, -1, -1):
        stacked_initial = stacked_initial.concat(v.rec.initials[i])
    final = Vector([Fraction(0)] * (m * (k - 1)) + list(v.final.entries))
    g = Gfa((v.symbol,), {v.symbol: Matrix(rows)}, stacked_initial, final)
    return g, ConversionCertificate("lrva", "gfa", note="block companion form")
