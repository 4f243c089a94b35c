"""Complete exact sign analysis for recurrences of depth at most 2.

Decides, for a rational recurrence u of depth <= 2, a rational cutpoint and a
relation, whether {n >= start : u_n relation cutpoint} is empty, returning the
least witness otherwise.  The only inputs that can come back "unknown" are
equality-style questions in the aperiodic complex-root case (the hard corner
of Skolem's problem); everything else is decided.

The case split follows the discriminant D = a1^2 + 4 a2:

* D > 0: distinct real roots, exact arithmetic in Q(sqrt(D)); the dominant
  term fixes the eventual sign, the finitely many anomalies are scanned up to
  a provable crossover index (negative bases are handled by splitting the
  index into even and odd residues, which squares every base).
* D = 0: u_n = (A + Bn) b^n, elementary rational analysis.
* D < 0: the root ratio is a root of unity exactly when
  cos^2(theta) = a1^2 / (-4 a2) is one of 0, 1/4, 1/2, 3/4 (Niven's theorem
  plus the fact that cos(theta) is rational or a pure quadratic here); then
  u_{n+T} = R u_n for an explicit period T <= 12 and rational R > 0, and each
  residue class is a rational geometric sequence.  Otherwise the rotation is
  aperiodic: n*theta is equidistributed, the value sequence oscillates, and
  an exact amplitude bound A^2 = P^2 + Q^2 (rational) decides every
  inequality question; only equality hunts can remain open.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .automata import Relation
from .linalg import rational_sqrt
from .sequences import LinRec, lr_eval


class SearchCapExceeded(RuntimeError):
    """A witness search that is provably finite overran its safety cap."""


INTERNAL_CAP = 200_000

RELATION_SIGNS = {
    Relation.GT: frozenset({1}),
    Relation.GE: frozenset({0, 1}),
    Relation.EQ: frozenset({0}),
    Relation.NE: frozenset({-1, 1}),
    Relation.LT: frozenset({-1}),
    Relation.LE: frozenset({-1, 0}),
}


@dataclass(frozen=True)
class Depth2Result:
    kind: str  # "nonempty" | "empty" | "unknown"
    witness: int | None = None
    searched: int | None = None
    detail: str = ""


class Quad:
    """Element a + b*sqrt(d) of a real quadratic field, exact."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "d", Fraction(d))

    def __setattr__(self, name, value):
        raise AttributeError("Quad is immutable")

    def _coerce(self, other) -> "Quad | None":
        if isinstance(other, Quad):
            if other.d != self.d:
                raise ValueError("mixed quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return Quad(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quad(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quad(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Quad(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        norm = o.a * o.a - o.b * o.b * o.d
        if norm == 0:
            raise ZeroDivisionError("division by zero quadratic number")
        conj = Quad(o.a, -o.b, self.d)
        num = self * conj
        return Quad(num.a / norm, num.b / norm, self.d)

    def __neg__(self):
        return Quad(-self.a, -self.b, self.d)

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d) via the sign of a^2 - b^2 d."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        t = self.a * self.a - self.b * self.b * self.d
        if t == 0:
            return 0
        st = (t > 0) - (t < 0)
        return sa if st > 0 else sb

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __repr__(self):
        return f"Quad({self.a}, {self.b}, d={self.d})"


def _sign(x) -> int:
    if isinstance(x, Quad):
        return x.sign()
    return (x > 0) - (x < 0)


def _abs(x):
    return -x if _sign(x) < 0 else x


def _one_like(x):
    return Quad(1, 0, x.d) if isinstance(x, Quad) else Fraction(1)


def _power(base, n: int):
    result = _one_like(base)
    for _ in range(n):
        result = result * base
    return result


def _least_sign_index(
    terms: Iterable[tuple], start: int, wanted: frozenset[int], cap: int = INTERNAL_CAP
) -> int | None:
    """Least n >= start with sign(sum c_i b_i^n) in wanted, or None if never.

    Terms are (coefficient, base) pairs over one exact ordered field.  Always
    decides: negative bases are removed by an even/odd index split, after
    which the strictly dominant base pins the sign beyond a crossover index
    that the search certifies (once |c_1| b_1^n exceeds the sum of the other
    absolute terms it does so forever, because b_1 is strictly largest).
    """
    merged: dict = {}
    for c, b in terms:
        merged[b] = merged.get(b, 0 * c) + c
    clean = [(c, b) for b, c in merged.items() if _sign(c) != 0]
    if not clean:
        return start if 0 in wanted else None
    if any(_sign(b) < 0 for _, b in clean):
        best = None
        for parity in (0, 1):
            sub = [(c * b if parity else c, b * b) for c, b in clean]
            m0 = max(0, (start - parity + 1) // 2)
            hit = _least_sign_index(sub, m0, wanted, cap)
            if hit is not None:
                n = 2 * hit + parity
                if best is None or n < best:
                    best = n
        return best
    zero_terms = [(c, b) for c, b in clean if _sign(b) == 0]
    pos_terms = [(c, b) for c, b in clean if _sign(b) > 0]
    if zero_terms:
        if start == 0:
            g0 = clean[0][0] * 0
            for c, _ in clean:
                g0 = g0 + c  # b^0 = 1 for every base, including 0
            if _sign(g0) in wanted:
                return 0
            return _least_sign_index(pos_terms, 1, wanted, cap)
        clean = pos_terms
        if not clean:
            return start if 0 in wanted else None
    else:
        clean = pos_terms
    clean.sort(key=lambda t: t[1], reverse=True)
    c1, b1 = clean[0]
    eventual = _sign(c1)
    if len(clean) == 1:
        return start if eventual in wanted else None
    powers = [_power(b, start) for _, b in clean]
    n = start
    while True:
        lead = _abs(c1) * powers[0]
        tail = None
        for (c, _), p in zip(clean[1:], powers[1:]):
            contrib = _abs(c) * p
            tail = contrib if tail is None else tail + contrib
        if _sign(lead - tail) > 0:
            break  # dominance holds from here on
        g = None
        for (c, _), p in zip(clean, powers):
            contrib = c * p
            g = contrib if g is None else g + contrib
        if _sign(g) in wanted:
            return n
        powers = [p * b for p, (_, b) in zip(powers, clean)]
        n += 1
        if n - start > cap:
            raise SearchCapExceeded(
                "dominance crossover not reached within the safety cap"
            )
    return n if eventual in wanted else None


def _scan_values(
    u: LinRec,
    lam: Fraction,
    start: int,
    wanted: frozenset[int],
    limit: int,
    guaranteed: bool,
) -> int | None:
    """Scan u_n - lam for n in [start, start+limit]; None means not found."""
    for n, value in enumerate(u.terms()):
        if n < start:
            continue
        if n - start > limit:
            if guaranteed:
                raise SearchCapExceeded(
                    "a provably successful witness search overran its cap"
                )
            return None
        if _sign(value - lam) in wanted:
            return n
    return None  # pragma: no cover - terms() is infinite


def _geometric_result(
    coeff, base, lam: Fraction, start: int, wanted, detail: str
) -> Depth2Result:
    hit = _least_sign_index([(coeff, base), (-lam, _one_like(base))], start, wanted)
    if hit is None:
        return Depth2Result("empty", detail=detail)
    return Depth2Result("nonempty", witness=hit, detail=detail)


def _decide_real_roots(u, a1, a2, disc, lam, start, wanted) -> Depth2Result:
    root = rational_sqrt(disc)
    if root is not None:
        s = root
        one = Fraction(1)
    else:
        s = Quad(0, 1, disc)
        one = Quad(1, 0, disc)
    r_plus = (a1 + s) / 2
    r_minus = (a1 - s) / 2
    c_plus = (u.initials[1] - u.initials[0] * r_minus) / (r_plus - r_minus)
    c_minus = u.initials[0] - c_plus
    terms = [(c_plus, r_plus), (c_minus, r_minus), (-lam * one, one)]
    hit = _least_sign_index(terms, start, wanted)
    field = "Q" if root is not None else f"Q(sqrt({disc}))"
    detail = f"distinct real roots, exact arithmetic in {field}"
    if hit is None:
        return Depth2Result("empty", detail=detail)
    return Depth2Result("nonempty", witness=hit, detail=detail)


def _poly_geometric_least(
    alpha: Fraction,
    gamma: Fraction,
    beta: Fraction,
    lam: Fraction,
    m_start: int,
    wanted: frozenset[int],
) -> int | None:
    """Least m >= m_start with sign((alpha + gamma m) beta^m - lam) in wanted.

    beta > 0 and gamma != 0.  Fully decided: the linear factor's sign is
    stable past its root, and the geometric factor either dominates (beta>1),
    cancels (beta=1) or decays under an explicit monotone envelope (beta<1).
    """
    if beta == 1:
        # purely linear: sign settles to sign(gamma) past the crossing
        eventual = 1 if gamma > 0 else -1
        crossing = (lam - alpha) / gamma
        horizon = max(m_start, int(crossing) + 2)
        for m in range(m_start, horizon + 1):
            if _sign(alpha + gamma * m - lam) in wanted:
                return m
        return horizon + 1 if eventual in wanted else None
    eventual_poly = 1 if gamma > 0 else -1
    m = m_start
    power = beta**m_start
    while True:
        poly = alpha + gamma * m
        poly_next = alpha + gamma * (m + 1)
        stable = _sign(poly) == eventual_poly and _sign(poly_next) == eventual_poly
        if beta > 1:
            if stable and _abs(poly) * power > _abs(lam):
                # |poly| grows and beta^m grows: dominance is permanent
                return m if eventual_poly in wanted else None
        else:
            threshold = _abs(gamma) * beta / (1 - beta)
            if stable and _abs(poly) >= threshold and _abs(poly) * power < _abs(lam):
                # envelope decreases from here on, so the tail sign is -sign(lam)
                eventual = -_sign(lam)
                return m if eventual in wanted else None
            if lam == 0 and stable:
                # sign(g) = sign(poly) for every later m
                return m if eventual_poly in wanted else None
        if _sign(poly * power - lam) in wanted:
            return m
        m += 1
        power = power * beta
        if m - m_start > INTERNAL_CAP:
            raise SearchCapExceeded("double-root analysis overran its cap")


def _decide_double_root(u, a1, lam, start, wanted) -> Depth2Result:
    b = a1 / 2  # nonzero: a2 = -a1^2/4 != 0 here
    big_a = u.initials[0]
    big_b = u.initials[1] / b - u.initials[0]
    detail = f"double root {b}"
    if big_b == 0:
        return _geometric_result(big_a, b, lam, start, wanted, detail)
    best = None
    for parity in (0, 1):
        scale = b if parity else Fraction(1)
        alpha = (big_a + big_b * parity) * scale
        gamma = 2 * big_b * scale
        beta = b * b
        m0 = max(0, (start - parity + 1) // 2)
        hit = _poly_geometric_least(alpha, gamma, beta, lam, m0, wanted)
        if hit is not None:
            n = 2 * hit + parity
            if best is None or n < best:
                best = n
    if best is None:
        return Depth2Result("empty", detail=detail)
    return Depth2Result("nonempty", witness=best, detail=detail)


def _rotation_period(a1: Fraction, cos2: Fraction) -> int | None:
    """Order of the root ratio when it is a root of unity, else None."""
    if cos2 == 0:
        return 4
    if cos2 == Fraction(1, 4):
        return 6 if a1 > 0 else 3
    if cos2 == Fraction(1, 2):
        return 8
    if cos2 == Fraction(3, 4):
        return 12
    return None


def _decide_periodic_rotation(
    u, a1, modulus, period, lam, start, wanted
) -> Depth2Result:
    """Complex roots with rational rotation: u_{n+T} = R u_n, R rational."""
    if period % 2 == 0:
        ratio = modulus ** (period // 2)
    else:
        # only the order-3 case: cos^2 = 1/4 forces sqrt(modulus) = |a1|
        ratio = modulus ** ((period - 1) // 2) * abs(a1)
    u0, u1 = u.initials
    if lr_eval(u, period) != ratio * u0 or lr_eval(u, period + 1) != ratio * u1:
        raise AssertionError("periodic rotation scaling failed verification")
    detail = f"root ratio is a root of unity of order {period}, scaling {ratio}"
    best = None
    for residue in range(period):
        base_value = lr_eval(u, residue)
        m0 = max(0, -(-(start - residue) // period))  # ceil
        hit = _least_sign_index(
            [(base_value, ratio), (-lam, Fraction(1))], m0, wanted
        )
        if hit is not None:
            n = residue + hit * period
            if best is None or n < best:
                best = n
    if best is None:
        return Depth2Result("empty", detail=detail)
    return Depth2Result("nonempty", witness=best, detail=detail)


def _decide_aperiodic_rotation(
    u, a1, modulus, lam, start, wanted, budget
) -> Depth2Result:
    """Complex roots with irrational rotation: equidistributed oscillation.

    modulus = r^2 = -a2.  The rational amplitude bound
    A^2 = u0^2 + (u1 - u0 a1/2)^2 / (modulus - a1^2/4) gives |u_n|^2 <= A^2 modulus^n
    with values dense in the limiting interval, so every inequality question
    is decided; equality questions fall back to a bounded hunt.
    """
    s2 = modulus - a1 * a1 / 4  # r^2 sin^2(theta) > 0 since D < 0
    q = u.initials[1] - u.initials[0] * a1 / 2
    amp2 = u.initials[0] ** 2 + q * q / s2
    detail = "aperiodic rotation (irrational angle), amplitude bound used"

    def scan(guaranteed: bool, limit: int) -> int | None:
        return _scan_values(u, lam, start, wanted, limit, guaranteed)

    if modulus == 1:
        pos_occurs = lam < 0 or lam * lam < amp2  # lam < A
        neg_occurs = lam > 0 or lam * lam < amp2  # lam > -A
        pos_possible = not (lam >= 0 and lam * lam >= amp2)
        neg_possible = not (lam <= 0 and lam * lam >= amp2)
        zero_possible = lam * lam <= amp2
        guaranteed = (1 in wanted and pos_occurs) or (-1 in wanted and neg_occurs)
        possible = (
            (1 in wanted and pos_possible)
            or (-1 in wanted and neg_possible)
            or (0 in wanted and zero_possible)
        )
        if guaranteed:
            return Depth2Result(
                "nonempty", witness=scan(True, INTERNAL_CAP), detail=detail
            )
        if not possible:
            return Depth2Result("empty", detail=detail)
        hit = scan(False, budget)
        if hit is not None:
            return Depth2Result("nonempty", witness=hit, detail=detail)
        return Depth2Result("unknown", searched=budget, detail=detail)
    if modulus > 1:
        if wanted != frozenset({0}):
            # signs +1 and -1 both recur with unbounded magnitude
            return Depth2Result(
                "nonempty", witness=scan(True, INTERNAL_CAP), detail=detail
            )
        hit = scan(False, budget)
        if hit is not None:
            return Depth2Result("nonempty", witness=hit, detail=detail)
        return Depth2Result("unknown", searched=budget, detail=detail)
    # modulus < 1: values decay to 0 under the envelope amp2 * modulus^n
    if lam == 0:
        if wanted != frozenset({0}):
            return Depth2Result(
                "nonempty", witness=scan(True, INTERNAL_CAP), detail=detail
            )
        hit = scan(False, budget)
        if hit is not None:
            return Depth2Result("nonempty", witness=hit, detail=detail)
        return Depth2Result("unknown", searched=budget, detail=detail)
    horizon = start
    envelope = amp2 * modulus**start
    lam2 = lam * lam
    while envelope >= lam2:
        envelope *= modulus
        horizon += 1
        if horizon - start > INTERNAL_CAP:  # pragma: no cover - m < 1 decays
            raise SearchCapExceeded("decay horizon not reached")
    # beyond the horizon |u_n| < |lam|, so the sign is -sign(lam) forever
    for n, value in enumerate(u.terms()):
        if start <= n < horizon and _sign(value - lam) in wanted:
            return Depth2Result("nonempty", witness=n, detail=detail)
        if n >= horizon:
            break
    if -_sign(lam) in wanted:
        return Depth2Result("nonempty", witness=horizon, detail=detail)
    return Depth2Result("empty", detail=detail)


def depth2_emptiness(
    u: LinRec,
    relation: Relation,
    cutpoint=0,
    start: int = 0,
    budget: int = 10_000,
) -> Depth2Result:
    """Emptiness of {n >= start : u_n relation cutpoint} for depth <= 2."""
    if u.depth > 2:
        raise ValueError("depth2_emptiness requires depth at most 2")
    lam = Fraction(cutpoint)
    wanted = RELATION_SIGNS[relation]
    if all(v == 0 for v in u.initials):
        sign0 = _sign(-lam)
        if sign0 in wanted:
            return Depth2Result("nonempty", witness=start, detail="zero sequence")
        return Depth2Result("empty", detail="zero sequence")
    if u.depth == 1:
        return _geometric_result(
            u.initials[0], u.coeffs[0], lam, start, wanted, "geometric sequence"
        )
    a1, a2 = u.coeffs
    if a2 == 0:
        # effectively geometric from index 1: u_n = (u1/a1) a1^n when a1 != 0
        if start == 0 and _sign(u.initials[0] - lam) in wanted:
            return Depth2Result("nonempty", witness=0, detail="degenerate second coefficient")
        inner_start = max(1, start)
        if a1 == 0:
            # u_n = 0 for every n >= 2
            if inner_start == 1 and _sign(u.initials[1] - lam) in wanted:
                return Depth2Result("nonempty", witness=1, detail="degenerate second coefficient")
            tail_from = max(2, inner_start)
            if _sign(-lam) in wanted:
                return Depth2Result(
                    "nonempty", witness=tail_from, detail="degenerate second coefficient"
                )
            return Depth2Result("empty", detail="degenerate second coefficient")
        hit = _least_sign_index(
            [(u.initials[1] / a1, a1), (-lam, Fraction(1))], inner_start, wanted
        )
        if hit is not None:
            return Depth2Result(
                "nonempty", witness=hit, detail="degenerate second coefficient"
            )
        return Depth2Result("empty", detail="degenerate second coefficient")
    disc = a1 * a1 + 4 * a2
    if disc > 0:
        return _decide_real_roots(u, a1, a2, disc, lam, start, wanted)
    if disc == 0:
        return _decide_double_root(u, a1, lam, start, wanted)
    modulus = -a2
    cos2 = a1 * a1 / (4 * modulus)
    period = _rotation_period(a1, cos2)
    if period is not None:
        return _decide_periodic_rotation(u, a1, modulus, period, lam, start, wanted)
    return _decide_aperiodic_rotation(u, a1, modulus, lam, start, wanted, budget)
