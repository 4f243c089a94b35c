"""Deciders for the emptiness problems over unary models.

A :class:`Problem` asks whether L(target, relation λ) is empty, with the
relation fixed by the problem kind: skolem "=", positivity ">=",
strict positivity ">", exclusivity "!=".  Verdicts are either Decided
(Empty, or NonEmpty with the least witness length) carrying a certificate
kind, or Unknown with the bound searched.

Dispatcher order (fixed, deterministic): exclusivity constant-sequence
check, PFA boundary decider at cutpoints 0/1, value-range triage for
probability-valued machines, periodic-orbit detection on the exact state
vectors, the depth-2 solver (after exact depth minimization and constant
splitting), and finally bounded witness search.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .automata import (
    END_MARKER,
    Gfa,
    Pfa,
    Qfa,
    Relation,
    ThresholdQuery,
    classify,
    validate,
)
from .conversions import (
    gfa_to_linrec,
    linrec_companion_gfa,
    lrva_to_gfa,
    pfa_to_gfa,
    qfa_to_gfa,
)
from .depth2 import Depth2Result, depth2_emptiness
from .sequences import (
    LinRec,
    Lra,
    Lrva,
    lr_combine,
    lr_constant,
    lr_minimize,
    lr_split_constant,
)
from .validation import require_valid

DEFAULT_BOUND_ENV = "CUTPOINT_BOUND"
DEFAULT_BOUND = 1000
ORBIT_CAP = 256


def default_bound() -> int:
    raw = os.environ.get(DEFAULT_BOUND_ENV)
    if raw is None:
        return DEFAULT_BOUND
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_BOUND
    return value if value > 0 else DEFAULT_BOUND


class ProblemKind(enum.Enum):
    SKOLEM = "skolem"
    POSITIVITY = "positivity"
    STRICT_POSITIVITY = "strict_positivity"
    EXCLUSIVITY = "exclusivity"

    @property
    def relation(self) -> Relation:
        return {
            ProblemKind.SKOLEM: Relation.EQ,
            ProblemKind.POSITIVITY: Relation.GE,
            ProblemKind.STRICT_POSITIVITY: Relation.GT,
            ProblemKind.EXCLUSIVITY: Relation.NE,
        }[self]


class CertificateKind(enum.Enum):
    BOUNDED_WITNESS = "bounded_witness"
    CONSTANT_CHECK = "constant_check"
    REACHABILITY = "reachability"
    POWERSET = "powerset"
    PERIODIC_ORBIT = "periodic_orbit"
    DEPTH2_ANALYSIS = "depth2_analysis"
    VALUE_RANGE = "value_range"


class Status(enum.Enum):
    DECIDED = "Decided"
    UNKNOWN = "Unknown"


class Answer(enum.Enum):
    EMPTY = "Empty"
    NONEMPTY = "NonEmpty"


@dataclass(frozen=True)
class Verdict:
    status: Status
    answer: Answer | None = None
    witness: int | None = None
    certificate: CertificateKind | None = None
    searched: int | None = None
    detail: str = ""

    @classmethod
    def nonempty(cls, witness: int, certificate: CertificateKind, detail: str = ""):
        return cls(Status.DECIDED, Answer.NONEMPTY, witness, certificate, None, detail)

    @classmethod
    def empty(cls, certificate: CertificateKind, detail: str = ""):
        return cls(Status.DECIDED, Answer.EMPTY, None, certificate, None, detail)

    @classmethod
    def unknown(cls, searched: int, detail: str = ""):
        return cls(Status.UNKNOWN, None, None, None, searched, detail)

    @property
    def decided(self) -> bool:
        return self.status is Status.DECIDED

    def __str__(self):
        if not self.decided:
            return f"Unknown (searched up to n = {self.searched})"
        if self.answer is Answer.EMPTY:
            return f"Decided Empty [{self.certificate.value}]"
        return (
            f"Decided NonEmpty witness n = {self.witness} [{self.certificate.value}]"
        )


@dataclass(frozen=True)
class Problem:
    """Emptiness of L(target, relation λ) with the relation fixed by kind."""

    kind: ProblemKind
    query: ThresholdQuery
    target: object

    def __post_init__(self):
        if self.query.relation is not self.kind.relation:
            raise ValueError(
                f"{self.kind.value} fixes relation {self.kind.relation.value!r}"
            )
        if isinstance(self.target, (Pfa, Qfa)):
            if not 0 <= self.query.cutpoint <= 1:
                raise ValueError("cutpoint must lie in [0, 1] for PFA/QFA targets")

    @classmethod
    def make(cls, kind, cutpoint, target, include_empty: bool = True) -> "Problem":
        kind = ProblemKind(kind) if not isinstance(kind, ProblemKind) else kind
        return cls(
            kind,
            ThresholdQuery(Fraction(cutpoint), kind.relation, include_empty),
            target,
        )

    @property
    def start(self) -> int:
        return 0 if self.query.include_empty else 1


def unary_symbol(model) -> str:
    if isinstance(model, (LinRec,)):
        return "a"
    if isinstance(model, (Lra, Lrva)):
        return model.symbol
    alphabet = model.alphabet
    if len(alphabet) != 1:
        raise ValueError("decision procedures require a unary model")
    return alphabet[0]


def target_as_unary_gfa(model) -> Gfa:
    """Value-preserving unary GFA (exact for every n >= 0)."""
    if isinstance(model, Gfa):
        if not model.is_unary:
            raise ValueError("decision procedures require a unary model")
        return model
    if isinstance(model, LinRec):
        return linrec_companion_gfa(model)[0]
    if isinstance(model, Lra):
        g = linrec_companion_gfa(model.rec)[0]
        if model.symbol != "a":
            g = Gfa(
                (model.symbol,),
                {model.symbol: g.transitions["a"]},
                g.initial,
                g.final,
            )
        return g
    if isinstance(model, Pfa):
        if not model.is_unary:
            raise ValueError("decision procedures require a unary model")
        return pfa_to_gfa(model)[0]
    if isinstance(model, Qfa):
        if not model.is_unary:
            raise ValueError("decision procedures require a unary model")
        return qfa_to_gfa(model)[0]
    if isinstance(model, Lrva):
        return lrva_to_gfa(model)[0]
    raise TypeError(f"unsupported decision target {type(model).__name__}")


def target_as_linrec(model) -> LinRec:
    if isinstance(model, LinRec):
        return model
    if isinstance(model, Lra):
        return model.rec
    return gfa_to_linrec(target_as_unary_gfa(model))[0]


def unary_values(model) -> Iterator[Fraction]:
    """Yield the model's exact values on a^0, a^1, a^2, ... incrementally."""
    if isinstance(model, (LinRec,)):
        yield from model.terms()
        return
    if isinstance(model, Lra):
        yield from model.rec.terms()
        return
    g = target_as_unary_gfa(model)
    mat = g.transitions[g.alphabet[0]]
    state = g.initial
    while True:
        yield g.final.dot(state)
        state = mat * state


def bounded_search(problem: Problem, n_max: int) -> Verdict:
    """Check n = start..n_max; NonEmpty with the least witness, else Unknown.

    A pure semi-decision: it never returns Empty.
    """
    require_valid(validate(problem.target))
    query = problem.query
    for n, value in enumerate(unary_values(problem.target)):
        if n > n_max:
            break
        if n < problem.start:
            continue
        if query.relation.holds(value, query.cutpoint):
            return Verdict.nonempty(n, CertificateKind.BOUNDED_WITNESS)
    return Verdict.unknown(n_max)


def decide_exclusivity(problem: Problem) -> Verdict:
    """Exact decider for emptiness of L(target, != λ); always decides.

    Forms w = u - λ·(constant 1); a depth-d recurrence whose first d terms in
    the validity domain vanish is identically zero from there on, so scanning
    d consecutive values settles the question.
    """
    if problem.kind is not ProblemKind.EXCLUSIVITY:
        raise ValueError("decide_exclusivity requires an exclusivity problem")
    return _exclusivity_by_constant_check(
        problem.target, problem.query.cutpoint, problem.start
    )


def _exclusivity_by_constant_check(target, cutpoint: Fraction, start: int) -> Verdict:
    require_valid(validate(target))
    u = target_as_linrec(target)
    w = lr_combine("sum", u, lr_constant(-cutpoint))
    for offset, value in enumerate(w.terms()):
        if offset < start:
            continue
        if offset >= start + w.depth:
            break
        if value != 0:
            return Verdict.nonempty(
                offset,
                CertificateKind.CONSTANT_CHECK,
                detail=f"value differs from {cutpoint} at n = {offset}",
            )
    return Verdict.empty(
        CertificateKind.CONSTANT_CHECK,
        detail=f"constant sequence: {w.depth} consecutive window values are zero",
    )


def _support_step(mat, support: frozenset[int]) -> frozenset[int]:
    n = mat.rows
    return frozenset(
        j for j in range(n) if any(mat[j, i] > 0 for i in support)
    )


PFA_BOUNDARY_QUERIES = ("gt0", "eq1", "lt1", "eq0")


def decide_pfa_boundary(
    p: Pfa, which: str, include_empty: bool = True, budget: int = DEFAULT_BOUND
) -> Verdict:
    """Decide the regular boundary languages L(P,>0), L(P,=1), L(P,<1), L(P,=0).

    Probabilities are irrelevant at the boundary: only the support of the
    state vector matters, and with nonnegative entries the support evolves by
    the Boolean support automaton.  On a unary alphabet the reachable
    supports form a rho-shaped orbit, so scanning one preperiod plus one
    period decides emptiness and yields least witnesses.
    """
    if which not in PFA_BOUNDARY_QUERIES:
        raise ValueError(f"unknown boundary query {which!r}")
    require_valid(validate(p))
    symbol = unary_symbol(p)
    step_mat = p.transitions[symbol]
    end_mat = p.transitions[END_MARKER]
    acc = frozenset(p.accepting)

    def hit(support: frozenset[int]) -> bool:
        final = _support_step(end_mat, support)
        if which == "gt0":
            return bool(final & acc)
        if which == "eq0":
            return not final & acc
        if which == "eq1":
            return final <= acc
        return not final <= acc  # lt1

    start = 0 if include_empty else 1
    seen: dict[frozenset[int], int] = {}
    supports: list[frozenset[int]] = []
    support = frozenset(i for i, e in enumerate(p.initial) if e > 0)
    while support not in seen:
        seen[support] = len(supports)
        supports.append(support)
        support = _support_step(step_mat, support)
    preperiod = seen[support]
    period = len(supports) - preperiod
    certificate = (
        CertificateKind.REACHABILITY
        if which in ("gt0", "eq0")
        else CertificateKind.POWERSET
    )
    detail = f"support orbit: preperiod {preperiod}, period {period}"
    candidates = list(range(start, preperiod + period))
    for n in range(preperiod, min(preperiod + period, start)):
        # cycle entries below the start index recur at start-or-later indices
        shift = -(-(start - n) // period)
        candidates.append(n + shift * period)
    best = None
    for n in candidates:
        idx = n if n < len(supports) else preperiod + (n - preperiod) % period
        if hit(supports[idx]) and (best is None or n < best):
            best = n
    if best is not None:
        return Verdict.nonempty(best, certificate, detail=detail)
    return Verdict.empty(certificate, detail=detail)


@dataclass(frozen=True)
class OrbitPeriodicity:
    preperiod: int
    period: int


def detect_periodic_orbit(g: Gfa, cap: int = ORBIT_CAP) -> OrbitPeriodicity | None:
    """Detect a repeat in the exact state-vector orbit {A^n v0}, if any.

    Returns the (preperiod, period) pair of the first repeat within cap
    steps, or None when the orbit stays injective that long.
    """
    symbol = unary_symbol(g)
    mat = g.transitions[symbol]
    seen: dict = {}
    state = g.initial
    for n in range(cap + 1):
        if state in seen:
            p = seen[state]
            return OrbitPeriodicity(p, n - p)
        seen[state] = n
        state = mat * state
    return None


def orbit_decide(
    g: Gfa, query: ThresholdQuery, cap: int = ORBIT_CAP
) -> Verdict:
    """Decide any relation query when the state orbit is finite."""
    orbit = detect_periodic_orbit(g, cap)
    if orbit is None:
        return Verdict.unknown(cap, detail="state orbit not periodic within cap")
    p, q = orbit.preperiod, orbit.period
    start = 0 if query.include_empty else 1
    detail = f"state orbit periodic: preperiod {p}, period {q}"
    candidates = set(range(start, p + q))
    for n in range(p, min(p + q, start)):
        shift = -(-(start - n) // q)
        candidates.add(n + shift * q)
    horizon = max(candidates, default=start)
    best = None
    for n, value in enumerate(unary_values(g)):
        if n > horizon:
            break
        if n in candidates and query.relation.holds(value, query.cutpoint):
            best = n
            break
    if best is not None:
        return Verdict.nonempty(best, CertificateKind.PERIODIC_ORBIT, detail=detail)
    return Verdict.empty(CertificateKind.PERIODIC_ORBIT, detail=detail)


def _depth2_to_verdict(result: Depth2Result) -> Verdict:
    if result.kind == "nonempty":
        return Verdict.nonempty(
            result.witness, CertificateKind.DEPTH2_ANALYSIS, detail=result.detail
        )
    if result.kind == "empty":
        return Verdict.empty(CertificateKind.DEPTH2_ANALYSIS, detail=result.detail)
    return Verdict.unknown(result.searched, detail=result.detail)


def decide_depth2(
    u: LinRec,
    kind_or_relation,
    cutpoint=0,
    include_empty: bool = True,
    budget: int = 10_000,
) -> Verdict:
    """Complete solver for depth <= 2 against a rational cutpoint.

    Accepts a ProblemKind or any Relation (so violation-style questions like
    "< 0" are directly expressible).  Unknown arises only for equality hunts
    in the aperiodic complex-root case.
    """
    if isinstance(kind_or_relation, Relation):
        relation = kind_or_relation
    else:
        relation = ProblemKind(kind_or_relation).relation
    start = 0 if include_empty else 1
    return _depth2_to_verdict(
        depth2_emptiness(u, relation, cutpoint, start=start, budget=budget)
    )


def _range_triage(relation: Relation, lam: Fraction) -> str | None:
    """For values confined to [0,1]: 'empty', 'all', or None (informative)."""
    if relation is Relation.GT:
        if lam >= 1:
            return "empty"
        if lam < 0:
            return "all"
    elif relation is Relation.GE:
        if lam > 1:
            return "empty"
        if lam <= 0:
            return "all"
    elif relation is Relation.EQ:
        if lam < 0 or lam > 1:
            return "empty"
    elif relation is Relation.LT:
        if lam <= 0:
            return "empty"
        if lam > 1:
            return "all"
    elif relation is Relation.LE:
        if lam < 0:
            return "empty"
        if lam >= 1:
            return "all"
    elif relation is Relation.NE:
        if lam < 0 or lam > 1:
            return "all"
    return None


_PFA_BOUNDARY_MAP = {
    (Relation.GT, Fraction(0)): "gt0",
    (Relation.NE, Fraction(0)): "gt0",
    (Relation.EQ, Fraction(0)): "eq0",
    (Relation.LE, Fraction(0)): "eq0",
    (Relation.EQ, Fraction(1)): "eq1",
    (Relation.GE, Fraction(1)): "eq1",
    (Relation.LT, Fraction(1)): "lt1",
    (Relation.NE, Fraction(1)): "lt1",
}


def decide_query(target, query: ThresholdQuery, budget: int | None = None) -> Verdict:
    """Dispatcher over all deciders for an arbitrary relation query."""
    if budget is None:
        budget = default_bound()
    require_valid(validate(target))
    start = 0 if query.include_empty else 1
    lam = query.cutpoint
    relation = query.relation

    if relation is Relation.NE:
        return _exclusivity_by_constant_check(target, lam, start)

    if isinstance(target, (Pfa, Qfa)):
        triage = _range_triage(relation, lam)
        if triage == "empty":
            return Verdict.empty(
                CertificateKind.VALUE_RANGE,
                detail="acceptance values lie in [0, 1]",
            )
        if triage == "all":
            return Verdict.nonempty(
                start,
                CertificateKind.VALUE_RANGE,
                detail="every acceptance value satisfies the relation",
            )
        if isinstance(target, Pfa) and target.is_unary:
            which = _PFA_BOUNDARY_MAP.get((relation, lam))
            if which is not None:
                return decide_pfa_boundary(
                    target, which, include_empty=query.include_empty, budget=budget
                )

    gfa = target_as_unary_gfa(target)
    verdict = orbit_decide(gfa, query, cap=min(budget, ORBIT_CAP))
    if verdict.decided:
        return verdict

    u = target_as_linrec(target)
    shifted = u if lam == 0 else lr_combine("sum", u, lr_constant(-lam))
    w = lr_minimize(shifted)
    if w.depth <= 2:
        return _depth2_to_verdict(
            depth2_emptiness(w, relation, 0, start=start, budget=budget)
        )
    if w.depth == 3:
        split = lr_split_constant(w)
        if split is not None:
            w2, const = split
            return _depth2_to_verdict(
                depth2_emptiness(w2, relation, -const, start=start, budget=budget)
            )

    for n, value in enumerate(unary_values(target)):
        if n > budget:
            break
        if n >= start and relation.holds(value, lam):
            return Verdict.nonempty(n, CertificateKind.BOUNDED_WITNESS)
    return Verdict.unknown(budget)


def decide(problem: Problem, budget: int | None = None) -> Verdict:
    """Decide a named emptiness problem; first Decided verdict wins."""
    return decide_query(problem.target, problem.query, budget)


def verify_verdict(target, query: ThresholdQuery, verdict: Verdict) -> bool:
    """Independent re-check of a verdict's claim.

    NonEmpty witnesses are replayed through classify; Empty verdicts re-run
    their certificate's checker and are additionally brute-checked on a
    sample prefix.
    """
    start = 0 if query.include_empty else 1
    if not verdict.decided:
        return True
    if verdict.answer is Answer.NONEMPTY:
        if verdict.witness is None or verdict.witness < start:
            return False
        symbol = unary_symbol(target)
        _, member = classify(target, query, symbol * verdict.witness)
        return member
    # Empty: no witness may exist in a sampled prefix
    for n, value in enumerate(unary_values(target)):
        if n > 200:
            break
        if n >= start and query.relation.holds(value, query.cutpoint):
            return False
    if verdict.certificate is CertificateKind.CONSTANT_CHECK:
        check = _exclusivity_by_constant_check(target, query.cutpoint, start)
        return check.answer is Answer.EMPTY
    if verdict.certificate in (
        CertificateKind.REACHABILITY,
        CertificateKind.POWERSET,
    ):
        which = _PFA_BOUNDARY_MAP.get((query.relation, query.cutpoint))
        if which is None:
            return False
        again = decide_pfa_boundary(target, which, query.include_empty)
        return again.answer is Answer.EMPTY
    if verdict.certificate is CertificateKind.PERIODIC_ORBIT:
        again = orbit_decide(target_as_unary_gfa(target), query)
        return again.decided and again.answer is Answer.EMPTY
    if verdict.certificate is CertificateKind.VALUE_RANGE:
        return validate(target).ok and _range_triage(
            query.relation, query.cutpoint
        ) == "empty"
    if verdict.certificate is CertificateKind.DEPTH2_ANALYSIS:
        again = decide_query(target, query)
        return again.decided and again.answer is Answer.EMPTY
    return False
