"""On-disk JSON format for models and conversion certificates.

Design rules: rationals are strings "p/q" (or "p"), never floats; complex
entries are {"re": "p/q", "im": "p/q"} with plain strings accepted (and
emitted) when the imaginary part is zero; matrices are row-major arrays of
arrays; state indices are 1-based on disk (q_1 ... q_n), 0-based in memory.
Canonical output is sorted-key, two-space-indented JSON with a trailing
newline, so load -> save -> load round-trips byte-identically.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .automata import END_MARKER, Gfa, Pfa, Qfa
from .conversions import ConversionCertificate
from .linalg import GaussianRational, Matrix, Vector, imag_part, real_part
from .sequences import LinRec, Lra, Lrva, TreeLinRec, VectorLinRec

FORMAT_VERSION = 1

MODEL_KINDS = ("lrr", "lra", "tlrr", "lrva", "gfa", "pfa", "qfa")


class ModelFileError(ValueError):
    """Malformed model file (bad JSON, bad schema, or bad invariants)."""


def parse_rational(raw) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise ModelFileError(f"rational must be a string like 'p/q', got {raw!r}")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ModelFileError(f"bad rational {raw!r}: {exc}") from None


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def parse_scalar(raw):
    """A rational string or a {re, im} object."""
    if isinstance(raw, dict):
        extra = set(raw) - {"re", "im"}
        if extra:
            raise ModelFileError(f"unexpected complex fields {sorted(extra)}")
        re = parse_rational(raw.get("re", "0"))
        im = parse_rational(raw.get("im", "0"))
        if im == 0:
            return re
        return GaussianRational(re, im)
    return parse_rational(raw)


def format_scalar(value):
    if imag_part(value) != 0:
        return {"re": format_rational(value.re), "im": format_rational(value.im)}
    return format_rational(real_part(value))


def _parse_vector(raw, what: str) -> Vector:
    if not isinstance(raw, list) or not raw:
        raise ModelFileError(f"{what} must be a non-empty array")
    return Vector(parse_scalar(e) for e in raw)


def _parse_matrix(raw, what: str) -> Matrix:
    if not isinstance(raw, list) or not raw:
        raise ModelFileError(f"{what} must be a non-empty array of rows")
    try:
        return Matrix([[parse_scalar(e) for e in row] for row in raw])
    except (TypeError, ValueError) as exc:
        raise ModelFileError(f"bad matrix for {what}: {exc}") from None


def _format_vector(vec: Vector) -> list:
    return [format_scalar(e) for e in vec]


def _format_matrix(mat: Matrix) -> list:
    return [[format_scalar(e) for e in row] for row in mat.entries]


def _parse_alphabet(raw) -> tuple[str, ...]:
    if not isinstance(raw, list) or not all(isinstance(s, str) for s in raw):
        raise ModelFileError("alphabet must be an array of symbols")
    return tuple(raw)


def _parse_accepting(raw, n_states: int) -> frozenset[int]:
    if not isinstance(raw, list):
        raise ModelFileError("accepting must be an array of 1-based state indices")
    out = set()
    for q in raw:
        if not isinstance(q, int) or isinstance(q, bool) or not 1 <= q <= n_states:
            raise ModelFileError(
                f"accepting state {q!r} out of range 1..{n_states}"
            )
        out.add(q - 1)
    return frozenset(out)


def model_kind(model) -> str:
    kinds = {
        LinRec: "lrr", Lra: "lra", TreeLinRec: "tlrr", Lrva: "lrva",
        Gfa: "gfa", Pfa: "pfa", Qfa: "qfa",
    }
    try:
        return kinds[type(model)]
    except KeyError:
        raise ModelFileError(f"not a serializable model: {type(model).__name__}")


def model_to_dict(model) -> dict:
    kind = model_kind(model)
    doc: dict = {"format": FORMAT_VERSION, "model": kind}
    if isinstance(model, LinRec):
        doc["initials"] = [format_rational(v) for v in model.initials]
        doc["coeffs"] = [format_rational(v) for v in model.coeffs]
    elif isinstance(model, Lra):
        doc["alphabet"] = [model.symbol]
        doc["initials"] = [format_rational(v) for v in model.rec.initials]
        doc["coeffs"] = [format_rational(v) for v in model.rec.coeffs]
    elif isinstance(model, TreeLinRec):
        doc["alphabet"] = list(model.alphabet)
        doc["depth"] = model.depth
        doc["initials"] = {
            key: format_rational(v) for key, v in sorted(model.initials.items())
        }
        doc["coeffs_a"] = [format_rational(v) for v in model.coeffs_a]
        doc["coeffs_b"] = [format_rational(v) for v in model.coeffs_b]
    elif isinstance(model, Lrva):
        doc["alphabet"] = [model.symbol]
        doc["initials"] = [_format_vector(v) for v in model.rec.initials]
        doc["matrices"] = [_format_matrix(a) for a in model.rec.matrices]
        doc["final"] = _format_vector(model.final)
        doc["probabilistic"] = model.probabilistic
    elif isinstance(model, Gfa):
        doc["alphabet"] = list(model.alphabet)
        doc["transitions"] = {
            sym: _format_matrix(mat) for sym, mat in model.transitions.items()
        }
        doc["initial"] = _format_vector(model.initial)
        doc["final"] = _format_vector(model.final)
    elif isinstance(model, Pfa):
        doc["alphabet"] = list(model.alphabet)
        doc["transitions"] = {
            sym: _format_matrix(mat) for sym, mat in model.transitions.items()
        }
        doc["initial"] = _format_vector(model.initial)
        doc["accepting"] = sorted(q + 1 for q in model.accepting)
    elif isinstance(model, Qfa):
        doc["alphabet"] = list(model.alphabet)
        doc["superoperators"] = {
            sym: [_format_matrix(e) for e in ops]
            for sym, ops in model.superoperators.items()
        }
        doc["initial_density"] = _format_matrix(model.initial_density)
        doc["accepting"] = sorted(q + 1 for q in model.accepting)
    return doc


def model_from_dict(doc) -> object:
    if not isinstance(doc, dict):
        raise ModelFileError("model file must contain a JSON object")
    if doc.get("format") != FORMAT_VERSION:
        raise ModelFileError(f"unsupported format {doc.get('format')!r}")
    kind = doc.get("model")
    if kind not in MODEL_KINDS:
        raise ModelFileError(f"unknown model kind {kind!r}")
    try:
        return _MODEL_PARSERS[kind](doc)
    except ModelFileError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFileError(f"malformed {kind} model: {exc}") from None


def _require(doc: dict, *fields):
    for f in fields:
        if f not in doc:
            raise ModelFileError(f"missing field {f!r}")


def _parse_lrr(doc) -> LinRec:
    _require(doc, "initials", "coeffs")
    return LinRec(
        tuple(parse_rational(v) for v in doc["initials"]),
        tuple(parse_rational(v) for v in doc["coeffs"]),
    )


def _parse_lra(doc) -> Lra:
    _require(doc, "alphabet")
    alphabet = _parse_alphabet(doc["alphabet"])
    if len(alphabet) != 1:
        raise ModelFileError("lra alphabet must contain exactly one symbol")
    return Lra(_parse_lrr(doc), alphabet[0])


def _parse_tlrr(doc) -> TreeLinRec:
    _require(doc, "depth", "initials", "coeffs_a", "coeffs_b")
    alphabet = _parse_alphabet(doc.get("alphabet", ["a", "b"]))
    if len(alphabet) != 2:
        raise ModelFileError("tlrr alphabet must contain exactly two symbols")
    if not isinstance(doc["initials"], dict):
        raise ModelFileError("tlrr initials must map strings to rationals")
    return TreeLinRec(
        doc["depth"],
        {k: parse_rational(v) for k, v in doc["initials"].items()},
        tuple(parse_rational(v) for v in doc["coeffs_a"]),
        tuple(parse_rational(v) for v in doc["coeffs_b"]),
        (alphabet[0], alphabet[1]),
    )


def _parse_lrva(doc) -> Lrva:
    _require(doc, "alphabet", "initials", "matrices", "final")
    alphabet = _parse_alphabet(doc["alphabet"])
    if len(alphabet) != 1:
        raise ModelFileError("lrva alphabet must contain exactly one symbol")
    rec = VectorLinRec(
        tuple(_parse_vector(v, "initial vector") for v in doc["initials"]),
        tuple(_parse_matrix(a, "recurrence matrix") for a in doc["matrices"]),
    )
    return Lrva(
        rec,
        _parse_vector(doc["final"], "final"),
        alphabet[0],
        bool(doc.get("probabilistic", False)),
    )


def _parse_gfa(doc) -> Gfa:
    _require(doc, "alphabet", "transitions", "initial", "final")
    alphabet = _parse_alphabet(doc["alphabet"])
    transitions = {
        sym: _parse_matrix(mat, f"transition {sym!r}")
        for sym, mat in doc["transitions"].items()
    }
    return Gfa(
        alphabet,
        transitions,
        _parse_vector(doc["initial"], "initial"),
        _parse_vector(doc["final"], "final"),
    )


def _parse_pfa(doc) -> Pfa:
    _require(doc, "alphabet", "transitions", "initial", "accepting")
    alphabet = _parse_alphabet(doc["alphabet"])
    transitions = {
        sym: _parse_matrix(mat, f"transition {sym!r}")
        for sym, mat in doc["transitions"].items()
    }
    initial = _parse_vector(doc["initial"], "initial")
    return Pfa(
        alphabet,
        transitions,
        initial,
        _parse_accepting(doc["accepting"], initial.dim),
    )


def _parse_qfa(doc) -> Qfa:
    _require(doc, "alphabet", "superoperators", "initial_density", "accepting")
    alphabet = _parse_alphabet(doc["alphabet"])
    supers = {}
    for sym, ops in doc["superoperators"].items():
        if not isinstance(ops, list) or not ops:
            raise ModelFileError(f"superoperator {sym!r} must be a non-empty array")
        supers[sym] = tuple(
            _parse_matrix(e, f"operation element for {sym!r}") for e in ops
        )
    density = _parse_matrix(doc["initial_density"], "initial_density")
    return Qfa(alphabet, supers, density, _parse_accepting(doc["accepting"], density.rows))


_MODEL_PARSERS = {
    "lrr": _parse_lrr,
    "lra": _parse_lra,
    "tlrr": _parse_tlrr,
    "lrva": _parse_lrva,
    "gfa": _parse_gfa,
    "pfa": _parse_pfa,
    "qfa": _parse_qfa,
}


def certificate_to_dict(cert: ConversionCertificate) -> dict:
    return {
        "format": FORMAT_VERSION,
        "kind": "certificate",
        "source": cert.source,
        "target": cert.target,
        "scale": format_rational(cert.scale),
        "offset": format_rational(cert.offset),
        "growth": format_rational(cert.growth),
        "min_length": cert.min_length,
        "cutpoint": None if cert.cutpoint is None else format_rational(cert.cutpoint),
        "note": cert.note,
    }


def certificate_from_dict(doc) -> ConversionCertificate:
    if not isinstance(doc, dict) or doc.get("kind") != "certificate":
        raise ModelFileError("not a certificate document")
    try:
        return ConversionCertificate(
            source=doc["source"],
            target=doc["target"],
            scale=parse_rational(doc.get("scale", "1")),
            offset=parse_rational(doc.get("offset", "0")),
            growth=parse_rational(doc.get("growth", "1")),
            min_length=int(doc.get("min_length", 0)),
            cutpoint=(
                None if doc.get("cutpoint") is None else parse_rational(doc["cutpoint"])
            ),
            note=str(doc.get("note", "")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFileError(f"malformed certificate: {exc}") from None


def canonical_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_model(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ModelFileError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"bad JSON in {path}: {exc}") from None
    return model_from_dict(doc)


def save_model(model, path) -> None:
    Path(path).write_text(canonical_json(model_to_dict(model)))


def save_certificate(cert: ConversionCertificate, path) -> None:
    Path(path).write_text(canonical_json(certificate_to_dict(cert)))


def load_certificate(path) -> ConversionCertificate:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelFileError(f"cannot read certificate {path}: {exc}") from None
    return certificate_from_dict(doc)
