"""Command-line front end: eval, convert, decide, closure, reduce, validate.

Exit codes: 0 success (valid / Decided), 1 evaluation or pairing error
(including invalid models under `validate`), 2 Unknown verdict, 3 malformed
file.  Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .automata import Gfa, Pfa, Qfa, value_of, validate as validate_model
from .conversions import (
    gfa_to_linrec,
    gfa_to_lrva,
    gfa_to_pfa,
    linrec_to_gfa,
    lrva_to_gfa,
    pfa_to_gfa,
    qfa_to_gfa,
    rationalize_to_integer,
    shift_cutpoint,
)
from .decision import Problem, Verdict, decide, default_bound
from .modelfile import (
    ModelFileError,
    load_model,
    model_kind,
    save_certificate,
    save_model,
)
from .sequences import (
    ForeignSymbolError,
    LinRec,
    Lra,
    lr_combine,
    lr_reduce,
)
from .validation import InvalidModelError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNKNOWN = 2
EXIT_MALFORMED = 3


def _fail(message: str, code: int) -> int:
    print(f"cutpoint: {message}", file=sys.stderr)
    return code


def _model_symbol(model) -> str | None:
    if isinstance(model, (Lra,)):
        return model.symbol
    if isinstance(model, LinRec):
        return "a"
    alphabet = getattr(model, "alphabet", None)
    if alphabet and len(alphabet) == 1:
        return alphabet[0]
    if alphabet:
        return None
    symbol = getattr(model, "symbol", None)
    return symbol


def parse_word(text: str, model) -> str:
    """Accepts 'a^12' shorthand, a bare index for unary models, a literal
    word, or 'eps' for the empty word."""
    if text in ("eps", "ε", ""):
        return ""
    if "^" in text:
        sym, _, count = text.partition("^")
        if len(sym) != 1 or not count.isdigit():
            raise ValueError(f"bad word shorthand {text!r}")
        return sym * int(count)
    if text.isdigit():
        symbol = _model_symbol(model)
        if symbol is None:
            raise ValueError("a bare index needs a unary model")
        return symbol * int(text)
    return text


def _parse_rational_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad rational {text!r}") from None


def _load(path: str):
    return load_model(path)


def cmd_eval(args) -> int:
    try:
        model = _load(args.file)
    except ModelFileError as exc:
        return _fail(str(exc), EXIT_MALFORMED)
    try:
        word = parse_word(args.word, model)
        value = value_of(model, word)
    except (ValueError, ForeignSymbolError, InvalidModelError, ArithmeticError) as exc:
        return _fail(str(exc), EXIT_ERROR)
    print(value)
    return EXIT_OK


def _default_out(in_path: str, source_kind: str, target: str) -> Path:
    p = Path(in_path)
    stem = p.name
    if stem.endswith(".json"):
        stem = stem[: -len(".json")]
    if stem.endswith("." + source_kind):
        stem = stem[: -(len(source_kind) + 1)]
    suffix = {"integer-gfa": "intgfa", "shifted-gfa": "shifted.gfa"}.get(
        target, target
    )
    return p.with_name(f"{stem}.{suffix}.json")


CONVERT_TARGETS = ("gfa", "pfa", "lrr", "lra", "lrva", "integer-gfa", "shifted-gfa")


def cmd_convert(args) -> int:
    try:
        model = _load(args.file)
    except ModelFileError as exc:
        return _fail(str(exc), EXIT_MALFORMED)
    kind = model_kind(model)
    target = args.to
    try:
        if target == "gfa" and isinstance(model, LinRec):
            out, cert = linrec_to_gfa(model)
        elif target == "gfa" and isinstance(model, Lra):
            out, cert = linrec_to_gfa(model.rec)
        elif target == "gfa" and isinstance(model, Qfa):
            out, cert = qfa_to_gfa(model)
        elif target == "gfa" and isinstance(model, Pfa):
            out, cert = pfa_to_gfa(model)
        elif target == "gfa" and kind == "lrva":
            out, cert = lrva_to_gfa(model)
        elif target == "pfa" and isinstance(model, Gfa):
            out, cutpoint, cert = gfa_to_pfa(model)
        elif target == "lrr" and isinstance(model, Gfa):
            out, cert = gfa_to_linrec(model)
        elif target == "lra" and isinstance(model, Gfa):
            rec, cert = gfa_to_linrec(model)
            out = Lra(rec, model.alphabet[0])
        elif target == "lrva" and isinstance(model, Gfa):
            out = gfa_to_lrva(model)
            cert = None
        elif target == "integer-gfa" and isinstance(model, Gfa):
            out, cert = rationalize_to_integer(model)
        elif target == "shifted-gfa" and isinstance(model, Gfa):
            if args.cutpoint is None:
                return _fail("--to shifted-gfa requires --cutpoint", EXIT_ERROR)
            out, cert = shift_cutpoint(model, _parse_rational_arg(args.cutpoint))
        else:
            return _fail(
                f"unsupported conversion {kind} -> {target}", EXIT_ERROR
            )
    except (ValueError, InvalidModelError) as exc:
        return _fail(str(exc), EXIT_ERROR)
    out_path = Path(args.output) if args.output else _default_out(args.file, kind, target)
    save_model(out, out_path)
    print(f"wrote {out_path}")
    if cert is not None:
        cert_path = (
            Path(args.certificate)
            if args.certificate
            else out_path.with_name(out_path.stem + ".cert.json")
        )
        save_certificate(cert, cert_path)
        print(f"wrote {cert_path}")
        if cert.cutpoint is not None:
            print(f"cutpoint: {cert.cutpoint}")
    return EXIT_OK


def cmd_decide(args) -> int:
    try:
        model = _load(args.file)
    except ModelFileError as exc:
        return _fail(str(exc), EXIT_MALFORMED)
    try:
        cutpoint = _parse_rational_arg(args.cutpoint)
        problem = Problem.make(
            args.problem.replace("-", "_"),
            cutpoint,
            model,
            include_empty=not args.skip_empty_word,
        )
        verdict = decide(problem, args.bound)
    except (ValueError, InvalidModelError) as exc:
        return _fail(str(exc), EXIT_ERROR)
    print(f"status: {verdict.status.value}")
    if verdict.decided:
        print(f"answer: {verdict.answer.value}")
        if verdict.witness is not None:
            print(f"witness: {verdict.witness}")
        print(f"certificate: {verdict.certificate.value}")
        return EXIT_OK
    print(f"searched: {verdict.searched}")
    return EXIT_UNKNOWN


def cmd_closure(args) -> int:
    try:
        left = _load(args.left)
        right = _load(args.right)
    except ModelFileError as exc:
        return _fail(str(exc), EXIT_MALFORMED)

    def as_rec(model):
        if isinstance(model, LinRec):
            return model
        if isinstance(model, Lra):
            return model.rec
        raise ValueError(f"closure needs lrr/lra inputs, got {model_kind(model)}")

    try:
        combined = lr_combine(args.op, as_rec(left), as_rec(right))
    except ValueError as exc:
        return _fail(str(exc), EXIT_ERROR)
    out_path = Path(args.output)
    save_model(combined, out_path)
    print(f"wrote {out_path}")
    return EXIT_OK


REDUCE_KINDS = {
    "skolem-to-strict-pos": "skolem_to_strict_pos",
    "skolem-to-pos": "skolem_to_pos",
    "strictpos-to-pos": "strictpos_to_pos",
}


def cmd_reduce(args) -> int:
    try:
        model = _load(args.file)
    except ModelFileError as exc:
        return _fail(str(exc), EXIT_MALFORMED)
    if isinstance(model, Lra):
        model = model.rec
    if not isinstance(model, LinRec):
        return _fail("reduce needs an lrr/lra input", EXIT_ERROR)
    reduced = lr_reduce(REDUCE_KINDS[args.kind], model)
    out_path = Path(args.output)
    save_model(reduced, out_path)
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_validate(args) -> int:
    any_invalid = False
    for path in args.files:
        try:
            model = _load(path)
        except ModelFileError as exc:
            return _fail(str(exc), EXIT_MALFORMED)
        report = validate_model(model)
        print(f"{path}: {report.describe()}")
        if not report.ok:
            any_invalid = True
    return EXIT_ERROR if any_invalid else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cutpoint",
        description=(
            "Exact evaluation, conversion and emptiness decisions for unary "
            "weighted, probabilistic and quantum automata and linear recurrences."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a model on a word or index")
    p_eval.add_argument("file")
    p_eval.add_argument("word", help="word ('a^12', literal, 'eps') or bare index")
    p_eval.set_defaults(func=cmd_eval)

    p_conv = sub.add_parser("convert", help="convert a model, writing a certificate")
    p_conv.add_argument("--to", required=True, choices=CONVERT_TARGETS)
    p_conv.add_argument("--cutpoint", help="cutpoint for --to shifted-gfa")
    p_conv.add_argument("-o", "--output", help="output model path")
    p_conv.add_argument("--certificate", help="output certificate path")
    p_conv.add_argument("file")
    p_conv.set_defaults(func=cmd_convert)

    p_dec = sub.add_parser("decide", help="decide an emptiness problem")
    p_dec.add_argument(
        "--problem",
        required=True,
        choices=["skolem", "positivity", "strict-positivity", "strict_positivity",
                 "exclusivity"],
    )
    p_dec.add_argument("--cutpoint", default="0")
    p_dec.add_argument("--bound", type=int, default=default_bound())
    p_dec.add_argument(
        "--skip-empty-word",
        action="store_true",
        help="ask about L+ (the empty word removed)",
    )
    p_dec.add_argument("file")
    p_dec.set_defaults(func=cmd_decide)

    p_clo = sub.add_parser("closure", help="pointwise sum/product of recurrences")
    p_clo.add_argument("--op", required=True, choices=["sum", "product"])
    p_clo.add_argument("-o", "--output", required=True)
    p_clo.add_argument("left")
    p_clo.add_argument("right")
    p_clo.set_defaults(func=cmd_closure)

    p_red = sub.add_parser("reduce", help="problem reductions on recurrences")
    p_red.add_argument("--kind", required=True, choices=sorted(REDUCE_KINDS))
    p_red.add_argument("-o", "--output", required=True)
    p_red.add_argument("file")
    p_red.set_defaults(func=cmd_reduce)

    p_val = sub.add_parser("validate", help="check model invariants")
    p_val.add_argument("files", nargs="+")
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
