"""Command-line interface.

Exit codes: 0 success, 1 semantic failure (not certified, failed
precondition), 2 I/O or parse error.  Reports carry no timestamps or paths,
so identical input gives byte-identical output.

Inputs are resolved as follows:

* ``fixture:NAME`` reads ``NAME``'s shipped file from ``$SK_FIXTURE_DIR``
  (default: the files bundled with the package);
* ``PATH#KEY`` reads the JSON object stored under ``KEY`` in ``PATH``, which
  is how the outputs of ``reduce`` are fed back into ``construct``;
* anything else is a path to an algebra file.

``--fixture NAME`` skips files altogether and builds the algebra from the
in-process registry.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from importlib import resources
from pathlib import Path
from typing import Any

from . import __version__
from . import fixtures as fx
from .algebra_core import MetricLieAlgebra, check_unimodular
from .constructions import (
    RepresentationPair,
    cotangent_hess,
    derivation_space,
    double_extension,
    reduce_by_line,
    sp_commutant_space,
    split_by_ideal,
    twisted_product,
)
from .errors import DimensionMismatch, OddDimension, ParseError, SpecialKahlerError, UnknownFixture
from .exact_linalg import Matrix, as_rational
from .serialize import algebra_from_dict, algebra_to_dict, dumps, matrix_from_rows, matrix_to_rows
from .special_kahler import (
    SpecialKahlerAlgebra,
    Subspace,
    VerificationReport,
    is_flat_special,
    signature,
)

TOOL = "spkahler"
EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


class InputError(Exception):
    """I/O or format problem with a command-line input (exit 2)."""


# ---------------------------------------------------------------- input resolution

def fixture_dir() -> Path:
    env = os.environ.get("SK_FIXTURE_DIR")
    if env:
        return Path(env)
    return Path(str(resources.files("spkahler") / "data" / "fixtures"))


class Loaded:
    """A parsed JSON value plus the digest of the bytes it came from."""

    def __init__(self, value: Any, digest: str, label: str):
        self.value = value
        self.digest = digest
        self.label = label


def _read_json(path: Path) -> tuple[Any, str]:
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        value = json.loads(raw.decode("utf-8"), parse_float=_reject_float)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return value, hashlib.sha256(raw).hexdigest()


def _reject_float(text: str):
    raise ParseError(f"floating-point literal {text} is not allowed; write rationals as strings")


def load(spec: str) -> Loaded:
    if spec.startswith("fixture:"):
        name = spec[len("fixture:"):]
        path = fixture_dir() / f"{fx.file_stem(name)}.json"
        if not path.exists():
            raise InputError(f"no fixture file for {name!r} in {path.parent}")
        value, digest = _read_json(path)
        return Loaded(value, digest, name)
    path_text, _, key = spec.partition("#")
    value, digest = _read_json(Path(path_text))
    if key:
        if not isinstance(value, dict) or key not in value:
            raise InputError(f"{path_text} has no key {key!r}")
        value = value[key]
    return Loaded(value, digest, spec)


def load_algebra(spec: str | None, fixture: str | None = None):
    """Return ``(algebra, digest)`` from a file spec or a registry name."""
    if fixture:
        data = fx.get(fixture).data
        digest = hashlib.sha256(dumps(algebra_to_dict(data)).encode()).hexdigest()
        return data, digest
    if not spec:
        raise InputError("an input file or --fixture NAME is required")
    src = load(spec)
    return algebra_from_dict(src.value), src.digest


def load_sk(spec: str | None, fixture: str | None = None) -> tuple[SpecialKahlerAlgebra, str]:
    a, digest = load_algebra(spec, fixture)
    if not isinstance(a, SpecialKahlerAlgebra):
        raise InputError("expected omega, j and product; got a metric Lie algebra")
    return a, digest


def _matrix_arg(spec: str, key: str) -> Matrix:
    """A matrix given inline as ``"r11,r12;r21,r22"`` or as a JSON file (rows or ``{key: rows}``)."""
    if ";" in spec or ("," in spec and not Path(spec.partition("#")[0]).exists()):
        try:
            rows = [[as_rational(x.strip()) for x in r.split(",")] for r in spec.split(";")]
        except ParseError as exc:
            raise InputError(str(exc)) from exc
        return matrix_from_rows(rows, key)
    value = load(spec).value
    if isinstance(value, dict):
        if key not in value:
            raise InputError(f"{spec} has no {key!r} entry")
        value = value[key]
    return matrix_from_rows(value, key)


def _vectors_arg(text: str, a: SpecialKahlerAlgebra) -> list[list]:
    """Basis labels (``e,f1``) or rational vectors separated by ``;``."""
    names = list(a.basis_names)
    out = []
    chunks = [c.strip() for c in text.split(";")]
    if len(chunks) == 1 and all(t.strip() in names for t in chunks[0].split(",")):
        chunks = [t.strip() for t in chunks[0].split(",")]
    for chunk in chunks:
        if chunk in names:
            k = names.index(chunk)
            out.append([1 if i == k else 0 for i in range(a.dim)])
            continue
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != a.dim:
            raise InputError(f"{chunk!r} is neither a basis label nor a vector of length {a.dim}")
        try:
            out.append([as_rational(p) for p in parts])
        except ParseError as exc:
            raise InputError(str(exc)) from exc
    return out


# ---------------------------------------------------------------- reports

def _item_dict(it) -> dict:
    return {
        "axiom": it.name,
        "passed": it.passed,
        "witness": list(it.witness) if it.witness is not None else None,
        "detail": it.detail,
    }


def derived(a: SpecialKahlerAlgebra) -> dict:
    try:
        sig = list(signature(a))
    except SpecialKahlerError:
        sig = None
    try:
        flat = is_flat_special(a)
    except SpecialKahlerError:
        flat = None
    return {"signature": sig, "flat_special": flat, "unimodular": check_unimodular(a.lie).passed}


def report_dict(command: str, digests: list[str], a: SpecialKahlerAlgebra) -> dict:
    rep: VerificationReport = a.report
    return {
        "tool": TOOL,
        "version": __version__,
        "command": command,
        "inputs_sha256": digests,
        "name": a.name,
        "certified": rep.certified,
        "items": [_item_dict(it) for it in rep.items],
        "derived": derived(a),
    }


def report_text(rep: dict) -> str:
    lines = [f"{rep['tool']} {rep['version']} {rep['command']}"]
    for d in rep["inputs_sha256"]:
        lines.append(f"input sha256 {d}")
    if rep.get("name"):
        lines.append(f"algebra {rep['name']}")
    for it in rep["items"]:
        mark = "PASS" if it["passed"] else "FAIL"
        extra = ""
        if not it["passed"]:
            extra = f"  witness={it['witness']} {it['detail']}".rstrip()
        lines.append(f"{mark} {it['axiom']}{extra}")
    lines.append("certified" if rep["certified"] else "NOT certified")
    der = rep["derived"]
    sig = der["signature"]
    lines.append("signature " + (f"({sig[0]},{sig[1]})" if sig else "undefined"))
    lines.append(f"flat_special {str(der['flat_special']).lower()}")
    lines.append(f"unimodular {str(der['unimodular']).lower()}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {out}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(text)


def _fmt(args, default: str) -> str:
    return args.format or default


# ---------------------------------------------------------------- commands

def cmd_verify(args) -> int:
    a, digest = load_sk(args.input, args.fixture)
    rep = report_dict("verify", [digest], a)
    _emit(dumps(rep) if _fmt(args, "text") == "structured" else report_text(rep), args.out)
    return EXIT_OK if rep["certified"] else EXIT_FAIL


def _construct_doc(command: str, digests: list[str], result: SpecialKahlerAlgebra, extra=None) -> dict:
    doc = algebra_to_dict(result)
    if extra:
        doc.update(extra)
    doc["report"] = report_dict(command, digests, result)
    return doc


def _emit_construct(args, doc: dict, rep: dict) -> int:
    if _fmt(args, "structured") == "structured":
        _emit(dumps(doc), args.out)
    else:
        _emit(report_text(rep), args.out)
    return EXIT_OK if rep["certified"] else EXIT_FAIL


def cmd_construct(args) -> int:
    kind = args.kind
    name = args.name or ""
    if kind == "cotangent":
        m, digest = load_algebra(args.inputs[0] if args.inputs else None, args.fixture)
        if not isinstance(m, MetricLieAlgebra):
            raise InputError("cotangent needs a metric Lie algebra file (with 'metric')")
        result = cotangent_hess(m, name=name or (f"T*({m.name})" if m.name else ""))
        digests = [digest]
    elif kind == "double-ext":
        base, digest = load_sk(args.inputs[0] if args.inputs else None, args.fixture)
        if not args.derivation:
            raise InputError("double-ext needs --derivation")
        D = _matrix_arg(args.derivation, "derivation")
        result = double_extension(base, D, name=name)
        digests = [digest]
    else:
        if len(args.inputs) != 2:
            raise InputError("twisted needs two algebra inputs")
        a1, d1 = load_sk(args.inputs[0])
        a2, d2 = load_sk(args.inputs[1])
        reps = _reps_arg(args.reps, a1.dim, a2.dim)
        result = twisted_product(a1, a2, reps, name=name)
        digests = [d1, d2]
    doc = _construct_doc(f"construct {kind}", digests, result)
    return _emit_construct(args, doc, doc["report"])


def _reps_arg(spec: str | None, n1: int, n2: int) -> RepresentationPair:
    if not spec:
        return RepresentationPair.zero(n1, n2)
    value = load(spec).value
    if not isinstance(value, dict):
        raise InputError("representation file must be an object with 'theta' and 'rho'")

    def mats(key: str, count: int, size: int):
        if key not in value:
            return tuple(Matrix.zeros(size) for _ in range(count))
        items = value[key]
        if not isinstance(items, list) or len(items) != count:
            raise InputError(f"{key!r} needs {count} matrices")
        out = []
        for rows in items:
            m = matrix_from_rows(rows, key)
            if m.shape != (size, size):
                raise InputError(f"{key!r} matrices must be {size}x{size}")
            out.append(m)
        return tuple(out)

    return RepresentationPair(mats("theta", n1, n2), mats("rho", n2, n1))


def cmd_solve(args) -> int:
    a, digest = load_sk(args.input, args.fixture)
    if not a.certified:
        bad = a.report.first_failure()
        sys.stderr.write(f"error: NotCertified: {bad.name} fails\n")
        return EXIT_FAIL
    basis = derivation_space(a)
    comm = sp_commutant_space(a)
    if _fmt(args, "text") == "structured":
        doc = {
            "tool": TOOL, "version": __version__, "command": "solve-derivations",
            "inputs_sha256": [digest], "name": a.name,
            "dimension": len(basis),
            "basis": [matrix_to_rows(m) for m in basis],
            "sp_commutant_dimension": len(comm),
        }
        _emit(dumps(doc), args.out)
    else:
        lines = [f"{TOOL} {__version__} solve-derivations", f"input sha256 {digest}"]
        if a.name:
            lines.append(f"algebra {a.name}")
        lines.append(f"sp_commutant dimension {len(comm)}")
        lines.append(f"dimension {len(basis)}")
        for k, m in enumerate(basis, 1):
            lines.append(f"D{k}:")
            lines.extend("  " + " ".join(f"{x:>6}" for x in row) for row in matrix_to_rows(m))
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_reduce(args) -> int:
    a, digest = load_sk(args.input, args.fixture)
    head = {"tool": TOOL, "version": __version__, "inputs_sha256": [digest]}
    if args.line:
        vecs = _vectors_arg(args.line, a)
        if len(vecs) != 1:
            raise InputError("--line takes a single vector")
        res = reduce_by_line(a, vecs[0])
        doc = {**head, "command": "reduce --line",
               "base": _construct_doc("reduce --line", [digest], res.base),
               "derivation": matrix_to_rows(res.derivation),
               "basis": matrix_to_rows(res.basis)}
        reports = [doc["base"]["report"]]
    else:
        sub = Subspace(a.dim, _vectors_arg(args.ideal, a))
        res = split_by_ideal(a, sub)
        doc = {**head, "command": "reduce --ideal",
               "a1": _construct_doc("reduce --ideal", [digest], res.a1),
               "a2": _construct_doc("reduce --ideal", [digest], res.a2),
               "theta": [matrix_to_rows(m) for m in res.reps.theta],
               "rho": [matrix_to_rows(m) for m in res.reps.rho],
               "basis": matrix_to_rows(res.basis)}
        reports = [doc["a1"]["report"], doc["a2"]["report"]]
    if _fmt(args, "structured") == "structured":
        _emit(dumps(doc), args.out)
    else:
        _emit("".join(report_text(r) for r in reports), args.out)
    return EXIT_OK if all(r["certified"] for r in reports) else EXIT_FAIL


def cmd_fixtures(args) -> int:
    if args.action == "list":
        names = fx.list_names()
        if _fmt(args, "text") == "structured":
            doc = {"fixtures": [{"name": n, "parametric": n in fx.PARAMETRIC} for n in names],
                   "shipped": list(fx.SHIPPED)}
            _emit(dumps(doc), args.out)
        else:
            _emit("".join(f"{n}{'(...)' if n in fx.PARAMETRIC else ''}\n" for n in names), args.out)
        return EXIT_OK
    if not args.dir:
        raise InputError("fixtures export needs a target directory")
    target = Path(args.dir)
    try:
        target.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create {target}: {exc.strerror or exc}") from exc
    written = []
    for name in args.names or fx.SHIPPED:
        data = fx.get(name).data
        path = target / f"{fx.file_stem(name)}.json"
        try:
            path.write_text(dumps(algebra_to_dict(data)), encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {path}: {exc.strerror or exc}") from exc
        written.append(path.name)
    sys.stdout.write("".join(f"{w}\n" for w in written))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write the result here instead of stdout")
    common.add_argument("--format", choices=("text", "structured"),
                        help="report style (default: text for verify/solve/list, structured otherwise)")
    common.add_argument("--fixture", metavar="NAME", help="build the input from the fixture registry")

    p = argparse.ArgumentParser(prog=TOOL, description="Exact special Kähler Lie algebra toolkit.")
    p.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run the full axiom battery")
    v.add_argument("input", nargs="?", help="algebra file, fixture:NAME or PATH#KEY")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("construct", parents=[common], help="cotangent, twisted or double-ext")
    c.add_argument("kind", choices=("cotangent", "twisted", "double-ext"))
    c.add_argument("inputs", nargs="*", help="input algebras (two for twisted)")
    c.add_argument("--derivation", metavar="SPEC",
                   help="D as a JSON file (rows or {'derivation': rows}) or inline 'a,b;c,d'")
    c.add_argument("--reps", metavar="SPEC", help="JSON with 'theta' and 'rho' matrix lists")
    c.add_argument("--name", help="name of the constructed algebra")
    c.set_defaults(func=cmd_construct)

    s = sub.add_parser("solve-derivations", parents=[common],
                       help="basis of admissible double-extension derivations")
    s.add_argument("input", nargs="?")
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("reduce", parents=[common], help="reduce along a line or split along an ideal")
    r.add_argument("input", nargs="?")
    g = r.add_mutually_exclusive_group(required=True)
    g.add_argument("--line", metavar="VEC", help="basis label or 'c1,...,cn'")
    g.add_argument("--ideal", metavar="BASIS", help="labels 'e1,e2' or vectors separated by ';'")
    r.set_defaults(func=cmd_reduce)

    f = sub.add_parser("fixtures", parents=[common], help="list or export the fixture registry")
    f.add_argument("action", choices=("list", "export"))
    f.add_argument("dir", nargs="?", help="export directory")
    f.add_argument("names", nargs="*", help="fixtures to export (default: all shipped)")
    f.set_defaults(func=cmd_fixtures)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_PARSE
    try:
        return args.func(args)
    except (InputError, ParseError, UnknownFixture, DimensionMismatch, OddDimension) as exc:
        msg = exc.args[0] if isinstance(exc, UnknownFixture) and exc.args else exc
        sys.stderr.write(f"error: {type(exc).__name__}: {msg}\n")
        return EXIT_PARSE
    except SpecialKahlerError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
