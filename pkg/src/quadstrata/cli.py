"""Command-line front end: JSON in, JSON out.

Exit codes: 0 on success, 2 when the configuration is not realizable, 1 on
any input error (the error object ``{"error": code, "message": ...}`` is
printed on stdout).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import constructors, oracle, search
from .core import (
    WHOLE,
    ComponentSelector,
    ParseError,
    QuadStrataError,
    RootedResidueConfig,
    StratumSignature,
    max_disjoint_cylinders,
    parse_gaussian,
    stratum_nonempty_holomorphic,
    validate_signature,
)
from .surface import FlatSurface, LocalInvariants, verify
from .svg import surface_svg

EXIT_OK, EXIT_INPUT, EXIT_NOT_REALIZABLE = 0, 1, 2


class CliError(QuadStrataError):
    code = "IOError"


# -- parsing -----------------------------------------------------------------


def parse_signature(text: str) -> StratumSignature:
    """``GENUS:ORDERS`` (``1:4,-4``), a JSON signature object, or ``@file``."""
    text = _maybe_file(text).strip()
    if text.startswith("{"):
        return StratumSignature.from_json(_loads(text))
    genus, sep, orders = text.partition(":")
    if not sep:
        raise ParseError(f"signature {text!r} is not of the form GENUS:ORDERS")
    try:
        g = int(genus)
        values = [int(x) for x in orders.replace(";", ",").split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"bad signature {text!r}") from exc
    return StratumSignature.from_orders(g, values)


def parse_roots(text: str | None, sig: StratumSignature) -> RootedResidueConfig:
    """Comma-separated roots: even poles (largest order first), then double poles.

    A JSON object with ``even_pole_roots`` and ``double_pole_roots`` is also
    accepted.
    """
    if text is None:
        cfg = RootedResidueConfig()
    else:
        text = _maybe_file(text).strip()
        if text.startswith("{"):
            cfg = RootedResidueConfig.from_json(_loads(text))
        else:
            vals = [parse_gaussian(t) for t in text.split(",") if t.strip()]
            cfg = RootedResidueConfig(vals[:sig.p], vals[sig.p:])
    cfg.check_against(sig)
    return cfg


def parse_component(text: str | None) -> ComponentSelector:
    if text is None:
        return WHOLE
    return ComponentSelector.from_json(text.strip())


def _maybe_file(text: str) -> str:
    if text.startswith("@"):
        return _read(text[1:])
    return text


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg} at line {exc.lineno}") from exc


def _request(args) -> tuple[StratumSignature, RootedResidueConfig, ComponentSelector]:
    """Signature, roots and component from flags or from a JSON request file."""
    if getattr(args, "input", None):
        obj = _loads(_read(args.input))
        if not isinstance(obj, dict) or "signature" not in obj:
            raise ParseError("request must be an object with a 'signature' field")
        sig = validate_signature(StratumSignature.from_json(obj["signature"])).signature
        roots = obj.get("roots")
        if isinstance(roots, list):
            vals = [parse_gaussian(str(r)) for r in roots]
            cfg = RootedResidueConfig(vals[:sig.p], vals[sig.p:])
        else:
            cfg = RootedResidueConfig.from_json(roots) if roots is not None else RootedResidueConfig()
        cfg.check_against(sig)
        comp = ComponentSelector.from_json(obj.get("component"))
    else:
        if args.sig is None:
            raise ParseError("either --sig or a request file is required")
        sig = validate_signature(parse_signature(args.sig)).signature
        cfg = parse_roots(args.roots, sig)
        comp = parse_component(args.component)
    validate_signature(sig)
    return sig, cfg, comp


# -- output ------------------------------------------------------------------


def _emit(obj, fmt: str) -> None:
    if fmt == "text":
        for key, value in obj.items():
            print(f"{key}: {value if isinstance(value, (str, int, bool)) else json.dumps(value, sort_keys=True)}")
    else:
        print(json.dumps(obj, sort_keys=True, indent=2))


def _write_svg(path: str | None, surface: FlatSurface | None) -> None:
    if path and surface is not None:
        try:
            Path(path).write_text(surface_svg(surface))
        except OSError as exc:
            raise CliError(f"cannot write {path}: {exc.strerror}") from exc


# -- commands ----------------------------------------------------------------


def cmd_decide(args) -> int:
    sig, cfg, comp = _request(args)
    verdict = oracle.decide(sig, cfg, comp)
    _emit(verdict.to_json(), args.format)
    return EXIT_OK if verdict.realizable else EXIT_NOT_REALIZABLE


def cmd_construct(args) -> int:
    if args.catalog:
        entries = {e.name: e for e in constructors.witness_catalog()}
        if args.catalog not in entries:
            raise ParseError(f"no catalog entry {args.catalog!r}")
        witness = entries[args.catalog].build()
    else:
        sig, cfg, comp = _request(args)
        try:
            witness = constructors.construct(sig, cfg, comp)
        except constructors.ObstructedConfiguration as exc:
            _emit(exc.to_json(), args.format)
            return EXIT_NOT_REALIZABLE
    out = witness.to_json()
    if args.verify:
        out["verified"] = witness.check().to_json()
    _write_svg(args.svg, witness.surface)
    _emit(out, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    obj = _loads(_read(args.input))
    if not isinstance(obj, dict):
        raise ParseError("expected a surface or witness JSON object")
    claimed = None
    if "surface" in obj:
        claimed = LocalInvariants.from_json(obj["claimed"]) if "claimed" in obj else None
        obj = obj["surface"]
    surface = FlatSurface.from_json(obj)
    got = verify(surface)
    out = {"invariants": got.to_json(), "degree_identity": got.degree_identity_holds()}
    if claimed is not None:
        out["matches_claim"] = got == claimed
    _write_svg(args.svg, surface)
    _emit(out, args.format)
    if claimed is not None and got != claimed:
        return EXIT_INPUT
    return EXIT_OK


def cmd_search(args) -> int:
    sig = parse_signature(args.sig)
    validate_signature(sig)
    if args.roots is None:
        raise ParseError("--roots is required")
    roots = []
    for t in args.roots.split(","):
        z = parse_gaussian(t)
        if z.im != 0 or z.re.denominator != 1 or z.re <= 0:
            raise ParseError(f"search roots must be positive integers, got {t.strip()!r}")
        roots.append(int(z.re))
    report, first = search.search_report(sig, roots, args.budget)
    _write_svg(args.svg, first.surface if first is not None else None)
    _emit(report, args.format)
    return EXIT_OK


def cmd_nonempty(args) -> int:
    sig = parse_signature(args.sig)
    _emit({"signature": sig.to_json(), "nonempty": stratum_nonempty_holomorphic(sig)}, args.format)
    return EXIT_OK


def cmd_cylinders(args) -> int:
    sig = parse_signature(args.sig)
    _emit({"max": max_disjoint_cylinders(sig)}, args.format)
    return EXIT_OK


def cmd_catalog(args) -> int:
    rows = [{"name": e.name, "signature": str(e.signature), "roots": e.config.to_json(),
             "component": e.component.to_json()} for e in constructors.witness_catalog()]
    _emit({"entries": rows}, args.format)
    return EXIT_OK


def cmd_acceptance(args) -> int:
    from .acceptance import run_all

    results = run_all()
    for r in results:
        print(r.line(), file=sys.stderr)
    _emit({"criteria": [r.to_json() for r in results]}, args.format)
    return EXIT_OK if all(r.passed for r in results) else EXIT_INPUT


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadstrata", description="Residues of quadratic differentials.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, request=True, svg=False):
        p.add_argument("--format", choices=("json", "text"), default="json")
        if request:
            p.add_argument("input", nargs="?", help="JSON request file ({signature, roots, component}); '-' for stdin")
            p.add_argument("--sig", help="signature GENUS:ORDERS, e.g. 1:4,-4")
            p.add_argument("--roots", help="comma-separated roots: even poles first, then double poles")
            p.add_argument("--component", help="'whole' or a rotation number")
        if svg:
            p.add_argument("--svg", metavar="PATH", help="write a drawing of the surface")
        return p

    p = common(sub.add_parser("decide", help="realizability verdict"))
    p.set_defaults(func=cmd_decide)
    p = common(sub.add_parser("construct", help="build and print a witness surface"), svg=True)
    p.add_argument("--verify", action="store_true", help="recompute invariants and compare with the claim")
    p.add_argument("--catalog", metavar="NAME", help="build a named catalog witness instead")
    p.set_defaults(func=cmd_construct)
    p = common(sub.add_parser("verify", help="recompute invariants of a surface file"), request=False, svg=True)
    p.add_argument("input", help="surface or witness JSON file; '-' for stdin")
    p.set_defaults(func=cmd_verify)
    p = common(sub.add_parser("search", help="exhaustive normal-form search"), request=False, svg=True)
    p.add_argument("--sig", required=True)
    p.add_argument("--roots", required=True)
    p.add_argument("--budget", type=int, default=search.DEFAULT_BUDGET)
    p.set_defaults(func=cmd_search)
    for name, fn, helptext in (("nonempty", cmd_nonempty, "is a holomorphic stratum nonempty"),
                               ("cylinders", cmd_cylinders, "maximal number of disjoint cylinders")):
        p = common(sub.add_parser(name, help=helptext), request=False)
        p.add_argument("--sig", required=True)
        p.set_defaults(func=fn)
    p = common(sub.add_parser("catalog", help="list the witness catalog"), request=False)
    p.set_defaults(func=cmd_catalog)
    p = common(sub.add_parser("acceptance", help="run the acceptance checks"), request=False)
    p.set_defaults(func=cmd_acceptance)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QuadStrataError as exc:
        print(json.dumps(exc.to_json(), sort_keys=True))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
