"""Command line front end: ``wxz verify|check|solve-z|solve-w|reduce|orbit|dump``."""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path

from . import __version__
from .catalog import CATALOG_ENV, Sampler, load_catalog
from .catalog.expr import evaluate
from .catalog.sampling import BACKENDS
from .errors import WXZError
from .scalar import TAU
from .solver import LinearSystem, check_triple, reduce_canonical
from .symmetry import orbit_sample
from .tensor import ONE4, P, SquareMatrix, WXZTriple
from .verify import LISTS, cmd_verify_catalog

SCHEMA_VERSION = 1
SCOPES = ("all",) + LISTS + ("generic", "nongeneric")
EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

_CALL = re.compile(r"^\s*([A-Za-z_][\w.]*)\s*(?:\((.*)\))?\s*$", re.S)


def _document(kind: str, body: dict) -> dict:
    return {"schema": f"wxz-{kind}", "version": SCHEMA_VERSION, **body}


def _catalog(args):
    return load_catalog(args.catalog) if getattr(args, "catalog", None) else load_catalog()


def load_matrix(text: str, catalog=None) -> SquareMatrix:
    """A matrix from a JSON file, inline JSON, ``1``/``P``, or a family call such as ``R_3.1(2,3,5)``."""
    text = text.strip()
    if text in ("1", "I"):
        return ONE4
    if text == "P":
        return P
    if text[:1] in "[{":
        return SquareMatrix.from_json(json.loads(text))
    path = Path(text)
    if path.is_file():
        with open(path, encoding="utf-8") as fh:
            return SquareMatrix.from_json(json.load(fh))
    m = _CALL.match(text)
    if m:
        catalog = catalog or load_catalog()
        fam = catalog.family(m.group(1))
        raw = m.group(2)
        args = [evaluate(a.strip(), {}) for a in raw.split(",")] if raw and raw.strip() else []
        return fam(*args)
    raise WXZError(f"cannot read a matrix from {text!r}")


def _load_triple(args, catalog) -> WXZTriple:
    if getattr(args, "triple", None):
        src = args.triple
        obj = json.loads(src) if src.strip()[:1] == "{" else json.loads(Path(src).read_text(encoding="utf-8"))
        return WXZTriple.from_json(obj)
    missing = [n for n in ("w", "x", "z") if getattr(args, n) is None]
    if missing:
        raise WXZError(f"missing --{' --'.join(missing)} (or pass --triple)")
    return WXZTriple(*(load_matrix(getattr(args, n), catalog) for n in ("w", "x", "z")))


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=False)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


# -- subcommands ---------------------------------------------------------------

def cmd_verify(args) -> int:
    catalog = _catalog(args)
    start = time.perf_counter()
    report = cmd_verify_catalog(args.scope, args.samples, args.seed, args.backend, args.tau, catalog,
                                args.second_inverse, args.entry)
    _emit(report.to_json(), args.out)
    s = report.summary()
    print(f"verify {args.scope}: {s['passed']}/{s['entries']} entries passed, "
          f"exact fraction {s['exact_fraction']:.3f}, {time.perf_counter() - start:.1f}s", file=sys.stderr)
    for eid in report.failed:
        print(f"FAILED {eid}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_check(args) -> int:
    t = _load_triple(args, _catalog(args))
    res = check_triple(t.w, t.x, t.z, args.second_inverse)
    body = res.to_json(args.tau)
    doc = _document("check", {"pass": body.pop("passed"), **body})
    _emit(doc, args.out)
    return EXIT_OK if doc["pass"] else EXIT_FAIL


def _solve(args, unknown: str) -> int:
    x = load_matrix(args.x, _catalog(args))
    system = LinearSystem.build(x, unknown)
    basis = system.nullspace(args.tau)
    doc = _document(f"solve-{unknown.lower()}", {
        "unknown": unknown,
        "x": x.to_json(),
        "exact": system.exact,
        "rank": system.rank(args.tau),
        "dimension": len(basis),
        "basis": [b.to_json() for b in basis],
    })
    _emit(doc, args.out)
    return EXIT_OK


def cmd_solve_z(args) -> int:
    return _solve(args, "Z")


def cmd_solve_w(args) -> int:
    return _solve(args, "W")


def cmd_reduce(args) -> int:
    a = load_matrix(args.a, _catalog(args))
    red = reduce_canonical(a)
    ok = red.roundtrip()
    doc = _document("reduce", {"form": red.form_index, "roundtrip": ok, **red.to_json()})
    _emit(doc, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_orbit(args) -> int:
    t = _load_triple(args, _catalog(args))
    triples, ops = orbit_sample(t, args.depth, args.seed, with_ops=True)
    checks = [x.residual().passed(args.tau) for x in triples]
    doc = _document("orbit", {
        "depth": args.depth,
        "seed": args.seed,
        "ops": [o.to_json() for o in ops],
        "triples": [x.to_json() for x in triples],
        "verified": checks,
        "pass": all(checks),
    })
    _emit(doc, args.out)
    return EXIT_OK if doc["pass"] else EXIT_FAIL


def cmd_dump(args) -> int:
    catalog = _catalog(args)
    if args.entry:
        entry = catalog.entry(args.entry)
        options = catalog.expand(entry)
        body = {"entry": entry.describe(), "expanded": [e.id for e in options]}
        if args.sample is not None:
            sampler = Sampler(catalog, seed=args.seed, backend=args.backend)
            body["realizations"] = [sampler.sample(e, args.sample).to_json() for e in options]
    else:
        entries = catalog.entries(args.scope, expand=args.expand) if args.scope != "all" else [
            e for name in LISTS for e in catalog.entries(name, expand=args.expand)]
        body = {
            "scope": args.scope,
            "catalog": catalog.source,
            "families": {k: len(catalog.families_of_kind(k)) for k in ("R", "X", "A")},
            "count": len(entries),
            "entries": [e.describe() for e in entries],
        }
    _emit(_document("dump", body), args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wxz", description="Exact verification toolkit for the WXZ system of Yang-Baxter type equations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", default=None, help=f"catalog JSON (default: ${CATALOG_ENV} or the bundled one)")
    common.add_argument("--out", default=None, help="write the JSON document here instead of stdout")
    common.add_argument("--tau", type=float, default=TAU, help="tolerance for inexact residuals")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="sample and check catalog entries")
    v.add_argument("--scope", choices=SCOPES, default="all")
    v.add_argument("--samples", type=int, default=None, help="assignments per entry (default 20 for ybe, 10 otherwise)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--backend", choices=BACKENDS, default="exact-preferred")
    v.add_argument("--second-inverse", action="store_true", help="also count second-invertible WXZ samples")
    v.add_argument("--entry", action="append", default=None, help="restrict to these entry ids (repeatable)")
    v.set_defaults(func=cmd_verify)

    def triple_args(sp):
        sp.add_argument("--w")
        sp.add_argument("--x")
        sp.add_argument("--z")
        sp.add_argument("--triple", help='JSON file or inline {"W":..., "X":..., "Z":...}')

    c = sub.add_parser("check", parents=[common], help="residuals and invertibility of one triple")
    triple_args(c)
    c.add_argument("--second-inverse", action="store_true", help="require W and Z to be second invertible")
    c.set_defaults(func=cmd_check)

    for name, fn in (("solve-z", cmd_solve_z), ("solve-w", cmd_solve_w)):
        s = sub.add_parser(name, parents=[common], help=f"nullspace basis of the equation linear in {name[-1].upper()}")
        s.add_argument("--x", required=True)
        s.set_defaults(func=fn)

    r = sub.add_parser("reduce", parents=[common], help="canonical form under lam (1 x S) A (1 x S)^-1")
    r.add_argument("--a", required=True)
    r.set_defaults(func=cmd_reduce)

    o = sub.add_parser("orbit", parents=[common], help="random walk over the symmetry group")
    triple_args(o)
    o.add_argument("--depth", type=int, default=3)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=cmd_orbit)

    d = sub.add_parser("dump", parents=[common], help="list catalog entries or realize one")
    d.add_argument("--scope", choices=SCOPES, default="all")
    d.add_argument("--expand", action="store_true")
    d.add_argument("--entry")
    d.add_argument("--sample", type=int, default=None, help="realize sample k of --entry")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--backend", choices=BACKENDS, default="exact-preferred")
    d.set_defaults(func=cmd_dump)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (WXZError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
