"""Command-line front end: ``genrep <verb> --ring RING.json [options]``."""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from fractions import Fraction

from . import __version__
from .cache import Cache
from .calculus import (context, decompose_linearization, deltabar_lin, dim_Q_of_A, dim_QA_via_resolution,
                       dim_QAM, dim_Qupper, dim_simple, fd_membership, s_count, simple_census,
                       taubar_lin, taubar_Q, taubar_QAM, verify_orbit_formula,
                       verify_orbit_formula_QAM, noncommutation_gap)
from .catalog import get_catalog
from .dimension import NotPrimaryError, chi_polynomial, ring_prime
from .errors import CapExceeded, InvariantViolation, SpecError
from .io import load_module, load_ring
from .modules import (DEFAULT_MODULE_CAP, dual_module, free_module, iso_test,
                      surjection_count_bruteforce)
from .rings import DEFAULT_RING_CAP, k_trivial, primary_prime, units, verify_axioms

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAP, EXIT_INVARIANT = 0, 1, 2, 3, 4

SUITES = ("moebius", "resolution", "freeness", "qofa", "partition", "bookkeeping",
          "orbit", "chartables", "fd", "duality", "noncommutation")


class ArgumentError(SpecError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="genrep", description="Exact census of generic representations over a finite ring.")
    p.add_argument("--version", action="version", version=f"genrep {__version__}")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(sp, module=False):
        sp.add_argument("--ring", required=True, help="ring JSON file or inline JSON")
        if module:
            sp.add_argument("--module", required=True, help="module JSON file or inline JSON")
        sp.add_argument("--format", choices=("json", "table"), default="json")
        sp.add_argument("--cache-dir", default=None, help="cache root (default $GENREP_CACHE or ./.genrep-cache)")
        sp.add_argument("--no-cache", action="store_true")
        sp.add_argument("--ring-cap", type=int, default=DEFAULT_RING_CAP)
        sp.add_argument("--module-cap", type=int, default=DEFAULT_MODULE_CAP)
        return sp

    common(sub.add_parser("ring-info", help="ring data and axiom check"))
    sp = common(sub.add_parser("modules-census", help="iso classes up to a length"))
    sp.add_argument("--max-length", type=int, default=2)
    sp = common(sub.add_parser("simples", help="simple-functor census"))
    sp.add_argument("--max-length", type=int, default=2)
    sp.add_argument("--eval-upto", type=int, default=4)
    common(sub.add_parser("decompose", help="G0 class of a linearization"), module=True)
    sp = common(sub.add_parser("dim", help="dimension functions attached to a module"), module=True)
    sp.add_argument("--eval-upto", type=int, default=4)
    sp.add_argument("--irr", type=int, default=None)
    sp = common(sub.add_parser("shift", help="parabolic shift and difference"), module=True)
    sp.add_argument("--x-rank", type=int, default=1)
    sp.add_argument("--irr", type=int, default=None)
    sp = common(sub.add_parser("fd-check", help="F_d membership of a linearization"), module=True)
    sp.add_argument("--d", type=int, required=True)
    sp = common(sub.add_parser("verify", help="run invariant suites over the catalog"))
    sp.add_argument("--suite", choices=SUITES + ("all",), default="all")
    sp.add_argument("--max-length", type=int, default=2)
    sp.add_argument("--eval-upto", type=int, default=4)
    sp.add_argument("--budget", type=float, default=None, help="wall-time budget in seconds")
    return p


# -- helpers ---------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else [x.numerator, x.denominator]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def _chi(f, p):
    if p is None:
        return None
    try:
        return chi_polynomial(f, p).to_json()
    except NotPrimaryError:
        return None


def _dimblock(f, ns, p):
    out = {"terms": f.to_json(), "values": f.values(ns), "text": str(f)}
    chi = _chi(f, p)
    if chi is not None:
        out["chi"] = chi
    return out


def _module_info(M, cls=None) -> dict:
    info = {"size": len(M), "length": M.length, "generators": len(M.generators)}
    if cls is not None:
        info["class_id"] = cls.class_id
    return info


# -- verbs ---------------------------------------------------------------------------

def cmd_ring_info(R, args, cache):
    rep = verify_axioms(R)
    return {
        "name": R.name, "size": len(R), "characteristic": R.characteristic,
        "commutative": R.is_commutative, "units": units(R), "primary_prime": primary_prime(R),
        "axioms_ok": rep.ok, "violations": rep.violations[:20],
        "k_trivial_char0": k_trivial(R, 0),
        "labels": R.labels,
    }, rep.ok


def _ctx(R, depth, cache):
    if cache is not None:
        cache.load_catalog(R, depth)
    ctx = context(R, depth)
    if cache is not None:
        cache.store_catalog(R, depth)
        cache.warm(ctx)
    return ctx


def cmd_modules_census(R, args, cache):
    if cache is not None:
        cache.load_catalog(R, args.max_length)
    cat = get_catalog(R, args.max_length, cap=args.module_cap)
    if cache is not None:
        cache.store_catalog(R, args.max_length)
    rows = [c.summary() for c in cat.upto(args.max_length)]
    return {"classes": rows, "counts": [sum(r["length"] == k for r in rows)
                                        for k in range(args.max_length + 1)]}, True


def cmd_simples(R, args, cache):
    ctx = _ctx(R, args.max_length, cache)
    return simple_census(R, args.max_length, args.eval_upto, ctx), True


def cmd_decompose(R, args, cache):
    X = load_module(R, args.module, args.module_cap)
    ctx = _ctx(R, X.length, cache)
    v, w = decompose_linearization(X, ctx)
    ns = range(5)
    return {"module": _module_info(X), "QAM_basis": v.to_json(), "simple_basis": w.to_json(),
            "bookkeeping": {"n": list(ns), "values": w.dimension(ctx).values(ns),
                            "expected": [len(X) ** n for n in ns]}}, True


def cmd_dim(R, args, cache):
    A = load_module(R, args.module, args.module_cap)
    ctx = _ctx(R, A.length, cache)
    cls, _ = ctx.match(A)
    ns = list(range(args.eval_upto + 1))
    p = ring_prime(len(R))
    q = dim_Q_of_A(A)
    out = {
        "module": _module_info(A, cls),
        "s_count": _dimblock(s_count(A), ns, p),
        "QA_via_resolution": _dimblock(dim_QA_via_resolution(A), ns, p),
        "Qupper": _dimblock(dim_Qupper(A), ns, p),
        "Q_of_A": {"euler": _dimblock(q.euler, ns, p), "product": _dimblock(q.product, ns, p),
                   "agree": q.agree},
        "aut_order": cls.aut_order,
    }
    irrs = range(len(ctx.table(cls))) if args.irr is None else [args.irr]
    out["irreducibles"] = [{
        "irr": i, "degree": ctx.table(cls).degrees[i],
        "QAM": _dimblock(dim_QAM(A, i, ctx), ns, p),
        "simple": _dimblock(dim_simple(A, i, ctx), ns, p)} for i in irrs]
    return out, q.agree


def cmd_shift(R, args, cache):
    A = load_module(R, args.module, args.module_cap)
    ctx = _ctx(R, A.length, cache)
    x = free_module(R, args.x_rank, cap=args.module_cap)
    out = {"module": _module_info(A, ctx.match(A)[0]), "x_rank": args.x_rank,
           "taubar_lin": taubar_lin(x, A).to_json(), "deltabar_lin": deltabar_lin(x, A).to_json(),
           "taubar_Q": taubar_Q(x, A).to_json()}
    if args.irr is not None:
        terms = taubar_QAM(x, A, args.irr, ctx)
        cat = get_catalog(R)
        out["taubar_QAM"] = [{"class_id": cid, "irr": j, "mult": k} for (cid, j), k in
                             sorted(terms.items(), key=lambda kv: (cat.get(kv[0][0]).sort_key, kv[0][1]))]
    return out, True


def cmd_fd_check(R, args, cache):
    A = load_module(R, args.module, args.module_cap)
    return {"module": _module_info(A), **fd_membership(A, args.d).to_json()}, True


# -- verification suites ---------------------------------------------------------------

def _suite_checks(name, R, cls, ctx, ns):
    """Yield (label, ok, detail) for one suite on one catalog class."""
    A = cls.representative
    if name == "moebius":
        s = s_count(A)
        for n in ns:
            if len(A) ** n > 5000:
                break
            got = surjection_count_bruteforce(free_module(R, n), A)
            yield f"n={n}", got == s.value(n), {"brute": got, "moebius": s.value(n)}
    elif name == "resolution":
        yield "identity", dim_QA_via_resolution(A) == s_count(A), {}
    elif name == "freeness":
        s = s_count(A)
        for n in ns:
            yield f"n={n}", s.value(n) % cls.aut_order == 0, {"s": s.value(n), "aut": cls.aut_order}
    elif name == "qofa":
        q = dim_Q_of_A(A, check=False)
        yield "two routes", q.agree, {"euler": str(q.euler), "product": str(q.product)}
    elif name == "partition":
        T = ctx.table(cls)
        total = sum((dim_simple(A, i, ctx) * d for i, d in enumerate(T.degrees)),
                    start=dim_Q_of_A(A).euler * 0)
        ok = total == dim_Q_of_A(A).euler
        vals = [dim_simple(A, i, ctx).values(ns) for i in range(len(T))]
        yield "sum", ok, {}
        yield "nonnegative", all(v >= 0 for row in vals for v in row), {"values": vals}
    elif name == "bookkeeping":
        v, w = decompose_linearization(A, ctx)
        yield "simple entries", all(c >= 0 and c.denominator == 1 for c in w.entries.values()), {}
    elif name == "orbit":
        if len(A) <= 16:
            for m in (1, 2):
                for n in (1, 2):
                    for ver in ("lin", "Q"):
                        r = verify_orbit_formula(m, A, n, ver)
                        yield f"{ver} m={m} n={n}", r["ok"], r
                    for i in range(len(ctx.table(cls))):
                        r = verify_orbit_formula_QAM(m, A, n, i, ctx)
                        yield f"QAM m={m} n={n} irr={i}", r["ok"], _jsonable(r)
    elif name == "chartables":
        try:
            T = ctx.table(cls)
            T.check()
            yield "orthogonality", True, {"order": cls.aut_order, "degrees": T.degrees}
        except InvariantViolation as exc:
            yield "orthogonality", False, {"error": str(exc)}
    elif name == "fd":
        for d in range(-1, cls.length + 2):
            r = fd_membership(A, d)
            yield f"d={d}", r.member == (cls.length <= d), r.to_json()
    elif name == "duality":
        D = dual_module(A)
        yield "involution", iso_test(dual_module(D), A) is not None, {}
        yield "shadow", dim_Qupper(A) == s_count(D), {}
    elif name == "noncommutation":
        gap = noncommutation_gap(A, 1, 1, 1)
        yield "x=y=a=R", gap >= 0, {"gap": gap}


def cmd_verify(R, args, cache):
    ctx = _ctx(R, args.max_length, cache)
    suites = SUITES if args.suite == "all" else (args.suite,)
    ns = list(range(args.eval_upto + 1))
    start = time.monotonic()
    report, all_ok, frontier = [], True, None
    for name in suites:
        passed = failed = 0
        failures = []
        for cls in ctx.classes():
            if args.budget is not None and time.monotonic() - start > args.budget:
                frontier = {"suite": name, "class_id": cls.class_id}
                break
            for label, ok, detail in _suite_checks(name, R, cls, ctx, ns):
                if ok:
                    passed += 1
                else:
                    failed += 1
                    failures.append({"class_id": cls.class_id, "check": label, "detail": _jsonable(detail)})
        all_ok &= failed == 0
        report.append({"suite": name, "passed": passed, "failed": failed, "failures": failures[:5]})
        if frontier is not None:
            break
    return {"suites": report, "ok": all_ok, "budget_frontier": frontier}, all_ok


VERBS = {
    "ring-info": cmd_ring_info,
    "modules-census": cmd_modules_census,
    "simples": cmd_simples,
    "decompose": cmd_decompose,
    "dim": cmd_dim,
    "shift": cmd_shift,
    "fd-check": cmd_fd_check,
    "verify": cmd_verify,
}


# -- output ---------------------------------------------------------------------------

def _table(rows: list[dict]) -> str:
    cols = list(rows[0])
    cells = [[json.dumps(_jsonable(r.get(c)), separators=(",", ":")) if not isinstance(r.get(c), str)
              else r.get(c) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def render_table(doc: dict) -> str:
    out = [f"genrep {doc['version']}  {doc['verb']}  ring {doc['ring']['name']} ({doc['ring']['canonical_id']})"]
    result = doc["result"]
    for key, val in result.items():
        if isinstance(val, list) and val and isinstance(val[0], dict):
            out += ["", f"[{key}]", _table(val)]
        else:
            out.append(f"{key}: {json.dumps(_jsonable(val), sort_keys=True)}")
    return "\n".join(out)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
    except ArgumentError as exc:
        print(f"genrep: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        R = load_ring(args.ring, cap=args.ring_cap)
        cache = None if args.no_cache else Cache(args.cache_dir)
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            result, ok = VERBS[args.verb](R, args, cache)
    except SpecError as exc:
        print(f"genrep: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"genrep: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvariantViolation as exc:
        print(json.dumps({"error": str(exc), "counterexample": _jsonable(exc.counterexample)},
                         sort_keys=True), file=sys.stderr)
        return EXIT_INVARIANT
    options = {k: v for k, v in sorted(vars(args).items()) if k not in ("verb", "ring", "module")}
    doc = {
        "tool": "genrep", "version": __version__, "verb": args.verb,
        "ring": {"name": R.name, "canonical_id": R.canonical_id, "size": len(R)},
        "options": options, "result": _jsonable(result), "ok": ok,
    }
    if hasattr(args, "module"):
        doc["module_spec"] = args.module
    if args.format == "json":
        print(json.dumps(doc, sort_keys=True, separators=(",", ":")))
    else:
        print(render_table(doc))
    if not ok:
        return EXIT_INVARIANT if args.verb == "verify" else EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
