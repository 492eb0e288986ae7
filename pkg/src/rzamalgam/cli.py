"""Command-line front end.

Exit codes: 0 positive verdict, 3 negative verdict or failed precondition,
1 malformed input, 2 an internal guard tripped.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import amalgamation as am
from . import certify as ct
from . import matroids as mt
from .linalg import as_matrix, is_psd, is_symmetric, negative_direction
from .polycore import Polynomial, SizeGuardError, format_poly, from_json, parse, to_json

EXIT_OK, EXIT_INPUT, EXIT_GUARD, EXIT_NEGATIVE = 0, 1, 2, 3


class InputError(Exception):
    pass


class Outcome:
    """What a command reports: an exit code, a JSON-able payload and text."""

    def __init__(self, code: int, payload: dict, lines: list[str]):
        self.code, self.payload, self.lines = code, payload, lines


# ---------------------------------------------------------------------------
# input helpers


def _raw(args) -> str:
    if args.input == "-":
        return sys.stdin.read()
    if args.input:
        with open(args.input) as fh:
            return fh.read()
    if args.expr is None:
        raise InputError("no input given (positional argument or --input)")
    return args.expr


def _json_or_file(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        if os.path.isfile(text):
            with open(text) as fh:
                return json.load(fh)
        raise InputError(f"not valid JSON: {text[:60]!r}")


def _poly_arg(obj) -> Polynomial:
    if isinstance(obj, str):
        return parse(obj)
    return from_json(obj)


def _matroid(obj) -> mt.Matroid:
    if isinstance(obj, str) and obj.upper() in ("PT-M1", "PT-M2"):
        return mt.poljak_turzik(obj.upper()[3:])
    if isinstance(obj, str):
        obj = _json_or_file(obj)
    return mt.from_json(obj)


def _load_matroid(args) -> mt.Matroid:
    text = _raw(args).strip()
    if text.upper() in ("PT-M1", "PT-M2"):
        return _matroid(text)
    return _matroid(_json_or_file(text))


def _set_arg(text: str | None) -> list[str]:
    if not text:
        return []
    return [s.strip() for s in text.split(",") if s.strip()]


def _named_mats(obj) -> list[tuple[str, list]]:
    if obj is None:
        return []
    if isinstance(obj, dict):
        items = obj.items()
    else:
        items = [(name, M) for name, M in obj]
    return [(name, as_matrix(M)) for name, M in items]


def _verdict_code(v: ct.Verdict) -> int:
    return EXIT_OK if v.status >= ct.Status.PROBABLE else EXIT_NEGATIVE


def _verdict_outcome(v: ct.Verdict, extra: dict | None = None) -> Outcome:
    payload = v.to_dict()
    if extra:
        payload.update(extra)
    lines = [f"{v.label or 'verdict'}: {v.status}"]
    if v.reason:
        lines.append(f"reason: {v.reason}")
    if v.samples_used:
        lines.append(f"samples used: {v.samples_used}")
    lines += v.notes
    if v.witness is not None:
        for k, val in ct._jsonable(v.witness).items():
            lines.append(f"witness {k}: {val}")
    for k, val in (extra or {}).items():
        lines.append(f"{k}: {val}")
    return Outcome(_verdict_code(v), payload, lines)


def _labels(ground, s) -> list[str]:
    return [g for g in ground if g in s]


# ---------------------------------------------------------------------------
# commands


def cmd_parse(args) -> Outcome:
    p = parse(_raw(args))
    info = {"polynomial": format_poly(p), "vars": list(p.vars), "degree": p.degree() if not p.is_zero() else None,
            "terms": len(p.terms), "homogeneous": p.is_homogeneous(), "multi_affine": p.is_multi_affine(),
            "json": to_json(p)}
    lines = [f"{k}: {v}" for k, v in info.items() if k != "json"]
    return Outcome(EXIT_OK, info, lines)


def cmd_check(args) -> Outcome:
    kind = args.kind
    samples, seed = args.samples, args.seed
    if kind in ("rz", "stable", "rigid"):
        p = parse(_raw(args))
        if kind == "rz":
            if p.constant_term() != 0 and p.degree() <= 2:
                return _verdict_outcome(ct.quadratic_real_zero(p))
            return _verdict_outcome(ct.real_zero_sample(p, samples, seed))
        if kind == "stable":
            return _verdict_outcome(ct.stable_sample(p, samples, seed))
        if args.point:
            pt = [Fraction(v) for v in _set_arg(args.point)]
            if len(pt) != len(p.vars):
                raise InputError(f"point needs {len(p.vars)} coordinates ({', '.join(p.vars)})")
            inside = ct.rigidly_convex_contains(p, pt)
            return Outcome(EXIT_OK if inside else EXIT_NEGATIVE,
                           {"point": [str(v) for v in pt], "contained": inside},
                           [f"point {[str(v) for v in pt]} in rigidly convex set: {inside}"])
        ok = ct.orthant_in_rigid_set(p)
        return Outcome(EXIT_OK if ok else EXIT_NEGATIVE, {"orthant_contained": ok},
                       [f"nonnegative orthant in rigidly convex set: {ok}"
                        + ("" if ok else " (undecided: some coefficient is negative)")])
    obj = _json_or_file(_raw(args))
    if kind == "psd":
        M = as_matrix(obj)
        if not is_symmetric(M):
            raise InputError("matrix is not symmetric")
        if is_psd(M):
            return Outcome(EXIT_OK, {"psd": True}, ["PSD: yes"])
        v = negative_direction(M)
        return Outcome(EXIT_NEGATIVE, {"psd": False, "witness": [str(x) for x in v]},
                       ["PSD: no", f"witness v (v^T M v < 0): {[str(x) for x in v]}"])
    if kind == "sos":
        cert = ct.SosCertificate.from_json(obj.get("certificate", obj))
        target = _poly_arg(obj["poly"]) if "poly" in obj else _poly_arg(obj["target"])
        diff = ct.sos_difference(target, cert)
        ok = diff.is_zero()
        return Outcome(EXIT_OK if ok else EXIT_NEGATIVE, {"verified": ok, "difference": format_poly(diff)},
                       [f"sum of squares identity: {'verified' if ok else 'FAILS'}",
                        f"difference: {format_poly(diff)}"])
    if kind == "delta":
        D = mt.delta_from_json(obj)
        res = mt.is_delta_matroid(D)
        if res.ok:
            return Outcome(EXIT_OK, {"delta_matroid": True}, ["delta-matroid: yes"])
        A, B, x = res.witness
        w = {"A": _labels(D.ground, A), "B": _labels(D.ground, B), "x": x}
        return Outcome(EXIT_NEGATIVE, {"delta_matroid": False, "witness": w},
                       ["delta-matroid: no", f"witness: {w}"])
    if kind == "matroid":
        try:
            M = mt.from_json(obj)
        except mt.MatroidError as exc:
            w = getattr(exc, "witness", None)
            wj = [sorted(w[0]), sorted(w[1]), w[2]] if w else None
            return Outcome(EXIT_NEGATIVE, {"matroid": False, "reason": str(exc), "witness": wj},
                           [f"matroid: no ({exc})"] + ([f"witness (B, C, x): {wj}"] if wj else []))
        return Outcome(EXIT_OK, {"matroid": True, "rank": M.rank(), "bases": len(M.bases)},
                       [f"matroid: yes (rank {M.rank()}, {len(M.bases)} bases)"])
    raise InputError(f"unknown check kind {kind}")


def _problem(obj) -> am.AmalgamationProblem:
    try:
        names = lambda k: tuple(obj.get(k, []))
        return am.AmalgamationProblem(names("x"), names("y"), names("z"), _poly_arg(obj["p"]), _poly_arg(obj["q"]))
    except KeyError as exc:
        raise InputError(f"problem is missing {exc}") from None


def cmd_amalgamate(args) -> Outcome:
    obj = _json_or_file(_raw(args))
    mode = args.mode
    try:
        if mode == "disjoint":
            p, q = _poly_arg(obj["p"]), _poly_arg(obj["q"])
            r = am.amalgamate_disjoint(p, q, obj.get("d"))
            checks = {"r(y,0) = p": r.subs({v: 0 for v in q.vars if v in r.vars}) == p,
                      "r(0,z) = q": r.subs({v: 0 for v in p.vars if v in r.vars}) == q}
            dmax = max(p.degree(), q.degree())
        elif mode == "quadratic":
            prob = _problem(obj)
            r = am.amalgamate_quadratic(prob)
            r0y = r.subs({v: 0 for v in prob.z})
            r0z = r.subs({v: 0 for v in prob.y})
            checks = {"r(x,y,0) = p": r0y == prob.p, "r(x,0,z) = q": r0z == prob.q}
            dmax = max(prob.p.degree(), prob.q.degree())
        else:
            xm, ym, zm = (_named_mats(obj.get(k)) for k in ("x", "y", "z"))
            r = am.amalgamate_determinantal(xm, ym, zm)
            p = ct.det_polynomial(xm + ym)
            q = ct.det_polynomial(xm + zm)
            checks = {"r(x,y,0) = det(I + xA + yB)": r.subs({n: 0 for n, _ in zm}) == p.with_vars(r.vars),
                      "r(x,0,z) = det(I + xA + zC)": r.subs({n: 0 for n, _ in ym}) == q.with_vars(r.vars)}
            dmax = len(xm[0][1]) if xm else len((ym + zm)[0][1])
    except am.IncompatibleError as exc:
        diff = format_poly(exc.difference) if exc.difference is not None else None
        return Outcome(EXIT_NEGATIVE, {"error": "incompatible", "message": str(exc), "difference": diff},
                       [f"incompatible inputs: {exc}", f"difference: {diff}"])
    except (am.PreconditionError, KeyError) as exc:
        return Outcome(EXIT_NEGATIVE, {"error": "precondition", "message": str(exc)},
                       [f"precondition failed: {exc}"])
    deg = r.degree()
    checks[f"deg r = {deg} <= {dmax}"] = deg <= dmax
    ok = all(checks.values())
    lines = [f"r = {format_poly(r)}"] + [f"check {k}: {v}" for k, v in checks.items()]
    return Outcome(EXIT_OK if ok else EXIT_GUARD, {"r": format_poly(r), "r_json": to_json(r),
                                                    "checks": checks}, lines)


def cmd_matroid(args) -> Outcome:
    op = args.op
    if op == "amalgam":
        text = _raw(args).strip()
        if text.upper() in ("PT", "PT-M1,PT-M2"):
            M1, M2 = mt.poljak_turzik("M1"), mt.poljak_turzik("M2")
        else:
            obj = _json_or_file(text)
            M1, M2 = _matroid(obj["M1"]), _matroid(obj["M2"])
        res = mt.amalgam_search(M1, M2)
        payload = {"result": res.kind, "nodes": res.nodes, "detail": res.detail}
        lines = [f"amalgam search: {res.kind} ({res.nodes} nodes)"]
        if res.detail:
            lines.append(f"detail: {res.detail}")
        if res.found:
            payload["amalgam"] = res.matroid.to_json()
            lines.append(f"bases: {res.matroid.sorted_bases()}")
        return Outcome(EXIT_OK if res.found else EXIT_NEGATIVE, payload, lines)
    M = _load_matroid(args)
    S = _set_arg(args.set)
    if op == "rank":
        r = M.rank(S if args.set is not None else None)
        return Outcome(EXIT_OK, {"rank": r}, [f"rank: {r}"])
    if op == "closure":
        cl = _labels(M.ground, M.closure(S))
        return Outcome(EXIT_OK, {"closure": cl}, [f"closure: {cl}"])
    if op in ("restrict", "contract"):
        N = M.restriction(S) if op == "restrict" else M.contraction(S)
        return Outcome(EXIT_OK, N.to_json(), [f"ground: {list(N.ground)}", f"bases: {N.sorted_bases()}"])
    if op == "bases-poly":
        p = mt.bases_generating_poly(M)
        return Outcome(EXIT_OK, {"polynomial": format_poly(p), "json": to_json(p)}, [format_poly(p)])
    if op == "modular":
        ok = mt.is_modular(M)
        return Outcome(EXIT_OK if ok else EXIT_NEGATIVE, {"modular": ok}, [f"modular: {ok}"])
    raise InputError(f"unknown matroid operation {op}")


def cmd_delta(args) -> Outcome:
    D = mt.delta_from_json(_json_or_file(_raw(args)))
    if args.op == "check":
        res = mt.is_delta_matroid(D)
        if res.ok:
            return Outcome(EXIT_OK, {"delta_matroid": True}, ["delta-matroid: yes"])
        A, B, x = res.witness
        w = {"A": _labels(D.ground, A), "B": _labels(D.ground, B), "x": x}
        return Outcome(EXIT_NEGATIVE, {"delta_matroid": False, "witness": w}, ["delta-matroid: no", f"witness: {w}"])
    M = mt.lower_matroid(D) if args.op == "lower" else mt.upper_matroid(D)
    return Outcome(EXIT_OK, M.to_json(), [f"{args.op} matroid bases: {M.sorted_bases()}"])


def cmd_mc_average(args) -> Outcome:
    obj = _json_or_file(_raw(args))
    ym, zm = _named_mats(obj.get("y")), _named_mats(obj.get("z"))
    N = args.samples if args.samples_given else 20000
    mc = am.mc_orthogonal_amalgam(ym, zm, N, args.seed)
    exact = am.operator_formula(ym, zm)
    dev, z = am.mc_deviation(mc, exact)
    ok = z <= 3 and (args.tol is None or dev <= args.tol)
    idx = [exact.vars.index(v) for v in mc.mean.vars]
    rows = []
    for m in sorted(mc.mean.terms, key=lambda m: (sum(m), [-e for e in m])):
        full = [0] * len(exact.vars)
        for i, e in zip(idx, m):
            full[i] = e
        ex = float(exact.coefficient(dict(zip(exact.vars, full))))
        rows.append({"monomial": format_poly(Polynomial(mc.mean.vars, {m: 1})), "mean": mc.mean.terms[m],
                     "stderr": mc.stderr.terms[m], "exact": ex})
    payload = {"samples": N, "seed": args.seed, "max_abs_deviation": dev, "max_z": z,
               "tol": args.tol, "pass": ok, "exact": format_poly(exact), "coefficients": rows}
    lines = [f"Monte Carlo average over Haar O(d): N={N}, seed={args.seed}",
             f"exact operator formula: {format_poly(exact)}"]
    lines += [f"  {r['monomial']:>8}: mean {r['mean']: .5f}  se {r['stderr']:.5f}  exact {r['exact']: .5f}" for r in rows]
    lines.append(f"max |deviation| = {dev:.5f}, max deviation / se = {z:.3f}"
                 + (f", tol = {args.tol}" if args.tol is not None else ""))
    lines.append("pass" if ok else "FAIL")
    return Outcome(EXIT_OK if ok else EXIT_NEGATIVE, payload, lines)


def cmd_repro(args) -> Outcome:
    from .repro import run_counterexample

    rep = run_counterexample(samples=args.samples, seed=args.seed)
    return Outcome(EXIT_OK if rep.status != "fail" else EXIT_NEGATIVE, rep.to_dict(), rep.text().splitlines())


# ---------------------------------------------------------------------------
# argument parsing


def _common() -> argparse.ArgumentParser:
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--samples", type=int, default=None)
    c.add_argument("--tol", type=float, default=None, help="Monte Carlo absolute tolerance")
    c.add_argument("--input", metavar="FILE|-", default=None)
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="rzamalgam", description="Real zero and stable polynomial amalgamation toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and normalize a polynomial")
    p.add_argument("expr", nargs="?")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("check", parents=[common], help="decide or sample a property")
    p.add_argument("kind", choices=("rz", "stable", "rigid", "psd", "sos", "delta", "matroid"))
    p.add_argument("expr", nargs="?")
    p.add_argument("--point", help="comma-separated point for 'check rigid'")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("amalgamate", parents=[common], help="build an amalgam")
    p.add_argument("mode", choices=("disjoint", "quadratic", "determinantal"))
    p.add_argument("expr", nargs="?")
    p.set_defaults(func=cmd_amalgamate)

    p = sub.add_parser("matroid", parents=[common], help="matroid operations")
    p.add_argument("op", choices=("rank", "closure", "restrict", "contract", "bases-poly", "amalgam", "modular"))
    p.add_argument("expr", nargs="?")
    p.add_argument("--set", help="comma-separated subset of the ground set")
    p.set_defaults(func=cmd_matroid)

    p = sub.add_parser("delta", parents=[common], help="delta-matroid operations")
    p.add_argument("op", choices=("check", "lower", "upper"))
    p.add_argument("expr", nargs="?")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("mc-average", parents=[common], help="Monte Carlo Haar average vs exact operator formula")
    p.add_argument("expr", nargs="?")
    p.set_defaults(func=cmd_mc_average)

    p = sub.add_parser("repro", parents=[common], help="scripted reproductions")
    p.add_argument("scenario", choices=("counterexample",))
    p.set_defaults(func=cmd_repro, expr=None)
    return ap


def _emit(out: Outcome, fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(json.dumps(ct._jsonable(out.payload), indent=2, default=str) + "\n")
    else:
        stream.write("\n".join(out.lines) + "\n")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    args.samples_given = args.samples is not None
    if args.samples is None:
        args.samples = 500
    try:
        out = args.func(args)
    except SizeGuardError as exc:
        out = Outcome(EXIT_GUARD, {"error": "guard", "message": str(exc)}, [f"size guard: {exc}"])
    except AssertionError as exc:
        out = Outcome(EXIT_GUARD, {"error": "internal", "message": str(exc)}, [f"internal check failed: {exc}"])
    except (InputError, ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        msg = str(exc)
        _emit(Outcome(EXIT_INPUT, {"error": "input", "message": msg}, [f"input error: {msg}"]), args.format, stderr)
        return EXIT_INPUT
    _emit(out, args.format, stdout)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
