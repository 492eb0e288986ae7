"""Scripted reproduction of the counterexample chain: matroids with no
amalgam, their stable bases generating polynomials, the delta-matroid
obstruction, and the shifted real zero pair."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .certify import (
    Status,
    load_certificate,
    orthant_in_rigid_set,
    rayleigh,
    real_zero_sample,
    sos_difference,
    wagner_wei_stable,
)
from .matroids import (
    PT_SHARED,
    DeltaMatroid,
    amalgam_search,
    bases_generating_poly,
    exchange_options,
    is_delta_matroid,
    poljak_turzik,
)
from .polycore import elementary_symmetric, evaluate, format_poly, parse, shift, support

_RANK = {"pass": 2, "probable": 1, "fail": 0}

P_FORMULA = "e3 - y*x1*x4 - y*x3*x6 - y*x2*x5 - x1*x2*x3 - x4*x5*x6"
Q_FORMULA = "e3 - z*x1*x4 - z*x2*x5 - x1*x2*x3 - x4*x5*x6"


@dataclass
class Step:
    name: str
    status: str
    details: dict = field(default_factory=dict)
    witness: object = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status, "details": self.details}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class ScenarioReport:
    steps: list[Step] = field(default_factory=list)
    seed: int = 42
    samples: int = 500

    @property
    def status(self) -> str:
        if not self.steps:
            return "fail"
        return min((s.status for s in self.steps), key=_RANK.__getitem__)

    def to_dict(self) -> dict:
        return {"status": self.status, "seed": self.seed, "samples": self.samples,
                "steps": [s.to_dict() for s in self.steps]}

    def text(self) -> str:
        lines = [f"counterexample reproduction (seed={self.seed}, samples={self.samples})"]
        for i, s in enumerate(self.steps, 1):
            lines.append(f"[{s.status.upper():8}] {i}. {s.name}")
            for k, v in s.details.items():
                lines.append(f"             {k}: {v}")
            if s.witness is not None:
                lines.append(f"             witness: {s.witness}")
        lines.append(f"overall: {self.status}")
        return "\n".join(lines)


def _formula(text: str, extra: str):
    """Parse ``e3 - ...`` where e3 is the elementary symmetric cubic in x1..x6 + extra."""
    e3 = elementary_symmetric(PT_SHARED + (extra,), 3)
    rest = text.split("e3", 1)[1].strip()
    # rest starts with '-' so it parses as the subtracted monomials
    return e3 + parse(rest)


def _sorted(ground, s):
    return sorted(s, key=list(ground).index)


def run_counterexample(samples: int = 500, seed: int = 42) -> ScenarioReport:
    rep = ScenarioReport(seed=seed, samples=samples)

    def step(name, ok, details=None, witness=None, status=None):
        rep.steps.append(Step(name, status or ("pass" if ok else "fail"), details or {}, witness))

    # 1. matroids
    t0 = time.perf_counter()
    M1, M2 = poljak_turzik("M1"), poljak_turzik("M2")
    agree = M1.restriction(PT_SHARED) == M2.restriction(PT_SHARED)
    step("build matroids M1, M2", len(M1.bases) == 30 and len(M2.bases) == 31 and agree,
         {"bases(M1)": len(M1.bases), "bases(M2)": len(M2.bases), "restrictions to x1..x6 agree": agree})

    # 2. bases generating polynomials
    p, q = bases_generating_poly(M1), bases_generating_poly(M2)
    p_ok = p == _formula(P_FORMULA, "y")
    q_ok = q == _formula(Q_FORMULA, "z")
    step("bases generating polynomials", p_ok and q_ok,
         {"p": P_FORMULA + ("  [exact match]" if p_ok else "  [MISMATCH]"),
          "q": Q_FORMULA + ("  [exact match]" if q_ok else "  [MISMATCH]")})

    # 3. sum of squares certificates
    cert_p, cert_q = load_certificate("rayleigh_pM1"), load_certificate("rayleigh_qM2")
    dp = sos_difference(rayleigh(p, "x1", "x2"), cert_p)
    dq = sos_difference(rayleigh(q, "x1", "x2"), cert_q)
    step("Rayleigh differences are sums of squares", dp.is_zero() and dq.is_zero(),
         {"difference for p": format_poly(dp), "difference for q": format_poly(dq),
          "weights p": [str(w) for w, _ in cert_p.squares], "weights q": [str(w) for w, _ in cert_q.squares]})

    # 4. stability via the recursive criterion
    vp = wagner_wei_stable(p, {"root": cert_p}, n=samples, seed=seed)
    vq = wagner_wei_stable(q, {"root": cert_q}, n=samples, seed=seed)
    top_p, top_q = vp.children[0].status, vq.children[0].status
    ok = vp.status >= Status.PROBABLE and vq.status >= Status.PROBABLE
    step("p and q stable (recursive criterion)", ok,
         {"p": str(vp.status), "q": str(vq.status),
          "top-level Rayleigh obligation p": str(top_p), "top-level Rayleigh obligation q": str(top_q)},
         status=("pass" if vp.status == vq.status == Status.CERTIFIED else "probable") if ok else "fail")

    # 5. delta-matroid obstruction when yz is a monomial of the amalgam
    ground = PT_SHARED + ("y", "z")
    family = support(p) | support(q) | {frozenset({"y", "z"})}
    D = DeltaMatroid.from_sets(ground, family)
    full = is_delta_matroid(D)
    A, B, x = frozenset({"x1", "x4", "x5"}), frozenset({"y", "z"}), "x5"
    targeted = is_delta_matroid(D, pairs=[(A, B)])
    opts = exchange_options(D, A, B, x)
    ok = (not full) and (not targeted) and targeted.witness == (A, B, x) and all(not f for _, _, f in opts)
    step("symmetric exchange fails for supp(p) + supp(q) + {yz}", ok,
         {"family size": len(family),
          "first failing triple (canonical order)": [_sorted(ground, full.witness[0]), _sorted(ground, full.witness[1]), full.witness[2]] if full.witness else None,
          "candidates after removing x5 (none feasible)": [_sorted(ground, s) for _, s, _ in opts]},
         witness={"A": _sorted(ground, A), "B": _sorted(ground, B), "x": x})

    # 6. amalgam search
    res = amalgam_search(M1, M2)
    step("no matroid amalgam of M1 and M2", res.kind == "infeasible",
         {"result": res.kind, "search nodes": res.nodes})

    # 7. replay of the rank argument
    a_set, b_set = {"x1", "x4"}, {"x2", "x5"}
    facts = {
        "y in cl_M1({x1,x4}) and cl_M1({x2,x5})": "y" in M1.closure(a_set) and "y" in M1.closure(b_set),
        "z in cl_M2({x1,x4}) and cl_M2({x2,x5})": "z" in M2.closure(a_set) and "z" in M2.closure(b_set),
        "r({x1,x4}) = r({x2,x5}) = 2": M1.rank(a_set) == M1.rank(b_set) == 2,
        "r({x1,x2,x4,x5}) = 3": M1.rank(a_set | b_set) == 3,
        "r({y}) = r({z}) = 1": M1.rank({"y"}) == 1 and M2.rank({"z"}) == 1,
        "r({y,x3,x6}) = 2 in M1": M1.rank({"y", "x3", "x6"}) == 2,
        "r({z,x3,x6}) = 3 in M2": M2.rank({"z", "x3", "x6"}) == 3,
    }
    # submodularity then forces r({y,z}) <= 2 + 2 - 3 = 1
    forced = M1.rank(a_set) + M1.rank(b_set) - M1.rank(a_set | b_set)
    facts["bound r({y,z}) <= 1"] = forced == 1
    yz2 = amalgam_search(M1, M2, fixed={frozenset({"y", "z"}): 2}).kind
    yz1 = amalgam_search(M1, M2, fixed={frozenset({"y", "z"}): 1}).kind
    facts["solver: r({y,z}) = 2 infeasible"] = yz2 == "infeasible"
    facts["solver: r({y,z}) = 1 infeasible"] = yz1 == "infeasible"
    step("rank-function contradiction replayed", all(facts.values()), facts)

    # 8. shift by the all-ones vector on the shared variables
    a = [Fraction(1)] * 6 + [Fraction(0)]
    pa, qa = evaluate(p, a), evaluate(q, a)
    ps, qs = shift(p, a), shift(q, a)
    vps = real_zero_sample(ps, samples, seed)
    vqs = real_zero_sample(qs, samples, seed)
    compat = ps.subs({"y": 0}) == qs.subs({"z": 0})
    ok = (pa == qa == 18 and ps.constant_term() == 18 and qs.constant_term() == 18
          and orthant_in_rigid_set(ps) and orthant_in_rigid_set(qs) and compat
          and vps.status != Status.REFUTED and vqs.status != Status.REFUTED)
    step("shifted pair p(x+1,y), q(x+1,z)", ok,
         {"p(1,0)": str(pa), "q(1,0)": str(qa), "constant terms": [str(ps.constant_term()), str(qs.constant_term())],
          "coefficients nonnegative (orthant in rigidly convex set)": [orthant_in_rigid_set(ps), orthant_in_rigid_set(qs)],
          "p(x+1,0) = q(x+1,0)": compat,
          "real zero (sampled) p": f"{vps.status} after {vps.samples_used} probes, seed={seed}",
          "real zero (sampled) q": f"{vqs.status} after {vqs.samples_used} probes, seed={seed}"})

    rep.steps.append(Step("report", "pass", {"elapsed seconds": round(time.perf_counter() - t0, 2)}))
    return rep
