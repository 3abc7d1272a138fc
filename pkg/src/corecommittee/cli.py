"""Command-line interface: JSON result documents on stdout.

Exit status is 0 on success, 1 on invalid input, 2 when ``reproduce`` finds
an outcome different from the expected one.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .core import check_core, check_local_stability, find_empty_core_evidence, validate_witness
from .domains import CandidateOrder, Domain, VoterOrder, lc_from_interval, recognize, verify
from .domains.search import DEFAULT_BUDGET
from .election import Election, ElectionError, expand_election
from .fileio import (PREFLIB_KINDS, certificate_from_json, certificate_to_json, dumps, import_preflib,
                     jsonable, parse_election, result_document, serialize_election)
from .fixtures import FIXTURES, fixture
from .generators import MODELS, GeneratorSpec, SplitMix64, generate
from .rules import InvariantViolation, committee_core, equal_shares, median_rule, monroe, pav, stv

RULES = ("monroe", "stv", "pav", "equal-shares", "committee-core", "median")


class ReproductionFailure(AssertionError):
    pass


def load_input(spec: str, fmt: str = "auto", k: int | None = None):
    """Return (election, source text, fixture or None) for a path or a fixture name."""
    if not os.path.exists(spec) and spec in FIXTURES:
        fx = fixture(spec)
        return fx.election, serialize_election(fx.election), fx
    try:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ElectionError(f"cannot read input {spec!r}: {e.strerror}") from None
    if fmt == "auto":
        ext = os.path.splitext(spec)[1].lstrip(".").lower()
        fmt = ext if ext in PREFLIB_KINDS else "native"
    if fmt == "native":
        return parse_election(text), text, None
    if k is None:
        raise ElectionError("PrefLib input needs --k")
    return import_preflib(text, fmt, k), text, None


def auto_order(election: Election, budget=DEFAULT_BUDGET):
    """Certificate for the two-phase rule: LC for approval, SC / SP / STC otherwise."""
    if election.is_approval:
        for dom in (Domain.VI, Domain.CI):
            res = recognize(dom, election, budget)
            if res.certified:
                return dom, res.certificate, lc_from_interval(election, dom, res.certificate)
        res = recognize(Domain.LC, election, budget)
        if res.certified:
            return Domain.LC, res.certificate, res.certificate
        raise ElectionError(f"no LC order found ({res.outcome})")
    if election.is_strict:
        for dom in (Domain.SC, Domain.SP):
            res = recognize(dom, election, budget)
            if res.certified:
                return dom, res.certificate, res.certificate
    res = recognize(Domain.STC, election, budget)
    if res.certified:
        return Domain.STC, res.certificate, res.certificate
    raise ElectionError(f"no SC, SP or STC certificate found ({res.outcome})")


def _order_arg(args, election):
    if args.order_from == "file":
        if not args.order:
            raise ElectionError("--order-from file needs --order PATH")
        try:
            with open(args.order, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise ElectionError(f"cannot read order file: {e}") from None
        cert = certificate_from_json(election, doc)
        return Domain.parse(doc.get("domain", "LC")), cert, cert
    return auto_order(election, args.budget)


def _committee(election: Election, text: str) -> tuple:
    names = [x.strip() for x in text.split(",") if x.strip()]
    if len(set(names)) != len(names):
        raise ElectionError("committee lists a candidate twice")
    for x in names:
        election.cidx(x)
    return tuple(election.sort_names(names))


def _witness_json(w):
    if w is None:
        return None
    return {"S": list(w.S), "T": list(w.T), "mode": w.mode, "extension": w.extension}


def cmd_elect(args):
    e, text, _ = load_input(args.input, args.format, args.k)
    outcome: dict = {"rule": args.rule}
    trace = []
    certs = []
    if args.auto_expand and e.n % e.k and args.rule in ("monroe",):
        e = expand_election(e)
        outcome["expansion"] = e.k
    if args.rule == "monroe":
        r = monroe(e)
        outcome.update(committee=r.committee, value=r.value,
                       assignment={e.voter_ids[i]: c for i, c in r.assignment.items()})
    elif args.rule == "stv":
        r = stv(e)
        outcome.update(committee=r.committee, quota=r.quota)
        trace = [{"event": ev, "candidate": c, "votes": v} for ev, c, v in r.events]
    elif args.rule == "pav":
        r = pav(e)
        outcome.update(committee=r.committee, score=r.score)
    elif args.rule == "equal-shares":
        r = equal_shares(e)
        outcome.update(committee=e.sort_names(r.committee), complete=r.complete, size=len(r.committee),
                       price=r.price)
        trace = [{"candidate": c, "rho": rho} for c, rho in r.trace]
    else:
        dom, found, order = _order_arg(args, e)
        certs.append(certificate_to_json(e, dom, found))
        if args.rule == "median":
            voters = order.voter_order if hasattr(order, "voter_order") else order
            if isinstance(voters, CandidateOrder):
                voters = VoterOrder(tuple(sorted(range(e.n), key=lambda i: (
                    min(voters.indices(e).index(c) for c in e.tops[i]), i))))
            r = median_rule(e, voters)
            outcome.update(committee=r.committee, distinct=r.distinct,
                           median_voters=[e.voter_ids[i] for i in r.median_voters])
        else:
            r = committee_core(e, order, auto_expand=args.auto_expand)
            ee = r.election
            outcome.update(committee=r.committee, first_phase=r.first_phase, second_phase=r.second_phase,
                           expansion=r.expansion,
                           median_voters=[ee.voter_ids[i] for i in r.median_voters],
                           representatives={ee.voter_ids[i]: c for i, c in r.assignment.rep.items()},
                           fractional=r.assignment.fractional, notes=list(r.notes))
    return result_document("elect", text, outcome, certificates=certs, trace=trace)


def cmd_check_core(args):
    e, text, _ = load_input(args.input, args.format, args.k)
    w = _committee(e, args.committee)
    v = check_core(e, w, args.mode, args.max_t, args.extension)
    outcome = {"verdict": "in_core" if v.in_core else "violated", "committee": w, "mode": v.mode,
               "maxT": v.max_t, "extension": v.extension, "conclusive": v.violated or v.max_t >= e.k}
    if v.witness is not None:
        outcome.update(S=list(v.witness.S), T=list(v.witness.T))
    return result_document("check-core", text, outcome, witnesses=[_witness_json(v.witness)] if v.witness else [])


def cmd_check_local_stability(args):
    e, text, _ = load_input(args.input, args.format, args.k)
    w = _committee(e, args.committee)
    v = check_local_stability(e, w, args.quota)
    outcome = {"verdict": "stable" if v.stable else "violated", "committee": w, "quota": v.quota}
    if not v.stable:
        outcome.update(candidate=v.candidate, S=list(v.S))
    return result_document("check-local-stability", text, outcome)


def cmd_recognize(args):
    e, text, _ = load_input(args.input, args.format, args.k)
    r = recognize(args.domain, e, args.budget)
    outcome = {"domain": r.domain.value, "outcome": r.outcome, "nodes": r.nodes, "note": r.note}
    if r.orders_covered is not None:
        outcome["orders_covered"] = r.orders_covered
    if r.witness is not None:
        outcome["witness"] = list(r.witness)
    certs = [certificate_to_json(e, r.domain, r.certificate)] if r.certificate is not None else []
    return result_document("recognize", text, outcome, certificates=certs)


def cmd_generate(args):
    g = generate(GeneratorSpec(args.model, args.n, args.m, args.k, args.seed))
    text = serialize_election(g.election)
    outcome = {"model": args.model, "n": args.n, "m": args.m, "k": args.k, "seed": args.seed,
               "election": text, **g.meta}
    certs = [certificate_to_json(g.election, d, c) for d, c in g.certificates.items()]
    return result_document("generate", None, outcome, certificates=certs)


# reproduce

def _expect(cond: bool, what: str, checks: list):
    checks.append({"check": what, "ok": bool(cond)})


def reproduce_example(name: str, samples: int = 1000, seed: int = 1) -> dict:
    """Run the pipeline for one worked example; every check is recorded."""
    checks: list = []
    out: dict = {"example": name}
    if name == "monroe-ex1":
        fx = fixture(name)
        e = fx.election
        _expect(verify(Domain.EUCLID1D, e, fx.certificates["EUCLID1D"]).ok, "embedding verifies", checks)
        r = monroe(e)
        out["monroe"] = {"committee": r.committee, "value": r.value}
        _expect(r.committee == ("b", "d") and r.value == 6, "Monroe elects {b,d} with value 6", checks)
        v = check_core(e, r.committee)
        out["witness"] = _witness_json(v.witness)
        _expect(v.witness is not None and v.witness.S == ("2", "3") and v.witness.T == ("c",),
                "core violated by S={2,3}, T={c}", checks)
        cc = committee_core(e, auto_order(e)[2])
        out["committee_core"] = cc.committee
        _expect(cc.committee == ("b", "c") and check_core(e, cc.committee).in_core,
                "two-phase rule elects {b,c}, which is in the core", checks)
    elif name == "stv-ex2":
        fx = fixture(name)
        e = fx.election
        _expect(verify(Domain.EUCLID1D, e, fx.certificates["EUCLID1D"]).ok, "embedding verifies", checks)
        r = stv(e)
        out["stv"] = {"committee": r.committee, "events": [list(x) for x in r.events]}
        _expect(r.committee == ("d", "e") and r.events == fx.expected["stv"]["events"],
                "STV elects {d,e}: c out, d in at 21, b out, e in at 21", checks)
        v = check_core(e, r.committee)
        out["witness"] = _witness_json(v.witness)
        _expect(v.witness is not None and v.witness.T == ("c",) and len(v.witness.S) >= 30,
                "core violated by T={c} with at least 30 voters", checks)
        ls = check_local_stability(e, r.committee)
        _expect(not ls.stable and ls.candidate == "c", "local stability violated by c", checks)
    elif name == "pav-ex3":
        fx = fixture(name)
        e = fx.election
        _expect(verify(Domain.VI, e, fx.certificates["VI"]).ok and verify(Domain.CI, e, fx.certificates["CI"]).ok,
                "VI and CI orders verify", checks)
        r = pav(e)
        out["pav"] = {"committee": r.committee, "score": r.score}
        _expect(r.committee == fx.expected["pav"]["committee"] and r.score == fx.expected["pav"]["score"],
                "PAV elects {b1..b4,d1..d4} with score 25/4", checks)
        ceil = check_core(e, r.committee, "ceil")
        exact = check_core(e, r.committee, "exact")
        out["witness_ceil"] = _witness_json(ceil.witness)
        out["exact_mode"] = "in_core" if exact.in_core else _witness_json(exact.witness)
        _expect(ceil.witness is not None and ceil.witness.T == fx.expected["core_witness_ceil"]["T"],
                "ceil mode: blocked by T={a,b1..b4,c}", checks)
        _expect(exact.in_core, "exact mode: no witness (the size bound 6 <= 16/3 fails)", checks)
        cc = committee_core(e, fx.certificates["VI"], auto_expand=True)
        out["committee_core"] = cc.committee
        _expect(check_core(cc.election, cc.committee).in_core, "two-phase rule on the expanded election is in the core",
                checks)
    elif name == "rulex-ex4":
        fx = fixture(name)
        e = fx.election
        _expect(verify(Domain.VI, e, fx.certificates["VI"]).ok and verify(Domain.CI, e, fx.certificates["CI"]).ok,
                "VI and CI orders verify", checks)
        r = equal_shares(e)
        exp = fx.expected["equal_shares"]
        out["equal_shares"] = {"committee": e.sort_names(r.committee), "trace": [list(x) for x in r.trace]}
        _expect(set(r.committee) == set(exp["committee"]), "equal shares elects the 14 stated candidates", checks)
        prices = dict(r.trace)
        _expect(all(prices.get(c) == p for c, p in exp["prices"].items()), "a/b at 3/32 and e at 1/8", checks)
        v = check_core(e, r.committee)
        out["witness"] = _witness_json(v.witness)
        _expect(v.witness is not None and len(v.witness.S) == 42 and len(v.witness.T) == 14,
                "core violated by all 42 voters with a 14-candidate T", checks)
    elif name == "ssc-not-lc":
        e = fixture(name).election
        lc = recognize(Domain.LC, e, None)
        ssc = recognize(Domain.SSC, e, None)
        out.update(LC=lc.outcome, SSC=ssc.outcome, orders_covered=lc.orders_covered)
        _expect(lc.refuted and lc.orders_covered == 720, "LC refuted over all 720 orders", checks)
        _expect(ssc.certified, "SSC certified", checks)
    elif name == "tm-empty-core":
        fx = fixture(name)
        e = fx.election
        _expect(verify(Domain.STC, e, fx.certificates["STC"]).ok, "natural voter order is STC", checks)
        rng = SplitMix64(seed)
        canon = [("g", "h", "a1", "a2", "b1", "b2", "c1"), ("g", "h", "a1", "a2", "d1", "d2", "e1"),
                 ("g", "h", "a1", "b1", "d1", "e1", "f1"), ("a1", "b1", "c1", "d1", "e1", "f1", "h")]
        comms = canon + [tuple(e.candidates[c] for c in rng.permutation(e.m)[:e.k]) for _ in range(samples)]
        ev = find_empty_core_evidence(e, comms, 2)
        blocked = sum(1 for c, w in ev if w is not None and validate_witness(e, c, w))
        out["committees"] = len(ev)
        out["blocked"] = blocked
        _expect(blocked == len(ev), "every sampled committee is blocked with |T| <= 2", checks)
        sub = e.restrict(voters=[0, 1, 2], candidates=["a1", "a2", "a3"], k=1)
        res = recognize(Domain.STC, sub, None)
        out["non_stc_subinstance"] = {"voters": ["1", "2", "3"], "candidates": ["a1", "a2", "a3"],
                                      "outcome": res.outcome}
        _expect(res.refuted, "a candidate subinstance is not STC, so the profile is not r-STC", checks)
    else:
        raise ElectionError(f"unknown example {name!r}; known: {', '.join(FIXTURES)}")
    out["checks"] = checks
    out["passed"] = all(c["ok"] for c in checks)
    return out


def cmd_reproduce(args):
    names = list(FIXTURES) if args.example == "all" else [args.example]
    results = [reproduce_example(n, args.samples, args.seed) for n in names]
    doc = result_document("reproduce", None, {"examples": results, "passed": all(r["passed"] for r in results)})
    if not doc["outcome"]["passed"]:
        raise ReproductionFailure(doc)
    return doc


def _render(value, indent=0) -> list:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_render(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return lines
    if isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            return [pad + ", ".join(_scalar(v) for v in value)]
        lines = []
        for v in value:
            sub = _render(v, indent + 1)
            lines.append(pad + "- " + sub[0].lstrip())
            lines.extend(sub[1:])
        return lines
    return [pad + _scalar(value)]


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[]" if not v else ", ".join(_scalar(x) for x in v)
    if isinstance(v, dict):
        return "{}"
    return "-" if v is None else str(v)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="corecommittee", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is sequential")
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(sp):
        sp.add_argument("--input", required=True, help="election file or fixture name")
        sp.add_argument("--format", choices=("auto", "native", *PREFLIB_KINDS), default="auto")
        sp.add_argument("--k", type=int, help="committee size for PrefLib input")

    sp = sub.add_parser("elect", parents=[common])
    with_input(sp)
    sp.add_argument("--rule", required=True, choices=RULES)
    sp.add_argument("--order-from", choices=("auto", "file"), default="auto")
    sp.add_argument("--order", help="certificate JSON for --order-from file")
    sp.add_argument("--auto-expand", action="store_true")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_elect)

    sp = sub.add_parser("check-core", parents=[common])
    with_input(sp)
    sp.add_argument("--committee", required=True)
    sp.add_argument("--mode", choices=("exact", "ceil"), default="exact")
    sp.add_argument("--max-t", type=int)
    sp.add_argument("--extension", choices=("lex", "max"), default="lex")
    sp.set_defaults(func=cmd_check_core)

    sp = sub.add_parser("check-local-stability", parents=[common])
    with_input(sp)
    sp.add_argument("--committee", required=True)
    sp.add_argument("--quota", type=int)
    sp.set_defaults(func=cmd_check_local_stability)

    sp = sub.add_parser("recognize", parents=[common])
    with_input(sp)
    sp.add_argument("--domain", required=True)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.set_defaults(func=cmd_recognize)

    sp = sub.add_parser("generate", parents=[common])
    sp.add_argument("--model", required=True, choices=MODELS)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("reproduce", parents=[common])
    sp.add_argument("--example", required=True, choices=(*FIXTURES, "all"))
    sp.add_argument("--samples", type=int, default=1000, help="random committees for tm-empty-core")
    sp.add_argument("--seed", type=int, default=1)
    sp.set_defaults(func=cmd_reproduce)
    return p


def _emit(doc: dict, pretty: bool, stream) -> None:
    if pretty:
        stream.write("\n".join(_render(doc)) + "\n")
    else:
        stream.write(dumps(doc) + "\n")


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        doc = args.func(args)
    except ReproductionFailure as e:
        doc = e.args[0]
        doc["timings"] = {"seconds": round(time.perf_counter() - start, 6)}
        _emit(doc, args.pretty, stdout)
        return 2
    except (ElectionError, InvariantViolation) as e:
        _emit({"schema": "v1", "command": args.command,
               "error": {"type": type(e).__name__, "message": str(e)}}, args.pretty, stdout)
        return 1
    doc["timings"] = {"seconds": round(time.perf_counter() - start, 6)}
    _emit(jsonable(doc), args.pretty, stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
