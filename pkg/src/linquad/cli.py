"""Command-line interface: verify / construct / bounds / search / report.

Exit codes: 0 when every checked claim holds, 1 when some claim fails,
2 for usage, parse or input errors.  Output is deterministic for fixed
seed and budget (no wall-clock values are printed); ``--format kv``
emits stable key=value lines for machines.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import bounds as bounds_mod
from . import constructions as cons
from . import patterns, search
from .hypergraph import (
    HypergraphError,
    hypergraph,
    degree_sequence,
    is_linear,
    leave_graph,
    parse,
    serialize,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


@dataclass
class RunReport:
    subcommand: str
    params: dict
    findings: list = field(default_factory=list)  # (claim, passed, detail)

    def add(self, claim, passed, detail=""):
        self.findings.append((claim, bool(passed), detail))

    @property
    def exit_code(self):
        return EXIT_PASS if all(p for _, p, _ in self.findings) else EXIT_FAIL

    def render(self, fmt):
        lines = []
        if fmt == "kv":
            lines.append(f"subcommand={self.subcommand}")
            for k, v in sorted(self.params.items()):
                lines.append(f"param.{k}={v}")
            for claim, passed, detail in self.findings:
                line = f"check.{claim}={'pass' if passed else 'FAIL'}"
                if detail:
                    line += f" ({detail})"
                lines.append(line)
            lines.append(f"exit={self.exit_code}")
        else:
            width = max((len(c) for c, _, _ in self.findings), default=0)
            for claim, passed, detail in self.findings:
                status = "pass" if passed else "FAIL"
                tail = f"  {detail}" if detail else ""
                lines.append(f"{claim.ljust(width)}  {status}{tail}")
            lines.append("all checks passed" if self.exit_code == 0
                         else "SOME CHECKS FAILED")
        return "\n".join(lines)


def _default_budget(args):
    nodes = args.budget_nodes
    secs = args.budget_secs
    if nodes is None:
        nodes = int(os.environ.get("LINQUAD_BUDGET_NODES", 10**8))
    if secs is None:
        secs = float(os.environ.get("LINQUAD_BUDGET_SECS", 300.0))
    return search.Budget(nodes=nodes, seconds=secs)


def _parse_range(text):
    if ".." in text:
        a, b = text.split("..", 1)
        return list(range(int(a), int(b) + 1))
    return [int(text)]


# ---------------------------------------------------------------------------
# verify

def _do_verify(args):
    with open(args.file) as fh:
        h = parse(fh.read())
    rep = RunReport("verify", {"file": args.file, "n": h.n, "edges": len(h.edges)})
    for prop in args.properties:
        if prop == "linear":
            rep.add("linear", is_linear(h) is not None)
        elif prop == "steiner":
            cov = is_linear(h)
            total = h.n * (h.n - 1) // 2
            ok = cov is not None and len(cov.cover) == total
            rep.add("steiner", ok, f"pairs covered once: {ok}")
        elif prop == "regular" or prop.startswith("regular:"):
            degs = set(degree_sequence(h))
            if ":" in prop:
                d = int(prop.split(":", 1)[1])
                rep.add(prop, degs == {d}, f"degrees {sorted(degs)}")
            else:
                rep.add(prop, len(degs) == 1, f"degrees {sorted(degs)}")
        elif prop.startswith("free:"):
            pat = patterns.parse_pattern(prop[5:])
            rep.add(prop, patterns.is_free(h, pat))
        elif prop == "acyclic":
            ok, _order = patterns.is_acyclic(h)
            rep.add("acyclic", ok)
        elif prop == "leave":
            cls = cons.classify_leave(leave_graph(h))
            rep.add("leave", True, f"class {cls}")
        else:
            raise HypergraphError(f"unknown property {prop!r}")
    return rep


# ---------------------------------------------------------------------------
# construct

def _do_construct(args):
    name = args.name
    if name == "steiner13":
        built = cons.steiner_2_4_13()
    elif name == "steiner16":
        built = cons.steiner_2_4_16()
    elif name == "sts9":
        rts = cons.sts9_resolvable()
        built = cons.Construction(rts.base, rts.certificate,
                                  {"classes": len(rts.classes)})
    elif name == "e4plus":
        if args.n is None:
            raise HypergraphError("e4plus construction needs -n")
        built = cons.e4plus_free_construction(args.n)
    elif name == "packing":
        if args.m is None:
            raise HypergraphError("packing construction needs -m")
        built = cons.packing_optimal_small(args.m)
    elif name == "glower":
        if args.n is None or args.k is None:
            raise HypergraphError("glower construction needs -n and -k")
        built = cons.g_lower_construction(args.n, args.k, seed=args.seed)
    elif name == "steiner-union":
        if args.n is None or args.k is None:
            raise HypergraphError("steiner-union construction needs -n and -k")
        built = cons.steiner_union_construction(args.n, args.k)
    else:
        raise HypergraphError(f"unknown construction {name!r}")

    text = serialize(built.hypergraph)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    rep = RunReport("construct", {"name": name, **{
        k: v for k, v in (("n", args.n), ("k", args.k), ("m", args.m))
        if v is not None}})
    for c in built.certificate.claims:
        rep.add(c.name, c.passed, c.detail)
    for k, v in sorted(built.meta.items()):
        rep.add(f"meta.{k}", True, str(v))
    return rep


# ---------------------------------------------------------------------------
# bounds

def _do_bounds(args):
    q = args.quantity
    rep = RunReport("bounds", {"quantity": q})
    if q == "tree":
        val = bounds_mod.tree_upper(args.n, args.k)
        rep.add("upper", True, f"(3k-5)n = {val}")
    elif q == "star":
        val, applicable = bounds_mod.steiner_union_lower(args.n, args.k)
        rep.add("lower", True, f"n(k-1)/4 = {val}")
        rep.add("applicable", True, str(applicable).lower())
    elif q == "threshold":
        rep.add("threshold", True, str(bounds_mod.matching_threshold(args.k)))
    else:
        if q == "p3":
            report = bounds_mod.path3_bound(args.n)
        elif q == "p4":
            report = bounds_mod.path4_bound(args.n)
        elif q == "e4plus":
            report = bounds_mod.e4plus_bounds(args.n)
        elif q == "path":
            report = bounds_mod.path_upper(args.n, args.k)
        elif q == "packing":
            report = bounds_mod.packing_number(args.m)
        elif q == "g":
            report = bounds_mod.g_bounds(args.n, args.k)
        else:
            raise HypergraphError(f"unknown quantity {q!r}")
        for line in report.kv_lines():
            key, _, val = line.partition("=")
            rep.add(key, True, val)
    return rep


# ---------------------------------------------------------------------------
# search

def _do_search(args):
    budget = _default_budget(args)
    if args.mode == "ex":
        family = [patterns.parse_pattern(tok) for tok in args.family.split(",")]
        res = search.exact_ex(args.n, family, budget)
    else:
        res = search.exact_packing(args.m, budget)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(serialize(res.witness))
    rep = RunReport("search", dict(res.params))
    rep.add("value", True, str(res.value))
    rep.add("nodes", True, str(res.nodes))
    rep.add("completed", res.completed,
            "search space exhausted" if res.completed else "budget hit")
    return rep


# ---------------------------------------------------------------------------
# report: named results and their cross-checks

def _report_prop1(args, rep, budget):
    for n in _parse_range(args.n or "13"):
        for k in _parse_range(args.k or "3"):
            up = bounds_mod.tree_upper(n, k)
            low, applicable = bounds_mod.steiner_union_lower(n, k)
            ok = not applicable or low <= up
            rep.add(f"tree_upper_n{n}_k{k}", ok, f"upper {up}, lower {low}")


def _report_prop2(args, rep, budget):
    for n in _parse_range(args.n or "13"):
        for k in _parse_range(args.k or "5"):
            built = cons.steiner_union_construction(n, k)
            for c in built.certificate.claims:
                rep.add(f"n{n}_k{k}_{c.name}", c.passed, c.detail)


def _report_prop3(args, rep, budget):
    for n in _parse_range(args.n or "13"):
        report = bounds_mod.path3_bound(n)
        if n % 13 == 0 and n > 0:
            h = cons.disjoint_union(*([cons.steiner_2_4_13().hypergraph] * (n // 13)))
            rep.add(f"n{n}_p3_free", patterns.is_free(h, "P3"))
            ok, findings = bounds_mod.check_consistency(report, witness=h, exact=n)
            rep.add(f"n{n}_consistency", ok, "; ".join(findings))
        else:
            rep.add(f"n{n}_upper", True, f"upper {report.upper}")


def _report_th11(args, rep, budget):
    for n in _parse_range(args.n or "16"):
        report = bounds_mod.path4_bound(n)
        if n % 16 == 0 and n > 0:
            h = cons.disjoint_union(*([cons.steiner_2_4_16().hypergraph] * (n // 16)))
            rep.add(f"n{n}_p4_free", patterns.is_free(h, "P4"))
            rep.add(f"n{n}_s3plus_free", patterns.is_free(h, "S3plus"))
            ok, findings = bounds_mod.check_consistency(
                report, witness=h, exact=5 * n // 4)
            rep.add(f"n{n}_consistency", ok, "; ".join(findings))
        else:
            rep.add(f"n{n}_upper", True, f"upper {report.upper}")


def _report_th12(args, rep, budget):
    for n in _parse_range(args.n or "13..24"):
        built = cons.e4plus_free_construction(n)
        cert_ok = built.certificate.ok
        gap = built.meta["target"] - built.meta["achieved"]
        rep.add(f"n{n}_certified", cert_ok,
                f"edges {len(built.hypergraph.edges)}, "
                f"achieved {built.meta['achieved']} of target {built.meta['target']}")
        if gap > 0:
            rep.add(f"n{n}_augmentation_gap", True, f"short by {gap}")
        report = bounds_mod.e4plus_bounds(n)
        ok, findings = bounds_mod.check_consistency(
            report, witness=built.hypergraph)
        rep.add(f"n{n}_consistency", ok, "; ".join(findings))


def _report_th13(args, rep, budget):
    for n in _parse_range(args.n or "13"):
        for k in _parse_range(args.k or "5"):
            report = bounds_mod.path_upper(n, k)
            rep.add(f"n{n}_k{k}_upper", True, f"2.5kn = {report.upper}")
            if k == 2:
                rep.add(f"n{n}_k2_exact", report.exact == n // 4,
                        f"floor(n/4) = {n // 4}")


def _report_th14(args, rep, budget):
    for k in _parse_range(args.k or "2"):
        thr = bounds_mod.matching_threshold(k)
        rep.add(f"k{k}_threshold", True, str(thr))
        if k >= 2:
            gb = bounds_mod.g_bounds(thr + 1, k)
            rep.add(f"k{k}_g_bounds", gb.lower <= gb.upper,
                    f"[{gb.lower}, {gb.upper}] at n = {thr + 1}")


def _report_lem41(args, rep, budget):
    for m in _parse_range(args.m or "4..12"):
        if m in (8, 9, 10, 11):
            h = cons.packing_optimal_small(m).hypergraph
        elif m <= 13:
            h = search.exact_packing(m, budget).witness
        else:
            rep.add(f"m{m}", False, "no exact packing available above m = 13")
            continue
        cls = cons.classify_leave(leave_graph(h))
        expected = cons.expected_leave_kind(m)
        if expected is None:
            rep.add(f"m{m}_leave", True, f"exceptional order, class {cls}")
        else:
            rep.add(f"m{m}_leave", cls.kind == expected,
                    f"class {cls}, expected {expected}")


def _report_lem42(args, rep, budget):
    for m in _parse_range(args.m or "4..11"):
        want = bounds_mod.packing_number(m).exact
        res = search.exact_packing(m, budget)
        ok = res.completed and res.value == want
        rep.add(f"m{m}_packing", ok,
                f"search {res.value} vs formula {want}"
                + ("" if res.completed else ", budget hit"))


_REPORTS = {
    "prop1": _report_prop1,
    "prop2": _report_prop2,
    "prop3": _report_prop3,
    "th11": _report_th11,
    "th12": _report_th12,
    "th13": _report_th13,
    "th14": _report_th14,
    "lem41": _report_lem41,
    "lem42": _report_lem42,
}


def _do_report(args):
    if args.id not in _REPORTS:
        raise HypergraphError(
            f"unknown report id {args.id!r} (expected one of {sorted(_REPORTS)})"
        )
    rep = RunReport("report", {"id": args.id})
    _REPORTS[args.id](args, rep, _default_budget(args))
    return rep


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(
        prog="linquad",
        description="Linear quadruple systems: verify, construct, bound, search.",
    )
    p.add_argument("--format", choices=("text", "kv"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="check properties of a hypergraph file")
    pv.add_argument("file")
    pv.add_argument("properties", nargs="+",
                    help="linear steiner regular[:d] free:<pattern> acyclic leave")

    pc = sub.add_parser("construct", help="emit a certified construction")
    pc.add_argument("name", help="steiner13 steiner16 sts9 e4plus packing "
                                 "glower steiner-union")
    pc.add_argument("-n", type=int)
    pc.add_argument("-k", type=int)
    pc.add_argument("-m", type=int)
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("-o", "--output")

    pb = sub.add_parser("bounds", help="evaluate a closed-form bound")
    pb.add_argument("quantity",
                    help="tree star p3 p4 e4plus path packing g threshold")
    pb.add_argument("-n", type=int)
    pb.add_argument("-k", type=int)
    pb.add_argument("-m", type=int)

    ps = sub.add_parser("search", help="exact extremal / packing search")
    ps.add_argument("mode", choices=("ex", "packing"))
    ps.add_argument("-n", type=int)
    ps.add_argument("-m", type=int)
    ps.add_argument("-F", "--family", default="")
    ps.add_argument("-o", "--output")
    ps.add_argument("--budget-nodes", type=int, default=None)
    ps.add_argument("--budget-secs", type=float, default=None)
    ps.add_argument("--jobs", type=int, default=1)
    ps.add_argument("--seed", type=int, default=0)

    pr = sub.add_parser("report", help="run a named result's cross-checks")
    pr.add_argument("id")
    pr.add_argument("-n", type=str, default=None)
    pr.add_argument("-k", type=str, default=None)
    pr.add_argument("-m", type=str, default=None)
    pr.add_argument("--budget-nodes", type=int, default=None)
    pr.add_argument("--budget-secs", type=float, default=None)
    pr.add_argument("--jobs", type=int, default=1)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            rep = _do_verify(args)
        elif args.command == "construct":
            rep = _do_construct(args)
        elif args.command == "bounds":
            rep = _do_bounds(args)
        elif args.command == "search":
            if args.mode == "ex" and (args.n is None or not args.family):
                parser.error("search ex needs -n and -F")
            if args.mode == "packing" and args.m is None:
                parser.error("search packing needs -m")
            rep = _do_search(args)
        else:
            rep = _do_report(args)
    except (HypergraphError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(rep.render(args.format))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
