"""Command-line entry point: ``privic <subcommand> ...``.

Exit codes: 0 when the property holds (feasible, ok, found), 1 when it fails
(infeasible, violation, none), 2 for bad input or an instance over a size limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from .bounds import (ELEMENTAL, EXHAUSTIVE, PolymatroidInstance, keyrate_lp, mais, polymatroid_check,
                     sum_keyrate_bracket)
from .catalogue import (NAMED_GRAPHS, catalogue_entries, feasible_structures_of_size, four_user_gap_demo,
                        scalar_search, verify_catalogue)
from .coloring import (b_fold_chromatic, conflict_graph, fractional_chromatic, multicast_min_sessions,
                       multicast_scheme_from_coloring, scheme_from_secure_cover, secure_clique_cover)
from .feasibility import canonical_scheme, is_feasible
from .model import (KeyPattern, ModelError, RateTuple, format_rational, graph_from_obj, multicast_from_obj,
                    multicast_to_obj, parse_ks, parse_rate_tuple, parse_scheme, rate_tuple_to_obj,
                    scheme_to_obj)
from .notation import scheme_to_sums
from .oracle import oracle_check_multicast, oracle_check_private, oracle_check_weak
from .verifier import scheme_rate, verify_private, verify_weak_private
from .weak import necessary_condition_infeasible, subset_condition_violation

OK, FAIL, ERROR = 0, 1, 2


class InputError(ValueError):
    pass


# ---------------------------------------------------------------- input helpers

def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc


def load_graph(arg: str):
    """A graph JSON file, or one of the built-in instance names."""
    if not os.path.exists(arg) and arg in NAMED_GRAPHS:
        return NAMED_GRAPHS[arg]
    try:
        obj = json.loads(_read(arg))
    except json.JSONDecodeError as exc:
        raise InputError(f"{arg} is not JSON: {exc}") from exc
    return graph_from_obj(obj)


def load_ks(arg: str, n: int):
    """Inline ``110,101,011`` or a file holding either that text or a JSON list of patterns."""
    if os.path.exists(arg):
        text = _read(arg).strip()
        if text.startswith("["):
            return parse_ks(",".join(json.loads(text)), n)
        return parse_ks(text, n)
    return parse_ks("" if arg == "-" else arg, n)


def load_rates(arg: str, n: int) -> RateTuple:
    """A rate-tuple JSON file or an inline vector ``R,R_b,...`` in column order."""
    if os.path.exists(arg):
        return parse_rate_tuple(_read(arg))
    try:
        values = [Fraction(v.strip()) for v in arg.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot read rate vector {arg!r}") from exc
    return RateTuple.from_vector(values, n)


def parse_caps(text: str) -> dict[str, int]:
    caps = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        pat, _, width = item.partition(":")
        try:
            caps[str(KeyPattern(pat.strip()))] = int(width) if width else 1
        except ValueError as exc:
            raise InputError(f"bad cap {item!r}") from exc
    return caps


# ---------------------------------------------------------------- output

class Renderer:
    def __init__(self, approx: bool):
        self.approx = approx

    def value(self, v):
        if isinstance(v, bool) or v is None:
            return v
        if isinstance(v, Fraction):
            return format_rational(v)
        if isinstance(v, dict):
            return {str(k): self.value(x) for k, x in v.items()}
        if isinstance(v, (list, tuple, set, frozenset)):
            items = sorted(v) if isinstance(v, (set, frozenset)) else v
            return [self.value(x) for x in items]
        return v

    def approximations(self, v, path="", out=None):
        out = {} if out is None else out
        if isinstance(v, Fraction) and v.denominator != 1:
            out[path] = float(v)
        elif isinstance(v, dict):
            for k, x in v.items():
                self.approximations(x, f"{path}.{k}" if path else str(k), out)
        elif isinstance(v, (list, tuple)):
            for k, x in enumerate(v):
                self.approximations(x, f"{path}[{k}]", out)
        return out

    def human(self, v, indent=0) -> list[str]:
        pad = "  " * indent
        lines = []
        for k, x in v.items():
            if isinstance(x, dict) and x:
                lines.append(f"{pad}{k}:")
                lines += self.human(x, indent + 1)
            elif isinstance(x, list) and x and all(isinstance(e, dict) for e in x):
                lines.append(f"{pad}{k}:")
                for e in x:
                    sub = self.human(e, indent + 2)
                    sub[0] = pad + "  - " + sub[0].lstrip()
                    lines += sub
            else:
                lines.append(f"{pad}{k}: {self.scalar(x)}")
        return lines

    def scalar(self, x) -> str:
        if isinstance(x, Fraction):
            text = format_rational(x)
            if self.approx and x.denominator != 1:
                text += f" (≈{float(x):.3f})"
            return text
        if isinstance(x, (list, tuple, set, frozenset)):
            items = sorted(x) if isinstance(x, (set, frozenset)) else x
            return "[" + ", ".join(self.scalar(e) for e in items) + "]"
        if isinstance(x, dict):
            return "{" + ", ".join(f"{k}: {self.scalar(e)}" for k, e in x.items()) + "}"
        if x is None:
            return "none"
        return str(x)


# ---------------------------------------------------------------- subcommands

def _verdict_code(ok: bool) -> int:
    return OK if ok else FAIL


def cmd_feasible(a):
    g = load_graph(a.graph)
    ks = load_ks(a.ks, g.n)
    res = is_feasible(g, ks)
    out = {"verdict": "feasible" if res else "infeasible", "witness": res.witness}
    return _verdict_code(res.feasible), out


def cmd_canonical_scheme(a):
    g = load_graph(a.graph)
    ks = load_ks(a.ks, g.n)
    res = is_feasible(g, ks)
    if not res:
        return FAIL, {"verdict": "infeasible", "witness": res.witness}
    scheme = canonical_scheme(g, ks)
    return OK, {"verdict": "feasible", "rate": rate_tuple_to_obj(scheme_rate(scheme)),
                "sums": scheme_to_sums(scheme), "scheme": scheme_to_obj(scheme)}


def _verify(a, weak: bool):
    g = load_graph(a.graph)
    scheme = parse_scheme(_read(a.scheme))
    verdict = (verify_weak_private if weak else verify_private)(scheme, g)
    out = {"verdict": verdict.status, **{k: v for k, v in verdict.to_obj().items() if k != "status"}}
    if not weak:
        rate = scheme_rate(scheme)
        out["rate"] = {"R": rate.R, "key_rates": dict(rate.key_rates)}
    else:
        out["rate"] = Fraction(scheme.r, scheme.n)
    return _verdict_code(verdict.ok), out


def cmd_verify(a):
    return _verify(a, False)


def cmd_verify_weak(a):
    return _verify(a, True)


def cmd_oracle_check(a):
    g = load_graph(a.graph)
    text = _read(a.scheme)
    limit = a.state_limit
    if a.mode == "multicast":
        rep = oracle_check_multicast(multicast_from_obj(json.loads(text)), g, limit)
    elif a.mode == "weak":
        rep = oracle_check_weak(parse_scheme(text), g, limit)
    else:
        rep = oracle_check_private(parse_scheme(text), g, limit)
    out = {"verdict": "ok" if rep.ok else "violation", **rep.to_obj()}
    return _verdict_code(rep.ok), out


def cmd_mais(a):
    size, witness = mais(load_graph(a.graph))
    return OK, {"value": size, "witness": list(witness)}


def cmd_keyrate_lp(a):
    res = keyrate_lp(load_graph(a.graph), a.triples)
    point = {k: v for k, v in sorted(res.point.items()) if v}
    return OK, {"value": res.value, "triples": a.triples, "point": point}


def cmd_sum_key_bracket(a):
    br = sum_keyrate_bracket(load_graph(a.graph))
    return OK, {"lower": br.lower, "provenance": br.provenance, "upper": br.upper}


def cmd_polymatroid_check(a):
    g = load_graph(a.graph)
    rates = load_rates(a.rates, g.n)
    support = None if a.key_support is None else tuple(parse_ks(a.key_support, g.n))
    mode = EXHAUSTIVE if a.exhaustive_pm4 else ELEMENTAL
    res = polymatroid_check(PolymatroidInstance(g, rates, support, mode))
    out = {"verdict": res.verdict, "mode": mode, "certificate": res.certificate,
           "rows": res.rows, "rounds": res.rounds}
    if not res.passes and res.witness:
        out["lambda_upper_bound"] = res.witness["lambda_upper_bound"]
        out["multipliers"] = [{"row": r, "weight": w} for r, w in res.witness["multipliers"]]
    return _verdict_code(res.passes), out


def cmd_chi_f(a):
    ug = conflict_graph(load_graph(a.graph))
    value, weights = fractional_chromatic(ug)
    return OK, {"value": value, "conflict_edges": [list(e) for e in ug.sorted_edges()],
                "weights": [{"set": sorted(s), "weight": w} for s, w in sorted(weights.items(), key=lambda t: sorted(t[0]))]}


def cmd_b_fold(a):
    ug = conflict_graph(load_graph(a.graph))
    L, col = b_fold_chromatic(ug, a.b)
    return OK, {"b": a.b, "value": L, "colors": {str(v): sorted(col.colors(v)) for v in range(1, ug.n + 1)}}


def cmd_multicast(a):
    g = load_graph(a.graph)
    sc = multicast_min_sessions(g)
    out = {"value": sc.kappa, "b": sc.b, "L": sc.L,
           "colors": {str(v): sorted(sc.coloring.colors(v)) for v in g.users}}
    if a.emit_scheme:
        ms = multicast_scheme_from_coloring(g, sc.coloring)
        out["scheme"] = multicast_to_obj(ms)
    return OK, out


def cmd_secure_clique_cover(a):
    g = load_graph(a.graph)
    cover = secure_clique_cover(g)
    if cover is None:
        return FAIL, {"verdict": "none", "cover": None}
    out = {"verdict": "found", "cover": [list(c) for c in cover]}
    if a.emit_scheme:
        scheme = scheme_from_secure_cover(g, cover)
        out["sums"] = scheme_to_sums(scheme)
        out["scheme"] = scheme_to_obj(scheme)
    return OK, out


def cmd_weak_subset(a):
    w = subset_condition_violation(load_graph(a.graph))
    if w is None:
        return OK, {"verdict": "no_violation", "witness": None}
    return FAIL, {"verdict": "infeasible", "witness": list(w)}


def cmd_weak_necessary(a):
    v = necessary_condition_infeasible(load_graph(a.graph))
    out = {"verdict": v.verdict, "user": v.user}
    if v.infeasible:
        out["certificates"] = [{"S": list(S), "j": j, "k": k} for S, (j, k) in v.certificates.items()]
    return _verdict_code(not v.infeasible), out


def cmd_catalogue(a):
    if a.action == "list":
        rows = []
        for e in catalogue_entries():
            if a.entry and e.id != a.entry:
                continue
            rows.append({"id": e.id, "side_info": [sorted(e.graph.s(i)) for i in e.graph.users],
                         "region_rows": e.printed_rows, "vertices": [
                             {"rates": list(v.rate.as_vector(e.n)), "sums": list(v.sums)} for v in e.vertices]})
        if a.entry and not rows:
            raise InputError(f"no catalogue entry {a.entry!r}")
        return OK, {"entries": rows}
    entries = [e for e in catalogue_entries() if not a.entry or e.id == a.entry]
    if a.entry and not entries:
        raise InputError(f"no catalogue entry {a.entry!r}")
    rep = verify_catalogue(entries, oracle=not a.no_oracle)
    out = rep.to_obj()
    return _verdict_code(rep.ok), {"verdict": "ok" if rep.ok else "failures", **out}


def cmd_scalar_search(a):
    g = load_graph(a.graph)
    res = scalar_search(g, a.q, a.r, parse_caps(a.caps), pruned=not a.unpruned)
    out = {"verdict": "found" if res.found else "none", "nodes": res.nodes, "space": res.space}
    if res.found:
        out["sums"] = scheme_to_sums(res.scheme)
        out["scheme"] = scheme_to_obj(res.scheme)
    return _verdict_code(res.found), out


def cmd_four_user_demo(a):
    rep = four_user_gap_demo(q3=a.q3, relaxed=a.relaxed)
    out = {"verdict": "ok" if rep.ok else "failed",
           "vector_scheme": rep.vector_verdict.status, "vector_oracle_ok": rep.vector_oracle_ok,
           "vector_rate": {"R": rep.vector_rate.R, "key_rates": dict(rep.vector_rate.key_rates)},
           "rate_matches": rep.rate_matches,
           "scalar_rate_2": {f"q={q}": "found" if res.found else "none" for q, res in rep.scalar.items()}}
    if rep.relaxed is not None:
        out["relaxed_rate_3"] = scheme_to_sums(rep.relaxed.scheme) if rep.relaxed.found else None
    return _verdict_code(rep.ok), out


def cmd_structures(a):
    g = load_graph(a.graph)
    found = feasible_structures_of_size(g, a.size)
    return _verdict_code(bool(found)), {"count": len(found), "structures": [sorted(ks) for ks in found]}


# ---------------------------------------------------------------- parser

def _graph_arg(p):
    p.add_argument("--graph", required=True,
                   help="graph JSON file or built-in name (" + ", ".join(NAMED_GRAPHS) + ")")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="privic", description="Private index coding toolkit.",
                                 epilog="Global flags --json and --approx may appear anywhere.")
    ap.add_argument("--json", action="store_true", help="machine-readable report")
    ap.add_argument("--approx", action="store_true", help="add decimal renderings of rationals")
    sub = ap.add_subparsers(dest="command", metavar="<command>")
    sub.required = True

    def add(name, func, ref, text):
        p = sub.add_parser(name, help=text, description=f"{text} [ref: {ref}]")
        p.set_defaults(func=func)
        return p

    p = add("feasible", cmd_feasible, "key access structure feasibility criterion",
            "is a perfectly private scheme possible with these keys")
    _graph_arg(p)
    p.add_argument("--ks", required=True, help="patterns like 110,101,011, or a file")
    p = add("canonical-scheme", cmd_canonical_scheme, "one-time-pad construction",
            "emit the one-time-pad scheme for a feasible structure")
    _graph_arg(p)
    p.add_argument("--ks", required=True, help="patterns like 110,101,011, or a file")
    p = add("verify", cmd_verify, "linear decoding and privacy span conditions",
            "check a linear scheme for decodability and perfect privacy")
    _graph_arg(p)
    p.add_argument("--scheme", required=True)
    p = add("verify-weak", cmd_verify_weak, "weak-privacy span conditions",
            "check a keyless linear scheme for weak privacy")
    _graph_arg(p)
    p.add_argument("--scheme", required=True)
    p = add("oracle-check", cmd_oracle_check, "exhaustive joint-distribution enumeration",
            "brute-force decodability and privacy check")
    _graph_arg(p)
    p.add_argument("--scheme", required=True)
    p.add_argument("--mode", choices=["private", "weak", "multicast"], default="private")
    p.add_argument("--state-limit", type=int, default=None,
                   help="maximum number of enumerated states (env PIC_STATE_LIMIT)")
    p = add("mais", cmd_mais, "maximum acyclic induced subgraph bound",
            "maximum acyclic induced subgraph size")
    _graph_arg(p)
    p = add("keyrate-lp", cmd_keyrate_lp, "pairwise and triple key-rate bounds",
            "minimum sum key rate under the pairwise key-rate bounds")
    _graph_arg(p)
    p.add_argument("--triples", action="store_true", help="also impose the triple bounds")
    p = add("sum-key-bracket", cmd_sum_key_bracket, "sum-key-rate sandwich bound",
            "lower and upper bounds on the minimum sum key rate")
    _graph_arg(p)
    p = add("polymatroid-check", cmd_polymatroid_check, "polymatroidal outer bound",
            "test a rate tuple against the polymatroidal outer bound")
    _graph_arg(p)
    p.add_argument("--rates", required=True, help="rate-tuple JSON file or inline R,R_b,... in column order")
    p.add_argument("--exhaustive-pm4", action="store_true", help="use the full disjoint-set family")
    p.add_argument("--key-support", default=None, help="patterns the set function ranges over")
    p = add("chi-f", cmd_chi_f, "fractional chromatic number of the conflict graph",
            "fractional chromatic number of the conflict graph")
    _graph_arg(p)
    p = add("b-fold", cmd_b_fold, "b-fold colouring of the conflict graph",
            "smallest palette for a b-fold colouring of the conflict graph")
    _graph_arg(p)
    p.add_argument("--b", type=int, required=True)
    p = add("multicast", cmd_multicast, "multicast sessions and fractional colouring",
            "minimum normalised number of multicast sessions")
    _graph_arg(p)
    p.add_argument("--emit-scheme", action="store_true")
    p = add("secure-clique-cover", cmd_secure_clique_cover, "secure clique cover construction",
            "find a secure clique cover and its weak-privacy scheme")
    _graph_arg(p)
    p.add_argument("--emit-scheme", action="store_true")
    p = add("weak-subset", cmd_weak_subset, "subset condition for weak privacy",
            "subset-condition infeasibility test for weak privacy")
    _graph_arg(p)
    p = add("weak-necessary", cmd_weak_necessary, "improved necessary condition for weak privacy",
            "necessary-condition infeasibility test for weak privacy")
    _graph_arg(p)
    p = add("catalogue", cmd_catalogue, "rate regions of all two- and three-user problems",
            "list or verify the rate-region catalogue")
    p.add_argument("action", choices=["verify", "list"])
    p.add_argument("--entry", default=None, help="restrict to one entry id")
    p.add_argument("--no-oracle", action="store_true", help="skip the brute-force double check")
    p = add("scalar-search", cmd_scalar_search, "exhaustive scalar linear code search",
            "search every scalar linear scheme with r transmissions")
    _graph_arg(p)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--caps", required=True, help="pattern:width list, e.g. 110:1,101:1")
    p.add_argument("--unpruned", action="store_true", help="disable canonical-form pruning")
    p = add("four-user-demo", cmd_four_user_demo, "vector versus scalar gap on four users",
            "vector scheme at rate 5/2 versus exhaustive scalar search at rate 2")
    p.add_argument("--q3", action="store_true", help="also search over GF(3)")
    p.add_argument("--relaxed", action="store_true", help="also find a rate-3 scalar scheme with caps 2")
    p = add("structures", cmd_structures, "key access structure enumeration",
            "all feasible key access structures of a given size")
    _graph_arg(p)
    p.add_argument("--size", type=int, required=True)
    return ap


def run(argv=None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    as_json = "--json" in argv
    approx = "--approx" in argv
    argv = [x for x in argv if x not in ("--json", "--approx")]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else ERROR
    render = Renderer(approx)
    started = time.perf_counter()
    inputs = {k: v for k, v in vars(args).items() if k not in ("func", "command", "json", "approx")}
    try:
        code, out = args.func(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        code, out = ERROR, {"verdict": "error", "error": str(exc) or type(exc).__name__}
    elapsed = time.perf_counter() - started
    if as_json:
        report = {"command": args.command, "inputs": render.value(inputs), "exit_code": code,
                  **render.value(out), "elapsed": round(elapsed, 6)}
        if approx:
            report["approx"] = render.approximations(out)
        print(json.dumps(report, indent=1), file=stdout)
    else:
        print(f"command: {args.command}", file=stdout)
        for line in render.human(out):
            print(line, file=stdout)
        print(f"elapsed: {elapsed:.3f}s", file=stdout)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
