"""Command line front end: ``sclkit <subcommand> ...``.

Exit codes: 0 success (including witness outcomes), 1 failed self-check,
2 unreadable input, 3 chain not null-homologous, 4 class not in the kernel.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import graph_groups as gg
from . import gluing, oracle, scl_engine, surface
from .words import Alphabet, WordError, chain_inverse_normalize, is_null_homologous, parse_chain

EXIT_OK, EXIT_CHECK, EXIT_PARSE, EXIT_INFINITE, EXIT_KERNEL = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _emit(args, data: dict, text: str):
    if args.json:
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(text)


def _chain(args):
    alphabet = Alphabet(args.gens) if args.gens else scl_engine._infer_alphabet(args.chain)
    return parse_chain(args.chain, alphabet)


def _graph(args) -> gg.GraphOfGroups:
    return gg.parse_graph(Path(args.graph).read_text())


def _classes(args, G, need: int = 1) -> list[list[Fraction]]:
    out = [gg.class_vector(G, c) for c in (args.cls or [])]
    if args.class_basis:
        basis = gg.h2_lattice(G)
        for k in args.class_basis:
            if not 0 <= k < len(basis):
                raise gg.ParseError(f"--class-basis {k}: H2 has rank {len(basis)}")
            out.append([Fraction(x) for x in basis[k]])
    if len(out) != need:
        raise gg.ParseError(f"expected {need} class(es), got {len(out)}")
    return out


def _fmt(q) -> str:
    return str(q)


def _pt(p) -> str:
    return f"({p[0]}, {p[1]})"


# ---------------------------------------------------------------- commands

def cmd_scl(args) -> int:
    c = _chain(args)
    full = scl_engine.scl_full(c)
    if full.value == float("inf"):
        _emit(args, {"chain": c.render(), "scl": "infinity", "null_homologous": False},
              "scl = infinity (not null-homologous)")
        return EXIT_INFINITE
    data = {"chain": c.render(), "scl": _fmt(full.value), "fill": _fmt(4 * full.value)}
    lines = [f"scl = {full.value}"]
    if full.result is not None:
        res = full.result
        S = surface.assemble(res)
        data.update(degree=res.degree, chi=S.chi(), dual_value=_fmt(res.dual_value / full.scale),
                    certificate=scl_engine.verify_certificate(res),
                    boundary=[{"loop": c.alphabet.render(S.loops[bc.tag]), "degree": bc.degree}
                              for bc in S.boundary_components()],
                    genus=[comp["genus"] for comp in S.component_data()])
        lines.append(f"extremal surface: chi = {S.chi()}, degree n = {res.degree}, "
                     f"genus {data['genus']}, boundary "
                     + ", ".join(f"{b['loop']}^{b['degree']}" for b in data["boundary"]))
        lines.append(f"dual certificate = {data['dual_value']} "
                     f"({'verified' if data['certificate'] else 'NOT verified'})")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_surface(args) -> int:
    c = _chain(args)
    full = scl_engine.scl_full(c)
    if full.value == float("inf"):
        print("scl = infinity (not null-homologous)")
        return EXIT_INFINITE
    if full.result is None:
        _emit(args, {"empty": True}, "empty chain: empty surface")
        return EXIT_OK
    S = surface.assemble(full.result)
    data = S.to_json()
    _emit(args, data, S.summary())
    return EXIT_OK


def cmd_oracle(args) -> int:
    c = chain_inverse_normalize(_chain(args))
    if not is_null_homologous(c):
        print("scl = infinity (not null-homologous)")
        return EXIT_INFINITE
    D = scl_engine.exact.lcm_of_denominators(t for _, t in c.items())
    c = D * c
    rows = {}
    for n in range(1, args.degree + 1):
        res = oracle.oracle_scl(c, n, args.limit)
        rows[n] = {"bound": _fmt(res.bound / D), "examined": res.examined}
    text = "\n".join(f"n = {n}: bound {r['bound']} ({r['examined']} pairings)" for n, r in rows.items())
    _emit(args, {"chain": c.render(), "scale": D, "bounds": {str(k): v for k, v in rows.items()}}, text)
    return EXIT_OK


def cmd_h2(args) -> int:
    G = _graph(args)
    basis = gg.h2_lattice(G)
    ends = [f"{e}.{end}" for e, end in G.ends]
    text = [f"H2 rank = {len(basis)}"]
    for k, v in enumerate(basis):
        text.append(f"  [{k}] " + ", ".join(f"{name}={x}" for name, x in zip(ends, v) if x))
    _emit(args, {"rank": len(basis), "ends": ends, "basis": basis}, "\n".join(text))
    return EXIT_OK


def cmd_norm(args) -> int:
    G = _graph(args)
    (A,) = _classes(args, G)
    value = gg.gt_norm(G, A, args.jobs)
    chains = {v: gg.boundary_chain(G, A, v).render() for v in G.vertices}
    _emit(args, {"class": [_fmt(x) for x in A], "norm": _fmt(value), "boundary_chains": chains},
          f"norm = {value}")
    return EXIT_OK


def cmd_ball(args) -> int:
    G = _graph(args)
    A1, A2 = _classes(args, G, 2)
    fan = gg.unit_ball_2d(G, A1, A2, depth=args.depth, jobs=args.jobs)
    lines = [f"{len(fan.cones)} cones, {'bounded' if fan.bounded else 'unbounded'} ball"]
    for c in fan.cones:
        lines.append(f"  cone {_pt(c.left)} .. {_pt(c.right)}: N = {c.functional[0]} x + {c.functional[1]} y")
    lines.append("vertices: " + ", ".join(map(_pt, fan.vertices)))
    if fan.lineality:
        lines.append("lineality: " + ", ".join(map(_pt, fan.lineality)))
    _emit(args, fan.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_glue(args) -> int:
    G = _graph(args)
    (A,) = _classes(args, G)
    out = gluing.build_closed_surface(G, A, jobs=args.jobs)
    if isinstance(out, gluing.ClosedSurfaceResult):
        ok = gluing.certify(out, G, A)
        text = (f"closed surface: genus {', '.join(map(str, out.genera))}, n = {out.n}, "
                f"certificate {'OK' if ok else 'FAILED'} ({out.certificate} = {out.norm})")
        if args.plan:
            text = "\n".join(out.plan) + "\n" + text
        _emit(args, out.to_json(), text)
        return EXIT_OK if ok else EXIT_CHECK
    if isinstance(out, gluing.NonHyperbolicWitness):
        _emit(args, out.to_json(), f"witness: {out.kind} at edge {out.location}\n{out.explanation}")
    else:
        _emit(args, out.to_json(), f"norm zero: {out.explanation}")
    return EXIT_OK


def cmd_present(args) -> int:
    G = _graph(args)
    text = gg.presentation(G)
    _emit(args, {"presentation": text}, text)
    return EXIT_OK


def run_checks(seed: int, size: int, out=print) -> list[str]:
    """Randomized exact property checks; returns a list of failures."""
    rng = random.Random(seed)
    failures = []
    for k in range(size):
        c = oracle.random_chain(rng, terms=rng.randint(1, 2), max_length=4, max_letters=8)
        s = scl_engine.scl(c)
        for m in (2, 3):
            if scl_engine.scl(m * c) != m * s:
                failures.append(f"{c}: homogeneity fails for k={m}")
        if scl_engine.scl(c.inverse()) != s:
            failures.append(f"{c}: inverse symmetry fails")
        d = oracle.random_chain(rng, terms=1, max_length=3, max_letters=6)
        if scl_engine.scl(c + d) > s + scl_engine.scl(d):
            failures.append(f"{c} , {d}: subadditivity fails")
        small = chain_inverse_normalize(c)
        if sum(len(w) * t for w, t in small.items()) <= 8 and small.is_integral():
            b = oracle.oracle_scl(small, 1, 10 ** 5).bound
            if b is not None and b < s:
                failures.append(f"{c}: oracle bound {b} below scl {s}")
        out(f"[{k + 1}/{size}] {c}: scl = {s}")
    return failures


def cmd_check(args) -> int:
    failures = run_checks(args.seed, args.sizes)
    for f in failures:
        print("FAIL", f)
    print(f"{args.sizes} chains checked, {len(failures)} failures")
    return EXIT_CHECK if failures else EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sclkit", description="Exact scl, surfaces and norms for graphs of free groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, chain=False, graph=False):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--jobs", type=int, default=1, help="worker threads for independent scl solves")
        if chain:
            sp.add_argument("chain", help='chain expression, e.g. "abAB + 1/2*ab + 1/2*AB"')
            sp.add_argument("--gens", help="comma-separated generator names (default: a.. up to the last letter used)")
        if graph:
            sp.add_argument("graph", help="graph-of-groups file")
        return sp

    def classes(sp):
        sp.add_argument("--class", dest="cls", action="append", help='e.g. "e1.from=1,e1.to=-1"')
        sp.add_argument("--class-basis", type=int, action="append", help="index into the computed H2 basis")

    common(sub.add_parser("scl", help="stable commutator length of a chain"), chain=True).set_defaults(func=cmd_scl)
    common(sub.add_parser("surface", help="export the extremal surface of a chain"), chain=True).set_defaults(func=cmd_surface)
    sp = common(sub.add_parser("oracle", help="brute-force upper bounds by degree"), chain=True)
    sp.add_argument("--degree", type=int, default=1)
    sp.add_argument("--limit", type=int, default=10 ** 7)
    sp.set_defaults(func=cmd_oracle)
    common(sub.add_parser("h2", help="second homology lattice of a graph"), graph=True).set_defaults(func=cmd_h2)
    sp = common(sub.add_parser("norm", help="norm of a class"), graph=True)
    classes(sp)
    sp.set_defaults(func=cmd_norm)
    sp = common(sub.add_parser("ball", help="unit ball on a 2-plane of classes"), graph=True)
    classes(sp)
    sp.add_argument("--depth", type=int, default=64)
    sp.set_defaults(func=cmd_ball)
    sp = common(sub.add_parser("glue", help="closed surface for a class, or a witness"), graph=True)
    classes(sp)
    sp.add_argument("--plan", action="store_true", help="print the per-edge gluing decisions")
    sp.set_defaults(func=cmd_glue)
    common(sub.add_parser("present", help="group presentation of a graph"), graph=True).set_defaults(func=cmd_present)
    sp = common(sub.add_parser("check", help="randomized exact self-checks"))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--sizes", type=int, default=10, help="number of random chains (0 = nothing)")
    sp.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for attr in ("depth", "limit", "degree", "jobs"):
        if getattr(args, attr, 1) < 1:
            print(f"--{attr} must be at least 1", file=sys.stderr)
            return EXIT_PARSE
    if getattr(args, "sizes", 0) < 0:
        print("--sizes must be non-negative", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except (WordError, gg.GraphError, OSError) as exc:
        if isinstance(exc, gg.NotInKernel):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_KERNEL
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
