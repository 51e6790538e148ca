"""Closed surfaces representing multiples of a homology class.

For a class ``A`` of a graph of free groups we take an extremal surface over
every vertex, equalize their degrees, and then close up the edges one at a
time: boundary circles of the two ends of an edge are brought to a common
degree by finite cyclic covers and joined through annuli.  The result is a
closed surface ``S`` representing ``n A`` with ``-2 chi(S) / n`` equal to the
norm of ``A``.  An annulus whose two ends lie over the two ends of the same
edge instead exhibits a Baumslag-Solitar subgroup, which is reported.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import exact
from .graph_groups import (GraphOfGroups, NotInKernel, class_vector, gt_norm,
                           in_kernel, vertex_loops)
from .scl_engine import build_encoding, solve_scl
from .surface import (CombinatorialSurface, CoverSpec, assemble, cyclic_cover,
                      disjoint_copies, disjoint_union, glue_along,
                      pairing_cover, positive_genus_spec, split_components)
from .words import CyclicWord

log = logging.getLogger(__name__)


@dataclass
class ClosedSurfaceResult:
    surface: CombinatorialSurface = field(repr=False)
    n: int
    chi: int
    genera: list[int]
    norm: Fraction
    wrapping: dict[str, int]
    plan: list[str] = field(default_factory=list, repr=False, compare=False)

    @property
    def certificate(self) -> Fraction:
        return Fraction(-2 * self.chi, self.n)

    @property
    def ok(self) -> bool:
        return self.certificate == self.norm

    def to_json(self) -> dict:
        return {
            "outcome": "closed_surface",
            "n": self.n,
            "chi": self.chi,
            "genus": self.genera,
            "norm": str(self.norm),
            "certificate": {"lhs": str(self.certificate), "rhs": str(self.norm), "holds": self.ok},
            "wrapping": self.wrapping,
            "surface": self.surface.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "ClosedSurfaceResult":
        return cls(CombinatorialSurface.from_json(d["surface"]), d["n"], d["chi"], list(d["genus"]),
                   Fraction(d["norm"]), dict(d["wrapping"]))


@dataclass(frozen=True)
class NonHyperbolicWitness:
    p: int
    q: int
    location: str
    explanation: str

    @property
    def kind(self) -> str:
        return "ZxZ" if abs(self.p) == abs(self.q) == 1 else f"BS({self.p},{self.q})"

    def to_json(self) -> dict:
        return {"outcome": "witness", "kind": self.kind, "p": self.p, "q": self.q,
                "location": self.location, "explanation": self.explanation}

    @classmethod
    def from_json(cls, d: dict) -> "NonHyperbolicWitness":
        return cls(d["p"], d["q"], d["location"], d["explanation"])


@dataclass(frozen=True)
class NormZero:
    explanation: str

    def to_json(self) -> dict:
        return {"outcome": "norm_zero", "explanation": self.explanation}

    @classmethod
    def from_json(cls, d: dict) -> "NormZero":
        return cls(d["explanation"])


def result_from_json(d: dict):
    kinds = {"closed_surface": ClosedSurfaceResult, "witness": NonHyperbolicWitness, "norm_zero": NormZero}
    return kinds[d["outcome"]].from_json(d)


def _root(w: Sequence[int]) -> tuple[CyclicWord, int]:
    return CyclicWord(w).root()


def commensurable_powers(u: Sequence[int], w: Sequence[int]) -> tuple[int, int] | None:
    """``(p, q)`` with ``u ~ r^p`` and ``w ~ r^q`` up to conjugacy, if such a common root exists."""
    ru, p = _root(u)
    rw, q = _root(w)
    if ru == rw:
        return p, q
    if ru == rw.inverse():
        return p, -q
    return None


def find_witnesses(G: GraphOfGroups) -> list[NonHyperbolicWitness]:
    """Self-edges whose two attaching words are powers of a common element."""
    out = []
    for e in sorted(G.edges, key=lambda e: e.name):
        if e.source != e.target:
            continue
        pq = commensurable_powers(e.wfrom, e.wto)
        if pq is None:
            continue
        p, q = pq
        alpha = G.vertices[e.source]
        r = alpha.render(_root(e.wfrom)[0])
        out.append(NonHyperbolicWitness(
            p, q, e.name,
            f"edge {e.name} conjugates ({r})^{p} to ({r})^{q}, so with b the stable letter "
            f"and a = {r}: b a^{p} b^-1 = a^{q}"))
    return out


# ----------------------------------------------------------------- pipeline

def _scale_to_integers(vec: list[Fraction]) -> tuple[list[int], int]:
    D = exact.lcm_of_denominators(vec)
    return [int(x * D) for x in vec], D


def _vertex_surfaces(G: GraphOfGroups, ivec: list[int], plan: list[str]):
    out = []
    for v in G.vertices:
        loops = vertex_loops(G, ivec, v)
        if not loops:
            continue
        res = solve_scl(build_encoding([(w, int(t), tag) for w, t, tag in loops]))
        T = assemble(res)
        plan.append(f"vertex {v}: scl = {res.value}, extremal degree {res.degree}, chi = {T.chi()}")
        out.append((v, T, res.degree))
    return out


def _boundaries_by_tag(S: CombinatorialSurface, tags) -> list:
    return [(k, bc) for k, bc in enumerate(S.boundary_components()) if bc.tag in tags]


def _needs_pairing(S: CombinatorialSurface, tags) -> bool:
    counts: dict[tuple, int] = {}
    for _, bc in _boundaries_by_tag(S, tags):
        key = (bc.tag, bc.degree)
        counts[key] = counts.get(key, 0) + 1
    return any(c % 2 for c in counts.values())


def _pair_phi(S: CombinatorialSurface, tags) -> tuple[int, ...]:
    bcs = S.boundary_components()
    shifts = [0] * len(bcs)
    chi = S.chi()
    if chi == 0:
        hit = [k for k, bc in enumerate(bcs) if bc.tag in tags]
        assert len(hit) == 1 and len(bcs) == 2
        k = hit[0]
        shifts[k] = bcs[k].degree
        shifts[1 - k] = -bcs[k].degree
        return tuple(shifts)
    for tag in sorted(tags):
        fam = sorted((bc.degree, bc.start, k) for k, bc in enumerate(bcs) if bc.tag == tag)
        assert len(fam) % 2 == 0
        for (d1, _, k1), (d2, _, k2) in zip(fam[::2], fam[1::2]):
            assert d1 == d2, "boundary family does not come in equal-degree pairs"
            shifts[k1], shifts[k2] = d1, -d1
    return tuple(shifts)


def build_closed_surface(G: GraphOfGroups, A, jobs: int = 1):
    """Run the gluing construction for the class ``A``.

    Returns a :class:`ClosedSurfaceResult`, a :class:`NonHyperbolicWitness`
    or :class:`NormZero`.  A class outside the kernel raises
    :class:`NotInKernel`, unless the graph itself carries a witness.
    """
    plan: list[str] = []
    vec = class_vector(G, A)
    if not any(vec) or not in_kernel(G, vec):
        witnesses = find_witnesses(G)
        if witnesses:
            return witnesses[0]
        raise NotInKernel("the class is zero or not in the Mayer-Vietoris kernel")
    ivec, D = _scale_to_integers(vec)
    norm = gt_norm(G, vec, jobs)
    plan.append(f"class {ivec} (scaled by {D}), norm {norm}")

    verts = _vertex_surfaces(G, ivec, plan)
    n = lcm(*[d for _, _, d in verts]) if verts else 1
    comps: list[CombinatorialSurface] = []
    for v, T, d in verts:
        if n // d > 1:
            plan.append(f"vertex {v}: {n // d} disjoint copies to reach degree {n}")
        comps += split_components(disjoint_copies(T, n // d))

    for e in sorted(G.edges, key=lambda e: e.name):
        k = [k for k, (name, _) in enumerate(G.ends) if name == e.name][0]
        if ivec[k] == 0:
            continue
        ftag, gtag = f"{e.name}.from", f"{e.name}.to"
        tags = {ftag, gtag}
        involved = [i for i, C in enumerate(comps) if _boundaries_by_tag(C, tags)]
        for i in involved:
            C = comps[i]
            if C.chi() == 0 and {bc.tag for bc in C.boundary_components()} >= tags:
                fdeg = next(bc.degree for bc in C.boundary_components() if bc.tag == ftag)
                gdeg = next(bc.degree for bc in C.boundary_components() if bc.tag == gtag)
                plan.append(f"edge {e.name}: an annulus joins both ends")
                return NonHyperbolicWitness(
                    fdeg, gdeg, e.name,
                    f"an annulus runs from end from of {e.name} (degree {fdeg}) to end to "
                    f"(degree {gdeg}); with the stable letter this gives b a^{fdeg} b^-1 = a^{gdeg}")

        fdegs = sorted(bc.degree for i in involved for _, bc in _boundaries_by_tag(comps[i], {ftag}))
        gdegs = sorted(bc.degree for i in involved for _, bc in _boundaries_by_tag(comps[i], {gtag}))
        if fdegs != gdegs:
            # pre-covers so that each family comes in equal-degree pairs
            pre: dict[int, tuple[CombinatorialSurface, int]] = {}
            for i in involved:
                C = comps[i]
                if C.chi() < 0 and _needs_pairing(C, tags):
                    f = 1
                    spec = positive_genus_spec(C)
                    if spec is not None:
                        C = cyclic_cover(C, spec)
                        f *= spec.modulus
                        plan.append(f"edge {e.name}: genus cover of modulus {spec.modulus}, shifts {list(spec.shifts)}")
                    C = pairing_cover(C)
                    f *= 2
                    pre[i] = (C, f)
            L = lcm(*[f for _, f in pre.values()]) if pre else 1
            if L > 1:
                plan.append(f"edge {e.name}: pairing covers, every other piece copied to keep degree {n * L}")
                new = []
                for i, C in enumerate(comps):
                    if i in pre:
                        Cp, f = pre[i]
                        new += split_components(disjoint_copies(Cp, L // f))
                    else:
                        new += [C] * L
                comps = new
                n *= L
            involved = [i for i, C in enumerate(comps) if _boundaries_by_tag(C, tags)]
            N = lcm(*[bc.degree for i in involved for _, bc in _boundaries_by_tag(comps[i], tags)])
            plan.append(f"edge {e.name}: cyclic covers of modulus N = {N}")
            new = []
            for i, C in enumerate(comps):
                if i in involved:
                    shifts = _pair_phi(C, tags)
                    new += split_components(cyclic_cover(C, CoverSpec(N, shifts)))
                else:
                    new += [C] * N
            comps = new
            n *= N
        # glue every from-circle to a to-circle of equal degree
        U = disjoint_union(comps)
        bcs = U.boundary_components()
        fs = sorted((bc.degree, bc.start, k) for k, bc in enumerate(bcs) if bc.tag == ftag)
        gs = sorted((bc.degree, bc.start, k) for k, bc in enumerate(bcs) if bc.tag == gtag)
        if [d for d, _, _ in fs] != [d for d, _, _ in gs]:
            raise AssertionError(f"edge {e.name}: boundary degrees do not match after covering")
        if sum(d for d, _, _ in fs) != n * abs(ivec[k]):
            raise AssertionError(f"edge {e.name}: boundary degree total differs from n * |n_e|")
        plan.append(f"edge {e.name}: glue {len(fs)} pairs of circles, degrees {[d for d, _, _ in fs]}")
        U = glue_along(U, [(a[2], b[2]) for a, b in zip(fs, gs)], {"edge": e.name})
        comps = split_components(U)

    S = disjoint_union(comps)
    if not S.is_closed():
        raise AssertionError("surface still has boundary after every edge was glued")
    data = S.component_data()
    chi = S.chi_minus()
    wrapping = {}
    for info in S.face_info:
        if info.get("kind") == "annulus":
            wrapping[info["edge"]] = wrapping.get(info["edge"], 0) + info["degrees"][0]
    for k, (name, end) in enumerate(G.ends):
        if end == "from" and wrapping.get(name, 0) != n * abs(ivec[k]):
            raise AssertionError(f"edge {name}: total wrapping {wrapping.get(name, 0)} != {n * abs(ivec[k])}")
    result = ClosedSurfaceResult(S, n * D, chi, [c["genus"] for c in data], norm, wrapping, plan)
    plan.append(f"closed: {len(data)} components, genus {result.genera}, n = {result.n}, "
                f"-2 chi/n = {result.certificate}")
    if norm == 0 and chi == 0:
        return NormZero("every piece is an annulus or torus; the class has norm zero")
    if not result.ok:
        raise AssertionError(f"certificate fails: {result.certificate} != {norm}")
    return result


def certify(result, G: GraphOfGroups, A) -> bool:
    """Recheck a closed-surface result against the surface it carries and an independent norm."""
    if not isinstance(result, ClosedSurfaceResult):
        raise TypeError("only closed-surface results carry a certificate")
    S = result.surface
    if not S.is_closed():
        return False
    chi = S.chi_minus()
    if chi != result.chi:
        return False
    return Fraction(-2 * chi, result.n) == gt_norm(G, A)


def glue_plan_report(G: GraphOfGroups, A) -> str:
    """Text account of the choices made by :func:`build_closed_surface`."""
    out = build_closed_surface(G, A)
    if isinstance(out, ClosedSurfaceResult):
        lines = list(out.plan)
        lines.append("certificate OK" if out.ok else "certificate FAILED")
    elif isinstance(out, NonHyperbolicWitness):
        lines = [f"witness {out.kind} at edge {out.location}", out.explanation]
    else:
        lines = [f"norm zero: {out.explanation}"]
    return "\n".join(lines)
