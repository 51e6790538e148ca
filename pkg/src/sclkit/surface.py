"""Combinatorial oriented surfaces built from polygonal faces.

A surface is a set of faces, each a cyclic list of sides (half-edges).
Interior sides are glued in pairs with opposite orientations; boundary
sides carry a label ``(tag, j)`` saying they run along letter ``j`` of the
loop ``tag``.  Rectangles and polygons from the scl LP are faces, as are the
edge annuli inserted when surfaces are glued together.

Covers, disjoint unions and gluings all return new surfaces.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from . import exact


class SurfaceError(RuntimeError):
    pass


class MalformedSolution(SurfaceError):
    pass


class UnbalancedAssignment(SurfaceError):
    pass


class SearchExhausted(SurfaceError):
    pass


class NoGenus(SurfaceError):
    pass


@dataclass(frozen=True)
class BoundaryComponent:
    tag: object
    degree: int
    sides: tuple[int, ...]

    @property
    def start(self) -> int:
        return min(self.sides)


@dataclass(frozen=True)
class CoverSpec:
    """Regular Z/N cover prescribed by its values on the boundary components."""

    modulus: int
    shifts: tuple[int, ...]

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be >= 1")


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class CombinatorialSurface:
    def __init__(self, faces: Sequence[Sequence[int]], partner: Sequence[int],
                 labels: Sequence, face_info: Sequence[dict], loops: dict):
        self.faces = [tuple(f) for f in faces]
        self.partner = list(partner)
        self.labels = list(labels)
        self.face_info = [dict(d) for d in face_info]
        self.loops = {k: tuple(v) for k, v in loops.items()}
        H = len(self.partner)
        self.next = [-1] * H
        self.face_of = [-1] * H
        for f, sides in enumerate(self.faces):
            for k, h in enumerate(sides):
                self.next[h] = sides[(k + 1) % len(sides)]
                self.face_of[h] = f
        self._check()

    def _check(self):
        H = len(self.partner)
        if any(x < 0 for x in self.face_of):
            raise SurfaceError("every side must belong to exactly one face")
        for h, p in enumerate(self.partner):
            if p >= 0 and (p == h or self.partner[p] != h):
                raise SurfaceError(f"gluing is not an involution at side {h}")
            if p < 0 and self.labels[h] is None:
                raise SurfaceError(f"boundary side {h} has no label")
        if sum(len(f) for f in self.faces) != H:
            raise SurfaceError("sides are shared between faces")

    # -------------------------------------------------------------- counts
    @property
    def num_sides(self) -> int:
        return len(self.partner)

    def _vertex_classes(self) -> _UnionFind:
        uf = _UnionFind(self.num_sides)
        for h, p in enumerate(self.partner):
            if p > h:
                uf.union(h, self.next[p])
                uf.union(self.next[h], p)
        return uf

    def components(self) -> list[list[int]]:
        """Faces of each connected component, ordered by smallest face."""
        uf = _UnionFind(len(self.faces))
        for h, p in enumerate(self.partner):
            if p >= 0:
                uf.union(self.face_of[h], self.face_of[p])
        groups: dict[int, list[int]] = {}
        for f in range(len(self.faces)):
            groups.setdefault(uf.find(f), []).append(f)
        return sorted(groups.values(), key=lambda g: g[0])

    def component_of_faces(self) -> list[int]:
        out = [0] * len(self.faces)
        for k, comp in enumerate(self.components()):
            for f in comp:
                out[f] = k
        return out

    def euler_characteristic(self, faces: Iterable[int] | None = None) -> int:
        faces = range(len(self.faces)) if faces is None else faces
        sides = [h for f in faces for h in self.faces[f]]
        uf = self._vertex_classes()
        V = len({uf.find(h) for h in sides})
        E = sum(1 for h in sides if self.partner[h] < 0) + sum(1 for h in sides if self.partner[h] >= 0) // 2
        return V - E + len(list(faces)) if not isinstance(faces, range) else V - E + len(faces)

    def chi(self) -> int:
        return self.euler_characteristic()

    def chi_minus(self) -> int:
        return sum(min(0, c["chi"]) for c in self.component_data())

    def component_data(self) -> list[dict]:
        """Per component: faces, Euler characteristic, boundary count and genus."""
        comp_of = self.component_of_faces()
        bcount = [0] * (max(comp_of) + 1 if comp_of else 0)
        for bc in self.boundary_components():
            bcount[comp_of[self.face_of[bc.sides[0]]]] += 1
        out = []
        for k, faces in enumerate(self.components()):
            chi = self.euler_characteristic(faces)
            b = bcount[k]
            twice_genus = 2 - chi - b
            if twice_genus % 2 or twice_genus < 0:
                raise SurfaceError(f"component {k} is not an orientable surface (chi={chi}, b={b})")
            out.append({"faces": faces, "chi": chi, "boundary": b, "genus": twice_genus // 2})
        return out

    def genus(self) -> int:
        return sum(c["genus"] for c in self.component_data())

    def is_closed(self) -> bool:
        return all(p >= 0 for p in self.partner)

    # ------------------------------------------------------------ boundary
    def boundary_next(self, h: int) -> int:
        g = self.next[h]
        while self.partner[g] >= 0:
            g = self.next[self.partner[g]]
        return g

    def boundary_components(self) -> list[BoundaryComponent]:
        seen = set()
        out = []
        for h in range(self.num_sides):
            if self.partner[h] >= 0 or h in seen:
                continue
            cyc = [h]
            seen.add(h)
            g = self.boundary_next(h)
            while g != h:
                cyc.append(g)
                seen.add(g)
                g = self.boundary_next(g)
            tag, j0 = self.labels[h]
            word = self.loops[tag]
            for k, g in enumerate(cyc):
                t, j = self.labels[g]
                if t != tag or j != (j0 + k) % len(word):
                    raise SurfaceError("boundary does not read a power of a single loop")
            if len(cyc) % len(word):
                raise SurfaceError("boundary stops part way through its loop")
            out.append(BoundaryComponent(tag, len(cyc) // len(word), tuple(cyc)))
        return out

    # ----------------------------------------------------------- cocycles
    def _crossing_chains(self):
        """Crossing sequences around interior vertices and along boundary circles.

        Returns ``(interior, boundary)``; each chain is a list of glued sides
        crossed, in order, by a small loop around an interior vertex or just
        inside a boundary component (aligned with :meth:`boundary_components`).
        """
        used = set()
        boundary = []
        for bc in self.boundary_components():
            chain = []
            for h in bc.sides:
                g = self.next[h]
                while self.partner[g] >= 0:
                    chain.append(g)
                    used.add(g)
                    g = self.next[self.partner[g]]
            boundary.append(chain)
        interior = []
        for h in range(self.num_sides):
            if self.partner[h] < 0 or h in used:
                continue
            chain = []
            g = h
            while g not in used:
                used.add(g)
                chain.append(g)
                g = self.next[self.partner[g]]
            if g != h:
                raise SurfaceError("vertex link is not a circle")
            interior.append(chain)
        return interior, boundary

    def _gauge(self):
        """Glued pairs outside a spanning forest of the dual graph, and a column per pair."""
        seen = [False] * len(self.faces)
        tree = set()
        for root in range(len(self.faces)):
            if seen[root]:
                continue
            seen[root] = True
            stack = [root]
            while stack:
                f = stack.pop()
                for h in self.faces[f]:
                    p = self.partner[h]
                    if p >= 0 and not seen[self.face_of[p]]:
                        seen[self.face_of[p]] = True
                        tree.add(min(h, p))
                        stack.append(self.face_of[p])
        free = [h for h, p in enumerate(self.partner) if p > h and h not in tree]
        return free, {h: k for k, h in enumerate(free)}

    def _cocycle_rows(self, chains, col):
        rows = []
        for chain in chains:
            row = [0] * len(col)
            for g in chain:
                rep = min(g, self.partner[g])
                if rep in col:
                    row[col[rep]] += 1 if g == rep else -1
            rows.append(row)
        return rows

    def _apply_cocycle(self, N: int, shift: dict[int, int]) -> "CombinatorialSurface":
        """The cover in which crossing side ``h`` moves from sheet ``k`` to ``k + shift[h]``."""
        H = self.num_sides
        faces, partner, labels, info = [], [-1] * (H * N), [], []
        for k in range(N):
            for f, sides in enumerate(self.faces):
                faces.append([h + k * H for h in sides])
                info.append(dict(self.face_info[f], sheet=k))
            labels.extend(self.labels)
        for h, p in enumerate(self.partner):
            if p < 0:
                continue
            s = shift.get(h, 0) if h < p else -shift.get(p, 0)
            for k in range(N):
                partner[h + k * H] = p + ((k + s) % N) * H
        return CombinatorialSurface(faces, partner, labels, info, self.loops)

    def cocycle_for(self, spec: CoverSpec) -> dict[int, int] | None:
        interior, boundary = self._crossing_chains()
        free, col = self._gauge()
        rows = self._cocycle_rows(interior, col) + self._cocycle_rows(boundary, col)
        rhs = [0] * len(interior) + [v % spec.modulus for v in spec.shifts]
        if not free:
            ok = all(r % spec.modulus == 0 for r in rhs)
            return {} if ok else None
        x = exact.solve_mod_n(rows, rhs, spec.modulus)
        if x is None:
            return None
        return {h: x[k] for k, h in enumerate(free)}

    def homology_rank_mod2_closed_classes(self, faces: Sequence[int] | None = None) -> int:
        """Dimension of the classes in H^1(S; Z/2) vanishing on every boundary circle.

        Equals ``2 * genus``; computed from the cell structure alone.
        """
        interior, boundary = self._crossing_chains()
        free, col = self._gauge()
        if faces is not None:
            keep = set(faces)
            sel = [h for h in free if self.face_of[h] in keep]
            col = {h: k for k, h in enumerate(sel)}
            chains = [c for c in interior + boundary if c and self.face_of[c[0]] in keep]
        else:
            chains = interior + boundary
        rows = self._cocycle_rows(chains, col)
        return len(exact.nullspace_mod_p(rows, 2, ncols=len(col)))

    # --------------------------------------------------------- derived ones
    def copy_info(self) -> dict:
        return {"faces": len(self.faces), "sides": self.num_sides}

    def to_json(self) -> dict:
        comps = self.component_data()
        return {
            "loops": [{"tag": t, "word": list(w)} for t, w in self.loops.items()],
            "faces": [{"sides": list(f), **{k: v for k, v in info.items()}}
                      for f, info in zip(self.faces, self.face_info)],
            "partner": self.partner,
            "labels": [None if lab is None else [lab[0], lab[1]] for lab in self.labels],
            "boundary": [{"tag": bc.tag, "degree": bc.degree, "sides": list(bc.sides)}
                         for bc in self.boundary_components()],
            "components": [{"chi": c["chi"], "genus": c["genus"], "boundary": c["boundary"]} for c in comps],
            "chi": self.chi(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "CombinatorialSurface":
        loops = {d["tag"]: tuple(d["word"]) for d in data["loops"]}
        faces = [d["sides"] for d in data["faces"]]
        info = [{k: v for k, v in d.items() if k != "sides"} for d in data["faces"]]
        labels = [None if lab is None else (lab[0], lab[1]) for lab in data["labels"]]
        return cls(faces, data["partner"], labels, info, loops)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def __eq__(self, other):
        if not isinstance(other, CombinatorialSurface):
            return NotImplemented
        return (self.faces == other.faces and self.partner == other.partner
                and self.labels == other.labels and self.face_info == other.face_info
                and self.loops == other.loops)

    def summary(self) -> str:
        comps = self.component_data()
        parts = [f"chi={self.chi()}", f"components={len(comps)}"]
        parts.append("genus=" + ",".join(str(c["genus"]) for c in comps))
        bcs = self.boundary_components()
        if bcs:
            parts.append("boundary=" + ",".join(f"{bc.tag}^{bc.degree}" for bc in bcs))
        return " ".join(parts)

    def __repr__(self):
        return f"CombinatorialSurface({self.summary()})"


# ----------------------------------------------------------------- builders

def assemble(result, tags: Sequence | None = None) -> CombinatorialSurface:
    """Instantiate the integral extremal solution of an scl LP as a surface.

    ``result`` is an :class:`~sclkit.engine.SclResult` (its extremal
    solution is used) or a tuple ``(problem, rect_counts, cycle_counts)``.
    Boundary sides are labelled with the loop tags of the problem.
    """
    if isinstance(result, tuple):
        problem, rect_counts, cycle_counts = result
    else:
        problem, rect_counts, cycle_counts = result.problem, result.extremal_rects, result.extremal_cycles
    loops = problem.loops
    tags = [loop.tag for loop in loops] if tags is None else list(tags)
    faces, partner, labels, info = [], [], [], []
    slots: dict[int, list[int]] = {}

    def side(label=None) -> int:
        partner.append(-1)
        labels.append(label)
        return len(partner) - 1

    for r, count in enumerate(rect_counts):
        if count < 0:
            raise MalformedSolution("negative rectangle weight")
        p, q = problem.rectangles[r]
        (ip, jp), (iq, jq) = problem.positions[p], problem.positions[q]
        for _ in range(int(count)):
            top = side((tags[ip], jp))
            s1 = side()
            bottom = side((tags[iq], jq))
            s2 = side()
            faces.append([top, s1, bottom, s2])
            info.append({"kind": "rect", "rect": r})
            slots.setdefault(2 * r, []).append(s1)
            slots.setdefault(2 * r + 1, []).append(s2)
    used = {v: 0 for v in slots}
    for cyc, count in cycle_counts:
        for _ in range(int(count)):
            poly = []
            for v in cyc:
                k = used.get(v, 0)
                if k >= len(slots.get(v, [])):
                    raise MalformedSolution(f"more polygon sides than rectangle sides at node {v}")
                used[v] = k + 1
                h = side()
                other = slots[v][k]
                partner[h], partner[other] = other, h
                poly.append(h)
            faces.append(poly)
            info.append({"kind": "poly", "cycle": list(cyc)})
    for v, hs in slots.items():
        if used.get(v, 0) != len(hs):
            raise MalformedSolution(f"node {v}: {len(hs)} rectangle sides but {used.get(v, 0)} polygon sides")
    return CombinatorialSurface(faces, partner, labels, info,
                                {tags[i]: loop.word for i, loop in enumerate(loops)})


def euler_characteristic(S: CombinatorialSurface) -> int:
    return S.chi()


def chi_minus(S: CombinatorialSurface) -> int:
    return S.chi_minus()


def boundary_components(S: CombinatorialSurface) -> list[BoundaryComponent]:
    return S.boundary_components()


def disjoint_union(surfaces: Sequence[CombinatorialSurface]) -> CombinatorialSurface:
    faces, partner, labels, info, loops = [], [], [], [], {}
    for S in surfaces:
        off = len(partner)
        faces += [[h + off for h in f] for f in S.faces]
        partner += [p + off if p >= 0 else -1 for p in S.partner]
        labels += S.labels
        info += S.face_info
        for t, w in S.loops.items():
            if loops.setdefault(t, w) != w:
                raise SurfaceError(f"loop tag {t!r} names two different words")
    return CombinatorialSurface(faces, partner, labels, info, loops)


def disjoint_copies(S: CombinatorialSurface, k: int) -> CombinatorialSurface:
    if k < 1:
        raise ValueError("need at least one copy")
    if k == 1:
        return S
    return disjoint_union([S] * k)


def subsurface(S: CombinatorialSurface, faces: Sequence[int]) -> CombinatorialSurface:
    """The union of whole components given by ``faces``, renumbered."""
    faces = sorted(faces)
    keep = [h for f in faces for h in S.faces[f]]
    index = {h: k for k, h in enumerate(keep)}
    new_faces = [[index[h] for h in S.faces[f]] for f in faces]
    partner = []
    for h in keep:
        p = S.partner[h]
        if p >= 0 and p not in index:
            raise SurfaceError("faces do not form whole components")
        partner.append(index[p] if p >= 0 else -1)
    tags = {S.labels[h][0] for h in keep if S.labels[h] is not None}
    loops = {t: w for t, w in S.loops.items() if t in tags}
    return CombinatorialSurface(new_faces, partner, [S.labels[h] for h in keep],
                                [S.face_info[f] for f in faces], loops)


def split_components(S: CombinatorialSurface) -> list[CombinatorialSurface]:
    return [subsurface(S, comp) for comp in S.components()]


def cyclic_cover(S: CombinatorialSurface, spec: CoverSpec) -> CombinatorialSurface:
    """The regular Z/N cover whose monodromy around boundary ``k`` is ``spec.shifts[k]``.

    A boundary circle with value ``m`` lifts to ``gcd(m, N)`` circles, each
    wrapping it ``N / gcd(m, N)`` times.
    """
    bcs = S.boundary_components()
    if len(spec.shifts) != len(bcs):
        raise ValueError(f"need one value per boundary component ({len(bcs)})")
    N = spec.modulus
    comp_of = S.component_of_faces()
    sums: dict[int, int] = {}
    for bc, v in zip(bcs, spec.shifts):
        c = comp_of[S.face_of[bc.sides[0]]]
        sums[c] = (sums.get(c, 0) + v) % N
    if any(sums.values()):
        raise UnbalancedAssignment("boundary values must sum to zero on each component")
    if N == 1:
        return S
    shift = S.cocycle_for(spec)
    if shift is None:
        raise UnbalancedAssignment("no cocycle extends the boundary values")
    return S._apply_cocycle(N, shift)


def lifted_degrees(S: CombinatorialSurface, spec: CoverSpec) -> list[tuple[int, int]]:
    """Predicted ``(preimage count, degree over the loop)`` per boundary component."""
    out = []
    for bc, v in zip(S.boundary_components(), spec.shifts):
        order = spec.modulus // gcd(v % spec.modulus, spec.modulus)
        out.append((spec.modulus // order, bc.degree * order))
    return out


def positive_genus_spec(S: CombinatorialSurface, bound: int = 12) -> CoverSpec | None:
    """A cyclic cover spec making the connected surface ``S`` have positive genus; None if it already has."""
    comps = S.component_data()
    if len(comps) != 1:
        raise SurfaceError("expected a connected surface")
    chi, b, g = comps[0]["chi"], comps[0]["boundary"], comps[0]["genus"]
    if g >= 1:
        return None
    if chi >= 0:
        raise SearchExhausted("surfaces with chi >= 0 have no positive-genus cover")
    for N in range(2, bound + 1):
        for shifts in itertools.product(range(N), repeat=b):
            if sum(shifts) % N:
                continue
            g_all = 0
            for v in shifts:
                g_all = gcd(g_all, v)
            if gcd(g_all, N) != 1:
                continue  # disconnected cover
            b_up = sum(gcd(v, N) for v in shifts)
            if 2 - N * chi - b_up >= 2:
                return CoverSpec(N, tuple(shifts))
    raise SearchExhausted(f"no positive-genus cyclic cover with modulus <= {bound}")


def ensure_positive_genus(S: CombinatorialSurface, bound: int = 12) -> CombinatorialSurface:
    spec = positive_genus_spec(S, bound)
    return S if spec is None else cyclic_cover(S, spec)


def pairing_cover(S: CombinatorialSurface) -> CombinatorialSurface:
    """Degree-two cover, trivial around every boundary circle and connected over each component.

    Each boundary circle gets two preimages of its own degree.  Every
    component needs genus at least one.
    """
    interior, boundary = S._crossing_chains()
    free, col = S._gauge()
    shift: dict[int, int] = {}
    for comp in S.component_data():
        if comp["genus"] < 1:
            raise NoGenus("a genus-zero component has no such double cover")
        keep = set(comp["faces"])
        sel = [h for h in free if S.face_of[h] in keep]
        ccol = {h: k for k, h in enumerate(sel)}
        chains = [c for c in interior + boundary if c and S.face_of[c[0]] in keep]
        rows = S._cocycle_rows(chains, ccol)
        basis = exact.nullspace_mod_p(rows, 2, ncols=len(sel))
        if not basis:
            raise NoGenus("no class vanishing on the boundary")
        for h, v in zip(sel, basis[0]):
            if v:
                shift[h] = 1
    return S._apply_cocycle(2, shift)


def glue_along(S: CombinatorialSurface, pairs: Sequence[tuple[int, int]], info: dict | None = None) -> CombinatorialSurface:
    """Join boundary components ``(i, j)`` of ``S`` through an inserted annulus each.

    Each annulus is one face: the sides of ``i`` in reverse, a cut arc, the
    sides of ``j`` in reverse, and the cut arc again.
    """
    bcs = S.boundary_components()
    faces = [list(f) for f in S.faces]
    partner = list(S.partner)
    labels = list(S.labels)
    finfo = list(S.face_info)
    used = set()

    def side() -> int:
        partner.append(-1)
        labels.append(None)
        return len(partner) - 1

    for i, j in pairs:
        if i == j or i in used or j in used:
            raise SurfaceError("each boundary component is glued at most once")
        used.update((i, j))
        face = []
        for h in reversed(bcs[i].sides):
            a = side()
            partner[a], partner[h] = h, a
            face.append(a)
        x = side()
        face.append(x)
        for h in reversed(bcs[j].sides):
            a = side()
            partner[a], partner[h] = h, a
            face.append(a)
        x2 = side()
        face.append(x2)
        partner[x], partner[x2] = x2, x
        faces.append(face)
        finfo.append(dict(info or {}, kind="annulus", ends=[bcs[i].tag, bcs[j].tag],
                          degrees=[bcs[i].degree, bcs[j].degree]))
    return CombinatorialSurface(faces, partner, labels, finfo, S.loops)
