"""Dimer models on the torus: validation, zigzag cycles, consistency, strips, duality.

A dimer is a quiver embedded in a closed oriented surface whose complementary
faces carry coherent boundary orientations, alternately positive and negative.
Face boundaries are stored in traversal order (consecutive arrows compose);
arrows on the torus carry lattice shifts recording how the embedding wraps the
fundamental domain.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional

Vec = tuple[int, int]


class DimerError(Exception):
    """Raised for structurally unusable input or internal consistency failures."""


def vec_add(u: Vec, v: Vec) -> Vec:
    return (u[0] + v[0], u[1] + v[1])


def vec_sub(u: Vec, v: Vec) -> Vec:
    return (u[0] - v[0], u[1] - v[1])


def vec_neg(u: Vec) -> Vec:
    return (-u[0], -u[1])


def cross(u: Vec, v: Vec) -> int:
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Vec, v: Vec) -> int:
    return u[0] * v[0] + u[1] * v[1]


def is_primitive(u: Vec) -> bool:
    return gcd(abs(u[0]), abs(u[1])) == 1


def idkey(x):
    """Sort key usable for mixed int/str identifiers."""
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


def ccw_angle_key(v: Vec):
    """Total order on nonzero lattice vectors by angle in [0, 2*pi).

    Vectors along the positive x-axis come first; ties within a half-plane are
    resolved by the cross product (exact integer comparison, no floats).
    """
    x, y = v
    if x == 0 and y == 0:
        raise ValueError("zero vector has no direction")
    if y == 0:
        sector = 0 if x > 0 else 2
    elif y > 0:
        sector = 1
    else:
        sector = 3
    # within a sector, larger x/y ratio = smaller angle; compare via slope
    return (sector, Fraction(-x, y) if y != 0 else Fraction(0))


@dataclass(frozen=True)
class Arrow:
    id: object
    tail: object
    head: object
    shift: Optional[Vec]


@dataclass(frozen=True)
class Face:
    sign: int  # +1 or -1
    boundary: tuple  # arrow ids in traversal order


@dataclass(frozen=True)
class Issue:
    code: str
    message: str
    witness: object = None


@dataclass
class ValidationReport:
    ok: bool
    issues: list[Issue] = field(default_factory=list)

    def codes(self) -> set[str]:
        return {i.code for i in self.issues}


@dataclass(frozen=True)
class ZigzagCycle:
    """A zigzag cycle, stored as its traversal (zig1, zag1, zig2, zag2, ...).

    Consecutive pairs (zig, zag) lie on negative faces and (zag, next zig) on
    positive faces.  ``homology`` is the sum of shifts; it is None for dimers
    without shift data (e.g. dual dimers).
    """

    arrows: tuple
    zigs: tuple
    zags: tuple
    homology: Optional[Vec]
    class_index: int = 0  # 1-based; [Z] = -eta_i
    parallel_index: int = 0  # 1-based position within the parallel family

    def __len__(self) -> int:
        return len(self.arrows)

    def word(self) -> tuple:
        return self.arrows


@dataclass(frozen=True)
class StripDecomposition:
    class_index: int
    # strips[j-1] = (face indices, vertex ids) of the closed strip E_{i,j}
    strips: tuple
    # cycles[j-1] = the parallel cycle Z_{i,j} whose positive side faces strip j
    cycles: tuple
    # boundary[j-1] = (O+(Z_{i,j}), O-(Z_{i,j+1})) as arrow-id tuples
    boundary: tuple


def cyclic_rotations(word: tuple) -> list[tuple]:
    return [word[i:] + word[:i] for i in range(len(word))]


def cyclic_equal(a: Iterable, b: Iterable) -> bool:
    a, b = tuple(a), tuple(b)
    return len(a) == len(b) and (len(a) == 0 or a in cyclic_rotations(b))


def canonical_rotation(word: tuple) -> tuple:
    if not word:
        return word
    return min(cyclic_rotations(word), key=lambda w: tuple(idkey(x) for x in w))


class Dimer:
    """Immutable dimer model; derived combinatorial structure built lazily."""

    def __init__(self, name: str, vertices, arrows, faces):
        self.name = name
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        self.faces = tuple(faces)
        self.arrow_by_id = {}
        for a in self.arrows:
            self.arrow_by_id.setdefault(a.id, a)
        self._report: Optional[ValidationReport] = None
        self._structure = None

    # -- basic accessors -------------------------------------------------

    @property
    def has_shifts(self) -> bool:
        return all(a.shift is not None for a in self.arrows)

    def tail(self, aid) -> object:
        return self.arrow_by_id[aid].tail

    def head(self, aid) -> object:
        return self.arrow_by_id[aid].head

    def shift(self, aid) -> Vec:
        s = self.arrow_by_id[aid].shift
        if s is None:
            raise DimerError(f"arrow {aid!r} carries no shift data")
        return s

    def word_shift(self, word: Iterable) -> Vec:
        total = (0, 0)
        for aid in word:
            total = vec_add(total, self.shift(aid))
        return total

    def is_composable(self, word) -> bool:
        word = tuple(word)
        if not word:
            return False
        if any(aid not in self.arrow_by_id for aid in word):
            return False
        return all(self.head(word[i]) == self.tail(word[i + 1]) for i in range(len(word) - 1))

    def is_closed(self, word) -> bool:
        word = tuple(word)
        return self.is_composable(word) and self.head(word[-1]) == self.tail(word[0])

    # -- validation ------------------------------------------------------

    def validate(self) -> ValidationReport:
        if self._report is None:
            self._report = _validate(self)
        return self._report

    def require_valid(self):
        rep = self.validate()
        if not rep.ok:
            raise DimerError(
                f"dimer {self.name!r} is invalid: "
                + "; ".join(i.message for i in rep.issues)
            )

    # -- face incidence / successor maps ----------------------------------

    def _struct(self):
        if self._structure is None:
            self.require_valid()
            pos_face = {}
            neg_face = {}
            next_pos = {}
            next_neg = {}
            for fi, f in enumerate(self.faces):
                table = pos_face if f.sign > 0 else neg_face
                succ = next_pos if f.sign > 0 else next_neg
                n = len(f.boundary)
                for i, aid in enumerate(f.boundary):
                    table[aid] = fi
                    succ[aid] = f.boundary[(i + 1) % n]
            self._structure = (pos_face, neg_face, next_pos, next_neg)
        return self._structure

    def pos_face_of(self, aid) -> int:
        return self._struct()[0][aid]

    def neg_face_of(self, aid) -> int:
        return self._struct()[1][aid]

    def next_pos(self, aid):
        return self._struct()[2][aid]

    def next_neg(self, aid):
        return self._struct()[3][aid]

    def face_vertices(self, fi: int) -> set:
        return {self.tail(aid) for aid in self.faces[fi].boundary}


def _validate(d: Dimer) -> ValidationReport:
    issues: list[Issue] = []

    seen = set()
    for a in d.arrows:
        if a.id in seen:
            issues.append(Issue("duplicate_arrow", f"duplicate arrow id {a.id!r}", a.id))
        seen.add(a.id)
        for v in (a.tail, a.head):
            if v not in d.vertices:
                issues.append(
                    Issue("unknown_vertex", f"arrow {a.id!r} references unknown vertex {v!r}", a.id)
                )
    if len(set(d.vertices)) != len(d.vertices):
        issues.append(Issue("duplicate_vertex", "duplicate vertex id", None))

    pos_count = {a.id: 0 for a in d.arrows}
    neg_count = {a.id: 0 for a in d.arrows}
    for fi, f in enumerate(d.faces):
        if len(f.boundary) < 3:
            issues.append(
                Issue("face_too_short", f"face {fi} has boundary length {len(f.boundary)} < 3", fi)
            )
        for aid in f.boundary:
            if aid not in d.arrow_by_id:
                issues.append(
                    Issue("unknown_arrow", f"face {fi} references unknown arrow {aid!r}", fi)
                )
            elif f.sign > 0:
                pos_count[aid] += 1
            else:
                neg_count[aid] += 1
        if len(set(f.boundary)) != len(f.boundary):
            issues.append(
                Issue("repeated_arrow_in_face", f"face {fi} repeats an arrow id", fi)
            )
    if any(i.code in ("unknown_arrow", "duplicate_arrow", "unknown_vertex") for i in issues):
        return ValidationReport(False, issues)

    for aid in d.arrow_by_id:
        if pos_count[aid] != 1 or neg_count[aid] != 1:
            issues.append(
                Issue(
                    "face_cover",
                    f"arrow {aid!r} lies on {pos_count[aid]} positive and "
                    f"{neg_count[aid]} negative faces (want 1 and 1)",
                    aid,
                )
            )

    for fi, f in enumerate(d.faces):
        n = len(f.boundary)
        for i in range(n):
            a, b = f.boundary[i], f.boundary[(i + 1) % n]
            if d.head(a) != d.tail(b):
                issues.append(
                    Issue(
                        "face_not_composable",
                        f"face {fi}: arrows {a!r} -> {b!r} do not compose",
                        fi,
                    )
                )
                break

    # Euler characteristic |V| - |E| + |F| and single-disk vertex links.
    chi = len(d.vertices) - len(d.arrows) + len(d.faces)
    if d.has_shifts and chi != 0:
        issues.append(Issue("euler", f"Euler characteristic {chi} != 0 (not a torus)", chi))

    if not any(i.code == "face_not_composable" for i in issues):
        link_issue = _check_links(d)
        if link_issue is not None:
            issues.append(link_issue)

    if d.has_shifts:
        for fi, f in enumerate(d.faces):
            total = (0, 0)
            for aid in f.boundary:
                total = vec_add(total, d.shift(aid))
            if total != (0, 0):
                issues.append(
                    Issue("face_shift", f"face {fi} shift sum {total} != (0, 0)", fi)
                )

    if not _is_connected(d):
        issues.append(Issue("disconnected", "underlying quiver is not connected", None))

    return ValidationReport(not issues, issues)


def _check_links(d: Dimer) -> Optional[Issue]:
    """Each vertex link must be a single cycle (one disk neighborhood)."""
    corners: dict = {v: [] for v in d.vertices}
    for f in d.faces:
        n = len(f.boundary)
        for i in range(n):
            a, b = f.boundary[i], f.boundary[(i + 1) % n]
            corners[d.head(a)].append((a, b))
    for v in d.vertices:
        adj: dict = {}
        for a, b in corners[v]:
            adj.setdefault(("h", a), []).append(("t", b))
            adj.setdefault(("t", b), []).append(("h", a))
        if not adj:
            return Issue("isolated_vertex", f"vertex {v!r} lies on no face corner", v)
        if any(len(nb) != 2 for nb in adj.values()):
            return Issue("bad_link", f"vertex {v!r} has a non-circular link", v)
        start = next(iter(adj))
        seen = {start}
        frontier = [start]
        while frontier:
            cur = frontier.pop()
            for nb in adj[cur]:
                if nb not in seen:
                    seen.add(nb)
                    frontier.append(nb)
        if len(seen) != len(adj):
            return Issue("bad_link", f"vertex {v!r} has a disconnected link", v)
    return None


def _is_connected(d: Dimer) -> bool:
    if not d.vertices:
        return False
    adj = {v: set() for v in d.vertices}
    for a in d.arrows:
        if a.tail in adj and a.head in adj:
            adj[a.tail].add(a.head)
            adj[a.head].add(a.tail)
    seen = {d.vertices[0]}
    frontier = [d.vertices[0]]
    while frontier:
        v = frontier.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return len(seen) == len(d.vertices)


def validate_dimer(d: Dimer) -> ValidationReport:
    return d.validate()


# -- zigzag cycles ---------------------------------------------------------


def _zigzag_orbits(d: Dimer) -> list[ZigzagCycle]:
    """Unindexed zigzag cycles: orbits of the alternating successor maps."""
    d.require_valid()
    cycles = []
    seen_zig = set()
    for a in sorted(d.arrow_by_id, key=idkey):
        if a in seen_zig:
            continue
        word = []
        cur = a
        while True:
            zag = d.next_neg(cur)
            word.extend([cur, zag])
            seen_zig.add(cur)
            cur = d.next_pos(zag)
            if cur == a:
                break
        hom = d.word_shift(word) if d.has_shifts else None
        cycles.append(
            ZigzagCycle(
                arrows=tuple(word),
                zigs=tuple(word[0::2]),
                zags=tuple(word[1::2]),
                homology=hom,
            )
        )

    zig_occ = [a for z in cycles for a in z.zigs]
    zag_occ = [a for z in cycles for a in z.zags]
    if sorted(zig_occ, key=idkey) != sorted(d.arrow_by_id, key=idkey) or sorted(
        zag_occ, key=idkey
    ) != sorted(d.arrow_by_id, key=idkey):
        raise DimerError("zigzag orbits do not cover every arrow once as zig and once as zag")
    return cycles


def zigzag_cycles(d: Dimer) -> list[ZigzagCycle]:
    """All zigzag cycles; arrows alternate zig, zag, zig, zag along the traversal.

    A zig is followed by its zag on a negative face, and a zag by the next zig
    on a positive face.  With shift data present, cycles are grouped into
    homology classes -eta_i sorted counterclockwise by the angle of eta_i, and
    numbered within a class by the strip ordering (base vertex's strip first).
    """
    cycles = _zigzag_orbits(d)
    if not d.has_shifts:
        return cycles

    classes = sorted(
        {vec_neg(z.homology) for z in cycles if z.homology != (0, 0)},
        key=ccw_angle_key,
    )
    null = [z for z in cycles if z.homology == (0, 0)]
    indexed: list[ZigzagCycle] = []
    for i, eta in enumerate(classes, start=1):
        members = [z for z in cycles if z.homology == vec_neg(eta)]
        order = _parallel_order(d, members)
        for j, z in enumerate(order, start=1):
            indexed.append(
                ZigzagCycle(z.arrows, z.zigs, z.zags, z.homology, class_index=i, parallel_index=j)
            )
    for z in null:
        indexed.append(z)
    indexed.sort(key=lambda z: (z.class_index, z.parallel_index, idkey(z.arrows[0])))
    return indexed


def _parallel_order(d: Dimer, members: list[ZigzagCycle]) -> list[ZigzagCycle]:
    """Order parallel cycles so the base vertex's strip comes first.

    Strip j sits on the positive side of Z_{i,j}; the negative side of
    Z_{i,j+1} faces the same strip, which yields the cyclic ordering.
    """
    if len(members) == 1:
        return members
    comp_of_face = _strip_components(d, members)
    plus_comp = {}
    minus_comp = {}
    for z in members:
        pf = {d.pos_face_of(z.zags[k]) for k in range(len(z.zags))}
        nf = {d.neg_face_of(z.zigs[k]) for k in range(len(z.zigs))}
        pc = {comp_of_face[f] for f in pf}
        nc = {comp_of_face[f] for f in nf}
        if len(pc) != 1 or len(nc) != 1:
            raise DimerError("parallel cycle touches several strips on one side")
        plus_comp[z.arrows] = pc.pop()
        minus_comp[z.arrows] = nc.pop()
    v0 = d.vertices[0]
    strip_vertices = _strip_vertex_assignment(d, members, comp_of_face)
    start_comp = strip_vertices[v0]
    by_plus = {plus_comp[z.arrows]: z for z in members}
    by_minus = {minus_comp[z.arrows]: z for z in members}
    if len(by_plus) != len(members) or len(by_minus) != len(members):
        raise DimerError("strips do not separate the parallel family")
    # Z_{i,1} faces the base vertex's strip on its positive side; Z_{i,j+1} is
    # the cycle whose negative side faces strip j.
    chain = [by_plus[start_comp]]
    while len(chain) < len(members):
        chain.append(by_minus[plus_comp[chain[-1].arrows]])
    return chain


def _strip_components(d: Dimer, members: list[ZigzagCycle]) -> dict[int, int]:
    """Flood-fill faces across arrows not used by the parallel family."""
    family = {a for z in members for a in z.arrows}
    comp_of_face: dict[int, int] = {}
    comp = 0
    for start in range(len(d.faces)):
        if start in comp_of_face:
            continue
        comp_of_face[start] = comp
        frontier = [start]
        while frontier:
            fi = frontier.pop()
            for aid in d.faces[fi].boundary:
                if aid in family:
                    continue
                for gj in (d.pos_face_of(aid), d.neg_face_of(aid)):
                    if gj not in comp_of_face:
                        comp_of_face[gj] = comp
                        frontier.append(gj)
        comp += 1
    return comp_of_face


def _strip_vertex_assignment(
    d: Dimer, members: list[ZigzagCycle], comp_of_face: dict[int, int]
) -> dict:
    """Assign each vertex to a strip component.

    Vertices on a positive anti-zigzag O+(Z) belong to Z's strip; the rest
    inherit the (unique) strip of their incident faces.
    """
    assignment: dict = {}
    for z in members:
        opos = anti_zigzag_of_cycle(d, z, +1)
        pf = {d.pos_face_of(z.zags[k]) for k in range(len(z.zags))}
        strip = {comp_of_face[f] for f in pf}.pop()
        for aid in opos:
            for v in (d.tail(aid), d.head(aid)):
                if v in assignment and assignment[v] != strip:
                    raise DimerError(f"vertex {v!r} lies on two strip boundaries")
                assignment[v] = strip
    incident: dict = {v: set() for v in d.vertices}
    for fi in range(len(d.faces)):
        for v in d.face_vertices(fi):
            incident[v].add(comp_of_face[fi])
    for v in d.vertices:
        if v in assignment:
            continue
        strips = incident[v]
        if len(strips) != 1:
            raise DimerError(f"vertex {v!r} has faces in several strips and no anti-zigzag")
        assignment[v] = strips.pop()
    return assignment


def anti_zigzag_of_cycle(d: Dimer, z: ZigzagCycle, sign: int) -> tuple:
    """The anti-zigzag O^{sign}(Z): complementary face arcs, concatenated.

    For sign=+1, each pair (zag_l, zig_{l+1}) spans a positive face; the arcs
    complementary to these pairs compose (in reverse pair order) to a closed
    cycle of homology -[Z].  sign=-1 uses the (zig_l, zag_l) negative faces.
    """
    L = len(z.zigs)
    arcs = []
    for k in range(L):
        if sign > 0:
            u, w = z.zags[k], z.zigs[(k + 1) % L]  # (zag, zig) on a positive face
            face = d.faces[d.pos_face_of(u)]
        else:
            u, w = z.zigs[k], z.zags[k]  # (zig, zag) on a negative face
            face = d.faces[d.neg_face_of(u)]
        b = face.boundary
        iu = b.index(u)
        if b[(iu + 1) % len(b)] != w:
            raise DimerError("zigzag pair is not consecutive on its face")
        arc = []
        pos = (iu + 2) % len(b)
        while b[pos] != u:
            arc.append(b[pos])
            pos = (pos + 1) % len(b)
        arcs.append(tuple(arc))
    word: list = []
    for arc in reversed(arcs):
        word.extend(arc)
    # rotate so the word is composable from its own start (it is closed)
    out = tuple(word)
    if out and not d.is_closed(out):
        for rot in cyclic_rotations(out):
            if d.is_closed(rot):
                out = rot
                break
        else:
            raise DimerError("anti-zigzag does not close up")
    return out


def anti_zigzag(d: Dimer, z: ZigzagCycle, sign: int) -> tuple:
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    return anti_zigzag_of_cycle(d, z, sign)


# -- zigzag consistency ----------------------------------------------------


def _ray_occurrences(d: Dimer, e, as_zig: bool):
    """One period of the zig (or zag) ray at e: [(arrow, translate)] and the period shift."""
    occ = []
    cum = (0, 0)
    cur = e
    while True:
        occ.append((cur, cum))
        cum = vec_add(cum, d.shift(cur))
        nxt = d.next_neg(cur) if as_zig else d.next_pos(cur)
        occ.append((nxt, cum))
        cum = vec_add(cum, d.shift(nxt))
        cur = d.next_pos(nxt) if as_zig else d.next_neg(nxt)
        if cur == e:
            break
    return occ, cum


def _solve_parallel(p: int, q: int, dd: int):
    """Nonnegative integer solutions of n*p - m*q = dd, smallest first; None if none."""
    g = gcd(abs(p), abs(q))
    if dd % g:
        return None
    if p > 0 > q or (p < 0 < q):
        # n*p and -m*q have the same sign, so |n|, |m| are bounded by |dd|
        if dd * p < 0:
            return None
        for n in range(abs(dd) // abs(p) + 1):
            rem = n * p - dd  # need rem == m*q with m >= 0
            if rem % q == 0 and rem // q >= 0:
                return (n, rem // q)
        return None
    # p, q same sign: the form is indefinite, solutions exist for every multiple of g
    pp, qq = abs(p), abs(q)
    sgn = 1 if p > 0 else -1
    target = sgn * dd
    # solve n*pp - m*qq = target with n, m >= 0
    # extended euclid on (pp, qq)
    x0, x1, y0, y1, r0, r1 = 1, 0, 0, 1, pp, qq
    while r1:
        k, r0, r1 = r0 // r1, r1, r0 % r1
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    # r0 = g = x0*pp + y0*qq
    n0 = x0 * (target // g)
    m0 = -y0 * (target // g)
    step_n, step_m = qq // g, pp // g
    # shift along the solution line until both components are nonnegative
    k_lo = 0
    if n0 < 0:
        k_lo = max(k_lo, (-n0 + step_n - 1) // step_n)
    if m0 < 0:
        k_lo = max(k_lo, (-m0 + step_m - 1) // step_m)
    n, m = n0 + k_lo * step_n, m0 + k_lo * step_m
    if (n, m) == (0, 0):
        n, m = n + step_n, m + step_m
    return (n, m)


def is_zigzag_consistent(d: Dimer):
    """Universal-cover ray criterion, reduced to exact integer systems.

    For each arrow the zig and zag rays are periodic; an intersection in an
    edge other than the starting one solves a small linear system over
    nonnegative integers.  Null-homologous zigzag cycles are violations too.
    Returns (True, None) or (False, witness).
    """
    d.require_valid()
    if not d.has_shifts:
        raise DimerError("consistency requires torus shift data")
    for z in _zigzag_orbits(d):
        if z.homology == (0, 0):
            return False, ("null_homologous_cycle", z.arrows)
    for e in sorted(d.arrow_by_id, key=idkey):
        occ_zig, t_zig = _ray_occurrences(d, e, as_zig=True)
        occ_zag, t_zag = _ray_occurrences(d, e, as_zig=False)
        det = cross(t_zag, t_zig)  # det of [t_zig | -t_zag]
        for (f, u) in occ_zig:
            for (g, v) in occ_zag:
                if f != g:
                    continue
                dd = vec_sub(v, u)
                if det != 0:
                    n_num = cross(t_zag, dd)
                    m_num = cross(t_zig, dd)
                    if n_num % det or m_num % det:
                        continue
                    n, m = n_num // det, m_num // det
                    if n < 0 or m < 0:
                        continue
                    if f == e and u == v == (0, 0) and n == m == 0:
                        continue
                    return False, (e, f, n, m)
                # parallel periods: project onto the common direction
                gx = gcd(abs(t_zig[0]), abs(t_zig[1]))
                base = (t_zig[0] // gx, t_zig[1] // gx)
                if cross(base, dd) != 0 or cross(base, t_zag) != 0:
                    continue
                p = t_zig[0] // base[0] if base[0] else t_zig[1] // base[1]
                q = t_zag[0] // base[0] if base[0] else t_zag[1] // base[1]
                dv = dd[0] // base[0] if base[0] else dd[1] // base[1]
                trivial_ok = f == e and u == v == (0, 0)
                sol = _solve_parallel(p, q, dv)
                if sol is None:
                    continue
                n, m = sol
                if trivial_ok and (n, m) == (0, 0):
                    continue
                return False, (e, f, n, m)
    return True, None


def parallel_classes(d: Dimer):
    """Group zigzag cycles by homology class; check the intersection dichotomy.

    Parallel cycles must be edge-disjoint, cycles of independent classes must
    share an edge.  Returns [(eta_i, [Z_{i,1..m_i}])] in class order.
    """
    ok, witness = is_zigzag_consistent(d)
    if not ok:
        raise DimerError(f"dimer is not zigzag consistent: {witness}")
    cycles = zigzag_cycles(d)
    out = []
    n_classes = max(z.class_index for z in cycles)
    for i in range(1, n_classes + 1):
        members = [z for z in cycles if z.class_index == i]
        eta = vec_neg(members[0].homology)
        if not is_primitive(eta):
            raise DimerError(f"zigzag class {eta} is not primitive")
        out.append((eta, members))
    for z1, z2 in itertools.combinations(cycles, 2):
        shared = set(z1.arrows) & set(z2.arrows)
        if z1.class_index == z2.class_index and shared:
            raise DimerError(
                f"parallel cycles share arrows {sorted(shared, key=idkey)}"
            )
        if cross(z1.homology, z2.homology) != 0 and not shared:
            raise DimerError(
                "independent zigzag cycles "
                f"{z1.arrows} and {z2.arrows} share no arrow"
            )
    return out


def strips(d: Dimer, class_index: int) -> StripDecomposition:
    """Closed strips between consecutive parallel cycles of one class."""
    classes = parallel_classes(d)
    if not 1 <= class_index <= len(classes):
        raise DimerError(f"no zigzag class {class_index}")
    members = classes[class_index - 1][1]  # already in parallel order
    comp_of_face = _strip_components(d, members)
    n_comp = len(set(comp_of_face.values()))
    if n_comp != len(members):
        raise DimerError(
            f"class {class_index}: {n_comp} strips for {len(members)} parallel cycles"
        )
    assignment = _strip_vertex_assignment(d, members, comp_of_face)
    strips_out = []
    cycles_out = []
    boundary_out = []
    m = len(members)
    for j, z in enumerate(members):
        pf = {d.pos_face_of(z.zags[k]) for k in range(len(z.zags))}
        strip_comp = {comp_of_face[f] for f in pf}.pop()
        faces_j = tuple(sorted(fi for fi, c in comp_of_face.items() if c == strip_comp))
        verts_j = tuple(sorted((v for v, c in assignment.items() if c == strip_comp), key=idkey))
        strips_out.append((faces_j, verts_j))
        cycles_out.append(z)
        nxt = members[(j + 1) % m]
        boundary_out.append(
            (anti_zigzag_of_cycle(d, z, +1), anti_zigzag_of_cycle(d, nxt, -1))
        )
    if d.vertices[0] not in strips_out[0][1]:
        raise DimerError("base vertex is not in strip 1 after ordering")
    return StripDecomposition(
        class_index=class_index,
        strips=tuple(strips_out),
        cycles=tuple(cycles_out),
        boundary=tuple(boundary_out),
    )


# -- duality ---------------------------------------------------------------


def dual_dimer(d: Dimer) -> Dimer:
    """The dual dimer: vertices are zigzag cycles, arrows keep their ids.

    An arrow's dual tail is the cycle through it as a zag and its head the
    cycle through it as a zig.  Positive faces keep their boundary traversal;
    negative boundaries reverse.  The dual carries no shift data.
    """
    d.require_valid()
    cycles = zigzag_cycles(d)
    zig_cycle = {}
    zag_cycle = {}
    for idx, z in enumerate(cycles):
        for a in z.zigs:
            zig_cycle[a] = idx
        for a in z.zags:
            zag_cycle[a] = idx
    names = {}
    for idx, z in enumerate(cycles):
        if z.class_index:
            names[idx] = f"Z{z.class_index}.{z.parallel_index}"
        else:
            # rotate to the least zig so cycles with equal words but opposite
            # zig/zag phase (possible on duals) get distinct names
            rots = [z.arrows[2 * k:] + z.arrows[: 2 * k] for k in range(len(z.zigs))]
            word = min(rots, key=lambda w: tuple(idkey(x) for x in w))
            names[idx] = "Z_" + "_".join(str(a) for a in word)
    arrows = [
        Arrow(a.id, names[zig_cycle[a.id]], names[zag_cycle[a.id]], None) for a in d.arrows
    ]
    faces = []
    for f in d.faces:
        boundary = f.boundary if f.sign > 0 else tuple(reversed(f.boundary))
        faces.append(Face(f.sign, boundary))
    out = Dimer(
        name=f"{d.name}_dual",
        vertices=tuple(names[i] for i in range(len(cycles))),
        arrows=tuple(arrows),
        faces=tuple(faces),
    )
    out.require_valid()
    return out


def surface_invariants(d_dual: Dimer):
    """(genus, punctures, euler) of the dual surface; punctures = dual vertices."""
    d_dual.require_valid()
    chi = len(d_dual.vertices) - len(d_dual.arrows) + len(d_dual.faces)
    if chi % 2:
        raise DimerError(f"odd Euler characteristic {chi}")
    return ((2 - chi) // 2, len(d_dual.vertices), chi)


def dimer_isomorphic(d1: Dimer, d2: Dimer) -> bool:
    """Quiver isomorphism preserving arrow ids, face signs and boundaries."""
    if sorted(d1.arrow_by_id, key=idkey) != sorted(d2.arrow_by_id, key=idkey):
        return False
    vmap = {}
    for aid in d1.arrow_by_id:
        for u, w in ((d1.tail(aid), d2.tail(aid)), (d1.head(aid), d2.head(aid))):
            if vmap.setdefault(u, w) != w:
                return False
    if len(set(vmap.values())) != len(vmap) or len(vmap) != len(d1.vertices):
        return False
    faces2 = [(f.sign, f.boundary) for f in d2.faces]
    for f in d1.faces:
        hit = None
        for k, (s2, b2) in enumerate(faces2):
            if s2 == f.sign and cyclic_equal(f.boundary, b2):
                hit = k
                break
        if hit is None:
            return False
        faces2.pop(hit)
    return not faces2
