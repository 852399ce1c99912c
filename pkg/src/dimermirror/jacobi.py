"""Jacobi-algebra calculus: superpotential, rewrites, canonical path classes.

Paths are traversal tuples of arrow ids (first arrow first).  Equality in the
Jacobi algebra of a consistent dimer is decided by the invariant data
(endpoints, homology class, degree under a fixed reference corner matching);
a brute-force rewrite oracle guards the decision procedure at small scale.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .dimer import Dimer, Vec, dot, idkey, vec_add, vec_sub, canonical_rotation
from .matchings import (
    MatchingPolytope,
    PerfectMatching,
    corner_matchings_in_order,
    matching_polytope,
)

Word = tuple


class JacobiError(Exception):
    pass


def _tree_paths_from_base(d: Dimer) -> dict:
    """Signed arrow paths from the base vertex to every vertex along one tree."""
    root = d.vertices[0]
    arrows = sorted(d.arrows, key=lambda a: idkey(a.id))
    paths = {root: []}
    changed = True
    while changed:
        changed = False
        for a in arrows:
            if a.tail in paths and a.head not in paths:
                paths[a.head] = paths[a.tail] + [(a.id, +1)]
                changed = True
            elif a.head in paths and a.tail not in paths:
                paths[a.tail] = paths[a.head] + [(a.id, -1)]
                changed = True
    if len(paths) != len(d.vertices):
        raise JacobiError("dimer is not connected")
    return paths


# -- cyclic polynomials ------------------------------------------------------


@dataclass(frozen=True)
class CyclicPoly:
    """Integer combination of cyclic words, each stored as a canonical traversal."""

    terms: tuple  # ((coeff, word), ...) sorted

    @staticmethod
    def from_terms(terms: Iterable) -> "CyclicPoly":
        acc: dict = {}
        for coeff, word in terms:
            key = canonical_rotation(tuple(word))
            acc[key] = acc.get(key, 0) + coeff
        cleaned = tuple(
            sorted(((c, w) for w, c in acc.items() if c), key=lambda t: t[1])
        )
        return CyclicPoly(cleaned)


def superpotential(d: Dimer) -> CyclicPoly:
    """One +1 term per positive face boundary, one -1 term per negative face."""
    d.require_valid()
    return CyclicPoly.from_terms(
        (f.sign, f.boundary) for f in d.faces
    )


def _cyclic_arc(word: Word, start: int, stop: int) -> Word:
    """Entries strictly between positions start and stop, walking forward cyclically."""
    n = len(word)
    out = []
    pos = (start + 1) % n
    while pos != stop:
        out.append(word[pos])
        pos = (pos + 1) % n
    return tuple(out)


def cyclic_derivative(poly: CyclicPoly, e) -> list:
    """All (coefficient, path) contributions of the cyclic derivative at arrow e.

    For each occurrence of e in a cyclic word, the emitted path continues
    around the cycle from just after e back to just before it.
    """
    out = []
    for coeff, word in poly.terms:
        for i, a in enumerate(word):
            if a == e:
                out.append((coeff, word[i + 1 :] + word[:i]))
    return out


def hessian(poly: CyclicPoly, x, y) -> list:
    """Second cyclic derivative: (coeff, left, right) splittings.

    ``left`` runs from the head of x to the tail of y and ``right`` from the
    head of y to the tail of x; the derivative discards the x and y occurrences
    themselves (distinct positions, even when x == y).
    """
    out = []
    for coeff, word in poly.terms:
        for j, a in enumerate(word):
            if a != y:
                continue
            for l, b in enumerate(word):
                if b != x or l == j:
                    continue
                left = _cyclic_arc(word, l, j)
                right = _cyclic_arc(word, j, l)
                out.append((coeff, left, right))
    return out


# -- path classes ------------------------------------------------------------


@dataclass(frozen=True)
class PathClass:
    tail: object
    head: object
    h1: Vec
    w0: int
    witness: Optional[Word] = field(default=None, compare=False, hash=False)

    def is_idempotent(self) -> bool:
        return self.tail == self.head and self.h1 == (0, 0) and self.w0 == 0


class JElement:
    """Finite integer combination of path classes (no zero coefficients stored)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        self.terms = {c: k for c, k in (terms or {}).items() if k}

    @staticmethod
    def of(cls: PathClass, coeff: int = 1) -> "JElement":
        return JElement({cls: coeff})

    def __add__(self, other: "JElement") -> "JElement":
        out = dict(self.terms)
        for c, k in other.terms.items():
            out[c] = out.get(c, 0) + k
        return JElement(out)

    def __sub__(self, other: "JElement") -> "JElement":
        return self + other.scale(-1)

    def scale(self, k: int) -> "JElement":
        return JElement({c: k * v for c, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, JElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "JElement(0)"
        bits = [
            f"{k}*({c.tail}->{c.head}, h1={c.h1}, w0={c.w0})"
            for c, k in sorted(self.terms.items(), key=lambda t: (idkey(t[0].tail), t[0].h1, t[0].w0))
        ]
        return "JElement(" + " + ".join(bits) + ")"


class Jacobi:
    """Canonical forms and central elements for one consistent dimer."""

    def __init__(self, d: Dimer, realize_cap: Optional[int] = None):
        d.require_valid()
        self.dimer = d
        self.poly: MatchingPolytope = matching_polytope(d)
        self.corners = corner_matchings_in_order(self.poly)  # P_1 ... P_N
        self.ref = self.corners[0]  # reference corner P*
        # height of P_i minus height of P*, used in the degree formula
        self.corner_offsets = [
            vec_sub(p.height, self.ref.height) for p in self.corners
        ]
        self.superpotential = superpotential(d)
        self.realize_cap = realize_cap if realize_cap is not None else 4 * len(d.arrows)
        # tree paths from the base vertex, for the open-path degree correction
        self._tree_paths = _tree_paths_from_base(d)
        self._phi_cache: dict = {}
        self.corner_phis = [self._phi(p) for p in self.corners]

    # -- degrees ---------------------------------------------------------

    def _phi(self, matching: "PerfectMatching") -> dict:
        """Vertex potential of the cochain (P - P*) minus its harmonic part.

        On an open path p the cochain evaluates to <height(P) - height(P*),
        h1(p)> + phi(head) - phi(tail); on loops the correction cancels.
        """
        key = matching.edges
        if key in self._phi_cache:
            return self._phi_cache[key]
        if matching.height is None:
            matching = self._with_height(matching)
        off = vec_sub(matching.height, self.ref.height)
        phi = {}
        for v, path in self._tree_paths.items():
            val = 0
            shift = (0, 0)
            for aid, sgn in path:
                val += sgn * (
                    (1 if aid in matching.edges else 0) - (1 if aid in self.ref.edges else 0)
                )
                s = self.dimer.shift(aid)
                shift = (shift[0] + sgn * s[0], shift[1] + sgn * s[1])
            phi[v] = val - dot(off, shift)
        self._phi_cache[key] = phi
        return phi

    def _with_height(self, matching: "PerfectMatching") -> "PerfectMatching":
        for h, reps in self.poly.points.items():
            for r in reps:
                if r.edges == matching.edges:
                    return r
        raise JacobiError("unknown perfect matching")

    def word_degree(self, word: Word, matching: frozenset) -> int:
        return sum(1 for a in word if a in matching)

    def class_degree(self, cls: PathClass, corner_index: int) -> int:
        phi = self.corner_phis[corner_index - 1]
        return (
            cls.w0
            + dot(self.corner_offsets[corner_index - 1], cls.h1)
            + phi[cls.head]
            - phi[cls.tail]
        )

    def pm_degree(self, p, matching) -> int:
        """Degree of a word or class under any perfect matching."""
        if isinstance(p, PathClass):
            pm = (
                matching
                if isinstance(matching, PerfectMatching)
                else PerfectMatching(frozenset(matching))
            )
            pm = self._with_height(pm)
            phi = self._phi(pm)
            off = vec_sub(pm.height, self.ref.height)
            return p.w0 + dot(off, p.h1) + phi[p.head] - phi[p.tail]
        edges = matching.edges if isinstance(matching, PerfectMatching) else frozenset(matching)
        return self.word_degree(tuple(p), edges)

    def corner_degrees(self, cls: PathClass) -> tuple:
        return tuple(self.class_degree(cls, i) for i in range(1, len(self.corners) + 1))

    # -- canonical forms ---------------------------------------------------

    def canonical_form(self, word: Iterable) -> PathClass:
        word = tuple(word)
        d = self.dimer
        if not d.is_composable(word):
            raise JacobiError(f"word {word!r} is not a composable path")
        return PathClass(
            tail=d.tail(word[0]),
            head=d.head(word[-1]),
            h1=d.word_shift(word),
            w0=self.word_degree(word, self.ref.edges),
            witness=word,
        )

    def idempotent(self, v) -> PathClass:
        if v not in self.dimer.vertices:
            raise JacobiError(f"unknown vertex {v!r}")
        return PathClass(v, v, (0, 0), 0, witness=())

    def compose(self, first: PathClass, second: PathClass) -> PathClass:
        """Class of (first path, then second path)."""
        if first.head != second.tail:
            raise JacobiError("paths do not compose")
        witness = None
        if first.witness is not None and second.witness is not None:
            witness = first.witness + second.witness
        return PathClass(
            first.tail,
            second.head,
            vec_add(first.h1, second.h1),
            first.w0 + second.w0,
            witness=witness,
        )

    def path_equal(self, p: Iterable, q: Iterable) -> bool:
        return self.canonical_form(p) == self.canonical_form(q)

    # -- rewrite oracle ----------------------------------------------------

    def jacobi_relations(self) -> list:
        """(arrow, positive arc, negative arc) for every arrow.

        The two arcs are the complements of the arrow on its positive and
        negative faces; equating them is the relation from the cyclic
        derivative of the superpotential at the arrow.
        """
        d = self.dimer
        out = []
        for aid in sorted(d.arrow_by_id, key=idkey):
            arcs = []
            for fi in (d.pos_face_of(aid), d.neg_face_of(aid)):
                b = d.faces[fi].boundary
                i = b.index(aid)
                arcs.append(b[i + 1 :] + b[:i])
            out.append((aid, arcs[0], arcs[1]))
        return out

    def rewrite_neighbors(self, word: Word, cap: int) -> list:
        """Words reachable by one relation rewrite, length-capped."""
        word = tuple(word)
        out = []
        for _, lhs, rhs in self.jacobi_relations():
            for src, dst in ((lhs, rhs), (rhs, lhs)):
                if len(word) - len(src) + len(dst) > cap:
                    continue
                n = len(src)
                for i in range(len(word) - n + 1):
                    if word[i : i + n] == src:
                        out.append(word[:i] + dst + word[i + n :])
        return out

    def reduce_oracle(self, word: Iterable, cap: int) -> set:
        """Breadth-first closure of a word under single rewrites (length <= cap)."""
        word = tuple(word)
        if not self.dimer.is_composable(word):
            raise JacobiError(f"word {word!r} is not a composable path")
        if cap < len(word):
            raise JacobiError("cap shorter than the starting word")
        seen = {word}
        frontier = deque([word])
        while frontier:
            w = frontier.popleft()
            for nb in self.rewrite_neighbors(w, cap):
                if nb not in seen:
                    seen.add(nb)
                    frontier.append(nb)
        return seen

    # -- central elements ---------------------------------------------------

    def central_W(self) -> dict:
        """The potential: at each vertex, the class of any adjacent face boundary."""
        d = self.dimer
        out = {}
        for v in d.vertices:
            classes = set()
            pick = None
            for f in d.faces:
                for i, aid in enumerate(f.boundary):
                    if d.tail(aid) == v:
                        word = f.boundary[i:] + f.boundary[:i]
                        cls = self.canonical_form(word)
                        classes.add(cls)
                        pick = cls if pick is None else pick
            if pick is None:
                raise JacobiError(f"vertex {v!r} on no face")
            if len(classes) != 1:
                raise JacobiError(f"face boundaries at {v!r} disagree in canonical form")
            out[v] = pick
        return out

    def x_alpha_w0(self, alpha: Vec) -> int:
        return max(-dot(off, alpha) for off in self.corner_offsets)

    def central_x_alpha(self, alpha: Vec, want_witness: bool = True) -> dict:
        """The central element of homology class alpha that is not a multiple of W.

        Its degree under some corner matching is exactly zero, which pins the
        reference degree to max_i(-<h_i, alpha>).
        """
        alpha = tuple(alpha)
        if alpha == (0, 0):
            raise JacobiError("alpha must be nonzero")
        w0 = self.x_alpha_w0(alpha)
        out = {}
        for v in self.dimer.vertices:
            witness = None
            if want_witness:
                witness = self.realize_path(v, v, alpha, w0)
                if witness is None:
                    raise JacobiError(
                        f"no witness found for x_alpha at {v!r} within cap {self.realize_cap}"
                    )
            out[v] = PathClass(v, v, alpha, w0, witness=witness)
        return out

    def divide_by_W(self, cls: PathClass) -> PathClass:
        """Remove one factor of the potential; defined when every corner degree is >= 1."""
        degs = self.corner_degrees(cls)
        if min(degs) < 1:
            raise JacobiError(f"class with corner degrees {degs} is not divisible by W")
        return PathClass(cls.tail, cls.head, cls.h1, cls.w0 - 1)

    def multiply_central(self, cls: PathClass, elem: JElement) -> JElement:
        """Multiply a central class into a J-element (vertex-matched composition)."""
        out: dict = {}
        for c, k in elem.terms.items():
            prod = PathClass(c.tail, c.head, vec_add(c.h1, cls.h1), c.w0 + cls.w0)
            out[prod] = out.get(prod, 0) + k
        return JElement(out)

    # -- witness search ------------------------------------------------------

    def realize_path(self, tail, head, h1: Vec, w0: int, cap: Optional[int] = None):
        """Shortest composable word with the given class data, or None within the cap.

        Search states are (vertex, shift, reference degree); a partial path is
        pruned when its degree under any corner matching exceeds the target.
        """
        cap = cap if cap is not None else self.realize_cap
        h1 = tuple(h1)
        target = PathClass(tail, head, h1, w0)
        targets = self.corner_degrees(target)
        if w0 < 0 or min(targets) < 0:
            raise JacobiError("target degrees must be nonnegative")
        d = self.dimer
        arrows = sorted(d.arrows, key=lambda a: idkey(a.id))
        out_arrows: dict = {}
        for a in arrows:
            out_arrows.setdefault(a.tail, []).append(a)
        start = (tail, (0, 0), 0)
        if tail == head and h1 == (0, 0) and w0 == 0:
            return ()
        prev: dict = {start: None}
        frontier = deque([(start, 0)])
        while frontier:
            (v, sh, deg), length = frontier.popleft()
            if length >= cap:
                continue
            for a in out_arrows.get(v, []):
                sh2 = vec_add(sh, a.shift)
                deg2 = deg + (1 if a.id in self.ref.edges else 0)
                state = (a.head, sh2, deg2)
                cur = PathClass(tail, a.head, sh2, deg2)
                if any(
                    self.class_degree(cur, i + 1) > t for i, t in enumerate(targets)
                ):
                    continue
                if state in prev:
                    continue
                prev[state] = ((v, sh, deg), a.id)
                if state == (head, h1, w0):
                    word = []
                    s = state
                    while prev[s] is not None:
                        s, aid = prev[s]
                        word.append(aid)
                    return tuple(reversed(word))
                frontier.append((state, length + 1))
        return None
