"""Combinatorial symplectic cohomology of the mirror punctured curve.

Punctures correspond to zigzag cycles of the source dimer; each carries even
and odd winding families.  Odd topological classes are handled through their
pairings with the puncture loops, which is all the ring structure and the
correspondence verification consume.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .dimer import Dimer, dual_dimer, idkey, surface_invariants, zigzag_cycles


class SHError(Exception):
    pass


# Labels: ("unit",) | ("p", edge) | ("E", i, j, n) | ("F", i, j, n)
UNIT_LABEL = ("unit",)


def E(i: int, j: int, n: int) -> tuple:
    return ("E", i, j, n)


def F(i: int, j: int, n: int) -> tuple:
    return ("F", i, j, n)


def P_EDGE(e) -> tuple:
    return ("p", e)


class SHElement:
    """Integer combination of symplectic cochain labels."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @staticmethod
    def of(label, coeff: int = 1) -> "SHElement":
        return SHElement({label: coeff})

    def __add__(self, other) -> "SHElement":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return SHElement(out)

    def __sub__(self, other) -> "SHElement":
        return self + other.scale(-1)

    def scale(self, k: int) -> "SHElement":
        return SHElement({l: k * v for l, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, SHElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "SH(0)"
        return "SH(" + " + ".join(f"{v}*{k}" for k, v in sorted(self.terms.items(), key=str)) + ")"


def _parity(label) -> int:
    if label[0] in ("unit", "E"):
        return 0
    return 1  # p and F are odd


@dataclass
class SHBasis:
    unit: tuple
    odd_rank: int  # dim H^1 of the punctured curve = 2g + N - 1
    e_labels: list
    f_labels: list
    genus: int
    punctures: int


class MirrorSH:
    """The ring model for one consistent dimer."""

    def __init__(self, d: Dimer):
        d.require_valid()
        self.dimer = d
        self.dual = dual_dimer(d)
        self.genus, self.n_punct, _ = surface_invariants(self.dual)
        cycles = [z for z in zigzag_cycles(d)]
        self.cycles = {(z.class_index, z.parallel_index): z for z in cycles}
        if len(self.cycles) != len(cycles):
            raise SHError("zigzag cycles are not uniquely indexed")
        self.n_classes = max(z.class_index for z in cycles)
        self.m = {
            i: max(z.parallel_index for z in cycles if z.class_index == i)
            for i in range(1, self.n_classes + 1)
        }

    # -- pairing of odd Morse classes with puncture loops --------------------

    def pairing(self, edge, puncture: tuple) -> int:
        """<p_e, loop around Z_{i,j}>: +1 per zig occurrence, -1 per zag."""
        z = self.cycles[puncture]
        return sum(1 for a in z.zigs if a == edge) - sum(1 for a in z.zags if a == edge)

    def pairing_matrix(self) -> dict:
        """(edge, (i, j)) -> pairing; every edge pairs +1 with one cycle, -1 with one."""
        out = {}
        for e in sorted(self.dimer.arrow_by_id, key=idkey):
            for key in sorted(self.cycles):
                out[(e, key)] = self.pairing(e, key)
        return out

    def odd_pairing_vector(self, elem: SHElement, class_index: int) -> list:
        """Pairings of an odd Morse combination with the class-i puncture loops."""
        out = []
        for j in range(1, self.m[class_index] + 1):
            total = 0
            for label, coeff in elem.terms.items():
                if label[0] == "p":
                    total += coeff * self.pairing(label[1], (class_index, j))
            out.append(total)
        return out

    # -- basis ----------------------------------------------------------------

    def sh_basis(self, n_max: int) -> SHBasis:
        if n_max < 1:
            raise SHError("n_max must be >= 1")
        e_labels = []
        f_labels = []
        for (i, j) in sorted(self.cycles):
            for n in range(1, n_max + 1):
                e_labels.append(E(i, j, n))
                f_labels.append(F(i, j, n))
        return SHBasis(
            unit=UNIT_LABEL,
            odd_rank=2 * self.genus + self.n_punct - 1,
            e_labels=e_labels,
            f_labels=f_labels,
            genus=self.genus,
            punctures=self.n_punct,
        )

    # -- product ----------------------------------------------------------------

    def mul_labels(self, a: tuple, b: tuple) -> SHElement:
        ka, kb = a[0], b[0]
        if ka == "unit":
            return SHElement.of(b)
        if kb == "unit":
            return SHElement.of(a)
        if ka == "E" and kb == "E":
            if a[1:3] == b[1:3]:
                return SHElement.of(E(a[1], a[2], a[3] + b[3]))
            return SHElement()
        if ka == "E" and kb == "F" or ka == "F" and kb == "E":
            ea, fb = (a, b) if ka == "E" else (b, a)
            if ea[1:3] == fb[1:3]:
                return SHElement.of(F(ea[1], ea[2], ea[3] + fb[3]))
            return SHElement()
        if ka == "F" and kb == "F":
            return SHElement()
        if ka == "p" and kb == "E":
            i, j, n = b[1], b[2], b[3]
            return SHElement.of(F(i, j, n), self.pairing(a[1], (i, j)))
        if ka == "E" and kb == "p":
            return self.mul_labels(b, a)
        # p with p or F: zero for degree reasons
        if "p" in (ka, kb):
            return SHElement()
        raise SHError(f"unsupported product {a} * {b}")

    def mul(self, a: SHElement, b: SHElement) -> SHElement:
        out = SHElement()
        for la, ca in a.terms.items():
            for lb, cb in b.terms.items():
                out = out + self.mul_labels(la, lb).scale(ca * cb)
        return out

    # -- zigzag paths and distinguished odd classes ------------------------------

    def zigzag_paths_from(self, v0, cap: Optional[int] = None) -> list:
        """All zigzag paths out of v0 up to the cap, shortest first.

        A zigzag path alternates the positive-face and negative-face successor;
        both phase choices and all outgoing first arrows are explored.
        """
        d = self.dimer
        cap = cap if cap is not None else 4 * len(d.arrows)
        paths = []
        starts = [a.id for a in sorted(d.arrows, key=lambda x: idkey(x.id)) if a.tail == v0]
        frontier = deque()
        for a in starts:
            for phase in (0, 1):
                frontier.append(((a,), phase))
                paths.append((a,))
        seen = {(s, ph) for s in [(a,) for a in starts] for ph in (0, 1)}
        while frontier:
            path, phase = frontier.popleft()
            if len(path) >= cap:
                continue
            last = path[-1]
            nxt = d.next_pos(last) if phase == 0 else d.next_neg(last)
            new = path + (nxt,)
            key = (new, 1 - phase)
            if key not in seen:
                seen.add(key)
                paths.append(new)
                frontier.append((new, 1 - phase))
        # deterministic: shortest first, then lexicographic
        paths = sorted(set(paths), key=lambda p: (len(p), tuple(idkey(x) for x in p)))
        return paths

    def xi_from_path(self, path: tuple) -> SHElement:
        out = SHElement()
        for a in path:
            out = out + SHElement.of(P_EDGE(a))
        return out

    def distinguished_odd(self, i0: int = 1) -> dict:
        """p, q and the telescoping classes xi_v, as odd Morse combinations.

        p sums the puncture-loop generators of the class-i0 parallel family,
        q those of class i0-1; xi_v follows a shortest zigzag path from the
        base vertex to v.
        """
        if not 1 <= i0 <= self.n_classes:
            raise SHError(f"i0 must be in 1..{self.n_classes}")
        d = self.dimer
        v0 = d.vertices[0]

        def family_sum(i: int) -> SHElement:
            out = SHElement()
            for (ci, j), z in sorted(self.cycles.items()):
                if ci != i:
                    continue
                for a in z.arrows:
                    out = out + SHElement.of(P_EDGE(a))
            return out

        i_prev = (i0 - 2) % self.n_classes + 1
        p = family_sum(i0)
        q = family_sum(i_prev)
        xi = {v0: SHElement()}
        xi_path = {v0: ()}
        for path in self.zigzag_paths_from(v0):
            v = d.head(path[-1])
            if v not in xi:
                xi[v] = self.xi_from_path(path)
                xi_path[v] = path
        missing = [v for v in d.vertices if v not in xi]
        if missing:
            raise SHError(f"no zigzag path from {v0!r} reaches {missing}")
        return {"p": p, "q": q, "xi": xi, "xi_path": xi_path, "i0": i0}

    def xi_for_strip(self, class_index: int, strip_vertices, cap: Optional[int] = None):
        """A zigzag path from the base vertex ending in the given strip, or None."""
        d = self.dimer
        v0 = d.vertices[0]
        for path in self.zigzag_paths_from(v0, cap=cap):
            if d.head(path[-1]) in strip_vertices:
                return path
        return None
