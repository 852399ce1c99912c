"""The four-term Koszul-type Hochschild complex of the Jacobi algebra.

Cochains carry Jacobi-algebra coefficients on slots indexed by vertices
(degrees 0 and 3) and arrows (degrees 1 and 2).  The same complex underlies
two vocabularies: the algebraic differentials d0, d1, d2 and the Floer-style
maps on unit / X / Xbar / point generators; both names refer to one
implementation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .dimer import Vec, dot, idkey, strips, vec_add, vec_neg, vec_sub
from .jacobi import Jacobi, JElement, PathClass

UNIT, X, XBAR, PT = "unit", "X", "Xbar", "pt"
_SLOT_DEGREE = {UNIT: 0, X: 1, XBAR: 2, PT: 3}


class HochschildError(Exception):
    pass


class CochainElement:
    """Homogeneous element of the complex: JElement coefficients per slot."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Optional[dict] = None):
        self.degree = degree
        self.terms = {}
        for slot, elem in (terms or {}).items():
            if not isinstance(elem, JElement):
                raise HochschildError("coefficients must be JElements")
            if not elem.is_zero():
                if _SLOT_DEGREE[slot[0]] != degree:
                    raise HochschildError(f"slot {slot} has wrong degree for {degree}")
                self.terms[slot] = elem

    @staticmethod
    def zero(degree: int) -> "CochainElement":
        return CochainElement(degree, {})

    def is_zero(self) -> bool:
        return not self.terms

    def add_term(self, slot, elem: JElement) -> "CochainElement":
        out = dict(self.terms)
        out[slot] = out.get(slot, JElement()) + elem
        return CochainElement(self.degree, out)

    def __add__(self, other: "CochainElement") -> "CochainElement":
        if self.degree != other.degree:
            raise HochschildError("degree mismatch")
        out = dict(self.terms)
        for slot, elem in other.terms.items():
            out[slot] = out.get(slot, JElement()) + elem
        return CochainElement(self.degree, out)

    def __sub__(self, other: "CochainElement") -> "CochainElement":
        return self + other.scale(-1)

    def scale(self, k: int) -> "CochainElement":
        return CochainElement(self.degree, {s: e.scale(k) for s, e in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CochainElement)
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.degree, frozenset((s, e) for s, e in self.terms.items())))

    def __repr__(self):
        bits = [f"{slot}: {elem}" for slot, elem in sorted(self.terms.items(), key=str)]
        return f"Cochain(deg={self.degree}, " + "; ".join(bits) + ")"


@dataclass(frozen=True)
class E2Label:
    """Additive basis label of the second page (unit / x_eta^n / Psi / U / V / x^n W / Theta)."""

    kind: str  # unit | x_eta | psi | U | V | xW | theta
    i: int = 0  # zigzag class index
    j: int = 0  # strip index within the class
    n: int = 0  # winding
    v: object = None  # vertex (winding-zero theta only)


class KoszulComplex:
    """Differentials, distinguished cocycles, and second-page bookkeeping."""

    def __init__(self, jac: Jacobi, i0: int = 1, ab: Optional[tuple] = None):
        self.jac = jac
        self.dimer = jac.dimer
        self.classes = [
            (vec_neg(members[0].homology), members)
            for (eta, members) in self._class_list()
        ]
        self.n_classes = len(self.classes)
        if not 1 <= i0 <= self.n_classes:
            raise HochschildError(f"i0 must be in 1..{self.n_classes}")
        self.i0 = i0
        self.base_vertex = self.dimer.vertices[0]
        self.strips = {
            i: strips(self.dimer, i) for i in range(1, self.n_classes + 1)
        }
        self._psi_registry: dict = {}
        self._partial_registry: dict = {}
        # U, V as height classes: differences of consecutive corner matchings
        corners = jac.corners
        N = self.n_classes
        h = [p.height for p in corners]
        self.U_vec = vec_sub(h[(i0 - 2) % N], h[(i0 - 1) % N])
        self.V_vec = vec_sub(h[(i0 - 1) % N], h[i0 % N])
        self.ab = ab if ab is not None else self._choose_ab()
        if any(self.w_odd_eval(eta) == 0 for eta, _ in self.classes):
            raise HochschildError(f"(a, b) = {self.ab} degenerates on some eta_i")

    def _class_list(self):
        from .dimer import parallel_classes

        return [(eta, members) for eta, members in parallel_classes(self.dimer)]

    def eta(self, i: int) -> Vec:
        return self.classes[i - 1][0]

    def m(self, i: int) -> int:
        return len(self.classes[i - 1][1])

    def U_eval(self, eta: Vec) -> int:
        return dot(self.U_vec, eta)

    def V_eval(self, eta: Vec) -> int:
        return dot(self.V_vec, eta)

    def w_odd_eval(self, eta: Vec) -> int:
        a, b = self.ab
        return a * self.U_eval(eta) + b * self.V_eval(eta)

    def _choose_ab(self) -> tuple:
        N = self.n_classes
        cands = [
            (a, b)
            for a in range(-(N + 1), N + 2)
            for b in range(-(N + 1), N + 2)
        ]
        cands.sort(key=lambda t: (abs(t[0]) + abs(t[1]), t))
        for a, b in cands:
            if (a, b) == (0, 0):
                continue
            if all(
                a * self.U_eval(eta) + b * self.V_eval(eta) != 0
                for eta, _ in self.classes
            ):
                return (a, b)
        raise HochschildError("no (a, b) with aU + bV nonzero on every eta_i")

    # -- differentials -----------------------------------------------------

    def d(self, c: CochainElement) -> CochainElement:
        if c.degree == 0:
            return self.d0(c)
        if c.degree == 1:
            return self.d1(c)
        if c.degree == 2:
            return self.d2(c)
        raise HochschildError(f"no differential out of degree {c.degree}")

    # Floer vocabulary: the degree-raising part of the deformed differential.
    def delta_plus(self, c: CochainElement) -> CochainElement:
        return self.d(c)

    def d0(self, c: CochainElement) -> CochainElement:
        """m |-> sum over arrows of (x m - m x) on the arrow slots."""
        jac = self.jac
        d = self.dimer
        out = CochainElement.zero(1)
        for (kind, v), elem in c.terms.items():
            if kind != UNIT:
                raise HochschildError("degree-0 terms must sit on unit slots")
            for a in sorted(d.arrow_by_id, key=idkey):
                acls = jac.canonical_form((a,))
                contrib = JElement()
                if d.tail(a) == v:
                    for cls, k in elem.terms.items():
                        contrib = contrib + JElement.of(jac.compose(cls, acls), k)
                if d.head(a) == v:
                    for cls, k in elem.terms.items():
                        contrib = contrib - JElement.of(jac.compose(acls, cls), k)
                if not contrib.is_zero():
                    out = out.add_term((X, a), contrib)
        return out

    def d1(self, c: CochainElement) -> CochainElement:
        """Hessian sandwich: polygons with one marked corner and the coefficient inserted."""
        jac = self.jac
        out = CochainElement.zero(2)
        for (kind, y), elem in c.terms.items():
            if kind != X:
                raise HochschildError("degree-1 terms must sit on X slots")
            for sign, word in jac.superpotential.terms:
                n = len(word)
                for j in range(n):
                    if word[j] != y:
                        continue
                    for l in range(n):
                        if l == j:
                            continue
                        xarr = word[l]
                        post = _arc(word, l, j)
                        pre = _arc(word, j, l)
                        post_cls = jac.canonical_form(post) if post else jac.idempotent(
                            self.dimer.head(xarr)
                        )
                        pre_cls = jac.canonical_form(pre) if pre else jac.idempotent(
                            self.dimer.tail(xarr)
                        )
                        add = JElement()
                        for cls, k in elem.terms.items():
                            total = jac.compose(jac.compose(post_cls, cls), pre_cls)
                            add = add + JElement.of(total, sign * k)
                        if not add.is_zero():
                            out = out.add_term((XBAR, xarr), add)
        return out

    def d2(self, c: CochainElement) -> CochainElement:
        """Commutator with the slot arrow, landing on point slots."""
        jac = self.jac
        d = self.dimer
        out = CochainElement.zero(3)
        for (kind, y), elem in c.terms.items():
            if kind != XBAR:
                raise HochschildError("degree-2 terms must sit on Xbar slots")
            ycls = jac.canonical_form((y,))
            plus = JElement()
            minus = JElement()
            for cls, k in elem.terms.items():
                plus = plus + JElement.of(jac.compose(cls, ycls), k)
                minus = minus + JElement.of(jac.compose(ycls, cls), k)
            if not plus.is_zero():
                out = out.add_term((PT, d.head(y)), plus)
            if not minus.is_zero():
                out = out.add_term((PT, d.tail(y)), minus.scale(-1))
        return out

    # -- BV operator on degree 3 --------------------------------------------

    def bv_delta_deg3(self, word) -> CochainElement:
        """Cyclic deletion of one arrow at a time; input is a closed traversal."""
        word = tuple(word)
        jac = self.jac
        d = self.dimer
        if word and not d.is_closed(word):
            raise HochschildError(f"{word!r} is not a closed path")
        out = CochainElement.zero(2)
        if not word:
            return out
        n = len(word)
        for i in range(n):
            rest = word[i + 1 :] + word[:i]
            cls = (
                jac.canonical_form(rest)
                if rest
                else jac.idempotent(d.head(word[i]))
            )
            out = out.add_term((XBAR, word[i]), JElement.of(cls))
        return out

    # -- distinguished cochains ----------------------------------------------

    def unit_cochain(self, per_vertex: dict) -> CochainElement:
        out = CochainElement.zero(0)
        for v, cls in per_vertex.items():
            out = out.add_term((UNIT, v), JElement.of(cls))
        return out

    def W_cochain(self) -> CochainElement:
        return self.unit_cochain(self.jac.central_W())

    def x_alpha_cochain(self, alpha: Vec, want_witness: bool = False) -> CochainElement:
        return self.unit_cochain(self.jac.central_x_alpha(alpha, want_witness=want_witness))

    def partial_P(self, i: int) -> CochainElement:
        """The corner-matching derivation: sum of e X_e over e in P_i."""
        p = self.jac.corners[i - 1]
        c = self.partial_of_matching(p.edges)
        self._partial_registry[c] = ("corner", i)
        return c

    def partial_of_matching(self, edges) -> CochainElement:
        jac = self.jac
        out = CochainElement.zero(1)
        for e in sorted(edges, key=idkey):
            out = out.add_term((X, e), JElement.of(jac.canonical_form((e,))))
        return out

    def zero_corner_of(self, alpha: Vec) -> int:
        """The unique corner matching with vanishing x_alpha degree."""
        jac = self.jac
        w0 = jac.x_alpha_w0(alpha)
        zeros = [
            i
            for i, off in enumerate(jac.corner_offsets, start=1)
            if w0 + dot(off, alpha) == 0
        ]
        if len(zeros) != 1:
            raise HochschildError(
                f"alpha {alpha} lies on a cone boundary ({len(zeros)} minimizing corners)"
            )
        return zeros[0]

    def partial_alpha(self, alpha: Vec) -> CochainElement:
        """x_alpha W^{-1} times the derivation of the alpha-minimizing corner."""
        alpha = tuple(alpha)
        jac = self.jac
        i = self.zero_corner_of(alpha)
        w0 = jac.x_alpha_w0(alpha)
        out = CochainElement.zero(1)
        for e in sorted(jac.corners[i - 1].edges, key=idkey):
            cls = PathClass(
                self.dimer.tail(e),
                self.dimer.head(e),
                vec_add(alpha, self.dimer.shift(e)),
                w0 - 1 + (1 if e in jac.ref.edges else 0),
            )
            if min(jac.corner_degrees(cls)) < 0:
                raise HochschildError(f"partial_alpha({alpha}): coefficient on {e} not in J")
            out = out.add_term((X, e), JElement.of(cls))
        self._partial_registry[out] = ("alpha", alpha)
        return out

    def theta(self, v) -> CochainElement:
        return CochainElement(3, {(PT, v): JElement.of(self.jac.idempotent(v))})

    def psi(self, i: int, j: int):
        """BV image of the positive anti-zigzag of Z_{i,j}, with its chosen vertex.

        Returns (CochainElement, vertex, word); the word is the anti-zigzag
        rotated to end at the chosen vertex and represents x_{eta_i} theta_v.
        """
        if (i, j) in self._psi_registry:
            return self._psi_registry[(i, j)]
        sd = self.strips[i]
        if not 1 <= j <= len(sd.cycles):
            raise HochschildError(f"class {i} has no parallel index {j}")
        word = sd.boundary[j - 1][0]  # O+(Z_{i,j})
        d = self.dimer
        verts = sorted({d.head(a) for a in word}, key=idkey)
        v = verts[0]
        rotations = [word[k + 1 :] + word[: k + 1] for k in range(len(word))]
        word_at_v = next(r for r in rotations if d.head(r[-1]) == v)
        cls = self.jac.canonical_form(word_at_v)
        expect = PathClass(v, v, self.eta(i), self.jac.x_alpha_w0(self.eta(i)))
        if cls != expect:
            raise HochschildError(
                f"anti-zigzag of Z_{i},{j} does not represent x_eta theta_v: {cls} vs {expect}"
            )
        out = (self.bv_delta_deg3(word_at_v), v, word_at_v)
        self._psi_registry[(i, j)] = out
        return out

    def generators(self) -> dict:
        """The distinguished cocycles, keyed by family."""
        out = {
            "x_alpha": {
                self.eta(i): self.x_alpha_cochain(self.eta(i))
                for i in range(1, self.n_classes + 1)
            },
            "partial_P": {
                i: self.partial_P(i) for i in range(1, self.n_classes + 1)
            },
            "partial_alpha": {},
            "theta": {v: self.theta(v) for v in self.dimer.vertices},
            "psi": {},
        }
        for i in range(1, self.n_classes + 1):
            alpha = vec_add(self.eta(i), self.eta(i % self.n_classes + 1))
            try:
                out["partial_alpha"][alpha] = self.partial_alpha(alpha)
            except HochschildError:
                pass
        for i in range(1, self.n_classes + 1):
            for j in range(1, self.m(i) + 1):
                out["psi"][(i, j)] = self.psi(i, j)
        return out

    # -- the second differential on generators --------------------------------

    def d_W_partial_P(self, i: int) -> CochainElement:
        return self.W_cochain().scale(-1)

    def d_W_partial_alpha(self, alpha: Vec) -> CochainElement:
        return self.x_alpha_cochain(alpha).scale(-1)

    def d_W_theta(self, v) -> CochainElement:
        """Delta(W theta_v): BV of a face boundary through v."""
        d = self.dimer
        for f in d.faces:
            for k, aid in enumerate(f.boundary):
                if d.tail(aid) == v:
                    word = f.boundary[k:] + f.boundary[:k]
                    return self.bv_delta_deg3(word)
        raise HochschildError(f"vertex {v!r} on no face")

    def d_W_x_alpha(self, alpha: Vec) -> CochainElement:
        return CochainElement.zero(-1)

    def d_W_on_generator(self, kind: str, key) -> CochainElement:
        if kind == "partial_P":
            return self.d_W_partial_P(key)
        if kind == "partial_alpha":
            return self.d_W_partial_alpha(key)
        if kind == "theta":
            return self.d_W_theta(key)
        if kind == "x_alpha":
            return self.d_W_x_alpha(key)
        if kind == "psi":
            raise HochschildError(
                "d_W on psi generators has no closed form here; refusing to guess"
            )
        raise HochschildError(f"unknown generator kind {kind!r}")

    # -- cup/bracket closed forms ---------------------------------------------

    def bracket_partialP_central(self, i: int, f: JElement) -> JElement:
        """{partial_{P_i}, f} = deg_{P_i}(f) f for degree-0 classes f."""
        degs = {self.jac.class_degree(cls, i) for cls in f.terms}
        if len(degs) > 1:
            raise HochschildError("bracket oracle needs a P_i-homogeneous input")
        return f.scale(degs.pop()) if degs else JElement()

    def cup_oracle(self, a: CochainElement, b: CochainElement) -> CochainElement:
        """Closed-form cup products on the supported generator shapes."""
        # unit acts as identity
        if a.degree == 0 and self._is_unit(a):
            return b
        if b.degree == 0 and self._is_unit(b):
            return a
        # central degree-0 scalar times anything
        if a.degree == 0:
            cls = self._central_class(a)
            if cls is not None:
                return self._scale_by_central(cls, b)
        if b.degree == 0:
            cls = self._central_class(b)
            if cls is not None:
                return self._scale_by_central(cls, a)
        # partial_P cup psi
        if a in self._partial_registry and self._partial_registry[a][0] == "corner":
            k = self._partial_registry[a][1]
            for (i, j), (psi_c, v, _) in self._psi_registry.items():
                if psi_c == b:
                    eta = self.eta(i)
                    xcls = PathClass(v, v, eta, self.jac.x_alpha_w0(eta))
                    deg = self.jac.class_degree(
                        PathClass(v, v, eta, self.jac.x_alpha_w0(eta)), k
                    )
                    return CochainElement(3, {(PT, v): JElement.of(xcls, deg)})
        raise HochschildError("no closed form for this cup product")

    def _is_unit(self, c: CochainElement) -> bool:
        return all(
            kind == UNIT and list(e.terms) == [self.jac.idempotent(v)] and e.terms[self.jac.idempotent(v)] == 1
            for (kind, v), e in c.terms.items()
        ) and len(c.terms) == len(self.dimer.vertices)

    def _central_class(self, c: CochainElement):
        data = set()
        if len(c.terms) != len(self.dimer.vertices):
            return None
        for (kind, v), e in c.terms.items():
            if kind != UNIT or len(e.terms) != 1:
                return None
            (cls, k), = e.terms.items()
            if cls.tail != v or cls.head != v or k != 1:
                return None
            data.add((cls.h1, cls.w0))
        if len(data) != 1:
            return None
        h1, w0 = data.pop()
        return PathClass(None, None, h1, w0)

    def _scale_by_central(self, central: PathClass, c: CochainElement) -> CochainElement:
        out = CochainElement.zero(c.degree)
        for slot, e in c.terms.items():
            scaled = JElement(
                {
                    PathClass(cls.tail, cls.head, vec_add(cls.h1, central.h1), cls.w0 + central.w0): k
                    for cls, k in e.terms.items()
                }
            )
            out = out.add_term(slot, scaled)
        return out

    # -- second page -----------------------------------------------------------

    def e2_basis(self, parity: str, n_max: int) -> list:
        """Additive basis labels of the second page up to winding n_max."""
        if n_max < 1:
            raise HochschildError("n_max must be >= 1")
        if parity not in ("even", "odd"):
            raise HochschildError("parity must be 'even' or 'odd'")
        out = []
        if parity == "even":
            out.append(E2Label("unit"))
            for i in range(1, self.n_classes + 1):
                for n in range(1, n_max + 1):
                    out.append(E2Label("x_eta", i=i, n=n))
                for j in range(2, self.m(i) + 1):
                    for n in range(0, n_max):
                        out.append(E2Label("psi", i=i, j=j, n=n))
            return out
        out.append(E2Label("U"))
        out.append(E2Label("V"))
        v0 = self.base_vertex
        for v in self.dimer.vertices:
            if v != v0:
                out.append(E2Label("theta", n=0, v=v))
        for i in range(1, self.n_classes + 1):
            for n in range(1, n_max + 1):
                out.append(E2Label("xW", i=i, n=n))
            for j in range(2, self.m(i) + 1):
                for n in range(1, n_max + 1):
                    out.append(E2Label("theta", i=i, j=j, n=n))
        return out


def _arc(word, start: int, stop: int):
    n = len(word)
    out = []
    pos = (start + 1) % n
    while pos != stop:
        out.append(word[pos])
        pos = (pos + 1) % n
    return tuple(out)
