"""Super-matrix realizations carrying explicit Chevalley bases, plus the axiom verifier.

Matrix families (sl, osp, P) are realized inside gl(p|q) by sparse
super-matrices.  D(2,1;a) is realized as sl(2)^3 plus the odd module
V (x) V (x) V with the standard sigma-weighted odd bracket; its Chevalley basis
matrices are then the adjoint matrices in Chevalley coordinates.

Everything about the basis (structure constants, signs sigma_alpha) is computed
from these realizations.  Nothing is tabulated by hand except the root-vector
formulas themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .exact import same_lattice, solve
from .rootdata import (
    Family,
    FamilyError,
    Root,
    RootDatum,
    build_root_datum,
    d21a_sigma,
    parse_family,
)
from .scalarring import SQRT2, exact_div, is_integer, normalize

# ---------------------------------------------------------------------------
# super-matrices
# ---------------------------------------------------------------------------


class SuperMatrix:
    """Sparse square matrix on a super vector space of dimension (p|q).

    Basis vectors ``0..p-1`` are even and ``p..p+q-1`` odd, unless an explicit
    ``parities`` tuple is given.  Entries may be any exact ring elements that
    support ``+``, ``*`` and comparison with 0.
    """

    __slots__ = ("parities", "entries")

    def __init__(self, parities: Sequence[int], entries: Mapping[tuple[int, int], object] | None = None):
        self.parities = tuple(parities)
        clean = {}
        for (i, j), c in (entries or {}).items():
            c = normalize(c)
            if c != 0:
                clean[(i, j)] = c
        self.entries = clean

    @classmethod
    def block(cls, p: int, q: int, entries=None) -> "SuperMatrix":
        return cls((0,) * p + (1,) * q, entries)

    @property
    def size(self) -> int:
        return len(self.parities)

    @property
    def p(self) -> int:
        return sum(1 for x in self.parities if x == 0)

    @property
    def q(self) -> int:
        return sum(1 for x in self.parities if x == 1)

    def like(self, entries) -> "SuperMatrix":
        return SuperMatrix(self.parities, entries)

    def identity(self, one=1) -> "SuperMatrix":
        return self.like({(i, i): one for i in range(self.size)})

    def zero(self) -> "SuperMatrix":
        return self.like({})

    def __getitem__(self, ij: tuple[int, int]):
        return self.entries.get(ij, 0)

    def is_zero(self) -> bool:
        return not self.entries

    def parity(self) -> int | None:
        """0 (even), 1 (odd) or None for an inhomogeneous matrix; zero counts as even."""
        ps = {self.parities[i] ^ self.parities[j] for (i, j) in self.entries}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def even_part(self) -> "SuperMatrix":
        return self.like({k: v for k, v in self.entries.items() if self.parities[k[0]] == self.parities[k[1]]})

    def odd_part(self) -> "SuperMatrix":
        return self.like({k: v for k, v in self.entries.items() if self.parities[k[0]] != self.parities[k[1]]})

    def _check(self, other: "SuperMatrix"):
        if other.parities != self.parities:
            raise ValueError("super-matrices of different shapes")

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        self._check(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return self.like(out)

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return self + (-other)

    def __neg__(self) -> "SuperMatrix":
        return self.like({k: -v for k, v in self.entries.items()})

    def scale(self, c) -> "SuperMatrix":
        """Entrywise ``c * entry``."""
        return self.like({k: c * v for k, v in self.entries.items()})

    def scale_right(self, c) -> "SuperMatrix":
        """Entrywise ``entry * c``."""
        return self.like({k: v * c for k, v in self.entries.items()})

    def __rmul__(self, c) -> "SuperMatrix":
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, SuperMatrix):
            return self.scale_right(other)
        self._check(other)
        rows: dict[int, list[tuple[int, object]]] = {}
        for (k, j), v in other.entries.items():
            rows.setdefault(k, []).append((j, v))
        out: dict[tuple[int, int], object] = {}
        for (i, k), a in self.entries.items():
            for j, b in rows.get(k, ()):
                key = (i, j)
                prod = a * b
                out[key] = out[key] + prod if key in out else prod
        return self.like(out)

    def map_entries(self, f: Callable) -> "SuperMatrix":
        return self.like({k: f(v) for k, v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        return self.parities == other.parities and self.entries == other.entries

    def __hash__(self):
        return hash((self.parities, frozenset(self.entries.items())))

    def rows(self) -> list[list]:
        n = self.size
        return [[self.entries.get((i, j), 0) for j in range(n)] for i in range(n)]

    def apply(self, vec: Sequence) -> list:
        out = [0] * self.size
        for (i, j), v in self.entries.items():
            if vec[j] != 0:
                out[i] = out[i] + v * vec[j]
        return [normalize(x) if not hasattr(x, "terms") else x for x in out]

    def supertrace(self):
        return normalize(
            sum((v if self.parities[i] == 0 else -v) for (i, j), v in self.entries.items() if i == j)
        )

    def __repr__(self):
        return f"SuperMatrix({self.p}|{self.q}, {dict(sorted(self.entries.items()))})"


def elementary(parities: Sequence[int], i: int, j: int, c=1) -> SuperMatrix:
    """``c * e_{i,j}`` with 1-based indices."""
    return SuperMatrix(parities, {(i - 1, j - 1): c})


def super_bracket(x: SuperMatrix, y: SuperMatrix) -> SuperMatrix:
    """[x, y] = xy - (-1)^{|x||y|} yx for homogeneous x, y."""
    px, py = x.parity(), y.parity()
    if px is None or py is None:
        raise ValueError("super_bracket needs homogeneous arguments")
    xy = x * y
    yx = y * x
    return xy + yx if (px and py) else xy - yx


# ---------------------------------------------------------------------------
# realizations: a vector space with a bracket, elements as sparse dicts
# ---------------------------------------------------------------------------


class MatrixRealization:
    """Elements are sparse super-matrices."""

    def __init__(self, parities: Sequence[int]):
        self.parities = tuple(parities)

    def parity(self, x: SuperMatrix) -> int | None:
        return x.parity()

    def bracket(self, x: SuperMatrix, y: SuperMatrix) -> SuperMatrix:
        return super_bracket(x, y)

    def entries(self, x: SuperMatrix) -> Mapping:
        return x.entries

    def combine(self, terms: Iterable[tuple[object, SuperMatrix]]) -> SuperMatrix:
        out = SuperMatrix(self.parities)
        for c, m in terms:
            out = out + m.scale(c)
        return out

    def zero(self) -> SuperMatrix:
        return SuperMatrix(self.parities)


class Vec:
    """Sparse vector in an abstract realization, with a fixed parity per coordinate."""

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping[int, object] | None = None):
        self.entries = {k: normalize(v) for k, v in (entries or {}).items() if v != 0}

    def __add__(self, other: "Vec") -> "Vec":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return Vec(out)

    def __neg__(self):
        return Vec({k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Vec":
        return Vec({k: c * v for k, v in self.entries.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        return isinstance(other, Vec) and self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def is_zero(self) -> bool:
        return not self.entries

    def __repr__(self):
        return f"Vec({dict(sorted(self.entries.items()))})"


class D21ARealization:
    """D(2,1;a) = sl(2)+sl(2)+sl(2) + V(x)V(x)V.

    Coordinates 0..8: (E, H, F) of factor k at 3k, 3k+1, 3k+2.  Coordinates
    9..16: v_{s1 s2 s3}, with bit k of (index - 9) set when s_{k+1} = minus.
    The odd bracket is
    [u1(x)u2(x)u3, w1(x)w2(x)w3] = sum_k sigma_k psi(u_i,w_i) psi(u_j,w_j) p(u_k,w_k)
    where psi(v+, v-) = 1 is the symplectic form on V and
    p(u, w) = u psi(w, .) + w psi(u, .) lies in sl(2).
    """

    def __init__(self, a: int):
        self.a = a
        self.sigma = d21a_sigma(a)
        self.parities = (0,) * 9 + (1,) * 8

    @staticmethod
    def even(k: int, which: str) -> int:
        return 3 * k + "EHF".index(which)

    @staticmethod
    def odd(signs: str) -> int:
        """Index of v_{signs}, e.g. ``"+--"``."""
        return 9 + sum(1 << k for k, s in enumerate(signs) if s == "-")

    def parity(self, x: Vec) -> int | None:
        ps = {self.parities[k] for k in x.entries}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def entries(self, x: Vec):
        return x.entries

    def zero(self) -> Vec:
        return Vec()

    def combine(self, terms) -> Vec:
        out = Vec()
        for c, v in terms:
            out = out + v.scale(c)
        return out

    # single-coordinate brackets --------------------------------------------
    def _even_even(self, i: int, j: int) -> dict:
        ki, wi = divmod(i, 3)
        kj, wj = divmod(j, 3)
        if ki != kj:
            return {}
        base = 3 * ki
        table = {
            (1, 0): {base + 0: 2},
            (1, 2): {base + 2: -2},
            (0, 2): {base + 1: 1},
        }
        if (wi, wj) in table:
            return table[(wi, wj)]
        if (wj, wi) in table:
            return {k: -v for k, v in table[(wj, wi)].items()}
        return {}

    @staticmethod
    def _signs(idx: int) -> list[int]:
        b = idx - 9
        return [(-1 if b >> k & 1 else 1) for k in range(3)]

    @staticmethod
    def _from_signs(s: Sequence[int]) -> int:
        return 9 + sum(1 << k for k, x in enumerate(s) if x < 0)

    def _even_odd(self, i: int, j: int) -> dict:
        k, w = divmod(i, 3)
        s = self._signs(j)
        if w == 1:
            return {j: s[k]}
        if w == 0:  # E: v- -> v+
            if s[k] < 0:
                t = list(s)
                t[k] = 1
                return {self._from_signs(t): 1}
            return {}
        if s[k] > 0:  # F: v+ -> v-
            t = list(s)
            t[k] = -1
            return {self._from_signs(t): 1}
        return {}

    @staticmethod
    def _psi(u: int, w: int) -> int:
        if u == w:
            return 0
        return 1 if u > 0 else -1

    def _p(self, k: int, u: int, w: int) -> dict:
        base = 3 * k
        if u > 0 and w > 0:
            return {base + 0: 2}
        if u < 0 and w < 0:
            return {base + 2: -2}
        return {base + 1: -1}

    def _odd_odd(self, i: int, j: int) -> dict:
        su, sw = self._signs(i), self._signs(j)
        out: dict[int, object] = {}
        for k in range(3):
            others = [l for l in range(3) if l != k]
            coeff = self.sigma[k]
            for l in others:
                coeff *= self._psi(su[l], sw[l])
            if coeff == 0:
                continue
            for idx, c in self._p(k, su[k], sw[k]).items():
                out[idx] = out.get(idx, 0) + coeff * c
        return out

    def basis_bracket(self, i: int, j: int) -> dict:
        pi, pj = self.parities[i], self.parities[j]
        if pi == 0 and pj == 0:
            return self._even_even(i, j)
        if pi == 0:
            return self._even_odd(i, j)
        if pj == 0:
            # [odd, even] = -[even, odd]
            return {k: -v for k, v in self._even_odd(j, i).items()}
        return self._odd_odd(i, j)

    def bracket(self, x: Vec, y: Vec) -> Vec:
        out: dict[int, object] = {}
        for i, a in x.entries.items():
            for j, b in y.entries.items():
                for k, c in self.basis_bracket(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return Vec(out)

    def named_elements(self) -> dict[str, Vec]:
        """The generators and derived elements used in the D(2,1;a) bracket table."""
        a = self.a
        E = lambda k: Vec({self.even(k, "E"): 1})
        F = lambda k: Vec({self.even(k, "F"): 1})
        H = lambda k: Vec({self.even(k, "H"): 1})
        br = self.bracket
        el: dict[str, Vec] = {}
        el["e1"] = Vec({self.odd("+--"): 1})
        el["f1"] = Vec({self.odd("-++"): Fraction(1, 2)})
        el["e2"], el["f2"], el["h2"] = E(1), F(1), H(1)
        el["e3"], el["f3"], el["h3"] = E(2), F(2), H(2)
        el["h1"] = Vec({self.even(0, "H"): Fraction(1 + a, 2), self.even(1, "H"): Fraction(1, 2), self.even(2, "H"): Fraction(a, 2)})
        el["e12"] = br(el["e1"], el["e2"])
        el["e13"] = br(el["e1"], el["e3"])
        el["e123"] = br(el["e12"], el["e3"])
        el["e'1123"] = br(el["e1"], el["e123"])
        el["f21"] = br(el["f2"], el["f1"])
        el["f31"] = br(el["f3"], el["f1"])
        el["f321"] = br(el["f3"], el["f21"])
        el["f'3211"] = br(el["f321"], el["f1"])
        el["e1123"] = el["e'1123"].scale(Fraction(1, 1 + a))
        el["f3211"] = el["f'3211"].scale(Fraction(-1, 1 + a))
        return el


D21A_ROOT_NAMES = {
    (1, 0, 0): "e1",
    (0, 1, 0): "e2",
    (0, 0, 1): "e3",
    (1, 1, 0): "e12",
    (1, 0, 1): "e13",
    (1, 1, 1): "e123",
    (2, 1, 1): "e1123",
    (-1, 0, 0): "f1",
    (0, -1, 0): "f2",
    (0, 0, -1): "f3",
    (-1, -1, 0): "f21",
    (-1, 0, -1): "f31",
    (-1, -1, -1): "f321",
    (-2, -1, -1): "f3211",
}


# ---------------------------------------------------------------------------
# Chevalley basis
# ---------------------------------------------------------------------------


class DecompositionError(ValueError):
    """A bracket that is not a multiple of the expected basis element."""


@dataclass
class ChevalleyBasis:
    rd: RootDatum
    realization: object
    cartan_elems: list  # realization elements H_1..H_l
    root_elems: dict  # Root -> realization element
    repairs: list[str] = field(default_factory=list)

    @property
    def family(self) -> Family:
        return self.rd.family

    @cached_property
    def keys(self) -> tuple:
        """Basis keys in the fixed order: even roots, ("H", i), odd negative, odd positive."""
        return self.rd.kostant_order

    @cached_property
    def key_index(self) -> dict:
        return {k: i for i, k in enumerate(self.keys)}

    def key_parity(self, k) -> int:
        return 0 if isinstance(k, tuple) else k.parity

    def key_weight(self, k) -> tuple[int, ...]:
        return (0,) * self.rd.dim_coords if isinstance(k, tuple) else k.coords

    def elem(self, k):
        if isinstance(k, tuple):
            return self.cartan_elems[k[1] - 1]
        return self.root_elems[k]

    @property
    def cartan(self) -> list:
        return self.cartan_elems

    @property
    def rootvec(self) -> dict:
        return self.root_elems

    def sigma(self, r: Root) -> int:
        return -1 if (r.parity == 1 and r.sign < 0) else 1

    def coroot_elem(self, r: Root):
        h = self.rd.coroot(r)
        return self.realization.combine((c, self.cartan_elems[i]) for i, c in enumerate(h) if c != 0)

    # decomposition -----------------------------------------------------------
    @cached_property
    def _cartan_solver(self):
        positions = sorted({p for h in self.cartan_elems for p in self.realization.entries(h)})
        mat = [[self.realization.entries(h).get(p, 0) for h in self.cartan_elems] for p in positions]
        return positions, mat

    def decompose(self, x, weight: Sequence[int]) -> dict:
        """Coordinates of a weight vector x in the basis; raises DecompositionError."""
        ent = self.realization.entries(x)
        if not ent:
            return {}
        if all(w == 0 for w in weight):
            positions, mat = self._cartan_solver
            if any(p not in set(positions) for p in ent):
                raise DecompositionError("zero-weight element outside the Cartan subalgebra")
            coeffs = solve(mat, [ent.get(p, 0) for p in positions])
            if coeffs is None:
                raise DecompositionError("zero-weight element outside the Cartan subalgebra")
            rebuilt = self.realization.combine((c, h) for c, h in zip(coeffs, self.cartan_elems) if c != 0)
            if rebuilt != x:
                raise DecompositionError("Cartan decomposition does not reproduce the element")
            return {("H", i + 1): c for i, c in enumerate(coeffs) if c != 0}
        r = self.rd.get(weight)
        if r is None:
            raise DecompositionError(f"nonzero element of non-root weight {weight}")
        target = self.root_elems[r]
        tent = self.realization.entries(target)
        pos = next(iter(tent))
        c = exact_div(ent.get(pos, 0), tent[pos])
        if target.scale(c) != x:
            raise DecompositionError(f"element of weight {weight} is not a multiple of its root vector")
        return {r: c} if c != 0 else {}

    @cached_property
    def table(self) -> dict:
        """(k1, k2) -> coordinates of [b_k1, b_k2]."""
        out = {}
        for k1 in self.keys:
            for k2 in self.keys:
                w = tuple(x + y for x, y in zip(self.key_weight(k1), self.key_weight(k2)))
                br = self.realization.bracket(self.elem(k1), self.elem(k2))
                try:
                    out[(k1, k2)] = self.decompose(br, w)
                except DecompositionError as exc:
                    out[(k1, k2)] = exc
        return out

    def bracket_coords(self, x: Mapping, y: Mapping) -> dict:
        """Bracket of two Lie elements given by basis coordinates."""
        out: dict = {}
        for k1, a in x.items():
            for k2, b in y.items():
                res = self.table[(k1, k2)]
                if isinstance(res, Exception):
                    raise res
                for k, c in res.items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: normalize(v) for k, v in out.items() if v != 0}

    def sconst(self, alpha: Root, beta: Root):
        """c_{alpha,beta} with [X_alpha, X_beta] = c X_{alpha+beta} (0 when alpha+beta is not a root)."""
        res = self.table[(alpha, beta)]
        if isinstance(res, Exception):
            raise res
        g = self.rd.add(alpha, beta)
        if g is None:
            return 0
        return res.get(g, 0)

    @cached_property
    def matrices(self) -> dict:
        """Basis key -> SuperMatrix (defining matrices, or adjoint matrices for D(2,1;a))."""
        if isinstance(self.realization, MatrixRealization):
            return {k: self.elem(k) for k in self.keys}
        return {k: adjoint_action(self, {k: 1}) for k in self.keys}

    @cached_property
    def adjoint_parities(self) -> tuple[int, ...]:
        return tuple(self.key_parity(k) for k in self.keys)


def adjoint_action(cb: ChevalleyBasis, x: Mapping) -> SuperMatrix:
    """Matrix of ad(x) in Chevalley coordinates (columns = images of basis elements)."""
    entries = {}
    for j, kj in enumerate(cb.keys):
        img = cb.bracket_coords(x, {kj: 1})
        for k, c in img.items():
            entries[(cb.key_index[k], j)] = c
    return SuperMatrix(cb.adjoint_parities, entries)


# ---------------------------------------------------------------------------
# family constructions
# ---------------------------------------------------------------------------


def _sl_basis(rd: RootDatum) -> ChevalleyBasis:
    fam = rd.family
    m, n = fam.m, fam.n
    par = (0,) * m + (1,) * n
    real = MatrixRealization(par)
    cart = [SuperMatrix(par, {(i, i): c for i, c in enumerate(h) if c != 0}) for h in rd.cartan_vectors]
    roots = {}
    for r in rd.roots:
        i = next(k for k, c in enumerate(r.coords) if c == 1)
        j = next(k for k, c in enumerate(r.coords) if c == -1)
        roots[r] = SuperMatrix(par, {(i, j): 1})
    return ChevalleyBasis(rd, real, cart, roots)


def _osp_layout(fam: Family):
    m = fam.m
    n = fam.n
    M = fam.M
    par = (0,) * M + (1,) * (2 * n)
    return m, n, M, par


def osp_form(fam: Family) -> dict[tuple[int, int], int]:
    """Nonzero entries of the even supersymmetric form (0-based indices)."""
    m, n, M, _ = _osp_layout(fam)
    phi = {}
    for i in range(m):
        phi[(i, i + m)] = 1
        phi[(i + m, i)] = 1
    if M % 2:
        phi[(2 * m, 2 * m)] = 1
    for j in range(n):
        phi[(M + j, M + n + j)] = 1
        phi[(M + n + j, M + j)] = -1
    return phi


def in_osp(x: SuperMatrix, fam: Family) -> bool:
    """phi(Xu, w) = -(-1)^{|X||w|} phi(u, Xw) on basis vectors (the block-form convention)."""
    s = x.parity()
    if s is None:
        return False
    phi = osp_form(fam)
    partner = {a: b for (a, b) in phi}
    size = x.size
    par = x.parities
    for k in range(size):
        for l in range(size):
            pl = partner[l]
            lhs = x[(pl, k)] * phi[(pl, l)]
            pk = partner[k]
            rhs = phi[(k, pk)] * x[(pk, l)]
            sign = -1 if (s and par[l]) else 1
            if normalize(lhs + sign * rhs) != 0:
                return False
    return True


def _osp_root_vectors(rd: RootDatum) -> dict[Root, list]:
    """Root vector formulas as lists of (coefficient, row, col), 1-based indices.

    The first term is the primary entry; any further term is the partner entry
    forced by the orthosymplectic symmetry.
    """
    fam = rd.family
    m, n, M, _ = _osp_layout(fam)
    mid = 2 * m + 1
    r2 = SQRT2
    vp = lambda j: M + j  # v_j, 1-based j
    vm = lambda j: M + n + j
    out: dict[tuple, list] = {}
    size = m + n

    def key(*pairs):
        v = [0] * size
        for k, c in pairs:
            v[k] += c
        return tuple(v)

    E = lambda i: i - 1  # coordinate position of eps_i
    Dl = lambda j: m + j - 1  # coordinate position of delta_j
    for i in range(1, m + 1):
        for j in range(i + 1, m + 1):
            out[key((E(i), 1), (E(j), -1))] = [(1, i, j), (-1, j + m, i + m)]
            out[key((E(i), -1), (E(j), 1))] = [(1, i + m, j + m), (-1, j, i)]
            out[key((E(i), 1), (E(j), 1))] = [(1, i, j + m), (-1, j, i + m)]
            out[key((E(i), -1), (E(j), -1))] = [(1, j + m, i), (-1, i + m, j)]
        if M % 2:
            out[key((E(i), 1))] = [(r2, i, mid), (-r2, mid, i + m)]
            out[key((E(i), -1))] = [(-r2, i + m, mid), (r2, mid, i)]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out[key((Dl(i), 1), (Dl(j), -1))] = [(1, vp(i), vp(j)), (-1, vm(j), vm(i))]
            out[key((Dl(i), -1), (Dl(j), 1))] = [(1, vm(i), vm(j)), (-1, vp(j), vp(i))]
            out[key((Dl(i), 1), (Dl(j), 1))] = [(1, vp(i), vm(j)), (1, vp(j), vm(i))]
            out[key((Dl(i), -1), (Dl(j), -1))] = [(1, vm(i), vp(j)), (1, vm(j), vp(i))]
        out[key((Dl(i), 2))] = [(1, vp(i), vm(i))]
        out[key((Dl(i), -2))] = [(1, vm(i), vp(i))]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            out[key((E(i), 1), (Dl(j), 1))] = [(1, i, vm(j)), (1, vp(j), i + m)]
            out[key((E(i), -1), (Dl(j), -1))] = [(1, i + m, vp(j)), (-1, vm(j), i)]
            out[key((E(i), 1), (Dl(j), -1))] = [(1, i, vp(j)), (-1, vm(j), i + m)]
            out[key((E(i), -1), (Dl(j), 1))] = [(1, i + m, vm(j)), (1, vp(j), i)]
    if M % 2:
        for j in range(1, n + 1):
            out[key((Dl(j), 1))] = [(r2, mid, vm(j)), (r2, vp(j), mid)]
            out[key((Dl(j), -1))] = [(-r2, vm(j), mid), (r2, mid, vp(j))]
    return {rd.get(k): v for k, v in out.items()}


def _terms_to_matrix(par, terms) -> SuperMatrix:
    return SuperMatrix(par, {(r - 1, c - 1): coef for coef, r, c in terms})


def _osp_basis(rd: RootDatum) -> ChevalleyBasis:
    fam = rd.family
    m, n, M, par = _osp_layout(fam)
    real = MatrixRealization(par)
    cart = [SuperMatrix(par, {(i, i): c for i, c in enumerate(h) if c != 0}) for h in rd.cartan_vectors]
    formulas = _osp_root_vectors(rd)
    if set(formulas) != set(rd.roots):
        raise FamilyError("osp root vector formulas do not cover the root system")
    repairs: list[str] = []
    roots = {}
    for r, terms in formulas.items():
        mat = _terms_to_matrix(par, terms)
        if not in_osp(mat, fam) and len(terms) == 2:
            flipped = [terms[0], (-terms[1][0], terms[1][1], terms[1][2])]
            alt = _terms_to_matrix(par, flipped)
            if in_osp(alt, fam):
                repairs.append(f"{rd.name(r)}: partner entry sign flipped to lie in osp")
                mat = alt
        roots[r] = mat
    cb = ChevalleyBasis(rd, real, cart, roots, repairs)
    _normalize_negative_vectors(cb)
    return cb


def _normalize_negative_vectors(cb: ChevalleyBasis) -> None:
    """Flip X_{-a} whenever [X_a, X_{-a}] = -sigma_a H_a for a positive root a."""
    rd = cb.rd
    for r in rd.roots:
        if r.sign < 0:
            continue
        nr = rd.neg(r)
        if nr is None:
            continue
        br = cb.realization.bracket(cb.root_elems[r], cb.root_elems[nr])
        h = cb.coroot_elem(r)
        if br == h.scale(-cb.sigma(r)) and not br == h.scale(cb.sigma(r)):
            cb.root_elems[nr] = cb.root_elems[nr].scale(-1)
            cb.repairs.append(f"{rd.name(nr)}: sign flipped so that [X_a, X_-a] = sigma_a H_a")
    cb.__dict__.pop("table", None)
    cb.__dict__.pop("matrices", None)


def _p_basis(rd: RootDatum) -> ChevalleyBasis:
    fam = rd.family
    N = fam.n + 1
    par = (0,) * N + (1,) * N
    real = MatrixRealization(par)
    cart = [SuperMatrix(par, {(i, i): c for i, c in enumerate(h) if c != 0}) for h in rd.cartan_vectors]
    roots = {}
    for r in rd.roots:
        c = r.coords
        if r.parity == 0:
            i = c.index(1)
            j = c.index(-1)
            roots[r] = SuperMatrix(par, {(i, j): 1, (N + j, N + i): -1})
        elif r.sign > 0 and 2 in c:
            i = c.index(2)
            roots[r] = SuperMatrix(par, {(i, N + i): 1})
        elif r.sign > 0:
            i, j = [k for k, x in enumerate(c) if x == 1]
            roots[r] = SuperMatrix(par, {(i, N + j): 1, (j, N + i): 1})
        else:
            i, j = [k for k, x in enumerate(c) if x == -1]
            roots[r] = SuperMatrix(par, {(N + j, i): 1, (N + i, j): -1})
    cb = ChevalleyBasis(rd, real, cart, roots)
    _normalize_negative_vectors(cb)
    return cb


def _d21a_basis(rd: RootDatum) -> ChevalleyBasis:
    a = rd.family.a
    real = D21ARealization(a)
    el = real.named_elements()
    cart = [
        el["h1"],
        (el["h1"].scale(2) - el["h2"] - el["h3"].scale(a)).scale(Fraction(1, 1 + a)),
        el["h3"],
    ]
    roots = {rd.get(c): el[name] for c, name in D21A_ROOT_NAMES.items()}
    return ChevalleyBasis(rd, real, cart, roots)


def build_chevalley_basis(family: Family | str) -> ChevalleyBasis:
    fam = parse_family(family) if isinstance(family, str) else family
    rd = build_root_datum(fam)
    if fam.kind == "A":
        return _sl_basis(rd)
    if fam.kind in "BCD":
        return _osp_basis(rd)
    if fam.kind == "P":
        return _p_basis(rd)
    if fam.kind == "D21A":
        return _d21a_basis(rd)
    raise FamilyError(f"unsupported family {fam}")


# ---------------------------------------------------------------------------
# verifier
# ---------------------------------------------------------------------------


@dataclass
class Check:
    axiom: str
    subject: str
    expected: str
    got: str
    passed: bool


@dataclass
class VerificationReport:
    family: str
    checks: list[Check] = field(default_factory=list)
    observations: list[Check] = field(default_factory=list)

    @property
    def violations(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, axiom: str) -> int:
        return sum(1 for c in self.checks if c.axiom == axiom)

    def summary(self) -> dict:
        axioms = sorted({c.axiom for c in self.checks})
        return {
            ax: {
                "checked": self.count(ax),
                "failed": sum(1 for c in self.checks if c.axiom == ax and not c.passed),
            }
            for ax in axioms
        }


def p_exception(rd: RootDatum, alpha: Root, beta: Root) -> bool:
    """P(n): alpha = e_i + e_j (odd), beta = e_i - e_j (even), where |c| = r + 2."""
    if rd.family.kind != "P" or alpha.parity != 1 or beta.parity != 0 or alpha.sign < 0:
        return False
    ca, cb = alpha.coords, beta.coords
    if 2 in ca:
        return False
    i = cb.index(1)
    j = cb.index(-1)
    return ca[i] == 1 and ca[j] == 1


def osp_isotropic_exception(rd: RootDatum, alpha: Root, beta: Root) -> bool:
    """osp (not B(0,n)): (alpha, beta) = +-(e_i + d_j, -e_i + d_j) or +-(e_i - d_j, -e_i - d_j)."""
    fam = rd.family
    if fam.kind not in "BCD" or (fam.kind == "B" and fam.m == 0):
        return False
    m = fam.m
    a, b = alpha.coords, beta.coords
    ea = [k for k in range(m) if a[k] != 0]
    da = [k for k in range(m, len(a)) if a[k] != 0]
    if len(ea) != 1 or len(da) != 1:
        return False
    i = ea[0]
    expected = list(a)
    expected[i] = -a[i]
    if tuple(expected) != b:
        return False
    # e_i + d_j with -e_i + d_j, or e_i - d_j with -e_i - d_j (either overall sign)
    return True


def verify_chevalley_axioms(cb: ChevalleyBasis) -> VerificationReport:
    rd = cb.rd
    rep = VerificationReport(str(rd.family))
    table = cb.table

    def add(ax, subj, exp, got, ok):
        rep.checks.append(Check(ax, subj, str(exp), str(got), bool(ok)))

    # closure and integrality
    for (k1, k2), res in table.items():
        subj = f"[{_kname(rd, k1)}, {_kname(rd, k2)}]"
        if isinstance(res, Exception):
            add("closure", subj, "bracket in the span of the basis", str(res), False)
            continue
        bad = [v for v in res.values() if not is_integer(v)]
        add("integrality", subj, "integer coordinates", res and {_kname(rd, k): v for k, v in res.items()}, not bad)

    # (a)
    coroots = [list(h) for h in rd.coroots.values()]
    ident = [[int(i == j) for j in range(rd.rank)] for i in range(rd.rank)]
    add("a", "Z-span of coroots", "Z^l", coroots, same_lattice(coroots, ident))
    # (b)
    for i in range(1, rd.rank + 1):
        for j in range(1, rd.rank + 1):
            res = table[(("H", i), ("H", j))]
            add("b", f"[H{i}, H{j}]", {}, res, res == {})
        for r in rd.roots:
            res = table[(("H", i), r)]
            exp = {r: rd.pairings[r][i - 1]} if rd.pairings[r][i - 1] != 0 else {}
            add("b", f"[H{i}, {rd.name(r)}]", exp, res, res == exp)
    # (c)
    for r in rd.roots:
        nr = rd.neg(r)
        if nr is None:
            continue
        res = table[(r, nr)]
        h = rd.coroot(r)
        exp = {("H", i + 1): cb.sigma(r) * c for i, c in enumerate(h) if c != 0}
        add("c", f"[X({rd.name(r)}), X({rd.name(nr)})]", exp, res, res == exp)
    # (d)
    for al in rd.roots:
        for be in rd.roots:
            if rd.neg(al) == be:
                continue
            res = table[(al, be)]
            if isinstance(res, Exception):
                continue
            subj = f"c({rd.name(al)}, {rd.name(be)})"
            g = rd.add(al, be)
            if g is None:
                add("d.1", subj, 0, res, res == {})
                continue
            c = res.get(g, 0)
            r, _q = rd.alpha_string(al, be)
            iso = rd.family.kind != "P" and rd.root_norm(al) == 0 and rd.root_norm(be) == 0
            if not iso:
                want = r + 2 if p_exception(rd, al, be) else r + 1
                add("d.2", subj, f"+-{want}", c, abs(c) == want)
            else:
                bh = rd.pair(be, rd.coroot(al))
                add("d.3", subj, f"+-{abs(bh)}", c, abs(c) == abs(bh))
                if rd.family.kind != "D21A":
                    want = r + 2 if osp_isotropic_exception(rd, al, be) else r + 1
                    rep.observations.append(
                        Check("isotropic-string", f"{rd.name(be)}(H_{rd.name(al)})", f"+-{want}", bh, abs(bh) == want)
                    )
    return rep


def _kname(rd: RootDatum, k) -> str:
    return f"H{k[1]}" if isinstance(k, tuple) else f"X({rd.name(k)})"


def structure_constants(cb: ChevalleyBasis) -> list[tuple[Root, Root, object]]:
    """(alpha, beta, c_{alpha,beta}) for all alpha, beta with alpha + beta != 0."""
    out = []
    for al in cb.rd.roots:
        for be in cb.rd.roots:
            if cb.rd.neg(al) == be:
                continue
            c = cb.sconst(al, be)
            if not is_integer(c):
                raise ValueError(f"non-integral structure constant c({cb.rd.name(al)}, {cb.rd.name(be)}) = {c}")
            out.append((al, be, c))
    return out
