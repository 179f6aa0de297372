"""Root systems of the supported Lie superalgebra families.

The Cartan subalgebra of every family is modelled concretely as a space of
"ambient" vectors: diagonal entries of the defining matrices for the matrix
families, and coordinates on the three sl(2) Cartan elements for D(2,1;a).
A root is a linear functional on that space, stored as an integer coordinate
vector (epsilon/delta basis, or the simple-root basis for D(2,1;a)) together
with its parity and sign.

Coroots are derived from the invariant form on h rather than read off root
vectors, so they give an independent check of the bracket [X_a, X_-a].
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .exact import hnf, solve
from .scalarring import normalize


class FamilyError(ValueError):
    """Unsupported family or out-of-range parameters."""


@dataclass(frozen=True)
class Family:
    """One instance of a supported family.

    ``kind`` is one of ``"A"`` (sl(m|n)), ``"B"``, ``"C"``, ``"D"`` (osp(M|2n)),
    ``"P"`` and ``"D21A"``.  For osp, ``m`` is the rank of the even orthogonal
    part (``M = 2m`` or ``2m + 1``) and ``n`` the symplectic rank.
    """

    kind: str
    m: int = 0
    n: int = 0
    a: int = 0
    M: int = 0

    @classmethod
    def sl(cls, m: int, n: int) -> "Family":
        if m < 1 or n < 1:
            raise FamilyError(f"sl({m}|{n}) needs m, n >= 1")
        if m == n:
            raise FamilyError(f"sl({m}|{n}) with m = n is not supported (quotient by the centre)")
        return cls("A", m, n)

    @classmethod
    def osp(cls, M: int, two_n: int) -> "Family":
        if two_n < 2 or two_n % 2:
            raise FamilyError(f"osp({M}|{two_n}) needs a positive even symplectic size")
        if M < 1:
            raise FamilyError(f"osp({M}|{two_n}) needs M >= 1")
        n = two_n // 2
        if M % 2:
            return cls("B", M // 2, n, M=M)
        if M == 2:
            return cls("C", 1, n, M=M)
        return cls("D", M // 2, n, M=M)

    @classmethod
    def p(cls, n: int) -> "Family":
        if n < 2:
            raise FamilyError(f"P({n}) needs n >= 2")
        if n == 3:
            raise FamilyError("P(3) is not supported (root multiplicities exceed one)")
        return cls("P", 0, n)

    @classmethod
    def d21a(cls, a: int) -> "Family":
        if not isinstance(a, int) or isinstance(a, bool):
            raise FamilyError("D(2,1;a) needs an integer a")
        if a in (0, -1):
            raise FamilyError(f"D(2,1;{a}) is degenerate; a must avoid 0 and -1")
        return cls("D21A", a=a)

    def __str__(self) -> str:
        if self.kind == "A":
            return f"sl({self.m}|{self.n})"
        if self.kind in "BCD":
            return f"osp({self.M}|{2 * self.n})"
        if self.kind == "P":
            return f"P({self.n})"
        return f"D(2,1;{self.a})"

    @property
    def type_name(self) -> str:
        if self.kind == "A":
            return f"A({self.m - 1},{self.n - 1})"
        if self.kind == "B":
            return f"B({self.m},{self.n})"
        if self.kind == "C":
            return f"C({self.n + 1})"
        if self.kind == "D":
            return f"D({self.m},{self.n})"
        return str(self)


_FAMILY_PATTERNS = [
    (re.compile(r"^sl\((\d+)\|(\d+)\)$"), lambda g: Family.sl(int(g[0]), int(g[1]))),
    (re.compile(r"^osp\((\d+)\|(\d+)\)$"), lambda g: Family.osp(int(g[0]), int(g[1]))),
    (re.compile(r"^p\((\d+)\)$"), lambda g: Family.p(int(g[0]))),
    (re.compile(r"^d\(2,1;(-?\d+)\)$"), lambda g: Family.d21a(int(g[0]))),
]


def parse_family(text: str) -> Family:
    """Parse ``sl(m|n)``, ``osp(M|2n)``, ``P(n)`` or ``D(2,1;a)`` (case-insensitive, spaces ignored)."""
    t = re.sub(r"\s+", "", text).lower()
    for pat, make in _FAMILY_PATTERNS:
        mt = pat.match(t)
        if mt:
            return make(mt.groups())
    raise FamilyError(f"unrecognized family {text!r}; expected sl(m|n), osp(M|2n), P(n) or D(2,1;a)")


@dataclass(frozen=True)
class Root:
    coords: tuple[int, ...]
    parity: int
    sign: int  # +1 positive, -1 negative

    @property
    def positive(self) -> bool:
        return self.sign > 0

    @property
    def odd(self) -> bool:
        return self.parity == 1

    def order_key(self):
        return (0 if self.sign < 0 else 1, self.parity, self.coords)


def _unit(size: int, i: int, c=1) -> list:
    v = [0] * size
    v[i] = c
    return v


@dataclass
class RootDatum:
    family: Family
    roots: tuple[Root, ...]
    simple: tuple[Root, ...]
    cartan_roots: tuple[Root, ...]
    cartan_vectors: tuple[tuple, ...]  # H_i as ambient vectors
    form_weights: tuple  # diagonal invariant form on ambient vectors
    coroots: dict = field(default_factory=dict)  # Root -> integer H-coordinates
    notes: list[str] = field(default_factory=list)

    # basic lookup ------------------------------------------------------------
    @cached_property
    def by_coords(self) -> dict[tuple[int, ...], Root]:
        return {r.coords: r for r in self.roots}

    @cached_property
    def even_roots(self) -> tuple[Root, ...]:
        return tuple(r for r in self.roots if r.parity == 0)

    @cached_property
    def odd_roots(self) -> tuple[Root, ...]:
        return tuple(r for r in self.roots if r.parity == 1)

    @property
    def rank(self) -> int:
        return len(self.cartan_vectors)

    @property
    def dim_coords(self) -> int:
        return len(self.roots[0].coords)

    def label(self, r: Root) -> str:
        return self._labels[r]

    @cached_property
    def _labels(self) -> dict[Root, str]:
        out = {}
        for k, r in enumerate(self.even_roots, 1):
            out[r] = f"a{k}"
        for k, r in enumerate(self.odd_roots, 1):
            out[r] = f"g{k}"
        return out

    @cached_property
    def _by_label(self) -> dict[str, Root]:
        return {v: k for k, v in self._labels.items()}

    def root_by_label(self, label: str) -> Root:
        try:
            return self._by_label[label]
        except KeyError:
            raise KeyError(f"unknown root label {label!r} for {self.family}") from None

    def get(self, coords: Sequence[int]) -> Root | None:
        return self.by_coords.get(tuple(coords))

    def is_root(self, coords: Sequence[int]) -> bool:
        return tuple(coords) in self.by_coords

    def add(self, a: Root, b: Root) -> Root | None:
        return self.get(tuple(x + y for x, y in zip(a.coords, b.coords)))

    def neg(self, a: Root) -> Root | None:
        """The root -a, or None (possible only for odd roots of P(n))."""
        return self.get(tuple(-x for x in a.coords))

    def name(self, r: Root) -> str:
        return coords_name(self.family, r.coords)

    # pairing with h ----------------------------------------------------------
    @cached_property
    def pairings(self) -> dict[Root, tuple[int, ...]]:
        """alpha -> (alpha(H_1), ..., alpha(H_l))."""
        out = {}
        for r in self.roots:
            f = functional(self.family, r.coords)
            vals = []
            for h in self.cartan_vectors:
                v = normalize(sum(Fraction(x) * y for x, y in zip(f, h)))
                if not isinstance(v, int):
                    raise FamilyError(f"non-integral pairing {self.name(r)}(H) = {v}")
                vals.append(v)
            out[r] = tuple(vals)
        return out

    def pair(self, r: Root, hcoords: Sequence) -> object:
        """alpha(H) for H given by coordinates in the H_i basis."""
        return normalize(sum(Fraction(x) * y for x, y in zip(self.pairings[r], hcoords)))

    def pair_coords(self, coords: Sequence[int], hcoords: Sequence) -> object:
        """Evaluate any integer weight (in root coordinates) on H given in H_i coordinates."""
        f = functional(self.family, coords)
        amb = self.ambient(hcoords)
        return normalize(sum(Fraction(x) * y for x, y in zip(f, amb)))

    def ambient(self, hcoords: Sequence) -> list:
        size = len(self.cartan_vectors[0])
        out = [0] * size
        for c, h in zip(hcoords, self.cartan_vectors):
            if c != 0:
                out = [normalize(o + c * x) for o, x in zip(out, h)]
        return out

    def form(self, u: Sequence, v: Sequence):
        """Invariant form on ambient vectors."""
        return normalize(sum(Fraction(w) * x * y for w, x, y in zip(self.form_weights, u, v)))

    def coroot(self, r: Root) -> tuple[int, ...]:
        if r not in self.coroots:
            raise FamilyError(f"{self.name(r)} has no coroot ({self.name(r)} in Delta but not in -Delta)")
        return self.coroots[r]

    def root_norm(self, r: Root):
        """(alpha, alpha) for the invariant form (only meaningful for basic types)."""
        t = self._dual_vector(r)
        return self.pair(r, t)

    def _dual_vector(self, r: Root) -> list:
        """H-coordinates x with (sum x_i H_i, H_j) = alpha(H_j)."""
        hs = self.cartan_vectors
        gram = [[self.form(hi, hj) for hj in hs] for hi in hs]
        x = solve(gram, list(self.pairings[r]))
        if x is None:
            raise FamilyError(f"degenerate form on h for {self.family}")
        return x

    # strings -----------------------------------------------------------------
    def in_delta_or_zero(self, coords: Sequence[int]) -> bool:
        return all(c == 0 for c in coords) or self.is_root(coords)

    def alpha_string(self, alpha: Root, beta: Root) -> tuple[int, int]:
        """(r, q): extend beta - j alpha and beta + j alpha while they stay in Delta or 0."""
        if alpha not in self._labels or beta not in self._labels:
            raise FamilyError("alpha_string needs roots of this datum")

        def walk(sign: int) -> int:
            k = 0
            while True:
                c = tuple(b + sign * (k + 1) * a for a, b in zip(alpha.coords, beta.coords))
                if not self.in_delta_or_zero(c):
                    return k
                k += 1

        return walk(-1), walk(+1)

    def simple_coefficients(self, r: Root) -> list | None:
        """Coefficients of r in the distinguished simple system."""
        mat = [list(col) for col in zip(*[s.coords for s in self.simple])]
        return solve(mat, list(r.coords))

    @cached_property
    def kostant_order(self) -> tuple:
        """Total order used by normal forms: even roots, Cartan indices, odd negative, odd positive."""
        ev = list(self.even_roots)
        cart = [("H", i) for i in range(1, self.rank + 1)]
        oddm = [r for r in self.odd_roots if r.sign < 0]
        oddp = [r for r in self.odd_roots if r.sign > 0]
        return tuple(ev + cart + oddm + oddp)

    @cached_property
    def kostant_index(self) -> dict:
        return {x: i for i, x in enumerate(self.kostant_order)}


# ---------------------------------------------------------------------------
# per-family data
# ---------------------------------------------------------------------------


def coords_name(fam: Family, coords: Sequence[int]) -> str:
    if fam.kind == "D21A":
        names = ["a1", "a2", "a3"]
    elif fam.kind == "A":
        names = [f"e{i + 1}" for i in range(fam.m)] + [f"d{j + 1}" for j in range(fam.n)]
    elif fam.kind == "P":
        names = [f"e{i + 1}" for i in range(fam.n + 1)]
    else:
        names = [f"e{i + 1}" for i in range(fam.m)] + [f"d{j + 1}" for j in range(fam.n)]
    parts = []
    for c, nm in zip(coords, names):
        if c == 0:
            continue
        mag = "" if abs(c) == 1 else str(abs(c))
        parts.append(("-" if c < 0 else "+") + mag + nm)
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


def _osp_sizes(fam: Family) -> tuple[int, int, int]:
    m = fam.m if fam.kind != "C" else 1
    return m, fam.n, fam.M


def ambient_size(fam: Family) -> int:
    if fam.kind == "A":
        return fam.m + fam.n
    if fam.kind in "BCD":
        return fam.M + 2 * fam.n
    if fam.kind == "P":
        return 2 * (fam.n + 1)
    return 3


def functional(fam: Family, coords: Sequence[int]) -> list:
    """The weight as a linear form on ambient Cartan vectors."""
    size = ambient_size(fam)
    if fam.kind == "A":
        return list(coords)
    if fam.kind in "BCD":
        m, n, M = _osp_sizes(fam)
        f = [0] * size
        for i in range(m):
            f[i] = coords[i]
        for j in range(n):
            f[M + j] = coords[m + j]
        return f
    if fam.kind == "P":
        f = [0] * size
        for i, c in enumerate(coords):
            f[i] = c
        return f
    c1, c2, c3 = coords
    return [c1, -c1 + 2 * c2, -c1 + 2 * c3]


def d21a_sigma(a: int) -> tuple[int, int, int]:
    """Weights of the three sl(2) factors in the odd bracket of D(2,1;a)."""
    return (-(1 + a), 1, a)


def _enumerate(fam: Family) -> list[Root]:
    roots: list[Root] = []

    def add(coords, parity, sign):
        roots.append(Root(tuple(coords), parity, sign))

    if fam.kind == "A":
        m, n = fam.m, fam.n
        size = m + n
        for i in range(size):
            for j in range(size):
                if i == j:
                    continue
                v = [0] * size
                v[i] += 1
                v[j] -= 1
                parity = int((i < m) != (j < m))
                if parity == 0:
                    sign = 1 if i < j else -1
                else:
                    sign = 1 if i < m else -1
                add(v, parity, sign)
        return roots

    if fam.kind in "BCD":
        m, n, M = _osp_sizes(fam)
        size = m + n
        odd_M = M % 2 == 1

        def vec(pairs):
            v = [0] * size
            for k, c in pairs:
                v[k] += c
            return v

        # even: +-e_i +- e_j, +-e_i (B), +-d_i +- d_j, +-2d_i
        for i, j in combinations(range(m), 2):
            for si in (1, -1):
                for sj in (1, -1):
                    add(vec([(i, si), (j, sj)]), 0, si)
        if odd_M:
            for i in range(m):
                for s in (1, -1):
                    add(vec([(i, s)]), 0, s)
        for i, j in combinations(range(n), 2):
            for si in (1, -1):
                for sj in (1, -1):
                    add(vec([(m + i, si), (m + j, sj)]), 0, si)
        for i in range(n):
            for s in (1, -1):
                add(vec([(m + i, 2 * s)]), 0, s)
        # odd: +-e_i +- d_j, +-d_j (B)
        for i in range(m):
            for j in range(n):
                for si in (1, -1):
                    for sj in (1, -1):
                        sign = si if fam.kind == "C" else sj
                        add(vec([(i, si), (m + j, sj)]), 1, sign)
        if odd_M:
            for j in range(n):
                for s in (1, -1):
                    add(vec([(m + j, s)]), 1, s)
        return roots

    if fam.kind == "P":
        N = fam.n + 1
        for i in range(N):
            for j in range(N):
                if i != j:
                    v = [0] * N
                    v[i] += 1
                    v[j] -= 1
                    add(v, 0, 1 if i < j else -1)
        for i in range(N):
            v = [0] * N
            v[i] = 2
            add(v, 1, 1)
        for i, j in combinations(range(N), 2):
            v = [0] * N
            v[i] = v[j] = 1
            add(v, 1, 1)
            add([-x for x in v], 1, -1)
        return roots

    # D(2,1;a) in the simple-root basis
    odd_pos = [(1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)]
    even_pos = [(0, 1, 0), (0, 0, 1), (2, 1, 1)]
    for c in odd_pos:
        add(c, 1, 1)
        add(tuple(-x for x in c), 1, -1)
    for c in even_pos:
        add(c, 0, 1)
        add(tuple(-x for x in c), 0, -1)
    return roots


def _simple_and_cartan(fam: Family, size: int) -> tuple[list, list, list[list], list[str]]:
    """Distinguished simple roots, plus the roots whose coroots form the Cartan basis H_1..H_l."""
    notes: list[str] = []
    amb = ambient_size(fam)

    def v(*pairs):
        out = [0] * size
        for k, c in pairs:
            out[k] += c
        return tuple(out)

    if fam.kind == "A":
        m, n = fam.m, fam.n
        simple = [v((i, 1), (i + 1, -1)) for i in range(m + n - 1)]
        hs = []
        for k in range(m + n - 1):
            if k == m - 1:
                hs.append(_unit(amb, k, 1))
                hs[-1][k + 1] = 1
            else:
                h = _unit(amb, k, 1)
                h[k + 1] = -1
                hs.append(h)
        return simple, list(simple), hs, notes

    if fam.kind in "BCD":
        m, n, M = _osp_sizes(fam)

        def E(i):  # i 0-based
            h = [0] * amb
            h[i] = 1
            h[i + m] = -1
            return h

        def D(j):
            h = [0] * amb
            h[M + j] = 1
            h[M + n + j] = -1
            return h

        def comb(*terms):
            h = [0] * amb
            for c, vec in terms:
                h = [x + c * y for x, y in zip(h, vec)]
            return h

        dd = [v((m + j, 1), (m + j + 1, -1)) for j in range(n - 1)]
        hdd = [comb((1, D(j)), (-1, D(j + 1))) for j in range(n - 1)]
        ee = [v((i, 1), (i + 1, -1)) for i in range(m - 1)]
        hee = [comb((1, E(i)), (-1, E(i + 1))) for i in range(m - 1)]
        two_dn = v((m + n - 1, 2))
        if fam.kind == "B" and m == 0:
            simple = dd + [v((n - 1, 1))]
            return simple, dd + [two_dn], hdd + [D(n - 1)], notes
        if fam.kind == "C":
            e1d1 = v((0, 1), (1, -1))
            simple = [e1d1] + dd + [two_dn]
            return simple, list(simple), [comb((1, E(0)), (1, D(0)))] + hdd + [D(n - 1)], notes
        dn_e1 = v((m + n - 1, 1), (0, -1))
        h_dn_e1 = comb((1, D(n - 1)), (1, E(0)))
        if fam.kind == "B":
            simple = dd + [dn_e1] + ee + [v((m - 1, 1))]
        else:
            simple = dd + [dn_e1] + ee + [v((m - 2, 1), (m - 1, 1))]
        # The coroots of a distinguished simple system span an index-2 sublattice
        # here; using 2*delta_n for the last Cartan element restores the full
        # coroot lattice.
        notes.append("last Cartan element taken as the coroot of 2*delta_n")
        return simple, dd + [dn_e1] + ee + [two_dn], hdd + [h_dn_e1] + hee + [D(n - 1)], notes

    if fam.kind == "P":
        N = fam.n + 1
        simple = [v((i, 1), (i + 1, -1)) for i in range(N - 1)] + [v((N - 1, 2))]
        hs = []
        for i in range(N - 1):
            h = [0] * amb
            h[i], h[i + 1] = 1, -1
            h[N + i], h[N + i + 1] = -1, 1
            hs.append(h)
        return simple, simple[:-1], hs, notes

    a = fam.a
    simple = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    h1 = [Fraction(1 + a, 2), Fraction(1, 2), Fraction(a, 2)]
    return simple, [(1, 0, 0), (2, 1, 1), (0, 0, 1)], [h1, [1, 0, 0], [0, 0, 1]], notes


def _form_weights(fam: Family) -> tuple:
    if fam.kind == "A":
        return tuple([1] * fam.m + [-1] * fam.n)
    if fam.kind in "BCD":
        m, n, M = _osp_sizes(fam)
        return tuple([Fraction(1, 2)] * M + [Fraction(-1, 2)] * (2 * n))
    if fam.kind == "P":
        N = fam.n + 1
        return tuple([1] * N + [0] * N)
    s = d21a_sigma(fam.a)
    return tuple(Fraction(-2, x) for x in s)


def isotropic_sign(fam: Family) -> int:
    """Normalization of isotropic coroots relative to the form-dual vector."""
    return -1 if fam.kind in "BD" else 1


def build_root_datum(fam: Family) -> RootDatum:
    roots = sorted(_enumerate(fam), key=Root.order_key)
    size = len(roots[0].coords)
    simple_c, cartan_c, hs, notes = _simple_and_cartan(fam, size)
    lookup = {r.coords: r for r in roots}
    simple = tuple(lookup[tuple(c)] for c in simple_c)
    cartan_roots = tuple(lookup[tuple(c)] for c in cartan_c)
    rd = RootDatum(
        family=fam,
        roots=tuple(roots),
        simple=simple,
        cartan_roots=cartan_roots,
        cartan_vectors=tuple(tuple(normalize(x) for x in h) for h in hs),
        form_weights=_form_weights(fam),
        notes=notes,
    )
    rd.coroots = _compute_coroots(rd)
    return rd


def _compute_coroots(rd: RootDatum) -> dict[Root, tuple[int, ...]]:
    fam = rd.family
    out: dict[Root, tuple[int, ...]] = {}
    s_iso = isotropic_sign(fam)
    for r in rd.roots:
        if rd.neg(r) is None:
            continue
        if fam.kind == "P" and r.parity == 1:
            # +-(e_i + e_j) with i < j: coroot +-H_{e_i - e_j}
            idx = [k for k, c in enumerate(r.coords) if c != 0]
            i, j = idx
            even = rd.get(tuple(1 if k == i else -1 if k == j else 0 for k in range(len(r.coords))))
            x = _form_coroot(rd, even, s_iso)
            out[r] = x if r.sign > 0 else tuple(-c for c in x)
            continue
        out[r] = _form_coroot(rd, r, s_iso)
    return out


def _form_coroot(rd: RootDatum, r: Root, s_iso: int) -> tuple[int, ...]:
    x = rd._dual_vector(r)
    norm = rd.pair(r, x)
    if norm != 0:
        h = [normalize(Fraction(2) * c / norm) for c in x]
    else:
        h = [normalize(s_iso * c) for c in x]
    if not all(isinstance(c, int) for c in h):
        raise FamilyError(f"non-integral coroot for {rd.name(r)}: {h}")
    return tuple(h)


def coroot(rd: RootDatum, alpha: Root) -> tuple[int, ...]:
    return rd.coroot(alpha)


def alpha_string(rd: RootDatum, alpha: Root, beta: Root) -> tuple[int, int]:
    return rd.alpha_string(alpha, beta)


def coroot_lattice_matches(rd: RootDatum) -> bool:
    """Z-span of all coroots equals Z^l (the span of the chosen H_i)."""
    rows = [list(h) for h in rd.coroots.values()]
    ident = [[int(i == j) for j in range(rd.rank)] for i in range(rd.rank)]
    return hnf(rows) == hnf(ident)
