"""Chevalley supergroup elements over Grassmann coefficient rings.

A group element is an even matrix over a Grassmann algebra acting on
A (x) M, M the distinguished lattice of a module.  An odd parameter theta
times an odd root vector X is realized as theta * (S X), where S is the
diagonal parity sign of the module basis; with this convention
(theta X)(eta Y) = -theta eta X Y, as required for odd scalars passing odd
operators.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .exact import inverse, matmul, solve
from .lattice import WeightedModule, adjoint_module, defining_module, standard_lattice
from .rootdata import Root
from .scalarring import (
    DualNumber,
    GrassmannElem,
    format_grassmann,
    gr_inv,
    gr_power,
    normalize,
    parse_grassmann,
)
from .superalg import ChevalleyBasis, MatrixRealization

# ---------------------------------------------------------------------------
# sparse matrices over a ring
# ---------------------------------------------------------------------------


class RMatrix:
    """Sparse square matrix with entries in any commutative-enough ring."""

    __slots__ = ("size", "entries")

    def __init__(self, size: int, entries: Mapping[tuple[int, int], object] | None = None):
        self.size = size
        self.entries = {k: v for k, v in (entries or {}).items() if v != 0}

    @classmethod
    def identity(cls, size: int, one) -> "RMatrix":
        return cls(size, {(i, i): one for i in range(size)})

    def __mul__(self, other: "RMatrix") -> "RMatrix":
        by_row: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                p = a * b
                key = (i, j)
                out[key] = out[key] + p if key in out else p
        return RMatrix(self.size, out)

    def __add__(self, other: "RMatrix") -> "RMatrix":
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return RMatrix(self.size, out)

    def __neg__(self) -> "RMatrix":
        return RMatrix(self.size, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        return self + (-other)

    def scale(self, c) -> "RMatrix":
        """c * M with c multiplied from the left into every entry."""
        return RMatrix(self.size, {k: c * v for k, v in self.entries.items()})

    def map(self, f) -> "RMatrix":
        return RMatrix(self.size, {k: f(v) for k, v in self.entries.items()})

    def __eq__(self, other):
        return isinstance(other, RMatrix) and self.size == other.size and self.entries == other.entries

    def __hash__(self):
        return hash((self.size, frozenset(self.entries.items())))

    def get(self, i: int, j: int, zero=0):
        return self.entries.get((i, j), zero)

    def is_identity(self) -> bool:
        if len(self.entries) != self.size:
            return False
        return all(self.entries.get((i, i)) == 1 for i in range(self.size))

    def __repr__(self):
        return f"RMatrix({self.size}, {len(self.entries)} entries)"


# ---------------------------------------------------------------------------
# coefficient rings and modules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrassmannRing:
    """Lambda_N, optionally truncated so that monomials of degree > max_degree vanish."""

    n_gens: int
    max_degree: int | None = None

    def elem(self, terms: Mapping[int, object]) -> GrassmannElem:
        return GrassmannElem(self.n_gens, terms, self.max_degree)

    def one(self) -> GrassmannElem:
        return self.elem({0: 1})

    def zero(self) -> GrassmannElem:
        return self.elem({})

    def scalar(self, c) -> GrassmannElem:
        return self.elem({0: c})

    def gen(self, k: int) -> GrassmannElem:
        return GrassmannElem.gen(self.n_gens, k, self.max_degree)

    def parse(self, text: str) -> GrassmannElem:
        return parse_grassmann(text, self.n_gens, self.max_degree)

    def random_even(self, rng: random.Random, unit: bool = False, body: bool = True, density: float = 0.35) -> GrassmannElem:
        terms = {}
        for mask in range(1 << self.n_gens):
            deg = bin(mask).count("1")
            if deg % 2 or (mask == 0 and not body):
                continue
            if mask == 0 or rng.random() < density:
                terms[mask] = rng.randint(-3, 3)
        if unit and terms.get(0, 0) == 0:
            terms[0] = rng.choice([-2, -1, 1, 2])
        return self.elem(terms)

    def random_odd(self, rng: random.Random, density: float = 0.35) -> GrassmannElem:
        terms = {}
        for mask in range(1 << self.n_gens):
            if bin(mask).count("1") % 2 == 1 and rng.random() < density:
                terms[mask] = rng.randint(-3, 3)
        return self.elem(terms)


@dataclass
class GroupModule:
    """Module data for group computations, in coordinates of the distinguished lattice."""

    cb: ChevalleyBasis
    module: WeightedModule
    ring: GrassmannRing
    mats: dict = field(default_factory=dict)  # basis key -> rational RMatrix

    def __post_init__(self):
        lat = standard_lattice(self.module)
        inv = inverse(lat)
        for k, m in self.module.action.items():
            conj = matmul(inv, matmul(m, lat))
            ent = {}
            for i, row in enumerate(conj):
                for j, v in enumerate(row):
                    v = normalize(v)
                    if v != 0:
                        if not isinstance(v, (int, Fraction)):
                            raise ValueError("lattice coordinates must be rational")
                        ent[(i, j)] = v
            self.mats[k] = RMatrix(self.dim, ent)
        self._exp_cache: dict = {}

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def parities(self) -> tuple[int, ...]:
        return self.module.parities

    @property
    def weights(self):
        return self.module.weights

    def sign_matrix(self) -> RMatrix:
        return RMatrix(self.dim, {(i, i): (-1 if p else 1) for i, p in enumerate(self.parities)})

    def odd_operator(self, root: Root) -> RMatrix:
        """S X_root, the matrix multiplied by an odd parameter."""
        x = self.mats[root]
        return RMatrix(self.dim, {(i, j): (-v if self.parities[i] else v) for (i, j), v in x.entries.items()})

    def lift(self, m: RMatrix, coeff: GrassmannElem | None = None) -> RMatrix:
        """Rational matrix times a ring element."""
        c = coeff if coeff is not None else self.ring.one()
        return RMatrix(self.dim, {k: c * v for k, v in m.entries.items()})

    def one(self) -> RMatrix:
        return RMatrix.identity(self.dim, self.ring.one())

    def exp_terms(self, key) -> list[RMatrix]:
        """[X^n / n! for n >= 1] of a nilpotent rational matrix (key = root or ("sq", root))."""
        if key not in self._exp_cache:
            if isinstance(key, tuple) and key and key[0] == "sq":
                x = self.mats[key[1]] * self.mats[key[1]]
            else:
                x = self.mats[key]
            out = []
            p = x
            n = 1
            while p.entries:
                out.append(p.map(lambda v, n=n: Fraction(v) / factorial(n)))
                p = p * x
                n += 1
                if n > self.dim + 1:
                    raise ValueError("root vector is not nilpotent on the module")
            self._exp_cache[key] = out
        return self._exp_cache[key]

    def decompose_odd(self, m: RMatrix, roots: Sequence[Root]) -> dict[Root, Fraction] | None:
        """Coefficients c with m = sum c_r X_r (rational m), or None."""
        positions = sorted({p for r in roots for p in self.mats[r].entries} | set(m.entries))
        mat = [[self.mats[r].entries.get(p, 0) for r in roots] for p in positions]
        rhs = [m.entries.get(p, 0) for p in positions]
        x = solve(mat, rhs)
        if x is None:
            return None
        return {r: normalize(c) for r, c in zip(roots, x) if c != 0}


def group_module(cb: ChevalleyBasis, kind: str = "defining", n_gens: int = 6, max_degree: int | None = None) -> GroupModule:
    if kind == "defining" and not isinstance(cb.realization, MatrixRealization):
        kind = "adjoint"
    mod = defining_module(cb) if kind == "defining" else adjoint_module(cb)
    return GroupModule(cb, mod, GrassmannRing(n_gens, max_degree))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvenRoot:
    root: Root
    t: GrassmannElem


@dataclass(frozen=True)
class OddRootFree:
    """x_beta(theta) = 1 + theta X_beta for an odd root with [X_beta, X_beta] = 0."""

    root: Root
    theta: GrassmannElem


@dataclass(frozen=True)
class OddRootSquare:
    """x_gamma(t, theta) = (1 + theta X_gamma) exp(t X_gamma^2) for 2 gamma a root."""

    root: Root
    t: GrassmannElem
    theta: GrassmannElem


@dataclass(frozen=True)
class Torus:
    """h_H(t) acting by t^{mu(H)} on weight vectors; H in H_i coordinates."""

    h: tuple[int, ...]
    t: GrassmannElem


GroupGenerator = EvenRoot | OddRootFree | OddRootSquare | Torus


@dataclass(frozen=True)
class GroupWord:
    ring: GrassmannRing
    gens: tuple = ()

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.ring, self.gens + other.gens)

    def __len__(self) -> int:
        return len(self.gens)


def has_square(cb: ChevalleyBasis, root: Root) -> bool:
    return cb.rd.get(tuple(2 * c for c in root.coords)) is not None


def odd_generator(cb: ChevalleyBasis, root: Root, theta: GrassmannElem, t: GrassmannElem | None = None):
    """The odd one-parameter generator of the right type for `root`."""
    if has_square(cb, root):
        return OddRootSquare(root, t if t is not None else theta * 0, theta)
    if t is not None and t != 0:
        raise ValueError(f"{cb.rd.name(root)}: 2*root is not a root, no even parameter allowed")
    return OddRootFree(root, theta)


def torus_for_root(cb: ChevalleyBasis, root: Root, t: GrassmannElem) -> Torus:
    """h_root(t) = h_{H_root}(t)."""
    return Torus(tuple(cb.rd.coroot(root)), t)


def weight_exponent(gm: GroupModule, v: int, h: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(gm.weights[v], h))


def _exp_matrix(gm: GroupModule, key, t: GrassmannElem) -> RMatrix:
    out = gm.one()
    power = t.one()
    for term in gm.exp_terms(key):
        power = power * t
        if power.is_zero():
            break
        out = out + gm.lift(term, power)
    return out


def gen_to_matrix(g, gm: GroupModule) -> RMatrix:
    if isinstance(g, EvenRoot):
        if g.root.parity != 0:
            raise ValueError("EvenRoot needs an even root")
        if not g.t.is_even():
            raise ValueError("EvenRoot parameter must be even")
        return _exp_matrix(gm, g.root, g.t)
    if isinstance(g, OddRootFree):
        if g.root.parity != 1 or has_square(gm.cb, g.root):
            raise ValueError("OddRootFree needs an odd root with [X, X] = 0")
        if not g.theta.is_odd():
            raise ValueError("odd parameter must be odd")
        return gm.one() + gm.lift(gm.odd_operator(g.root), g.theta)
    if isinstance(g, OddRootSquare):
        if g.root.parity != 1 or not has_square(gm.cb, g.root):
            raise ValueError("OddRootSquare needs an odd root whose double is a root")
        if not g.theta.is_odd() or not g.t.is_even():
            raise ValueError("parameter parities: t even, theta odd")
        odd = gm.one() + gm.lift(gm.odd_operator(g.root), g.theta)
        return odd * _exp_matrix(gm, ("sq", g.root), g.t)
    if isinstance(g, Torus):
        if not g.t.is_even() or g.t.body == 0:
            raise ValueError("torus parameter must be an even unit")
        return RMatrix(gm.dim, {(v, v): gr_power(g.t, weight_exponent(gm, v, g.h)) for v in range(gm.dim)})
    raise TypeError(f"unknown generator {g!r}")


def inverse_generator(g, cb: ChevalleyBasis | None = None):
    if isinstance(g, EvenRoot):
        return EvenRoot(g.root, -g.t)
    if isinstance(g, OddRootFree):
        return OddRootFree(g.root, -g.theta)
    if isinstance(g, OddRootSquare):
        # x(t, th) x(t', th') = x(t + t' - th th', th + th'); th^2 = 0
        return OddRootSquare(g.root, -g.t, -g.theta)
    if isinstance(g, Torus):
        return Torus(g.h, gr_inv(g.t))
    raise TypeError(f"unknown generator {g!r}")


def inverse_word(w: GroupWord) -> GroupWord:
    return GroupWord(w.ring, tuple(inverse_generator(g) for g in reversed(w.gens)))


def word_to_matrix(w: GroupWord, gm: GroupModule) -> RMatrix:
    out = gm.one()
    for g in w.gens:
        out = out * gen_to_matrix(g, gm)
    return out


def body_matrix(m: RMatrix) -> list[list]:
    out = [[0] * m.size for _ in range(m.size)]
    for (i, j), v in m.entries.items():
        out[i][j] = v.body
    return out


def matrix_inverse(m: RMatrix, gm: GroupModule) -> RMatrix:
    """Inverse through the body: m = B (1 + N) with N nilpotent."""
    b = body_matrix(m)
    binv_rows = inverse(b)
    binv = RMatrix(m.size, {(i, j): v for i, row in enumerate(binv_rows) for j, v in enumerate(row) if v != 0})
    binv_g = gm.lift(binv)
    n = binv_g * m - gm.one()
    total = gm.one()
    term = gm.one()
    for _ in range(gm.ring.n_gens + 1):
        term = -(term * n)
        if not term.entries:
            break
        total = total + term
    return total * binv_g


# ---------------------------------------------------------------------------
# commutator identities
# ---------------------------------------------------------------------------


def group_commutator(a: RMatrix, b: RMatrix, gm: GroupModule) -> RMatrix:
    """(a, b) = a b a^-1 b^-1."""
    return a * b * matrix_inverse(a, gm) * matrix_inverse(b, gm)


def string_signs(cb: ChevalleyBasis, alpha: Root, gamma: Root) -> list[int]:
    """epsilon_s with [X_alpha, X_{gamma+(s-1)alpha}] = epsilon_s (r+s) X_{gamma+s alpha}."""
    rd = cb.rd
    r, q = rd.alpha_string(alpha, gamma)
    out = []
    cur = gamma
    for s in range(1, q + 1):
        nxt = rd.add(alpha, cur) if cur is not None else None
        if nxt is None:
            break
        c = cb.sconst(alpha, cur)
        eps = Fraction(c) / (r + s)
        if eps not in (1, -1):
            raise ValueError(f"structure constant {c} is not +-(r+s) along the string")
        out.append(int(eps))
        cur = nxt
    return out


def odd_even_commutator_word(cb: ChevalleyBasis, gamma: Root, alpha: Root, t: GrassmannElem, theta: GrassmannElem) -> list:
    """Closed form of (x_gamma(theta), x_alpha(t)) as a product over the alpha-string."""
    rd = cb.rd
    r, _ = rd.alpha_string(alpha, gamma)
    eps = string_signs(cb, alpha, gamma)
    out = []
    cur = gamma
    sign = 1
    for s, e in enumerate(eps, 1):
        cur = rd.add(alpha, cur)
        sign *= e
        c = -sign * comb(r + s, r)
        out.append(odd_generator(cb, cur, theta * gr_power(t, s) * c))
    return out


def odd_odd_commutator_word(cb: ChevalleyBasis, gamma: Root, delta: Root, theta: GrassmannElem, eta: GrassmannElem) -> list:
    """Closed form of (x_gamma(theta), x_delta(eta)) for odd gamma, delta."""
    rd = cb.rd
    res = cb.table[(gamma, delta)]
    if not res:
        return []
    if rd.neg(gamma) == delta:
        h = tuple(int(res.get(("H", i), 0)) for i in range(1, rd.rank + 1))
        return [Torus(h, theta.one() - theta * eta)]
    ((k, c),) = res.items()
    return [EvenRoot(k, -(theta * eta) * c)]


@dataclass
class CommutatorResult:
    kind: str
    predicted: GroupWord
    predicted_matrix: RMatrix
    direct_matrix: RMatrix

    @property
    def ok(self) -> bool:
        return self.predicted_matrix == self.direct_matrix


def commutator(g1, g2, gm: GroupModule) -> CommutatorResult:
    """Predicted closed form and direct matrix of (g1, g2), or of h g h^-1 when g1 is a torus element."""
    cb = gm.cb
    ring = gm.ring
    m1, m2 = gen_to_matrix(g1, gm), gen_to_matrix(g2, gm)
    if isinstance(g1, Torus):
        direct = m1 * m2 * matrix_inverse(m1, gm)
        pred = [_torus_conjugate(cb, g1, g2)]
        kind = "torus"
    else:
        direct = group_commutator(m1, m2, gm)
        if isinstance(g1, (OddRootFree, OddRootSquare)) and isinstance(g2, EvenRoot):
            pred = odd_even_commutator_word(cb, g1.root, g2.root, g2.t, g1.theta)
            kind = "odd-even"
        elif isinstance(g1, (OddRootFree, OddRootSquare)) and isinstance(g2, (OddRootFree, OddRootSquare)):
            pred = odd_odd_commutator_word(cb, g1.root, g2.root, g1.theta, g2.theta)
            kind = "odd-odd"
        else:
            raise ValueError("no closed form for this pair of generators")
    w = GroupWord(ring, tuple(pred))
    return CommutatorResult(kind, w, word_to_matrix(w, gm), direct)


def _torus_conjugate(cb: ChevalleyBasis, h: Torus, g):
    k = sum(a * b for a, b in zip(cb.rd.pairings[g.root], h.h))
    f = gr_power(h.t, k)
    if isinstance(g, EvenRoot):
        return EvenRoot(g.root, f * g.t)
    if isinstance(g, OddRootFree):
        return OddRootFree(g.root, f * g.theta)
    if isinstance(g, OddRootSquare):
        # the X^2 part has weight 2 gamma
        return OddRootSquare(g.root, f * f * g.t, f * g.theta)
    raise ValueError("torus conjugation needs a root generator")


def one_parameter_law(gm: GroupModule, gamma: Root, t1, th1, t2, th2) -> bool:
    """x(t, th) x(t', th') = x(t + t' - th th', th + th')."""
    lhs = gen_to_matrix(OddRootSquare(gamma, t1, th1), gm) * gen_to_matrix(OddRootSquare(gamma, t2, th2), gm)
    rhs = gen_to_matrix(OddRootSquare(gamma, t1 + t2 - th1 * th2, th1 + th2), gm)
    return lhs == rhs


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------


@dataclass
class NormalForm:
    g0: RMatrix
    g0_word: GroupWord
    theta_minus: dict  # Root -> GrassmannElem, in the fixed order
    theta_plus: dict

    def odd_word(self, cb: ChevalleyBasis) -> list:
        return [odd_generator(cb, r, th) for r, th in list(self.theta_minus.items()) + list(self.theta_plus.items())]

    def coordinates(self) -> tuple:
        return tuple(self.theta_minus.values()) + tuple(self.theta_plus.values())


def _odd_roots_ordered(cb: ChevalleyBasis) -> tuple[list[Root], list[Root]]:
    order = cb.rd.kostant_order
    odd = [k for k in order if not isinstance(k, tuple) and k.parity == 1]
    return [r for r in odd if r.sign < 0], [r for r in odd if r.sign > 0]


def normal_form_matrix(nf: NormalForm, gm: GroupModule) -> RMatrix:
    m = nf.g0
    for g in nf.odd_word(gm.cb):
        m = m * gen_to_matrix(g, gm)
    return m


@dataclass
class FactorizationStats:
    moves: dict = field(default_factory=dict)

    def note(self, k: str):
        self.moves[k] = self.moves.get(k, 0) + 1


def _zero_param(f) -> bool:
    kind = f[0]
    if kind == "O" or kind == "E":
        return f[2].is_zero()
    return f[2] == 1 or not any(f[1])


def factorize(w: GroupWord, gm: GroupModule, stats: FactorizationStats | None = None, max_steps: int = 200000) -> NormalForm:
    """Rewrite a word into g0 * prod_{odd negative} (1 + th X) * prod_{odd positive} (1 + th X).

    Factors are ("E", root, t), ("T", h, t) and ("O", root, theta).  Out-of-order
    neighbours are exchanged with the commutator identities; every correction
    factor carries a parameter of strictly higher odd degree, so the process
    stops because the Grassmann ring is nilpotent.
    """
    stats = stats if stats is not None else FactorizationStats()
    cb = gm.cb
    rd = cb.rd
    idx = rd.kostant_index
    facs: list = []
    for g in w.gens:
        if isinstance(g, EvenRoot):
            facs.append(("E", g.root, g.t))
        elif isinstance(g, Torus):
            facs.append(("T", tuple(g.h), g.t))
        elif isinstance(g, OddRootFree):
            facs.append(("O", g.root, g.theta))
        elif isinstance(g, OddRootSquare):
            facs.append(("O", g.root, g.theta))
            two = rd.get(tuple(2 * c for c in g.root.coords))
            facs.append(("E", two, g.t * (Fraction(cb.sconst(g.root, g.root)) / 2)))
        else:
            raise TypeError(f"unknown generator {g!r}")
    facs = [f for f in facs if not _zero_param(f)]

    def out_of_order(a, b) -> bool:
        if a[0] != "O":
            return False
        if b[0] != "O":
            return True
        return idx[a[1]] >= idx[b[1]]

    steps = 0
    p = 0
    while True:
        p = next((i for i in range(len(facs) - 1) if out_of_order(facs[i], facs[i + 1])), None)
        if p is None:
            break
        steps += 1
        if steps > max_steps:
            raise RuntimeError("factorization did not terminate")
        a, b = facs[p], facs[p + 1]
        if b[0] == "T":
            stats.note("odd-past-torus")
            k = sum(x * y for x, y in zip(rd.pairings[a[1]], b[1]))
            new = [b, ("O", a[1], a[2] * gr_power(b[2], -k))]
        elif b[0] == "E":
            stats.note("odd-past-even")
            # x_g(th) x_a(t) = x_a(t) * prod_s x_{g+s a}(a_s (-t)^s th)
            new = [b]
            alpha, t = b[1], b[2]
            s = 0
            cur = a[1]
            coef = Fraction(1)
            while cur is not None:
                new.append(("O", cur, a[2] * gr_power(-t, s) * coef))
                nxt = rd.add(alpha, cur)
                if nxt is None:
                    break
                c = cb.sconst(alpha, cur)
                if c == 0:
                    break
                s += 1
                coef = coef * Fraction(c) / s
                cur = nxt
            odd_part = sorted(new[1:], key=lambda f: idx[f[1]])
            new = [b] + odd_part
        elif a[1] == b[1]:
            stats.note("merge")
            th, eta = a[2], b[2]
            new = [("O", a[1], th + eta)]
            if has_square(cb, a[1]):
                two = rd.get(tuple(2 * c for c in a[1].coords))
                new.append(("E", two, -(th * eta) * (Fraction(cb.sconst(a[1], a[1])) / 2)))
        else:
            stats.note("odd-swap")
            # x_g x_d = x_d x_g (x_g(-th), x_d(-eta))
            new = [b, a]
            for g in odd_odd_commutator_word(cb, a[1], b[1], -a[2], -b[2]):
                if isinstance(g, Torus):
                    new.append(("T", g.h, g.t))
                else:
                    new.append(("E", g.root, g.t))
        new = [f for f in new if not _zero_param(f)]
        facs[p : p + 2] = new

    even = [f for f in facs if f[0] != "O"]
    odd = [f for f in facs if f[0] == "O"]
    gens = []
    for f in even:
        gens.append(EvenRoot(f[1], f[2]) if f[0] == "E" else Torus(f[1], f[2]))
    g0_word = GroupWord(w.ring, tuple(gens))
    neg, pos = _odd_roots_ordered(cb)
    zero = gm.ring.zero()
    tm = {r: zero for r in neg}
    tp = {r: zero for r in pos}
    for f in odd:
        (tm if f[1].sign < 0 else tp)[f[1]] = f[2]
    return NormalForm(word_to_matrix(g0_word, gm), g0_word, tm, tp)


class NotFactorizable(ValueError):
    pass


def _block_split(m: RMatrix, parities) -> tuple[RMatrix, RMatrix]:
    d, o = {}, {}
    for (i, j), v in m.entries.items():
        (d if parities[i] == parities[j] else o)[(i, j)] = v
    return RMatrix(m.size, d), RMatrix(m.size, o)


def _odd_quotient(m: RMatrix, gm: GroupModule) -> RMatrix:
    """D^-1 O for the block-diagonal part D and the off-diagonal part O of m."""
    d, o = _block_split(m, gm.parities)
    return matrix_inverse(d, gm) * o


def extract_odd_coordinates(g: RMatrix, gm: GroupModule) -> NormalForm:
    """Recover the normal form by peeling odd Grassmann degrees.

    For g = g0 * g_odd with g0 block diagonal, D^-1 O depends on g_odd only.
    The lowest unexplained degree of D^-1 O is linear in the missing
    coordinates, which are read off from the odd root vectors there.
    """
    cb = gm.cb
    ring = gm.ring
    neg, pos = _odd_roots_ordered(cb)
    roots = neg + pos
    theta = {r: ring.zero() for r in roots}
    target = _odd_quotient(g, gm)
    sign = gm.sign_matrix()
    maxd = ring.max_degree if ring.max_degree is not None else ring.n_gens
    for deg in range(1, maxd + 1, 2):
        current = _odd_word_matrix(gm, theta, roots)
        diff = target - _odd_quotient(current, gm)
        # masks of degree deg appearing in the difference
        by_mask: dict[int, dict] = {}
        for (i, j), v in diff.entries.items():
            for mask, c in v.terms.items():
                if bin(mask).count("1") < deg:
                    raise NotFactorizable("odd data inconsistent with a normal form")
                if bin(mask).count("1") == deg:
                    by_mask.setdefault(mask, {})[(i, j)] = c
        for mask, ent in by_mask.items():
            m = sign * RMatrix(gm.dim, ent)
            coeffs = gm.decompose_odd(m, roots)
            if coeffs is None:
                raise NotFactorizable("odd component is not a combination of odd root vectors")
            for r, c in coeffs.items():
                theta[r] = theta[r] + ring.elem({mask: c})
    final = _odd_word_matrix(gm, theta, roots)
    if _odd_quotient(final, gm) != target:
        raise NotFactorizable("odd part not reproduced")
    g0 = g * matrix_inverse(final, gm)
    d, o = _block_split(g0, gm.parities)
    if o.entries:
        raise NotFactorizable("even factor is not block diagonal")
    tm = {r: theta[r] for r in neg}
    tp = {r: theta[r] for r in pos}
    return NormalForm(g0, GroupWord(ring, ()), tm, tp)


def _odd_word_matrix(gm: GroupModule, theta: Mapping[Root, GrassmannElem], roots: Sequence[Root]) -> RMatrix:
    m = gm.one()
    for r in roots:
        if not theta[r].is_zero():
            m = m * (gm.one() + gm.lift(gm.odd_operator(r), theta[r]))
    return m


def random_word(gm: GroupModule, rng: random.Random, length: int, torus: bool = True) -> GroupWord:
    cb = gm.cb
    rd = cb.rd
    gens = []
    for _ in range(length):
        kind = rng.choice(["E", "O", "O", "T"] if torus else ["E", "O", "O"])
        if kind == "E":
            gens.append(EvenRoot(rng.choice(rd.even_roots), gm.ring.random_even(rng)))
        elif kind == "O":
            r = rng.choice(rd.odd_roots)
            t = gm.ring.random_even(rng, body=False) if has_square(cb, r) else None
            gens.append(odd_generator(cb, r, gm.ring.random_odd(rng), t))
        else:
            h = tuple(rng.randint(-1, 1) for _ in range(rd.rank))
            gens.append(Torus(h, gm.ring.random_even(rng, unit=True)))
    return GroupWord(gm.ring, tuple(gens))


# ---------------------------------------------------------------------------
# degenerate rings and the Lie functor
# ---------------------------------------------------------------------------


@dataclass
class Report:
    checks: int = 0
    failures: list = field(default_factory=list)

    def add(self, ok: bool, what: str):
        self.checks += 1
        if not ok:
            self.failures.append(what)

    @property
    def ok(self) -> bool:
        return not self.failures


def _is_odd_type(m: RMatrix, gm: GroupModule) -> bool:
    """m = 1 + sum_d phi_d X_d (S-convention) with odd phi_d."""
    diff = m - gm.one()
    d, o = _block_split(diff, gm.parities)
    if d.entries:
        return False
    sign = gm.sign_matrix()
    neg, pos = _odd_roots_ordered(gm.cb)
    by_mask: dict = {}
    for (i, j), v in o.entries.items():
        for mask, c in v.terms.items():
            by_mask.setdefault(mask, {})[(i, j)] = c
    for ent in by_mask.values():
        if gm.decompose_odd(sign * RMatrix(gm.dim, ent), neg + pos) is None:
            return False
    return True


def semidirect_check(gm: GroupModule, rng: random.Random, samples: int = 20) -> Report:
    """Checks over a ring with A1^2 = 0 (max_degree 1)."""
    if gm.ring.max_degree is None or gm.ring.max_degree > 1:
        raise ValueError("semidirect_check needs a ring with A1^2 = 0 (max_degree 1)")
    cb, rd = gm.cb, gm.cb.rd
    rep = Report()
    odd = list(rd.odd_roots)
    for _ in range(samples):
        g, d = rng.choice(odd), rng.choice(odd)
        x = gen_to_matrix(odd_generator(cb, g, gm.ring.random_odd(rng)), gm)
        y = gen_to_matrix(odd_generator(cb, d, gm.ring.random_odd(rng)), gm)
        rep.add(group_commutator(x, y, gm).is_identity(), f"odd commutator {rd.label(g)},{rd.label(d)}")
    neg, pos = _odd_roots_ordered(cb)
    for _ in range(samples):
        gm_ = _odd_word_matrix(gm, {r: gm.ring.random_odd(rng) for r in neg}, neg)
        gp = _odd_word_matrix(gm, {r: gm.ring.random_odd(rng) for r in pos}, pos)
        rep.add(gm_ * gp == gp * gm_, "G1- G1+ = G1+ G1-")
    for _ in range(samples):
        r = rng.choice(odd)
        x = gen_to_matrix(odd_generator(cb, r, gm.ring.random_odd(rng)), gm)
        if rng.random() < 0.5:
            c = gen_to_matrix(EvenRoot(rng.choice(rd.even_roots), gm.ring.random_even(rng)), gm)
        else:
            i = rng.randint(1, rd.rank)
            h = tuple(int(k == i) for k in range(1, rd.rank + 1))
            c = gen_to_matrix(Torus(h, gm.ring.random_even(rng, unit=True)), gm)
        conj = c * x * matrix_inverse(c, gm)
        rep.add(_is_odd_type(conj, gm), f"G0-conjugate of x_{rd.label(r)} is odd-type")
    return rep


def lie_functor(cb: ChevalleyBasis, kind: str = "defining") -> Report:
    """Ad(1 + eps a)(b) = b + eps [a, b] over the dual numbers, for all basis pairs.

    Odd basis elements carry odd Grassmann parameters (t1 for a, t2 for b), so
    the eps-part equals [t1 a, t2 b] = -t1 t2 [a, b] when both are odd.
    """
    gm = group_module(cb, kind, n_gens=2)
    ring = gm.ring
    rep = Report()
    keys = cb.keys
    t1, t2 = ring.gen(1), ring.gen(2)
    one = ring.one()
    zero = ring.zero()

    def operator(k, param) -> RMatrix:
        if cb.key_parity(k):
            return gm.lift(gm.odd_operator(k), param)
        return gm.lift(gm.mats[k])

    ops_a = {k: operator(k, t1) for k in keys}
    ops_b = {k: operator(k, t2) for k in keys}
    for ka in keys:
        pa = ops_a[ka]
        g = RMatrix.identity(gm.dim, DualNumber(one, zero)) + pa.map(lambda v: DualNumber(zero, v))
        ginv = RMatrix.identity(gm.dim, DualNumber(one, zero)) + pa.map(lambda v: DualNumber(zero, -v))
        rep.add((g * ginv).entries == RMatrix.identity(gm.dim, DualNumber(one, zero)).entries, "(1+eps a)(1-eps a) = 1")
        rep.add(g.map(lambda v: v.project()).entries == gm.one().entries, "G(p)(1 + eps a) = 1")
        for kb in keys:
            b = ops_b[kb].map(lambda v: DualNumber(v, zero))
            ad = g * b * ginv
            eps = ad.map(lambda v: v.eps_part())
            base = ad.map(lambda v: v.project())
            # expected [a, b] from the structure-constant table
            res = cb.table[(ka, kb)]
            if isinstance(res, Exception):
                rep.add(False, f"table entry {ka},{kb} missing")
                continue
            both_odd = cb.key_parity(ka) and cb.key_parity(kb)
            coef = (t1 if cb.key_parity(ka) else one) * (t2 if cb.key_parity(kb) else one)
            expect = RMatrix(gm.dim)
            for k, c in res.items():
                m = gm.mats[k]
                if cb.key_parity(k) and (cb.key_parity(ka) + cb.key_parity(kb)) % 2:
                    # odd result: parameter times S X, as for any odd operator
                    m = gm.odd_operator(k)
                expect = expect + gm.lift(m.map(lambda v, c=c: v * Fraction(c)), coef)
            if both_odd:
                expect = -expect
            rep.add(base == ops_b[kb], "projection of Ad(g) b is b")
            rep.add(eps == expect, f"eps part of Ad(1+eps {_kname(cb, ka)})({_kname(cb, kb)})")
    return rep


def _kname(cb: ChevalleyBasis, k) -> str:
    return f"H{k[1]}" if isinstance(k, tuple) else cb.rd.label(k)


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------


class WordSyntaxError(ValueError):
    pass


_LINE = re.compile(r"^\s*(x|h)\s+(.*)$")


def parse_group_word(text: str, cb: ChevalleyBasis, ring: GrassmannRing) -> GroupWord:
    """One generator per line: ``x even:a1 t=...``, ``x odd:g2 theta=... [t=...]``, ``h H=1,0 t=...``."""
    rd = cb.rd
    gens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise WordSyntaxError(f"line {lineno}: expected 'x ...' or 'h ...'")
        head, rest = m.groups()
        fields = dict(_kv(rest, lineno))
        try:
            if head == "x":
                target = fields.pop("_target", None)
                if target is None or ":" not in target:
                    raise WordSyntaxError(f"line {lineno}: expected even:<label> or odd:<label>")
                par, label = target.split(":", 1)
                root = rd.root_by_label(label)
                if par == "even":
                    if root.parity != 0:
                        raise WordSyntaxError(f"line {lineno}: {label} is odd")
                    gens.append(EvenRoot(root, ring.parse(fields.pop("t"))))
                elif par == "odd":
                    if root.parity != 1:
                        raise WordSyntaxError(f"line {lineno}: {label} is even")
                    t = ring.parse(fields.pop("t")) if "t" in fields else None
                    gens.append(odd_generator(cb, root, ring.parse(fields.pop("theta")), t))
                else:
                    raise WordSyntaxError(f"line {lineno}: unknown parity {par!r}")
            else:
                h = tuple(int(x) for x in fields.pop("H").strip("[]() ").split(",") if x.strip())
                if len(h) != rd.rank:
                    raise WordSyntaxError(f"line {lineno}: H needs {rd.rank} coordinates")
                gens.append(Torus(h, ring.parse(fields.pop("t"))))
        except KeyError as exc:
            raise WordSyntaxError(f"line {lineno}: missing or unknown field {exc}") from None
        if fields:
            raise WordSyntaxError(f"line {lineno}: unexpected fields {sorted(fields)}")
    return GroupWord(ring, tuple(gens))


def _kv(rest: str, lineno: int) -> Iterable[tuple[str, str]]:
    for tok in re.findall(r"\S+=\S.*?(?=\s+\S+=|$)|\S+", rest):
        if "=" in tok:
            k, v = tok.split("=", 1)
            yield k, v.strip()
        else:
            yield "_target", tok


def format_group_word(w: GroupWord, cb: ChevalleyBasis) -> str:
    rd = cb.rd
    lines = []
    for g in w.gens:
        if isinstance(g, EvenRoot):
            lines.append(f"x even:{rd.label(g.root)} t={format_grassmann(g.t)}")
        elif isinstance(g, OddRootFree):
            lines.append(f"x odd:{rd.label(g.root)} theta={format_grassmann(g.theta)}")
        elif isinstance(g, OddRootSquare):
            lines.append(f"x odd:{rd.label(g.root)} theta={format_grassmann(g.theta)} t={format_grassmann(g.t)}")
        else:
            lines.append(f"h H={','.join(map(str, g.h))} t={format_grassmann(g.t)}")
    return "\n".join(lines) + ("\n" if lines else "")


def matrix_to_json(m: RMatrix) -> list[list[str]]:
    return [[format_grassmann(m.entries[(i, j)]) if (i, j) in m.entries else "0" for j in range(m.size)] for i in range(m.size)]


def normal_form_to_json(nf: NormalForm, cb: ChevalleyBasis) -> dict:
    rd = cb.rd
    return {
        "g0": matrix_to_json(nf.g0),
        "theta_minus": {rd.label(r): format_grassmann(v) for r, v in nf.theta_minus.items()},
        "theta_plus": {rd.label(r): format_grassmann(v) for r, v in nf.theta_plus.items()},
    }
