"""Admissible lattices in rational modules and the Cartan part of their stabilizers.

A module is given by the matrices of the Chevalley basis acting on a standard
basis of weight vectors.  Lattices are square invertible matrices whose
columns span M.  Stability under the Kostant form is checked one generator
at a time, with the generators listed by `kostant_generators`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

from .exact import determinant, dual_lattice, hnf, identity, inverse, matmul, rank, solve
from .rootdata import Root
from .scalarring import SQRT2, is_integer, normalize
from .superalg import ChevalleyBasis, MatrixRealization, adjoint_action

Matrix = list[list]


@dataclass(frozen=True)
class WeightedModule:
    """A Chevalley basis acting on k^N through `action` with weight vectors as standard basis."""

    cb: ChevalleyBasis
    kind: str  # "defining" or "adjoint"
    action: dict  # basis key -> dense matrix (list of rows)
    weights: tuple[tuple[int, ...], ...]  # mu(H_1..H_l) of each standard basis vector
    parities: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.weights)


def defining_module(cb: ChevalleyBasis) -> WeightedModule:
    if not isinstance(cb.realization, MatrixRealization):
        raise ValueError(f"{cb.family} has no defining matrix module; use the adjoint module")
    action = {k: cb.elem(k).rows() for k in cb.keys}
    size = len(cb.realization.parities)
    weights = tuple(tuple(normalize(h.rows()[v][v]) for h in cb.cartan_elems) for v in range(size))
    for w in weights:
        if not all(is_integer(x) for x in w):
            raise ValueError("Cartan elements do not act with integer eigenvalues")
    return WeightedModule(cb, "defining", action, weights, tuple(cb.realization.parities))


def adjoint_module(cb: ChevalleyBasis) -> WeightedModule:
    action = {k: adjoint_action(cb, {k: 1}).rows() for k in cb.keys}
    zero = (0,) * cb.rd.rank
    weights = tuple(zero if isinstance(k, tuple) else cb.rd.pairings[k] for k in cb.keys)
    return WeightedModule(cb, "adjoint", action, weights, cb.adjoint_parities)


def standard_lattice(mod: WeightedModule) -> Matrix:
    """The distinguished lattice: Z^N, except that type-B defining modules rescale the
    middle vector by sqrt 2 so that the sqrt 2 entries of the root vectors become integral."""
    lat = identity(mod.dim)
    fam = mod.cb.family
    if mod.kind == "defining" and fam.kind == "B" and fam.M % 2 == 1:
        mid = 2 * fam.m
        lat[mid][mid] = SQRT2
    return lat


# ---------------------------------------------------------------------------
# generator matrices
# ---------------------------------------------------------------------------


def _add(a: Matrix, b: Matrix, c=1) -> Matrix:
    return [[normalize(x + c * y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _scale(a: Matrix, c) -> Matrix:
    return [[normalize(c * x) for x in r] for r in a]


def _is_zero(a: Matrix) -> bool:
    return all(x == 0 for r in a for x in r)


def nilpotency_degree(x: Matrix) -> int:
    """Smallest n with x^n = 0."""
    n, p = 1, x
    while not _is_zero(p):
        n += 1
        if n > len(x) + 1:
            raise ValueError("matrix is not nilpotent")
        p = matmul(p, x)
    return n


def divided_powers(x: Matrix) -> list[Matrix]:
    """x^(n) = x^n / n! for n = 1 .. (nilpotency degree - 1)."""
    out = []
    p = x
    n = 1
    while not _is_zero(p):
        out.append(_scale(p, Fraction(1, factorial(n))))
        p = matmul(p, x)
        n += 1
    return out


def cartan_binomial_matrix(h: Matrix, n: int) -> Matrix:
    """(h choose n) = h (h - 1) ... (h - n + 1) / n!."""
    size = len(h)
    out = identity(size)
    for j in range(n):
        out = matmul(out, _add(h, identity(size), -j))
    return _scale(out, Fraction(1, factorial(n)))


@dataclass(frozen=True)
class Generator:
    name: str
    matrix: Matrix


def kostant_generators(mod: WeightedModule, nmax: int | None = None) -> list[Generator]:
    """Matrices of X_a^(n), X_g and (H_i choose n) on the module."""
    cb, rd = mod.cb, mod.cb.rd
    gens: list[Generator] = []
    worst = 1
    for k in cb.keys:
        if isinstance(k, tuple):
            continue
        x = mod.action[k]
        worst = max(worst, nilpotency_degree(x))
        if k.parity == 1:
            gens.append(Generator(f"Y({rd.label(k)})", x))
            continue
        for n, d in enumerate(divided_powers(x), 1):
            if nmax is None or n <= nmax:
                gens.append(Generator(f"X({rd.label(k)})^({n})", d))
    bound = nmax if nmax is not None else max(worst, 2)
    # (H choose n) is integral on weight vectors for every n; check up to the bound
    for i in range(1, rd.rank + 1):
        h = mod.action[("H", i)]
        for n in range(1, bound + 1):
            gens.append(Generator(f"C({i},{n})", cartan_binomial_matrix(h, n)))
    return gens


# ---------------------------------------------------------------------------
# admissibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeWitness:
    generator: str
    column: int
    image: tuple  # coordinates of the image in the lattice basis


def admissible_check(
    mod: WeightedModule, lattice: Matrix, nmax: int | None = None
) -> tuple[bool, LatticeWitness | None]:
    """True iff every Kostant generator maps the lattice into itself."""
    if rank(lattice) < mod.dim:
        raise ValueError("singular lattice matrix")
    inv = inverse(lattice)
    for g in kostant_generators(mod, nmax):
        conj = matmul(inv, matmul(g.matrix, lattice))
        for col in range(mod.dim):
            column = [conj[r][col] for r in range(mod.dim)]
            if not all(is_integer(x) for x in column):
                return False, LatticeWitness(g.name, col, tuple(column))
    return True, None


def element_stabilizes(mod: WeightedModule, lattice: Matrix, x: Matrix) -> bool:
    inv = inverse(lattice)
    return all(is_integer(v) for row in matmul(inv, matmul(x, lattice)) for v in row)


def weight_components_in_lattice(mod: WeightedModule, lattice: Matrix) -> bool:
    """Every lattice vector's weight components lie in the lattice again."""
    inv = inverse(lattice)
    groups: dict = {}
    for v, w in enumerate(mod.weights):
        groups.setdefault(w, []).append(v)
    for col in range(mod.dim):
        vec = [lattice[r][col] for r in range(mod.dim)]
        for idx in groups.values():
            comp = [vec[r] if r in idx else 0 for r in range(mod.dim)]
            coords = [normalize(sum((inv[i][r] * comp[r] for r in range(mod.dim) if comp[r] != 0), 0)) for i in range(mod.dim)]
            if not all(is_integer(c) for c in coords):
                return False
    return True


def generate_lattice(mod: WeightedModule, vectors: Sequence[Sequence], nmax: int | None = None) -> Matrix:
    """Z-span of the Kostant-form orbit of rational vectors, as lattice basis columns.

    Iterates generator application with Hermite saturation until the span is stable.
    """
    gens = kostant_generators(mod, nmax)
    span = [[normalize(x) for x in v] for v in vectors]
    basis = _rational_hnf(span)
    while True:
        new = list(basis)
        for g in gens:
            for v in basis:
                new.append([normalize(sum((g.matrix[r][c] * v[c] for c in range(mod.dim) if v[c] != 0), 0)) for r in range(mod.dim)])
        nb = _rational_hnf(new)
        if nb == basis:
            break
        basis = nb
    return [[basis[c][r] for c in range(len(basis))] for r in range(mod.dim)]


def _rational_hnf(vectors: Sequence[Sequence]) -> list[list]:
    den = 1
    for v in vectors:
        for x in v:
            if not isinstance(normalize(x), (int, Fraction)):
                raise ValueError("lattice generation needs rational vectors")
            d = Fraction(x).denominator
            den = den * d // _gcd(den, d)
    ints = [[int(Fraction(x) * den) for x in v] for v in vectors]
    return [[normalize(Fraction(x, den)) for x in row] for row in hnf(ints)]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


# ---------------------------------------------------------------------------
# Cartan stabilizer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CartanStabilizer:
    basis: tuple[tuple[Fraction, ...], ...]  # Z-basis of the constrained part, in H_i coordinates
    free: tuple[tuple[Fraction, ...], ...]  # directions on which no weight imposes a condition

    @property
    def full(self) -> bool:
        return not self.basis

    def index_over_hz(self) -> Fraction | None:
        """[h_V : h_Z] when h_V is a full-rank lattice."""
        if self.free:
            return None
        return 1 / abs(Fraction(determinant([list(r) for r in self.basis])))

    def contains(self, h: Sequence) -> bool:
        """Membership of an H-coordinate vector."""
        rows = list(self.basis) + list(self.free)
        cols = [list(c) for c in zip(*rows)]
        x = solve(cols, list(h))
        if x is None:
            return False
        return all(is_integer(v) for v in x[: len(self.basis)])


def stabilizer_cartan(mod: WeightedModule) -> CartanStabilizer:
    """h_V = {H in h : mu(H) in Z for every weight mu of the module}."""
    if mod.dim == 0:
        raise ValueError("empty module")
    ell = mod.cb.rd.rank
    weights = sorted(set(mod.weights))
    dual = dual_lattice(weights, ell)
    k = len(hnf([list(w) for w in weights if any(w)]))
    basis = tuple(tuple(Fraction(x) for x in r) for r in dual[:k])
    free = tuple(tuple(Fraction(x) for x in r) for r in dual[k:])
    return CartanStabilizer(basis, free)


def missing_coroots(mod: WeightedModule) -> list[Root]:
    """Roots whose coroot is missing from stabilizer_cartan (empty when all are contained)."""
    st = stabilizer_cartan(mod)
    rd = mod.cb.rd
    return [r for r in rd.roots if r in rd.coroots and not st.contains(rd.coroots[r])]
