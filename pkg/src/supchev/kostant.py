"""The Kostant Z-form: the rewriting system on ordered monomials plus a rational oracle.

Elements are finite sums of monomials in divided powers ``X(a)^(n)`` of even
root vectors, Cartan binomials ``C(i, n, z)`` standing for ``(H_i - z choose n)``
and odd root vectors ``Y(g)``.  ``pbw_normalize`` rewrites them into the ordered
basis (even part, Cartan binomials, odd part) using only Kostant-form rules;
``oracle_straighten`` independently expands everything over Q and straightens
ordinary PBW words with the bracket table alone.
"""

from __future__ import annotations

import heapq
import itertools
import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .rootdata import Root, RootDatum
from .superalg import ChevalleyBasis

# ---------------------------------------------------------------------------
# factors, monomials, elements
# ---------------------------------------------------------------------------


class DividedPower(NamedTuple):
    root: Root
    n: int


class CartanBinomial(NamedTuple):
    i: int
    n: int
    z: int = 0


class OddVector(NamedTuple):
    root: Root


Factor = DividedPower | CartanBinomial | OddVector
Monomial = tuple  # tuple[Factor, ...]


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    # Scalar with zero irrational part, or anything Fraction accepts
    b = getattr(c, "b", 0)
    if b:
        raise ValueError(f"irrational coefficient {c} in a Kostant computation")
    return Fraction(getattr(c, "a", c))


@dataclass(frozen=True)
class KostantElement:
    """Finite map monomial -> nonzero rational coefficient."""

    terms: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {m: _frac(c) for m, c in self.terms.items() if c != 0}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def monomial(cls, *factors: Factor, coeff=1) -> "KostantElement":
        return cls({tuple(factors): coeff})

    @classmethod
    def one(cls) -> "KostantElement":
        return cls({(): 1})

    @classmethod
    def zero(cls) -> "KostantElement":
        return cls({})

    def __add__(self, other: "KostantElement") -> "KostantElement":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return KostantElement(out)

    def __neg__(self) -> "KostantElement":
        return KostantElement({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "KostantElement") -> "KostantElement":
        return self + (-other)

    def scale(self, c) -> "KostantElement":
        return KostantElement({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        """Concatenation product (not normalized)."""
        if not isinstance(other, KostantElement):
            return self.scale(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 + m2
                out[m] = out.get(m, 0) + c1 * c2
        return KostantElement(out)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        return isinstance(other, KostantElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)


def is_normal(m: Monomial, rd: RootDatum) -> bool:
    """Strictly increasing in the fixed order, no repetitions, all shifts zero."""
    idx = rd.kostant_index
    prev = -1
    for f in m:
        if isinstance(f, CartanBinomial):
            if f.z != 0 or f.n < 1:
                return False
            k = idx[("H", f.i)]
        else:
            if isinstance(f, DividedPower) and f.n < 1:
                return False
            k = idx[f.root]
        if k <= prev:
            return False
        prev = k
    return True


def height(m: Monomial) -> int:
    """Sum of exponents, Cartan binomial degrees included."""
    return sum(1 if isinstance(f, OddVector) else f.n for f in m)


# ---------------------------------------------------------------------------
# Cartan polynomials in the binomial basis
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _binom_product(a: int, b: int) -> tuple[tuple[int, int], ...]:
    """(x choose a)(x choose b) = sum_k c_k (x choose k)."""
    return tuple(
        (a + b - j, factorial(a + b - j) // (factorial(j) * factorial(a - j) * factorial(b - j)))
        for j in range(min(a, b) + 1)
    )


def gen_binom(s, t: int) -> Fraction | int:
    """Generalized binomial s(s-1)...(s-t+1)/t! for any rational s."""
    if t < 0:
        return 0
    num = 1
    for j in range(t):
        num *= s - j
    out = Fraction(num) / factorial(t)
    return int(out) if out.denominator == 1 else out


@lru_cache(maxsize=None)
def _shift_table(n: int, s: int) -> tuple[tuple[int, int], ...]:
    """(x + s choose n) = sum_j C(s, n - j) (x choose j)."""
    return tuple((j, gen_binom(s, n - j)) for j in range(n + 1) if gen_binom(s, n - j) != 0)


class CartanPoly:
    """Polynomial in H_1..H_l written in the basis prod_i (H_i choose n_i)."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.rank = rank
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def const(cls, rank: int, c=1) -> "CartanPoly":
        return cls(rank, {(0,) * rank: Fraction(c)})

    @classmethod
    def linear(cls, rank: int, coeffs: Sequence, c0=0) -> "CartanPoly":
        out = {(0,) * rank: Fraction(c0)}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * rank
                e[i] = 1
                out[tuple(e)] = Fraction(c)
        return cls(rank, out)

    @classmethod
    def binomial(cls, rank: int, i: int, n: int, z: int = 0) -> "CartanPoly":
        """(H_i - z choose n), i 1-based."""
        return cls.const(rank).shift_index(i - 1, n, -z)

    def shift_index(self, i0: int, n: int, s: int) -> "CartanPoly":
        """Multiply by (H_{i0} + s choose n)."""
        e = [0] * self.rank
        base: dict = {}
        for j, c in _shift_table(n, s):
            e[i0] = j
            base[tuple(e)] = Fraction(c)
        return self * CartanPoly(self.rank, base)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "CartanPoly") -> "CartanPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return CartanPoly(self.rank, out)

    def scale(self, c) -> "CartanPoly":
        return CartanPoly(self.rank, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "CartanPoly") -> "CartanPoly":
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                parts = [_binom_product(a, b) for a, b in zip(k1, k2)]
                for combo in itertools.product(*parts):
                    key = tuple(x for x, _ in combo)
                    c = v1 * v2
                    for _, m in combo:
                        c *= m
                    out[key] = out.get(key, 0) + c
        return CartanPoly(self.rank, out)

    def shifted(self, s: Sequence[int]) -> "CartanPoly":
        """Substitute H_i -> H_i + s_i."""
        if not any(s):
            return self
        out: dict = {}
        for k, v in self.terms.items():
            parts = [_shift_table(n, si) for n, si in zip(k, s)]
            for combo in itertools.product(*parts):
                key = tuple(j for j, _ in combo)
                c = v
                for _, m in combo:
                    c *= m
                out[key] = out.get(key, 0) + c
        return CartanPoly(self.rank, out)

    def __eq__(self, other):
        return isinstance(other, CartanPoly) and self.terms == other.terms

    def __repr__(self):
        return f"CartanPoly({self.terms})"


def linear_binomial(rank: int, coeffs: Sequence, c0, k: int) -> CartanPoly:
    """(L choose k) for L = sum_i coeffs_i H_i + c0."""
    out = CartanPoly.const(rank)
    for j in range(k):
        out = out * CartanPoly.linear(rank, coeffs, c0 - j)
    return out.scale(Fraction(1, factorial(k)))


def binomial_shift_expand(i: int, z: int, n: int, rank: int | None = None) -> KostantElement:
    """(H_i - z choose n) as a Z-combination of unshifted (H_i choose j)."""
    rank = rank or i
    poly = CartanPoly.binomial(rank, i, n, z)
    out: dict = {}
    for k, v in poly.terms.items():
        out[tuple(CartanBinomial(i, j) for j in [k[i - 1]] if j > 0)] = v
    return KostantElement(out)


# ---------------------------------------------------------------------------
# rewriting engine
# ---------------------------------------------------------------------------

# Internal word letters: (kind, idx, n) with kind 0 even / 1 odd and idx the
# position in the fixed order.  Cartan data never enters a word: it lives in
# a polynomial prefix standing at the far left.
Letter = tuple[int, int, int]


@dataclass
class NormalizationStats:
    steps: int = 0
    violations: list = field(default_factory=list)
    rules: dict = field(default_factory=dict)

    def note(self, rule: str):
        self.rules[rule] = self.rules.get(rule, 0) + 1


class _Engine:
    """Precomputed index tables of one Chevalley basis."""

    def __init__(self, cb: ChevalleyBasis):
        rd = cb.rd
        self.cb = cb
        self.rd = rd
        self.rank = rd.rank
        self.keys = cb.keys
        self.index = cb.key_index
        self.parity = [cb.key_parity(k) for k in self.keys]
        zero = (0,) * self.rank
        self.weight = [zero if isinstance(k, tuple) else rd.pairings[k] for k in self.keys]
        self.coroot = {}
        for k in self.keys:
            if not isinstance(k, tuple) and k in rd.coroots:
                self.coroot[self.index[k]] = rd.coroots[k]
        self.neg = {}
        for k in self.keys:
            if not isinstance(k, tuple):
                m = rd.neg(k)
                if m is not None:
                    self.neg[self.index[k]] = self.index[m]
        self._br: dict = {}
        self._ad: dict = {}

    def bracket(self, i: int, j: int) -> dict[int, Fraction]:
        """[b_i, b_j] in index coordinates (Cartan indices included)."""
        key = (i, j)
        if key not in self._br:
            res = self.cb.table[(self.keys[i], self.keys[j])]
            if isinstance(res, Exception):
                raise res
            self._br[key] = {self.index[k]: _frac(c) for k, c in res.items()}
        return self._br[key]

    def ad_power(self, a: int, b: int, k: int) -> tuple[int, Fraction] | None:
        """ad(X_a)^k (X_b) / k! as (index, coefficient), for a even and b a root."""
        key = (a, b, k)
        if key in self._ad:
            return self._ad[key]
        if k == 0:
            out = (b, Fraction(1))
        else:
            prev = self.ad_power(a, b, k - 1)
            out = None
            if prev is not None:
                res = self.bracket(a, prev[0])
                if res:
                    if len(res) != 1:
                        raise ValueError("ad-chain left the root spaces")
                    (t, c), = res.items()
                    if self.keys[t].__class__ is tuple:
                        raise ValueError("ad-chain reached the Cartan subalgebra")
                    out = (t, prev[1] * c / k)
        self._ad[key] = out
        return out

    def word_weight(self, word: Sequence[Letter]) -> list[int]:
        w = [0] * self.rank
        for _, idx, n in word:
            for t, x in enumerate(self.weight[idx]):
                w[t] += n * x
        return w


def _measure(word: Sequence[Letter]) -> tuple[int, int, int]:
    ht = sum(n for _, _, n in word)
    inv = 0
    for p in range(len(word)):
        for q in range(p + 1, len(word)):
            if word[p][1] > word[q][1]:
                inv += 1
    return ht, len(word), inv


def _first_descent(word: Sequence[Letter]) -> int | None:
    for p in range(len(word) - 1):
        if word[p][1] >= word[p + 1][1]:
            return p
    return None


def _rewrite_pair(eng: _Engine, a: Letter, b: Letter, stats: NormalizationStats) -> list[tuple[Fraction, list]]:
    """Rewrite the adjacent pair a b; items are letters or CartanPoly factors."""
    ka, ia, na = a
    kb, ib, nb = b
    rank = eng.rank
    if ia == ib:
        if ka == 0:
            stats.note("splice")
            return [(Fraction(comb(na + nb, nb)), [(0, ia, na + nb)])]
        stats.note("odd-square")
        res = eng.bracket(ia, ia)
        return [(c / 2, [(0, t, 1)]) for t, c in res.items()]
    if ka == 1 and kb == 1:
        stats.note("odd-odd")
        out: list = [(Fraction(-1), [b, a])]
        for t, c in eng.bracket(ia, ib).items():
            if eng.parity[t] == 0 and isinstance(eng.keys[t], tuple):
                h = [0] * rank
                h[eng.keys[t][1] - 1] = 1
                out.append((c, [CartanPoly.linear(rank, h)]))
            else:
                out.append((c, [(0, t, 1)]))
        return out
    if ka == 1 and kb == 0:
        # Y X^(n) = sum_k (-1)^k X^(n-k) ad(X)^k(Y)/k!
        stats.note("odd-past-even")
        out = []
        for k in range(nb + 1):
            r = eng.ad_power(ib, ia, k)
            if r is None:
                break
            t, c = r
            items = ([(0, ib, nb - k)] if nb > k else []) + [(1, t, 1)]
            out.append(((-1) ** k * c, items))
        return out
    # both even, a after b in the order
    if eng.neg.get(ia) == ib:
        stats.note("opposite-even")
        h = eng.coroot[ia]
        out = []
        for k in range(min(na, nb) + 1):
            items: list = []
            if nb > k:
                items.append((0, ib, nb - k))
            if k:
                items.append(linear_binomial(rank, h, -na - nb + 2 * k, k))
            if na > k:
                items.append((0, ia, na - k))
            out.append((Fraction(1), items))
        return out
    # X_a^(n) Y with Y = X_b^(m) = X_b^m / m!: X^(n) Y = sum_k ad(X)^k(Y)/k! X^(n-k)
    stats.note("even-even")
    out = [(Fraction(1), [b, a])]
    inv_m = Fraction(1, factorial(nb))
    for k in range(1, na + 1):
        rest = [(0, ia, na - k)] if na > k else []
        # ad^k(X_b^m)/k! = sum over k_1+..+k_m = k of prod ad^{k_i}(X_b)/k_i!
        for parts in _compositions(k, nb):
            coef = inv_m
            letters = []
            for kp in parts:
                r = eng.ad_power(ia, ib, kp)
                if r is None:
                    coef = None
                    break
                coef *= r[1]
                letters.append((0, r[0], 1))
            if coef is None:
                continue
            out.append((coef, letters + rest))
    return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of `parts` naturals summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _absorb(eng: _Engine, prefix: Sequence[Letter], items: Sequence, coef: Fraction) -> tuple[list, CartanPoly]:
    """Move Cartan factors in `items` to the far left; return (letters, polynomial)."""
    poly = CartanPoly.const(eng.rank, coef)
    w = eng.word_weight(prefix)
    letters: list = []
    for it in items:
        if isinstance(it, CartanPoly):
            # W f(H) = f(H - wt(W)) W
            poly = poly * it.shifted([-x for x in w])
        else:
            letters.append(it)
            for t, x in enumerate(eng.weight[it[1]]):
                w[t] += it[2] * x
    return letters, poly


def _to_internal(eng: _Engine, e: KostantElement) -> dict[tuple, CartanPoly]:
    work: dict = {}
    for mono, c in e.terms.items():
        poly = CartanPoly.const(eng.rank, c)
        word: list = []
        w = [0] * eng.rank
        for f in mono:
            if isinstance(f, CartanBinomial):
                if not 1 <= f.i <= eng.rank:
                    raise ValueError(f"Cartan index {f.i} out of range 1..{eng.rank}")
                poly = poly.shift_index(f.i - 1, f.n, -f.z - w[f.i - 1])
                continue
            idx = eng.index[f.root]
            n = f.n if isinstance(f, DividedPower) else 1
            if (eng.parity[idx] == 0) != isinstance(f, DividedPower):
                raise ValueError(f"factor {f} has the wrong parity")
            if n == 0:
                continue
            word.append((0 if isinstance(f, DividedPower) else 1, idx, n))
            for t, x in enumerate(eng.weight[idx]):
                w[t] += n * x
        key = tuple(word)
        work[key] = work[key] + poly if key in work else poly
    return work


def _from_internal(eng: _Engine, work: Mapping[tuple, CartanPoly]) -> KostantElement:
    out: dict = {}
    for word, poly in work.items():
        even = [l for l in word if l[0] == 0]
        odd = [l for l in word if l[0] == 1]
        # P(H) E = E P(H + wt(E))
        p = poly.shifted(eng.word_weight(even))
        ev = tuple(DividedPower(eng.keys[i], n) for _, i, n in even)
        od = tuple(OddVector(eng.keys[i]) for _, i, _ in odd)
        for k, c in p.terms.items():
            cart = tuple(CartanBinomial(i + 1, n) for i, n in enumerate(k) if n > 0)
            m = ev + cart + od
            out[m] = out.get(m, 0) + c
    return KostantElement(out)


def _engine(cb: ChevalleyBasis) -> _Engine:
    eng = cb.__dict__.get("_kostant_engine")
    if eng is None:
        eng = _Engine(cb)
        cb.__dict__["_kostant_engine"] = eng
    return eng


def pbw_normalize(e: KostantElement, cb: ChevalleyBasis, stats: NormalizationStats | None = None) -> KostantElement:
    """Rewrite e into the ordered Kostant basis.

    Words are processed in decreasing (height, factors, inversions) order, so
    every word is rewritten at most once.  Each rewrite is checked to produce
    only words of strictly smaller measure; failures are recorded in `stats`.
    """
    stats = stats if stats is not None else NormalizationStats()
    eng = _engine(cb)
    work = _to_internal(eng, e)
    heap = [(tuple(-x for x in _measure(w)), w) for w in work]
    heapq.heapify(heap)
    queued = set(work)
    done: dict = {}
    while heap:
        _, word = heapq.heappop(heap)
        queued.discard(word)
        poly = work.pop(word)
        if poly.is_zero():
            continue
        p = _first_descent(word)
        if p is None:
            done[word] = done[word] + poly if word in done else poly
            continue
        stats.steps += 1
        before = _measure(word)
        left, right = word[:p], word[p + 2 :]
        for coef, items in _rewrite_pair(eng, word[p], word[p + 1], stats):
            if coef == 0:
                continue
            letters, q = _absorb(eng, left, items, coef)
            new = tuple(left) + tuple(letters) + tuple(right)
            if not _measure(new) < before:
                stats.violations.append((word, new))
            contrib = poly * q
            if new in work:
                work[new] = work[new] + contrib
            else:
                work[new] = contrib
                if new not in queued:
                    heapq.heappush(heap, (tuple(-x for x in _measure(new)), new))
                    queued.add(new)
    return _from_internal(eng, done)


def kostant_multiply(x: KostantElement, y: KostantElement, cb: ChevalleyBasis) -> KostantElement:
    return pbw_normalize(x * y, cb)


def integrality_check(e: KostantElement) -> tuple[bool, Monomial | None]:
    for m, c in sorted(e.terms.items(), key=lambda mc: repr(mc[0])):
        if c.denominator != 1:
            return False, m
    return True, None


# ---------------------------------------------------------------------------
# independent oracle: ordinary PBW straightening over Q
# ---------------------------------------------------------------------------


def _oracle_expand(eng: _Engine, e: KostantElement) -> dict[tuple[int, ...], Fraction]:
    """Divided powers and binomials as ordinary words in basis indices."""
    out: dict = {}
    for mono, c in e.terms.items():
        partial: dict = {(): Fraction(c)}
        for f in mono:
            if isinstance(f, DividedPower):
                i = eng.index[f.root]
                opts = {(i,) * f.n: Fraction(1, factorial(f.n))}
            elif isinstance(f, OddVector):
                opts = {(eng.index[f.root],): Fraction(1)}
            else:
                h = eng.index[("H", f.i)]
                # prod_{j<n} (H - z - j) / n! as a polynomial in H
                poly = {0: Fraction(1)}
                for j in range(f.n):
                    nxt: dict = {}
                    for d, v in poly.items():
                        nxt[d + 1] = nxt.get(d + 1, 0) + v
                        nxt[d] = nxt.get(d, 0) - (f.z + j) * v
                    poly = nxt
                opts = {(h,) * d: v / factorial(f.n) for d, v in poly.items() if v != 0}
            nxt2: dict = {}
            for w, v in partial.items():
                for w2, v2 in opts.items():
                    k = w + w2
                    nxt2[k] = nxt2.get(k, 0) + v * v2
            partial = nxt2
        for w, v in partial.items():
            out[w] = out.get(w, 0) + v
    return {w: v for w, v in out.items() if v != 0}


def oracle_straighten(e: KostantElement, cb: ChevalleyBasis) -> dict[tuple, Fraction]:
    """Canonical rational PBW form: ordered words of basis keys, odd keys not repeated."""
    eng = _engine(cb)
    work = _oracle_expand(eng, e)

    def measure(w):
        inv = sum(1 for p in range(len(w)) for q in range(p + 1, len(w)) if w[p] > w[q])
        return (len(w), inv)

    heap = [((-len(w), -measure(w)[1]), w) for w in work]
    heapq.heapify(heap)
    queued = set(work)
    done: dict = {}
    while heap:
        _, w = heapq.heappop(heap)
        queued.discard(w)
        c = work.pop(w)
        if c == 0:
            continue
        p = next(
            (q for q in range(len(w) - 1) if w[q] > w[q + 1] or (w[q] == w[q + 1] and eng.parity[w[q]] == 1)),
            None,
        )
        if p is None:
            done[w] = done.get(w, 0) + c
            continue
        a, b = w[p], w[p + 1]
        br = eng.bracket(a, b)
        news: list = []
        if a == b:
            news = [(w[:p] + (t,) + w[p + 2 :], c * v / 2) for t, v in br.items()]
        else:
            sign = -1 if eng.parity[a] and eng.parity[b] else 1
            news = [(w[:p] + (b, a) + w[p + 2 :], sign * c)]
            news += [(w[:p] + (t,) + w[p + 2 :], c * v) for t, v in br.items()]
        for nw, v in news:
            if nw in work:
                work[nw] += v
            else:
                work[nw] = v
                if nw not in queued:
                    m = measure(nw)
                    heapq.heappush(heap, ((-m[0], -m[1]), nw))
                    queued.add(nw)
    return {tuple(eng.keys[i] for i in w): v for w, v in done.items() if v != 0}


# ---------------------------------------------------------------------------
# basis enumeration
# ---------------------------------------------------------------------------


def _even_monomials(slots: Sequence, bound: int) -> list[tuple[tuple, int]]:
    """(exponent tuple, height) with total height <= bound, built slot by slot."""
    out = [((), 0)]
    for _ in slots:
        out = [(ex + (n,), h + n) for ex, h in out for n in range(bound - h + 1)]
    return out


def _make_monomial(rd: RootDatum, even_exps, odd_subset) -> Monomial:
    factors: list = []
    ev = rd.even_roots
    for r, n in zip(ev, even_exps[: len(ev)]):
        if n:
            factors.append(DividedPower(r, n))
    for i, n in enumerate(even_exps[len(ev) :], 1):
        if n:
            factors.append(CartanBinomial(i, n))
    order = rd.kostant_index
    for r in sorted(odd_subset, key=lambda x: order[x]):
        factors.append(OddVector(r))
    return tuple(factors)


def enumerate_basis(cb: ChevalleyBasis, height_bound: int) -> list[Monomial]:
    """Normal monomials of height <= bound, as (even-part monomial) x (odd subset)."""
    rd = cb.rd
    slots = list(rd.even_roots) + list(range(rd.rank))
    odd = [k for k in rd.kostant_order if not isinstance(k, tuple) and k.parity == 1]
    out = []
    for ex, h in _even_monomials(slots, height_bound):
        for size in range(0, min(len(odd), height_bound - h) + 1):
            for sub in itertools.combinations(odd, size):
                out.append(_make_monomial(rd, ex, sub))
    return out


def enumerate_basis_bruteforce(cb: ChevalleyBasis, height_bound: int) -> list[Monomial]:
    """Generate-and-filter over the full exponent box; independent of enumerate_basis."""
    rd = cb.rd
    n_even = len(rd.even_roots) + rd.rank
    odd = [k for k in rd.kostant_order if not isinstance(k, tuple) and k.parity == 1]
    out = []
    for ex in itertools.product(range(height_bound + 1), repeat=n_even):
        for bits in itertools.product((0, 1), repeat=len(odd)):
            if sum(ex) + sum(bits) <= height_bound:
                out.append(_make_monomial(rd, ex, [r for r, b in zip(odd, bits) if b]))
    return out


def random_generator(cb: ChevalleyBasis, rng: random.Random, nmax: int = 3, shift: int = 2) -> Factor:
    """A random Kostant generator: divided power, odd vector or shifted Cartan binomial."""
    rd = cb.rd
    kind = rng.choice("XCY")
    if kind == "X":
        return DividedPower(rng.choice(rd.even_roots), rng.randint(1, nmax))
    if kind == "Y":
        return OddVector(rng.choice(rd.odd_roots))
    return CartanBinomial(rng.randint(1, rd.rank), rng.randint(1, nmax), rng.randint(-shift, shift))


def random_product(cb: ChevalleyBasis, rng: random.Random, max_factors: int = 6, nmax: int = 3) -> KostantElement:
    """A single (generally non-normal) monomial of 1..max_factors random generators."""
    return KostantElement.monomial(*[random_generator(cb, rng, nmax) for _ in range(rng.randint(1, max_factors))])


# ---------------------------------------------------------------------------
# text grammar
# ---------------------------------------------------------------------------


class KostantSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([XYC])|(\^)|(\()|(\))|(,)|([+-])|([A-Za-z]\w*))")


class _Parser:
    def __init__(self, text: str, rd: RootDatum):
        self.text = text
        self.rd = rd
        self.pos = 0

    def error(self, msg: str, pos: int | None = None):
        raise KostantSyntaxError(msg, (self.pos if pos is None else pos) + 1)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def integer(self, signed: bool = False) -> int:
        self.skip()
        m = re.compile(r"-?\d+" if signed else r"\d+").match(self.text, self.pos)
        if not m:
            self.error("expected an integer")
        self.pos = m.end()
        return int(m.group())

    def label(self) -> tuple[str, int]:
        self.skip()
        m = re.compile(r"[A-Za-z]\w*").match(self.text, self.pos)
        if not m:
            self.error("expected a root label")
        self.pos = m.end()
        return m.group(), m.start()

    def root(self, odd: bool) -> Root:
        lab, at = self.label()
        try:
            r = self.rd.root_by_label(lab)
        except KeyError:
            self.error(f"unknown root label {lab!r}", at)
        if r.parity != (1 if odd else 0):
            self.error(f"{lab} is {'even' if r.parity == 0 else 'odd'}; use {'X' if r.parity == 0 else 'Y'}", at)
        return r

    def factor(self) -> Factor:
        ch = self.peek()
        self.pos += 1
        self.expect("(")
        if ch == "X":
            r = self.root(odd=False)
            self.expect(")")
            n = 1
            if self.peek() == "^":
                self.pos += 1
                self.expect("(")
                n = self.integer()
                self.expect(")")
            if n < 1:
                self.error("divided power exponent must be at least 1")
            return DividedPower(r, n)
        if ch == "Y":
            r = self.root(odd=True)
            self.expect(")")
            return OddVector(r)
        i_at = self.pos
        i = self.integer()
        if not 1 <= i <= self.rd.rank:
            self.error(f"Cartan index {i} out of range 1..{self.rd.rank}", i_at)
        self.expect(",")
        n = self.integer()
        z = 0
        if self.peek() == ",":
            self.pos += 1
            z = self.integer(signed=True)
        self.expect(")")
        return CartanBinomial(i, n, z)

    def coefficient(self) -> Fraction | None:
        self.skip()
        m = re.compile(r"(\d+)(?:/(\d+))?").match(self.text, self.pos)
        if not m:
            return None
        if m.group(2) is not None and int(m.group(2)) == 0:
            self.error("zero denominator")
        self.pos = m.end()
        return Fraction(int(m.group(1)), int(m.group(2) or 1))

    def term(self) -> tuple[Monomial, Fraction]:
        coef = self.coefficient()
        if self.peek() == "*":
            self.pos += 1
        factors: list = []
        while self.peek() in ("X", "Y", "C"):
            factors.append(self.factor())
        if coef is None and not factors:
            found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            self.error(f"expected a term, found {found}")
        return tuple(factors), coef if coef is not None else Fraction(1)

    def parse(self) -> KostantElement:
        out: dict = {}
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        while True:
            m, c = self.term()
            out[m] = out.get(m, 0) + sign * c
            ch = self.peek()
            if not ch:
                break
            if ch not in "+-":
                self.error(f"unexpected {ch!r}")
            sign = -1 if ch == "-" else 1
            self.pos += 1
        return KostantElement(out)


def parse_kostant_expr(text: str, rd: RootDatum) -> KostantElement:
    """Parse e.g. ``2 X(a1)^(2) C(1,1) Y(g1) - 1/2 Y(g2)``; columns in errors are 1-based."""
    return _Parser(text, rd).parse()


def format_factor(f: Factor, rd: RootDatum) -> str:
    if isinstance(f, DividedPower):
        return f"X({rd.label(f.root)})^({f.n})"
    if isinstance(f, OddVector):
        return f"Y({rd.label(f.root)})"
    return f"C({f.i},{f.n})" if f.z == 0 else f"C({f.i},{f.n},{f.z})"


def monomial_sort_key(m: Monomial, rd: RootDatum) -> tuple:
    idx = rd.kostant_index
    return (
        height(m),
        tuple(
            (idx[("H", f.i)] if isinstance(f, CartanBinomial) else idx[f.root], getattr(f, "n", 1), getattr(f, "z", 0))
            for f in m
        ),
    )


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_kostant(e: KostantElement, rd: RootDatum) -> str:
    if not e.terms:
        return "0"
    parts = []
    for k, (m, c) in enumerate(sorted(e.terms.items(), key=lambda mc: monomial_sort_key(mc[0], rd))):
        body = " ".join(format_factor(f, rd) for f in m)
        mag = abs(c)
        if not body:
            txt = _fmt_coeff(mag)
        elif mag == 1:
            txt = body
        else:
            txt = f"{_fmt_coeff(mag)} {body}"
        if k == 0:
            parts.append(("-" if c < 0 else "") + txt)
        else:
            parts.append(("- " if c < 0 else "+ ") + txt)
    return " ".join(parts)


def kostant_to_json(e: KostantElement, rd: RootDatum) -> list[dict]:
    return [
        {"monomial": [format_factor(f, rd) for f in m], "coeff": f"{c.numerator}/{c.denominator}"}
        for m, c in sorted(e.terms.items(), key=lambda mc: monomial_sort_key(mc[0], rd))
    ]


def kostant_from_json(data: Iterable[Mapping], rd: RootDatum) -> KostantElement:
    out: dict = {}
    for item in data:
        m = parse_kostant_expr(" ".join(item["monomial"]) or "1", rd)
        (mono, _), = m.terms.items()
        out[mono] = out.get(mono, 0) + Fraction(item["coeff"])
    return KostantElement(out)


def dumps(e: KostantElement, rd: RootDatum) -> str:
    return json.dumps(kostant_to_json(e, rd), separators=(",", ":"))
