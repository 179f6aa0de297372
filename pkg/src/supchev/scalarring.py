"""Exact coefficient rings.

Three layers live here:

* ``Scalar``: numbers ``a + b*sqrt(d)`` with rational ``a, b``.  Only ``d = 2`` is
  ever needed (type-B matrices); values with ``b == 0`` collapse back to plain
  ``int``/``Fraction`` so rational code never pays for the extension.
* ``GrassmannElem``: elements of the exterior algebra on ``N`` odd generators
  ``t1..tN`` with exact coefficients, optionally truncated above a given degree.
* ``DualNumber``: the even square-zero extension ``A[eps]``.

Everything is immutable once built.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Union

Number = Union[int, Fraction, "Scalar"]

SUPPORTED_DISCRIMINANTS = (0, 2)


def normalize(c):
    """Collapse a Fraction with denominator 1 to int, a Scalar with b == 0 to its rational part."""
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Scalar):
        return normalize(c.a) if c.b == 0 else c
    return c


def exact_div(c, d):
    """Exact quotient ``c / d`` for any supported scalar type."""
    if isinstance(c, int) and isinstance(d, int):
        if d == 0:
            raise ZeroDivisionError("division by zero")
        q, r = divmod(c, d)
        return q if r == 0 else Fraction(c, d)
    if isinstance(c, Scalar) or isinstance(d, Scalar):
        return normalize(as_scalar(c, _disc(c, d)) / d)
    return normalize(Fraction(c) / d)


def _disc(*xs) -> int:
    ds = {x.d for x in xs if isinstance(x, Scalar)}
    if len(ds) > 1:
        raise ValueError(f"mixed discriminants {sorted(ds)}")
    return ds.pop() if ds else 0


class Scalar:
    """An element ``a + b*sqrt(d)`` of the quadratic field Q(sqrt(d))."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 2):
        if d not in SUPPORTED_DISCRIMINANTS:
            raise ValueError(f"unsupported discriminant {d}; only {SUPPORTED_DISCRIMINANTS}")
        if d == 0 and b != 0:
            raise ValueError("d = 0 means plain rationals; b must be 0")
        self.a = normalize(Fraction(a))
        self.b = normalize(Fraction(b))
        self.d = d

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.d != self.d and other.b != 0 and self.b != 0:
                raise ValueError(f"mixed discriminants {self.d} and {other.d}")
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return normalize(Scalar(self.a + o.a, self.b + o.b, max(self.d, o.d)))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return normalize(Scalar(self.a - o.a, self.b - o.b, max(self.d, o.d)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = max(self.d, o.d)
        return normalize(Scalar(self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a, d))

    __rmul__ = __mul__

    def conjugate(self) -> "Scalar":
        return Scalar(self.a, -self.b, self.d)

    def norm(self):
        """Field norm ``a^2 - d b^2`` (a rational)."""
        return normalize(self.a * self.a - self.d * self.b * self.b)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        num = self * o.conjugate()
        if not isinstance(num, Scalar):
            num = Scalar(num, 0, self.d)
        return normalize(Scalar(Fraction(num.a) / n, Fraction(num.b) / n, self.d))

    def __rtruediv__(self, other):
        return Scalar(other, 0, self.d) / self

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.a == other.a and self.b == other.b and (self.b == 0 or self.d == other.d)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash(self.a) if self.b == 0 else hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"Scalar({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        return format_number(self)


def as_scalar(x, d: int = 2) -> Scalar:
    return x if isinstance(x, Scalar) else Scalar(x, 0, d)


SQRT2 = Scalar(0, 1, 2)


def is_integer(x) -> bool:
    x = normalize(x)
    return isinstance(x, int)


def format_number(x) -> str:
    x = normalize(x)
    if isinstance(x, Scalar):
        parts = []
        if x.a != 0:
            parts.append(str(x.a))
        b = x.b
        sb = f"sqrt({x.d})" if b == 1 else f"-sqrt({x.d})" if b == -1 else f"{b}*sqrt({x.d})"
        if parts and not sb.startswith("-"):
            sb = "+" + sb
        return "".join(parts) + sb
    return str(x)


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


# ---------------------------------------------------------------------------
# Grassmann algebra
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _sign_table(n: int) -> tuple[tuple[int, ...], ...]:
    """sign[a][b] for theta_A * theta_B; 0 when the supports overlap."""
    size = 1 << n
    table = []
    for a in range(size):
        row = []
        for b in range(size):
            if a & b:
                row.append(0)
                continue
            swaps = 0
            bb = b
            while bb:
                low = bb & -bb
                t = low.bit_length() - 1
                swaps += bin(a >> (t + 1)).count("1")
                bb ^= low
            row.append(-1 if swaps & 1 else 1)
        table.append(tuple(row))
    return tuple(table)


def _popcount(x: int) -> int:
    return bin(x).count("1")


class GrassmannElem:
    """Element of the Grassmann algebra on ``n_gens`` odd generators.

    ``terms`` maps a bitmask (bit ``k-1`` for generator ``tk``) to a nonzero
    coefficient.  ``max_degree`` truncates the algebra: monomials of higher
    degree are identified with zero, which gives the quotient rings with
    ``A1^k = 0`` used for degeneration checks.
    """

    __slots__ = ("n_gens", "terms", "max_degree")

    def __init__(self, n_gens: int, terms: Mapping[int, Number] | None = None, max_degree: int | None = None):
        if n_gens < 0:
            raise ValueError("negative generator count")
        if max_degree is None or max_degree > n_gens:
            max_degree = n_gens
        self.n_gens = n_gens
        self.max_degree = max_degree
        clean = {}
        limit = 1 << n_gens
        for mask, c in (terms or {}).items():
            if not 0 <= mask < limit:
                raise ValueError(f"monomial {mask:b} outside {n_gens} generators")
            c = normalize(c)
            if c != 0 and _popcount(mask) <= max_degree:
                clean[mask] = c
        self.terms = clean

    # construction helpers -------------------------------------------------
    @classmethod
    def scalar(cls, n_gens: int, c: Number, max_degree: int | None = None) -> "GrassmannElem":
        return cls(n_gens, {0: c}, max_degree)

    @classmethod
    def gen(cls, n_gens: int, k: int, max_degree: int | None = None) -> "GrassmannElem":
        """The generator ``tk`` (1-based)."""
        if not 1 <= k <= n_gens:
            raise ValueError(f"generator t{k} outside 1..{n_gens}")
        return cls(n_gens, {1 << (k - 1): 1}, max_degree)

    @classmethod
    def monomial(cls, n_gens: int, gens: Iterable[int], coeff: Number = 1, max_degree: int | None = None):
        """``coeff * t_{g1} t_{g2} ...`` in the given (not necessarily sorted) order."""
        out = cls.scalar(n_gens, coeff, max_degree)
        for k in gens:
            out = out * cls.gen(n_gens, k, max_degree)
        return out

    def like(self, terms: Mapping[int, Number]) -> "GrassmannElem":
        return GrassmannElem(self.n_gens, terms, self.max_degree)

    def zero(self) -> "GrassmannElem":
        return self.like({})

    def one(self) -> "GrassmannElem":
        return self.like({0: 1})

    # queries ---------------------------------------------------------------
    @property
    def body(self):
        return self.terms.get(0, 0)

    def soul(self) -> "GrassmannElem":
        return self.like({m: c for m, c in self.terms.items() if m})

    def is_zero(self) -> bool:
        return not self.terms

    def parity(self) -> int | None:
        """0 or 1 for homogeneous elements (zero counts as even), None otherwise."""
        ps = {_popcount(m) & 1 for m in self.terms}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def is_even(self) -> bool:
        return all(not (_popcount(m) & 1) for m in self.terms)

    def is_odd(self) -> bool:
        return all(_popcount(m) & 1 for m in self.terms)

    def even_part(self) -> "GrassmannElem":
        return self.like({m: c for m, c in self.terms.items() if not _popcount(m) & 1})

    def odd_part(self) -> "GrassmannElem":
        return self.like({m: c for m, c in self.terms.items() if _popcount(m) & 1})

    def degree_part(self, k: int) -> "GrassmannElem":
        return self.like({m: c for m, c in self.terms.items() if _popcount(m) == k})

    def min_degree(self) -> int | None:
        return min((_popcount(m) for m in self.terms), default=None)

    # arithmetic ------------------------------------------------------------
    def _check(self, other: "GrassmannElem") -> None:
        if other.n_gens != self.n_gens or other.max_degree != self.max_degree:
            raise ValueError(
                f"mismatched Grassmann rings: ({self.n_gens}, {self.max_degree}) vs ({other.n_gens}, {other.max_degree})"
            )

    def _lift(self, other) -> "GrassmannElem | None":
        if isinstance(other, GrassmannElem):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return self.like({0: other})
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, 0) + c
        return self.like(out)

    __radd__ = __add__

    def __neg__(self):
        return self.like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.like({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, GrassmannElem):
            return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return self.zero()
        sign = _sign_table(self.n_gens)
        maxd = self.max_degree
        truncated = maxd < self.n_gens
        out: dict[int, Number] = {}
        for a, ca in self.terms.items():
            row = sign[a]
            for b, cb in other.terms.items():
                s = row[b]
                if not s:
                    continue
                m = a | b
                if truncated and _popcount(m) > maxd:
                    continue
                v = ca * cb
                out[m] = out.get(m, 0) + (v if s > 0 else -v)
        return self.like(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.like({m: other * c for m, c in self.terms.items()})
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.like({m: exact_div(c, other) for m, c in self.terms.items()})
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, GrassmannElem):
            return (
                self.n_gens == other.n_gens
                and self.max_degree == other.max_degree
                and self.terms == other.terms
            )
        if isinstance(other, (int, Fraction, Scalar)):
            return self.terms == ({0: normalize(other)} if other != 0 else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.n_gens, self.max_degree, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"GrassmannElem({self.n_gens}, {format_grassmann(self)!r})"

    def __str__(self):
        return format_grassmann(self)

    def __iter__(self) -> Iterator[tuple[int, Number]]:
        return iter(sorted(self.terms.items(), key=lambda mc: _mask_key(mc[0])))


def _mask_key(mask: int):
    return (_popcount(mask), [k for k in range(mask.bit_length()) if mask >> k & 1])


def gr_mul(x: GrassmannElem, y: GrassmannElem) -> GrassmannElem:
    return x * y


def gr_inv(x: GrassmannElem) -> GrassmannElem:
    """Inverse of an element with nonzero body, via the finite geometric series on its soul."""
    b = x.body
    if b == 0:
        raise ZeroDivisionError(f"{x} is not a unit (zero body)")
    s = x.soul() / b
    term = x.one()
    total = x.one()
    for _ in range(x.max_degree):
        term = -(term * s)
        if term.is_zero():
            break
        total = total + term
    return total / b


def gr_power(t: GrassmannElem, k: int) -> GrassmannElem:
    """``t**k`` for any integer ``k``; negative ``k`` needs a unit."""
    if k < 0:
        return gr_power(gr_inv(t), -k)
    result = t.one()
    base = t
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def gr_exp_nilpotent(x: GrassmannElem) -> GrassmannElem:
    """exp of an element with zero body (finite sum)."""
    if x.body != 0:
        raise ValueError("exp is only defined here for nilpotent elements")
    total = x.one()
    term = x.one()
    k = 0
    while True:
        k += 1
        term = (term * x) / k
        if term.is_zero():
            return total
        total = total + term


# text form ---------------------------------------------------------------

def format_grassmann(x: GrassmannElem) -> str:
    """Canonical text such as ``3/2 + 1*t1t3 - 2*t1t2t3t4``."""
    if x.is_zero():
        return "0"
    pieces: list[str] = []
    for mask, c in x:
        c = normalize(c)
        name = "".join(f"t{k + 1}" for k in range(x.n_gens) if mask >> k & 1)
        negative = (not isinstance(c, Scalar)) and c < 0
        mag = -c if negative else c
        if isinstance(mag, Scalar):
            body = f"({format_number(mag)})"
        else:
            body = str(mag)
        text = body if not name else f"{body}*{name}"
        if not pieces:
            pieces.append(("-" if negative else "") + text)
        else:
            pieces.append(("- " if negative else "+ ") + text)
    return " ".join(pieces)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<mono>(?:t\d+)+)|(?P<op>[+\-*]))")


def parse_grassmann(text: str, n_gens: int, max_degree: int | None = None) -> GrassmannElem:
    """Parse the canonical text form (and mild variants such as ``t1t2`` or ``-3*t2``)."""
    pos = 0
    text = text.strip()
    if not text:
        raise ValueError("empty Grassmann expression")
    total = GrassmannElem(n_gens, {}, max_degree)
    sign = 1
    coeff: Fraction | None = None
    mono: list[int] | None = None
    expect_term = True

    def flush():
        nonlocal total, coeff, mono, sign
        c = sign * (coeff if coeff is not None else 1)
        gens = mono or []
        total = total + GrassmannElem.monomial(n_gens, gens, c, max_degree)
        coeff, mono, sign = None, None, 1

    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad Grassmann expression at column {pos + 1}: {text!r}")
        pos = m.end()
        if m.group("num") is not None:
            if coeff is not None or mono is not None:
                raise ValueError(f"unexpected number at column {m.start('num') + 1}")
            coeff = Fraction(m.group("num"))
            expect_term = False
        elif m.group("mono") is not None:
            if mono is not None:
                raise ValueError(f"unexpected monomial at column {m.start('mono') + 1}")
            gens = [int(g) for g in re.findall(r"t(\d+)", m.group("mono"))]
            for g in gens:
                if not 1 <= g <= n_gens:
                    raise ValueError(f"generator t{g} outside 1..{n_gens}")
            mono = gens
            expect_term = False
        else:
            op = m.group("op")
            if op == "*":
                if coeff is None or mono is not None:
                    raise ValueError(f"misplaced '*' at column {m.start('op') + 1}")
                continue
            if not expect_term:
                flush()
            sign = sign * (-1 if op == "-" else 1)
            expect_term = True
    if expect_term:
        raise ValueError("Grassmann expression ends with an operator")
    flush()
    return total


# ---------------------------------------------------------------------------
# Dual numbers A[eps]
# ---------------------------------------------------------------------------


class DualNumber:
    """``x + eps*xp`` with ``eps`` even and ``eps**2 == 0``."""

    __slots__ = ("x", "xp")

    def __init__(self, x, xp=0):
        self.x = x
        self.xp = xp

    def _lift(self, other):
        if isinstance(other, DualNumber):
            return other
        return DualNumber(other, 0)

    def __add__(self, other):
        o = self._lift(other)
        return DualNumber(self.x + o.x, self.xp + o.xp)

    __radd__ = __add__

    def __neg__(self):
        return DualNumber(-self.x, -self.xp)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        return DualNumber(self.x * o.x, self.x * o.xp + self.xp * o.x)

    def __rmul__(self, other):
        o = self._lift(other)
        return o * self

    def project(self):
        """The ring map ``p: A[eps] -> A`` sending eps to 0."""
        return self.x

    def eps_part(self):
        return self.xp

    def __eq__(self, other):
        o = self._lift(other)
        return self.x == o.x and self.xp == o.xp

    def __hash__(self):
        return hash((self.x, self.xp))

    def __repr__(self):
        return f"DualNumber({self.x!r}, {self.xp!r})"


def dual_epsilon(one) -> DualNumber:
    """The element eps of ``A[eps]`` given the unit of ``A``."""
    return DualNumber(one * 0, one)
