"""Exact coefficient arithmetic in the parameter q.

Three value types live here:

* ``LaurentQ``: Laurent polynomials in q with rational coefficients.
* ``RatQ``: rational functions in q, kept reduced with a monic denominator
  whose lowest q-exponent is zero, so equality is structural.
* ``HbarSeries``: truncated power series in h (the substitution q = e^h),
  with coefficients that are polynomials in commuting symbols ``L_v``.

Everything is immutable and exact; no floating point is used.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]

__all__ = [
    "LaurentQ",
    "RatQ",
    "HbarSeries",
    "LamPoly",
    "laurent_normalize",
    "ratfunc_reduce",
    "hbar_substitute",
    "parse_laurent",
    "parse_hbar",
    "Q",
    "QINV",
    "QDIFF",
    "ONE",
    "ZERO",
]


# ---------------------------------------------------------------------------
# dense polynomial helpers (lists of Fractions, lowest degree first)


def _ptrim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(a) - 1 < db:
        return [], _ptrim(a)
    quot = [Fraction(0)] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        f = c / lb
        quot[i - db] = f
        for j in range(db + 1):
            a[i - db + j] -= f * b[j]
    return _ptrim(quot), _ptrim(a[:db])


def _pgcd(a: list, b: list) -> list:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if not a:
        return a
    lc = a[-1]
    return [c / lc for c in a]


# ---------------------------------------------------------------------------


class LaurentQ:
    """A Laurent polynomial sum_k c_k q^k with rational c_k.

    Stored as a dict exponent -> nonzero Fraction; the empty dict is zero.
    """

    __slots__ = ("_t", "_h")

    def __init__(self, terms: Mapping[int, Rational] | None = None):
        t: dict[int, Fraction] = {}
        if terms:
            for k, c in terms.items():
                if c:
                    t[int(k)] = Fraction(c)
        self._t = t
        self._h = None

    @classmethod
    def _raw(cls, t: dict) -> "LaurentQ":
        obj = cls.__new__(cls)
        obj._t = t
        obj._h = None
        return obj

    @classmethod
    def const(cls, c: Rational) -> "LaurentQ":
        return cls._raw({0: Fraction(c)} if c else {})

    @classmethod
    def monomial(cls, k: int, c: Rational = 1) -> "LaurentQ":
        return cls._raw({k: Fraction(c)} if c else {})

    @classmethod
    def coerce(cls, x) -> "LaurentQ":
        if isinstance(x, LaurentQ):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentQ")

    # -- inspection
    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._t)

    def items(self):
        return sorted(self._t.items())

    def is_zero(self) -> bool:
        return not self._t

    def is_one(self) -> bool:
        return self._t == {0: 1}

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def min_exp(self) -> int:
        return min(self._t)

    def max_exp(self) -> int:
        return max(self._t)

    def constant_value(self) -> Fraction | None:
        if not self._t:
            return Fraction(0)
        if len(self._t) == 1 and 0 in self._t:
            return self._t[0]
        return None

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, LaurentQ):
            if isinstance(other, (int, Fraction)):
                other = LaurentQ.const(other)
            else:
                return NotImplemented
        t = dict(self._t)
        for k, c in other._t.items():
            v = t.get(k, 0) + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return LaurentQ._raw(t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentQ._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        if not isinstance(other, LaurentQ):
            if isinstance(other, (int, Fraction)):
                other = LaurentQ.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentQ):
            if isinstance(other, (int, Fraction)):
                if not other:
                    return LaurentQ._raw({})
                return LaurentQ._raw({k: c * other for k, c in self._t.items()})
            return NotImplemented
        t: dict[int, Fraction] = {}
        for k1, c1 in self._t.items():
            for k2, c2 in other._t.items():
                k = k1 + k2
                t[k] = t.get(k, 0) + c1 * c2
        return LaurentQ._raw({k: c for k, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent inverses")
            (k, c), = self._t.items()
            return LaurentQ._raw({k * n: Fraction(1) / c ** (-n)})
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, s: int) -> "LaurentQ":
        """Multiply by q^s."""
        return LaurentQ._raw({k + s: c for k, c in self._t.items()})

    def scale_exponents(self, m: int) -> "LaurentQ":
        """Substitute q -> q^m."""
        if m == 0:
            return LaurentQ.const(sum(self._t.values(), Fraction(0)))
        return LaurentQ._raw({k * m: c for k, c in self._t.items()})

    def evaluate(self, q0: Rational) -> Fraction:
        q0 = Fraction(q0)
        if q0 == 0 and any(k < 0 for k in self._t):
            raise ZeroDivisionError("negative power of q at q=0")
        return sum((c * q0 ** k for k, c in self._t.items()), Fraction(0))

    # -- comparison / hashing
    def __eq__(self, other):
        if isinstance(other, LaurentQ):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({0: Fraction(other)} if other else {})
        if isinstance(other, RatQ):
            return other == self
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(tuple(sorted(self._t.items())))
        return self._h

    def __bool__(self):
        return bool(self._t)

    def __repr__(self):
        return f"LaurentQ({self})"

    def __str__(self):
        return _render_laurent(self)

    # -- conversions used by RatQ
    def to_poly(self) -> tuple[int, list]:
        """Return (shift, dense coeffs) with self = q^shift * poly, poly(0) != 0."""
        if not self._t:
            return 0, []
        lo, hi = min(self._t), max(self._t)
        return lo, [self._t.get(k, Fraction(0)) for k in range(lo, hi + 1)]

    @classmethod
    def from_poly(cls, shift: int, coeffs: Iterable[Fraction]) -> "LaurentQ":
        return cls._raw({shift + i: Fraction(c) for i, c in enumerate(coeffs) if c})


def laurent_normalize(raw: Iterable[tuple[int, Rational]]) -> LaurentQ:
    """Canonical LaurentQ from an arbitrary list of (exponent, coefficient) terms."""
    acc: dict[int, Fraction] = {}
    for k, c in raw:
        acc[int(k)] = acc.get(int(k), Fraction(0)) + Fraction(c)
    return LaurentQ(acc)


def _fmt_frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _render_laurent(p: LaurentQ) -> str:
    if not p._t:
        return "0"
    parts = []
    for k, c in sorted(p._t.items(), reverse=True):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = _fmt_frac(a)
        else:
            qpart = "q" if k == 1 else f"q^{k}"
            body = qpart if a == 1 else f"{_fmt_frac(a)}*{qpart}"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


# ---------------------------------------------------------------------------


class RatQ:
    """Element of Q(q) as a reduced fraction of Laurent polynomials.

    The denominator is monic with lowest exponent 0 (a genuine polynomial with
    nonzero constant term), which makes the representation unique.
    """

    __slots__ = ("num", "den", "_h")

    def __init__(self, num, den=None):
        num = LaurentQ.coerce(num)
        if den is None:
            self.num, self.den = num, ONE
        else:
            n, d = _reduce(num, LaurentQ.coerce(den))
            self.num, self.den = n, d
        self._h = None

    @classmethod
    def _raw(cls, num: LaurentQ, den: LaurentQ) -> "RatQ":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._h = None
        return obj

    @classmethod
    def coerce(cls, x) -> "RatQ":
        if isinstance(x, RatQ):
            return x
        return cls._raw(LaurentQ.coerce(x), ONE)

    def is_zero(self) -> bool:
        return not self.num._t

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def __bool__(self):
        return bool(self.num._t)

    def _binop_add(self, other: "RatQ", sign: int) -> "RatQ":
        if self.den.is_one() and other.den.is_one():
            return RatQ._raw(self.num + other.num if sign > 0 else self.num - other.num, ONE)
        if self.den == other.den:
            n = self.num + other.num if sign > 0 else self.num - other.num
            return RatQ(n, self.den)
        n1 = self.num * other.den
        n2 = other.num * self.den
        return RatQ(n1 + n2 if sign > 0 else n1 - n2, self.den * other.den)

    def __add__(self, other):
        other = _as_rat(other)
        if other is None:
            return NotImplemented
        return self._binop_add(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_rat(other)
        if other is None:
            return NotImplemented
        return self._binop_add(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RatQ._raw(-self.num, self.den)

    def __mul__(self, other):
        other = _as_rat(other)
        if other is None:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return RatQ._raw(self.num * other.num, ONE)
        if not self.num._t or not other.num._t:
            return RatQ._raw(ZERO, ONE)
        return RatQ(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatQ":
        if not self.num._t:
            raise ZeroDivisionError("inverse of zero in Q(q)")
        if self.num.is_monomial() and self.den.is_one():
            return RatQ._raw(self.num ** -1, ONE)
        return RatQ(self.den, self.num)

    def __truediv__(self, other):
        other = _as_rat(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _as_rat(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = RatQ.coerce(1)
        for _ in range(n):
            out = out * self
        return out

    def evaluate(self, q0: Rational) -> Fraction:
        d = self.den.evaluate(q0)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at q={q0}")
        return self.num.evaluate(q0) / d

    def __eq__(self, other):
        o = _as_rat(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.num, self.den)) if not self.den.is_one() else hash(self.num)
        return self._h

    def __repr__(self):
        return f"RatQ({self})"

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"


def _as_rat(x) -> RatQ | None:
    if isinstance(x, RatQ):
        return x
    if isinstance(x, LaurentQ):
        return RatQ._raw(x, ONE)
    if isinstance(x, (int, Fraction)):
        return RatQ._raw(LaurentQ.const(x), ONE)
    return None


def _reduce(n: LaurentQ, d: LaurentQ) -> tuple[LaurentQ, LaurentQ]:
    if not d._t:
        raise ZeroDivisionError("zero denominator in Q(q)")
    if not n._t:
        return ZERO, ONE
    ds, dp = d.to_poly()
    ns, np_ = n.to_poly()
    shift = ns - ds
    if len(dp) > 1 and len(np_) > 1:
        g = _pgcd(np_, dp)
        if len(g) > 1:
            np_, _ = _pdivmod(np_, g)
            dp, _ = _pdivmod(dp, g)
    lc = dp[-1]
    if lc != 1:
        np_ = [c / lc for c in np_]
        dp = [c / lc for c in dp]
    return LaurentQ.from_poly(shift, np_), LaurentQ.from_poly(0, dp)


def ratfunc_reduce(n: LaurentQ, d: LaurentQ) -> RatQ:
    """Reduce n/d to the canonical RatQ; raises ZeroDivisionError for d = 0."""
    return RatQ(n, d)


ZERO = LaurentQ._raw({})
ONE = LaurentQ._raw({0: Fraction(1)})
Q = LaurentQ._raw({1: Fraction(1)})
QINV = LaurentQ._raw({-1: Fraction(1)})
QDIFF = LaurentQ._raw({1: Fraction(1), -1: Fraction(-1)})


# ---------------------------------------------------------------------------
# polynomials in the commuting symbols L_v, and h-adic series


class LamPoly:
    """Polynomial with rational coefficients in commuting symbols (``L_v``).

    Monomials are tuples of (symbol, power) sorted by symbol.
    """

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping[tuple, Rational] | None = None):
        self._t = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c: Rational) -> "LamPoly":
        return cls({(): c})

    @classmethod
    def symbol(cls, name: str) -> "LamPoly":
        return cls({((name, 1),): 1})

    @property
    def terms(self):
        return dict(self._t)

    def is_zero(self):
        return not self._t

    def __add__(self, other):
        other = _as_lam(other)
        t = dict(self._t)
        for m, c in other._t.items():
            t[m] = t.get(m, 0) + c
        return LamPoly(t)

    __radd__ = __add__

    def __neg__(self):
        return LamPoly({m: -c for m, c in self._t.items()})

    def __sub__(self, other):
        return self + (-_as_lam(other))

    def __rsub__(self, other):
        return _as_lam(other) - self

    def __mul__(self, other):
        other = _as_lam(other)
        t: dict = {}
        for m1, c1 in self._t.items():
            for m2, c2 in other._t.items():
                m = _mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return LamPoly(t)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            return self._t == _as_lam(other)._t
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self._t.items())))

    def __repr__(self):
        return f"LamPoly({self})"

    def __str__(self):
        if not self._t:
            return "0"
        out = []
        for m, c in sorted(self._t.items(), key=lambda mc: (len(mc[0]), mc[0])):
            sym = "*".join(n if p == 1 else f"{n}^{p}" for n, p in m)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not sym:
                body = _fmt_frac(a)
            else:
                body = sym if a == 1 else f"{_fmt_frac(a)}*{sym}"
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for n, p in m2:
        d[n] = d.get(n, 0) + p
    return tuple(sorted(d.items()))


def _as_lam(x) -> LamPoly:
    if isinstance(x, LamPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LamPoly.const(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to LamPoly")


class HbarSeries:
    """sum_{k <= order} c_k h^k with LamPoly coefficients, truncated at ``order``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable, order: int):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        cs = [_as_lam(c) for c in coeffs][: order + 1]
        cs += [LamPoly()] * (order + 1 - len(cs))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c, order: int) -> "HbarSeries":
        return cls([c], order)

    @classmethod
    def hbar(cls, order: int) -> "HbarSeries":
        return cls([0, 1], order)

    @classmethod
    def exp_lambda(cls, name: str, order: int, power: int = 2) -> "HbarSeries":
        """e^{h^power * L_name} truncated at ``order``."""
        lam = LamPoly.symbol(name)
        cs: list = [LamPoly()] * (order + 1)
        k, term = 0, LamPoly.const(1)
        while k * power <= order:
            cs[k * power] = term * Fraction(1, factorial(k))
            k += 1
            term = term * lam
        return cls(cs, order)

    def coefficient(self, k: int) -> LamPoly:
        return self.coeffs[k] if k <= self.order else LamPoly()

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k
        return None

    def _coerce(self, other) -> "HbarSeries":
        if isinstance(other, HbarSeries):
            return other
        return HbarSeries([other], self.order)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return HbarSeries([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return HbarSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        out = [LamPoly() for _ in range(n + 1)]
        for i in range(n + 1):
            a = self.coeffs[i]
            if a.is_zero():
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return HbarSeries(out, n)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, HbarSeries):
            other = self._coerce(other)
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"HbarSeries({self})"

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            hp = "" if k == 0 else ("h" if k == 1 else f"h^{k}")
            for m, coef in sorted(c._t.items(), key=lambda mc: (len(mc[0]), mc[0])):
                sym = "*".join(n if p == 1 else f"{n}^{p}" for n, p in m)
                factors = [f for f in (hp, sym) if f]
                a = abs(coef)
                if factors:
                    body = "*".join(([_fmt_frac(a)] if a != 1 else []) + factors)
                else:
                    body = _fmt_frac(a)
                parts.append(("-" if coef < 0 else "+", body))
        tail = f"O(h^{self.order + 1})"
        if not parts:
            return f"0 + {tail}"
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return f"{s} + {tail}"


def hbar_substitute(p: LaurentQ | RatQ, order: int) -> HbarSeries:
    """Expand p(q) at q = e^h up to and including h^order."""
    if order < 0:
        raise ValueError("order must be >= 0")
    if isinstance(p, RatQ):
        num = hbar_substitute(p.num, order)
        den = hbar_substitute(p.den, order)
        return num * _series_inverse(den)
    p = LaurentQ.coerce(p)
    cs = [Fraction(0)] * (order + 1)
    for k, c in p._t.items():
        kn = Fraction(1)
        for n in range(order + 1):
            cs[n] += c * kn / factorial(n)
            kn *= k
    return HbarSeries(cs, order)


def _series_inverse(s: HbarSeries) -> HbarSeries:
    c0 = s.coeffs[0]
    if set(c0._t) - {()} or not c0._t:
        raise ZeroDivisionError("series with non-invertible constant term")
    inv0 = Fraction(1) / c0._t[()]
    # 1/s = inv0 * sum_k (-(s*inv0 - 1))^k
    x = s * inv0 - 1
    out = HbarSeries([1], s.order)
    term = HbarSeries([1], s.order)
    for _ in range(s.order):
        term = term * (-x)
        out = out + term
    return out * inv0


# ---------------------------------------------------------------------------
# parsing


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def _split_terms(text: str) -> list[tuple[int, str]]:
    # split on +/- that are not exponent signs (i.e. not preceded by '^')
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty expression")
    terms, cur, sign = [], "", 1
    i = 0
    while i < len(s):
        ch = s[i]
        if ch in "+-" and (i == 0 or s[i - 1] not in "^(/*"):
            if cur:
                terms.append((sign, cur))
            sign, cur = (1 if ch == "+" else -1), ""
        else:
            cur += ch
        i += 1
    if cur:
        terms.append((sign, cur))
    return terms


def _parse_factor_num(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad number {tok!r}") from exc


def parse_laurent(text: str) -> LaurentQ:
    """Parse e.g. ``"q^2 - q^-2"`` or ``"3/2*q - 1"``."""
    acc: dict[int, Fraction] = {}
    for sign, body in _split_terms(text):
        coef, exp = Fraction(sign), 0
        for f in body.split("*"):
            if not f:
                raise ValueError(f"bad term {body!r}")
            if f[0] == "q":
                if f == "q":
                    exp += 1
                elif f.startswith("q^"):
                    exp += int(f[2:].strip("()"))
                else:
                    raise ValueError(f"bad factor {f!r}")
            else:
                coef *= _parse_factor_num(f)
        acc[exp] = acc.get(exp, Fraction(0)) + coef
    return LaurentQ(acc)


def parse_hbar(text: str) -> HbarSeries:
    """Parse e.g. ``"1 + 2*h^2*L_v + O(h^3)"``; the O-term fixes the order."""
    m = re.search(r"\+?\s*O\(h\^?(\d*)\)\s*$", text)
    if not m:
        raise ValueError("missing O(h^n) truncation term")
    order = int(m.group(1) or 1) - 1
    body = text[: m.start()].strip()
    cs = [LamPoly() for _ in range(order + 1)]
    if body and body != "0":
        for sign, t in _split_terms(body):
            coef, hk, mono = Fraction(sign), 0, ()
            for f in t.split("*"):
                if f == "h":
                    hk += 1
                elif f.startswith("h^"):
                    hk += int(f[2:])
                elif re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*(\^\d+)?", f):
                    name, _, p = f.partition("^")
                    mono = _mono_mul(mono, ((name, int(p or 1)),))
                else:
                    coef *= _parse_factor_num(f)
            if hk <= order:
                cs[hk] = cs[hk] + LamPoly({mono: coef})
    return HbarSeries(cs, order)
