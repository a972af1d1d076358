"""Exact scalars: rationals, Q[t]/t^N and truncated Laurent series in t.

Rationals are :class:`fractions.Fraction`.  ``TruncSeries`` is an element of
the ring Q[t]/t^N (the truncation is part of the ring, not an error bar).
``TruncLaurent`` is an approximation of an element of Q((t)) with explicit
precision, in the style of p-adic floating point: a valuation, a tuple of
known digits and a relative precision.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = [
    "Fraction",
    "PrecisionExhausted",
    "TruncSeries",
    "TruncLaurent",
    "as_fraction",
    "format_rational",
    "parse_rational",
    "series_invert",
    "valuation",
]

# relative precision used when inverting an exact multi-term value
DEFAULT_WORKING_PRECISION = 8


class PrecisionExhausted(ArithmeticError):
    """Raised when a result would carry fewer than one known coefficient."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not a rational: {x!r}")


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"rational literal must be 'p' or 'p/q', got {s!r}")
    return Fraction(s)


def format_rational(q) -> str:
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _is_plain(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class TruncSeries:
    """Element of Q[t]/t^N, stored sparsely as ``{exponent: Fraction}``."""

    __slots__ = ("trunc", "coeffs")

    def __init__(self, coeffs=None, trunc: int = 8):
        if trunc < 1:
            raise ValueError("trunc must be positive")
        clean = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
            for k, c in items:
                k = int(k)
                if k < 0:
                    raise ValueError("negative exponent in TruncSeries")
                if k >= trunc:
                    continue
                c = as_fraction(c)
                if c:
                    clean[k] = clean.get(k, Fraction(0)) + c
                    if not clean[k]:
                        del clean[k]
        self.trunc = trunc
        self.coeffs = clean

    @classmethod
    def constant(cls, c, trunc: int) -> "TruncSeries":
        return cls({0: c}, trunc)

    @classmethod
    def monomial(cls, c, k: int, trunc: int) -> "TruncSeries":
        return cls({k: c}, trunc)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs.get(k, Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self[0]

    def valuation(self) -> int | None:
        return min(self.coeffs) if self.coeffs else None

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"0 + O(t^{self.trunc})"
        terms = []
        for k in sorted(self.coeffs):
            c = format_rational(self.coeffs[k])
            terms.append(c if k == 0 else f"{c}*t^{k}")
        return " + ".join(terms) + f" + O(t^{self.trunc})"

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            return other
        if _is_plain(other):
            return TruncSeries({0: other}, self.trunc)
        return NotImplemented

    def __eq__(self, other):
        if _is_plain(other):
            other = TruncSeries({0: other}, self.trunc)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        n = min(self.trunc, other.trunc)
        return self.truncate(n).coeffs == other.truncate(n).coeffs

    def __hash__(self):
        if set(self.coeffs) <= {0}:
            return hash(self[0])
        return hash((self.trunc, tuple(sorted(self.coeffs.items()))))

    def truncate(self, n: int) -> "TruncSeries":
        if n == self.trunc:
            return self
        return TruncSeries({k: c for k, c in self.coeffs.items() if k < n}, n)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = min(self.trunc, other.trunc)
        out = {k: c for k, c in self.coeffs.items() if k < n}
        for k, c in other.coeffs.items():
            if k < n:
                out[k] = out.get(k, 0) + c
        return TruncSeries(out, n)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries({k: -c for k, c in self.coeffs.items()}, self.trunc)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_plain(other):
            if not other:
                return TruncSeries({}, self.trunc)
            return TruncSeries({k: c * other for k, c in self.coeffs.items()}, self.trunc)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        n = min(self.trunc, other.trunc)
        out: dict[int, Fraction] = {}
        for i, a in self.coeffs.items():
            if i >= n:
                continue
            for j, b in other.coeffs.items():
                if i + j < n:
                    out[i + j] = out.get(i + j, 0) + a * b
        return TruncSeries(out, n)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("use series_invert for negative powers")
        result = TruncSeries({0: 1}, self.trunc)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def compose(self, f: "TruncSeries") -> "TruncSeries":
        """Substitute ``t -> f(t)``; requires ``f(0) = 0``."""
        if f.constant_term:
            raise ValueError("substituted series must have zero constant term")
        n = min(self.trunc, f.trunc)
        out = TruncSeries({}, n)
        power = TruncSeries({0: 1}, n)
        for k in range(n):
            c = self[k]
            if c:
                out = out + power * c
            power = power * f
            if not power:
                break
        return out

    def at_zero(self) -> Fraction:
        return self.constant_term

    def evaluate(self, q) -> Fraction:
        """Evaluate the stored polynomial representative at ``t = q``."""
        q = as_fraction(q)
        return sum((c * q**k for k, c in self.coeffs.items()), Fraction(0))

    def to_laurent(self) -> "TruncLaurent":
        """View as a Laurent element known to absolute precision ``trunc``."""
        v = self.valuation()
        if v is None:
            return TruncLaurent.zero(self.trunc)
        digits = [self[k] for k in range(v, self.trunc)]
        return TruncLaurent(v, digits, len(digits))

    def to_json(self):
        return {
            "trunc": self.trunc,
            "coeffs": [[k, format_rational(c)] for k, c in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_pairs(cls, pairs, trunc: int) -> "TruncSeries":
        return cls({int(k): parse_rational(str(c)) for k, c in pairs}, trunc)


class TruncLaurent:
    """Truncated Laurent series ``t^v * (d_0 + d_1 t + ...) + O(t^(v+p))``.

    ``precision`` is the relative precision ``p`` (number of known digits),
    ``None`` for an exact value.  A zero known only to absolute precision
    ``a`` is stored with no digits and ``valuation = a``; the exact zero has
    ``valuation = None``.
    """

    __slots__ = ("valuation", "digits", "precision")

    def __init__(self, valuation, digits=(), precision=None):
        digits = [as_fraction(d) for d in digits]
        if precision is not None:
            if precision < len(digits):
                digits = digits[:precision]
        start = 0
        while start < len(digits) and not digits[start]:
            start += 1
        if start == len(digits):
            if precision is None:
                self.valuation, self.digits, self.precision = None, (), None
            else:
                self.valuation, self.digits, self.precision = valuation + precision, (), 0
            return
        digits = digits[start:]
        if precision is None:
            while digits and not digits[-1]:
                digits.pop()
        else:
            precision -= start
            digits = digits + [Fraction(0)] * (precision - len(digits))
        self.valuation = valuation + start
        self.digits = tuple(digits)
        self.precision = precision

    @classmethod
    def exact(cls, c, k: int = 0) -> "TruncLaurent":
        return cls(k, [c], None)

    @classmethod
    def zero(cls, abs_precision: int | None = None) -> "TruncLaurent":
        if abs_precision is None:
            return cls(0, (), None)
        return cls(abs_precision, (), 0)

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    @property
    def abs_precision(self) -> float:
        if self.precision is None:
            return float("inf")
        return self.valuation + self.precision

    def unit(self) -> TruncSeries:
        if not self.digits:
            raise ValueError("zero has no unit part")
        n = self.precision if self.precision is not None else len(self.digits)
        return TruncSeries(dict(enumerate(self.digits)), max(n, 1))

    def __bool__(self) -> bool:
        return bool(self.digits)

    def __repr__(self) -> str:
        if not self.digits:
            return "0" if self.precision is None else f"O(t^{self.valuation})"
        terms = []
        for i, d in enumerate(self.digits):
            if d:
                terms.append(f"{format_rational(d)}*t^{self.valuation + i}")
        tail = "" if self.precision is None else f" + O(t^{self.valuation + self.precision})"
        return " + ".join(terms) + tail

    def coefficient(self, k: int) -> Fraction:
        if k >= self.abs_precision:
            raise PrecisionExhausted(f"coefficient of t^{k} is not known")
        if not self.digits or k < self.valuation:
            return Fraction(0)
        i = k - self.valuation
        return self.digits[i] if i < len(self.digits) else Fraction(0)

    @staticmethod
    def _coerce(x):
        if isinstance(x, TruncLaurent):
            return x
        if _is_plain(x):
            return TruncLaurent.exact(x) if x else TruncLaurent.zero()
        if isinstance(x, TruncSeries):
            return x.to_laurent()
        return NotImplemented

    def _terms(self) -> dict[int, Fraction]:
        return {self.valuation + i: d for i, d in enumerate(self.digits) if d}

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.precision is None and not self.digits:
            return other
        if other.precision is None and not other.digits:
            return self
        bound = min(self.abs_precision, other.abs_precision)
        terms = self._terms()
        for k, c in other._terms().items():
            terms[k] = terms.get(k, 0) + c
        terms = {k: c for k, c in terms.items() if c and k < bound}
        if bound == float("inf"):
            if not terms:
                return TruncLaurent.zero()
            lo, hi = min(terms), max(terms)
            return TruncLaurent(lo, [terms.get(k, 0) for k in range(lo, hi + 1)], None)
        bound = int(bound)
        if not terms:
            return TruncLaurent.zero(bound)
        lo = min(terms)
        return TruncLaurent(lo, [terms.get(k, 0) for k in range(lo, bound)], bound - lo)

    __radd__ = __add__

    def __neg__(self):
        if not self.digits:
            return self
        return TruncLaurent(self.valuation, [-d for d in self.digits], self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self, other
        if (a.precision is None and not a.digits) or (b.precision is None and not b.digits):
            return TruncLaurent.zero()
        if not a.digits or not b.digits:
            # at least one inexact zero: only an absolute bound survives
            return TruncLaurent.zero(a.valuation + b.valuation)
        if a.precision is None and b.precision is None:
            p = None
            n = len(a.digits) + len(b.digits) - 1
        else:
            p = min(x for x in (a.precision, b.precision) if x is not None)
            n = p
        out = [Fraction(0)] * n
        for i, x in enumerate(a.digits):
            if i >= n:
                break
            if not x:
                continue
            for j, y in enumerate(b.digits):
                if i + j >= n:
                    break
                out[i + j] += x * y
        return TruncLaurent(a.valuation + b.valuation, out, p)

    __rmul__ = __mul__

    def inverse(self) -> "TruncLaurent":
        if not self.digits:
            raise ZeroDivisionError("inverting a Laurent value that is zero to its precision")
        p = self.precision
        if p is None:
            if len(self.digits) == 1:
                return TruncLaurent(-self.valuation, [1 / self.digits[0]], None)
            p = max(len(self.digits), DEFAULT_WORKING_PRECISION)
        if p < 1:
            raise PrecisionExhausted("no known coefficients to invert")
        d = list(self.digits) + [Fraction(0)] * (p - len(self.digits))
        inv = [Fraction(0)] * p
        inv[0] = 1 / d[0]
        for k in range(1, p):
            s = sum((d[j] * inv[k - j] for j in range(1, k + 1)), Fraction(0))
            inv[k] = -s * inv[0]
        return TruncLaurent(-self.valuation, inv, p)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        diff = self - other
        return not diff.digits

    def __hash__(self):
        return hash((self.valuation, self.digits))

    def evaluate(self, q) -> Fraction:
        """Evaluate the known digits at ``t = q`` (nonzero for negative powers)."""
        q = as_fraction(q)
        return sum((c * q**k for k, c in self._terms().items()), Fraction(0))

    def to_json(self):
        return {
            "valuation": self.valuation,
            "coeffs": [[i, format_rational(d)] for i, d in enumerate(self.digits) if d],
            "trunc": self.precision,
        }


def series_invert(s) -> TruncLaurent:
    """Multiplicative inverse of a nonzero series or Laurent value."""
    if isinstance(s, TruncSeries):
        if not s:
            raise ZeroDivisionError("series is zero modulo t^N")
        s = s.to_laurent()
    elif _is_plain(s):
        s = TruncLaurent.exact(s) if s else TruncLaurent.zero()
    result = s.inverse()
    if result.precision is not None and result.precision < 1:
        raise PrecisionExhausted("inverse has no known coefficients")
    return result


def valuation(x) -> int:
    """t-adic valuation used for pivoting; rationals have valuation 0."""
    if isinstance(x, TruncLaurent):
        return x.valuation
    if isinstance(x, TruncSeries):
        v = x.valuation()
        return x.trunc if v is None else v
    return 0
