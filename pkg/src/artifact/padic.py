"""Arithmetic in finite extensions K of Q_p with precision tracking.

A field is an unramified extension of degree ``f`` (generated by ``u``, a root
of an integer polynomial irreducible mod p) followed by a pure Eisenstein
extension ``pi**e = p``.  Elements are stored as

    p**k * sum_{i<e, j<f} c[i*f + j] * u**j * pi**i

with integer coefficients ``c`` and an absolute precision ``prec`` counted in
powers of ``pi``.  The basis ``u**j pi**i`` is valuation-orthogonal, which makes
valuations and digit expansions cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
import math
from math import isqrt
from typing import Any, Sequence

from .errors import (
    DivisionByZero,
    InvalidField,
    NonSquareResidue,
    OddValuation,
    SchemaError,
)


def vp_int(n: int, p: int) -> int:
    if n == 0:
        raise DivisionByZero("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_rational(x: Fraction | int, p: int) -> int:
    x = Fraction(x)
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, isqrt(n) + 1))


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


# --- residue field F_q = F_p[u]/(m) ---------------------------------------


def _fq_mul(a: tuple, b: tuple, p: int, red: tuple) -> tuple:
    f = len(a)
    if f == 1:
        return ((a[0] * b[0]) % p,)
    prod = [0] * (2 * f - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for d in range(2 * f - 2, f - 1, -1):
        t = prod[d]
        if t:
            prod[d] = 0
            for j in range(f):
                prod[d - f + j] -= t * red[j]
    return tuple(x % p for x in prod[:f])


def _poly_mod_p_rem(a: list, m: list, p: int) -> list:
    a = [x % p for x in a]
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            break
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for j, mj in enumerate(m):
            a[shift + j] = (a[shift + j] - c * mj) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod_p_gcd(a: list, b: list, p: int) -> list:
    a = [x % p for x in a]
    while a and a[-1] == 0:
        a.pop()
    b = [x % p for x in b]
    while b and b[-1] == 0:
        b.pop()
    while b:
        a, b = b, _poly_mod_p_rem(a, b, p)
    return a


def _irreducible_mod_p(m: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    f = len(m) - 1
    red = tuple(m[:f])

    def frob_power(k: int) -> tuple:
        # u^(p^k) in F_p[u]/(m), computed by repeated p-th powering
        x = tuple(1 if j == 1 else 0 for j in range(f)) if f > 1 else (0,)
        for _ in range(k):
            x = _fq_pow(x, p, p, red)
        return x

    if f == 1:
        return True
    if frob_power(f) != tuple(1 if j == 1 else 0 for j in range(f)):
        return False
    primes = [r for r in range(2, f + 1) if f % r == 0 and _is_prime(r)]
    for r in primes:
        x = list(frob_power(f // r))
        x[1 % f] -= 1 if f > 1 else 0
        if len(_poly_mod_p_gcd(list(m), x, p)) > 1:
            return False
    return True


def _fq_pow(a: tuple, n: int, p: int, red: tuple) -> tuple:
    f = len(a)
    result = tuple(1 if j == 0 else 0 for j in range(f))
    base = a
    while n:
        if n & 1:
            result = _fq_mul(result, base, p, red)
        base = _fq_mul(base, base, p, red)
        n >>= 1
    return result


@dataclass(frozen=True)
class FieldDescriptor:
    """K = Q_p(u, pi) with m(u) = 0 (unramified, degree f) and pi**e = p.

    ``N`` is the default absolute precision in powers of pi.  ``name`` is the
    symbol printed for the uniformiser.
    """

    p: int
    e: int = 1
    f: int = 1
    modulus: tuple[int, ...] = ()
    N: int = field(default=20, compare=False)
    name: str = field(default="pi", compare=False)
    unram_name: str = field(default="u", compare=False)
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or self.p == 2 or not _is_prime(self.p):
            raise InvalidField(f"p must be an odd prime, got {self.p}")
        if self.e < 1 or self.f < 1:
            raise InvalidField("ramification and residue degrees must be positive")
        if self.f > 1:
            m = tuple(int(x) for x in self.modulus)
            object.__setattr__(self, "modulus", m)
            if len(m) != self.f + 1 or m[-1] != 1:
                raise InvalidField("unramified modulus must be monic of degree f")
            if not _irreducible_mod_p(m, self.p):
                raise InvalidField("unramified modulus is reducible mod p")
        else:
            object.__setattr__(self, "modulus", (0, 1))
        if self.N < 1:
            raise InvalidField("precision must be positive")

    # -- basic invariants ---------------------------------------------------
    @property
    def degree(self) -> int:
        return self.e * self.f

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def uniformizer_name(self) -> str:
        return self.name if self.e > 1 else str(self.p)

    def ppow(self, n: int) -> int:
        c = self._cache.setdefault("ppow", [1])
        while len(c) <= n:
            c.append(c[-1] * self.p)
        return c[n]

    @cached_property
    def _red(self) -> tuple:
        return tuple(self.modulus[: self.f])

    def with_precision(self, N: int) -> "FieldDescriptor":
        return FieldDescriptor(self.p, self.e, self.f, self.modulus, N, self.name, self.unram_name)

    def describe(self) -> dict:
        return {
            "p": self.p,
            "e": self.e,
            "f": self.f,
            "modulus": list(self.modulus) if self.f > 1 else None,
            "N": self.N,
            "uniformizer": self.uniformizer_name,
        }

    # -- residue field -------------------------------------------------------
    def fq_mul(self, a: tuple, b: tuple) -> tuple:
        return _fq_mul(a, b, self.p, self._red)

    def fq_pow(self, a: tuple, n: int) -> tuple:
        return _fq_pow(a, n, self.p, self._red)

    def fq_inv(self, a: tuple) -> tuple:
        if not any(x % self.p for x in a):
            raise DivisionByZero("inverse of zero residue")
        return self.fq_pow(a, self.q - 2)

    def fq_sqrts(self, a: tuple) -> list[tuple]:
        """Both square roots of a nonzero residue (empty if a is a non-square)."""
        a = tuple(x % self.p for x in a)
        if self.q <= 20000:
            table = self._cache.get("sqrt_table")
            if table is None:
                table = {}
                for idx in range(self.q):
                    x = tuple((idx // self.p**j) % self.p for j in range(self.f))
                    table.setdefault(self.fq_mul(x, x), []).append(x)
                self._cache["sqrt_table"] = table
            return sorted(table.get(a, []))
        return self._tonelli(a)

    def _tonelli(self, a: tuple) -> list[tuple]:
        f, p, q = self.f, self.p, self.q
        one = tuple(1 if j == 0 else 0 for j in range(f))
        if self.fq_pow(a, (q - 1) // 2) != one:
            return []
        s, t = 0, q - 1
        while t % 2 == 0:
            s, t = s + 1, t // 2
        z = None
        for idx in range(2, q):
            cand = tuple((idx // p**j) % p for j in range(f))
            if self.fq_pow(cand, (q - 1) // 2) != one:
                z = cand
                break
        c = self.fq_pow(z, t)
        x = self.fq_pow(a, (t + 1) // 2)
        b = self.fq_pow(a, t)
        m = s
        while b != one:
            i, bb = 0, b
            while bb != one:
                bb = self.fq_mul(bb, bb)
                i += 1
            g = c
            for _ in range(m - i - 1):
                g = self.fq_mul(g, g)
            x = self.fq_mul(x, g)
            c = self.fq_mul(g, g)
            b = self.fq_mul(b, c)
            m = i
        neg = tuple((-v) % p for v in x)
        return sorted([x, neg])

    # -- constructors --------------------------------------------------------
    def zero(self, prec: int | None = None) -> "PadicElement":
        return PadicElement(self, 0, [0] * self.degree, self.N if prec is None else prec)

    def one(self, prec: int | None = None) -> "PadicElement":
        return self(1, prec)

    def uniformizer(self, prec: int | None = None) -> "PadicElement":
        return self.pi_power(1, prec)

    def pi_power(self, n: int, prec: int | None = None) -> "PadicElement":
        prec = self.N + n if prec is None else prec
        c = [0] * self.degree
        k, i = divmod(n, self.e)
        c[i * self.f] = 1
        return PadicElement(self, k, c, prec)

    def unram_generator(self, prec: int | None = None) -> "PadicElement":
        c = [0] * self.degree
        c[1 % self.f if self.f > 1 else 0] = 1
        return PadicElement(self, 0, c, self.N if prec is None else prec)

    def from_residue(self, r: Sequence[int], prec: int | None = None) -> "PadicElement":
        c = [0] * self.degree
        for j, x in enumerate(r):
            c[j] = int(x) % self.p
        return PadicElement(self, 0, c, self.N if prec is None else prec)

    def __call__(self, x: Any, prec: int | None = None) -> "PadicElement":
        return lift(self, x, prec)


class PadicElement:
    """Element of K known modulo pi**prec."""

    __slots__ = ("F", "k", "c", "prec", "_val")

    def __init__(self, F: FieldDescriptor, k: int, c: list[int], prec: int, _normalized: bool = False):
        self.F = F
        if _normalized:
            self.k, self.c, self.prec = k, c, prec
            self._val = None
        else:
            self.k, self.c, self.prec = _normalize(F, k, c, prec)
            self._val = None

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.c)

    def valuation(self) -> int:
        """pi-adic valuation; equals ``prec`` for an element indistinguishable from 0."""
        if self._val is None:
            if not any(self.c):
                self._val = self.prec
            else:
                F, p = self.F, self.F.p
                best = None
                for i in range(F.e):
                    for j in range(F.f):
                        x = self.c[i * F.f + j]
                        if x:
                            v = F.e * vp_int(x, p) + i
                            if best is None or v < best:
                                best = v
                self._val = F.e * self.k + best
        return self._val

    @property
    def val(self) -> int:
        return self.valuation()

    def relative_precision(self) -> int:
        return self.prec - self.valuation()

    def residue(self) -> tuple:
        """Image in the residue field; requires a nonnegative valuation."""
        if self.valuation() < 0:
            raise DivisionByZero("residue of a non-integral element")
        F = self.F
        if self.k > 0:
            return (0,) * F.f
        return tuple(self.c[j] % F.p for j in range(F.f))

    def unit_part(self) -> "PadicElement":
        return self.shift(-self.valuation())

    def in_base_field(self) -> bool:
        return all(x == 0 for x in self.c[1:])

    def to_fraction(self) -> Fraction:
        """Rational representative of an element of Q_p."""
        if not self.in_base_field():
            raise SchemaError("element is not in Q_p")
        return Fraction(self.c[0]) * Fraction(self.F.p) ** self.k

    def balanced_int(self) -> int:
        """Centred integer representative of a p-adic integer in Q_p."""
        x = self.to_fraction()
        if x.denominator != 1:
            raise SchemaError("not integral")
        n = _ceil_div(self.prec, self.F.e)
        m = self.F.ppow(n)
        r = int(x) % m
        return r - m if r > m // 2 else r

    def coefficients(self) -> list[list[Fraction]]:
        """Rational coefficients in the basis u**j pi**i (outer index i)."""
        F = self.F
        scale = Fraction(F.p) ** self.k
        return [[self.c[i * F.f + j] * scale for j in range(F.f)] for i in range(F.e)]

    # -- precision ------------------------------------------------------------
    def add_bigoh(self, n: int) -> "PadicElement":
        if n >= self.prec:
            return self
        return PadicElement(self.F, self.k, list(self.c), n)

    def lift_to(self, n: int) -> "PadicElement":
        """Same representative, declared known to precision n (used by Newton steps)."""
        return PadicElement(self.F, self.k, list(self.c), n)

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other: Any, for_mul: bool = False) -> "PadicElement":
        if isinstance(other, PadicElement):
            if other.F is not self.F and other.F != self.F:  # structural comparison
                raise InvalidField("elements of different fields")
            return other
        x = Fraction(other)
        F = self.F
        if for_mul:
            vr = 0 if x == 0 else F.e * vp_rational(x, F.p)
            need = self.prec + max(0, -self.valuation()) + vr + 1
            return lift(F, x, need)
        return lift(F, x, self.prec)

    def __add__(self, other: Any) -> "PadicElement":
        other = self._coerce(other)
        F = self.F
        k = min(self.k, other.k)
        if self.k == other.k:
            c = [a + b for a, b in zip(self.c, other.c)]
        else:
            sa, sb = F.ppow(self.k - k), F.ppow(other.k - k)
            c = [a * sa + b * sb for a, b in zip(self.c, other.c)]
        return PadicElement(F, k, c, min(self.prec, other.prec))

    __radd__ = __add__

    def __neg__(self) -> "PadicElement":
        return PadicElement(self.F, self.k, [-a for a in self.c], self.prec)

    def __sub__(self, other: Any) -> "PadicElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "PadicElement":
        return self._coerce(other) + (-self)

    def __mul__(self, other: Any) -> "PadicElement":
        if not isinstance(other, PadicElement) and not any(self.c):
            x = Fraction(other)
            return self.F.zero(self.prec + (0 if x == 0 else self.F.e * vp_rational(x, self.F.p)))
        other = self._coerce(other, for_mul=True)
        F = self.F
        va, vb = self.valuation(), other.valuation()
        prec = min(self.prec + vb, other.prec + va)
        if not any(self.c) or not any(other.c):
            return F.zero(prec)
        c = _mul_coeffs(F, self.c, other.c)
        return PadicElement(F, self.k + other.k, c, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicElement":
        if not any(self.c):
            raise DivisionByZero("inverse of an element indistinguishable from zero")
        F = self.F
        v = self.valuation()
        rel = self.prec - v
        w = self.shift(-v)
        t = F.from_residue(F.fq_inv(w.residue()), rel)
        w = w.lift_to(rel)
        n = 1
        while n < rel:
            n *= 2
            t = t * (2 - w * t)
            t = t.lift_to(rel)
        t = t.add_bigoh(rel)
        return t.shift(-v)

    def __truediv__(self, other: Any) -> "PadicElement":
        if isinstance(other, PadicElement):
            return self * other.inverse()
        x = Fraction(other)
        if x == 0:
            raise DivisionByZero("division by zero")
        return self * (1 / x)

    def __rtruediv__(self, other: Any) -> "PadicElement":
        inv = self.inverse()
        x = Fraction(other)
        if x == 0:
            return self.F.zero(inv.prec)
        vx = self.F.e * vp_rational(x, self.F.p)
        return lift(self.F, x, inv.prec + abs(vx) + abs(inv.valuation()) + 1) * inv

    def __pow__(self, n: int) -> "PadicElement":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return self.F.one(self.prec + abs(self.valuation()) + 1)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, n: int) -> "PadicElement":
        """Multiply by pi**n exactly."""
        F = self.F
        if n == 0:
            return self
        q0 = n // F.e
        c = [0] * F.degree
        for i in range(F.e):
            qi, ri = divmod(i + n, F.e)
            extra = qi - q0
            for j in range(F.f):
                x = self.c[i * F.f + j]
                if x:
                    c[ri * F.f + j] = x * F.ppow(extra)
        return PadicElement(F, self.k + q0, c, self.prec + n)

    # -- comparisons ----------------------------------------------------------
    def equals(self, other: Any, prec: int | None = None) -> bool:
        d = self - other
        bound = d.prec if prec is None else min(prec, d.prec)
        return d.is_zero() or d.valuation() >= bound

    def __eq__(self, other: Any) -> bool:  # type: ignore[override]
        try:
            return self.equals(other)
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    # -- analytic functions -----------------------------------------------------
    def sqrt(self, sign_hint: Any = None) -> "PadicElement":
        return sqrt(self, sign_hint)

    def log(self) -> "PadicElement":
        return log_iwasawa(self)

    # -- digits / serialisation ----------------------------------------------
    def digits(self) -> list:
        """Little-endian pi-adic digits from pi**val up to pi**(prec-1)."""
        F = self.F
        v = self.valuation()
        out: list = []
        if self.prec <= v:
            return out
        n_digits = self.prec - v
        table: dict[int, list[int]] = {}
        for i in range(F.e):
            for j in range(F.f):
                x = self.c[i * F.f + j]
                t = 0
                while x:
                    x, r = divmod(x, F.p)
                    pos = F.e * (self.k + t) + i
                    if r:
                        table.setdefault(pos, [0] * F.f)[j] = r
                    t += 1
        for pos in range(v, self.prec):
            d = table.get(pos, [0] * F.f)
            out.append(d[0] if F.f == 1 else list(d))
        assert len(out) == n_digits
        return out

    def to_json(self) -> dict:
        return {
            "digits": self.digits(),
            "val": self.valuation(),
            "prec": self.prec,
            "uniformizer": self.F.uniformizer_name,
        }

    def __repr__(self) -> str:
        F = self.F
        name = F.uniformizer_name
        terms = []
        for n, d in enumerate(self.digits()):
            pos = self.valuation() + n
            if (F.f == 1 and d) or (F.f > 1 and any(d)):
                coeff = str(d) if F.f == 1 else "(" + "+".join(
                    f"{x}*{F.unram_name}^{j}" if j else str(x) for j, x in enumerate(d) if x
                ) + ")"
                terms.append(coeff if pos == 0 else f"{coeff}*{name}^{pos}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O({name}^{self.prec})"


def _mul_coeffs(F: FieldDescriptor, a: list[int], b: list[int]) -> list[int]:
    e, f = F.e, F.f
    if e == 1 and f == 1:
        return [a[0] * b[0]]
    if f == 1:
        out = [0] * (2 * e - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        p = F.p
        for d in range(e, 2 * e - 1):
            out[d - e] += p * out[d]
        return out[:e]
    red = F._red
    rows = [[0] * (2 * f - 1) for _ in range(2 * e - 1)]
    for i1 in range(e):
        for j1 in range(f):
            x = a[i1 * f + j1]
            if not x:
                continue
            for i2 in range(e):
                row = rows[i1 + i2]
                for j2 in range(f):
                    y = b[i2 * f + j2]
                    if y:
                        row[j1 + j2] += x * y
    for row in rows:
        for d in range(2 * f - 2, f - 1, -1):
            t = row[d]
            if t:
                row[d] = 0
                for j in range(f):
                    row[d - f + j] -= t * red[j]
    p = F.p
    for d in range(e, 2 * e - 1):
        for j in range(f):
            rows[d - e][j] += p * rows[d][j]
    return [rows[i][j] for i in range(e) for j in range(f)]


def _normalize(F: FieldDescriptor, k: int, c: list[int], prec: int) -> tuple[int, list[int], int]:
    p, e, f = F.p, F.e, F.f
    while True:
        if not any(c):
            return 0, [0] * (e * f), prec
        if not any(x % p for x in c):
            g = min(vp_int(x, p) for x in c if x)
            pg = F.ppow(g)
            c = [x // pg for x in c]
            k += g
        for i in range(e):
            n_i = _ceil_div(prec - e * k - i, e)
            if n_i <= 0:
                for j in range(f):
                    c[i * f + j] = 0
            else:
                m = F.ppow(n_i)
                for j in range(f):
                    x = c[i * f + j]
                    if x < 0 or x >= m:
                        c[i * f + j] = x % m
        if not any(c):
            return 0, [0] * (e * f), prec
        if any(x % p for x in c):
            return k, c, prec


def lift(F: FieldDescriptor, x: Any, prec: int | None = None) -> PadicElement:
    """Embed an integer, rational, coefficient list or serialised element into K."""
    prec = F.N if prec is None else prec
    if isinstance(x, PadicElement):
        return x.add_bigoh(prec) if x.F == F else _foreign(F, x, prec)
    if isinstance(x, dict):
        return from_json(F, x)
    if isinstance(x, (list, tuple)):
        return _from_coefficients(F, x, prec)
    if isinstance(x, str):
        try:
            x = Fraction(x.strip())
        except ValueError as exc:
            raise SchemaError(f"cannot parse field element {x!r}") from exc
    try:
        x = Fraction(x)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"cannot interpret {x!r} as an element of K") from exc
    if x == 0:
        return F.zero(prec)
    p = F.p
    v = vp_rational(x, p)
    num = x.numerator // F.ppow(max(v, 0)) if v >= 0 else x.numerator
    den = x.denominator // F.ppow(-v) if v < 0 else x.denominator
    n = max(_ceil_div(prec - F.e * v, F.e), 1)
    m = F.ppow(n)
    unit = num * pow(den, -1, m) % m
    c = [0] * F.degree
    c[0] = unit
    return PadicElement(F, v, c, prec)


def _foreign(F: FieldDescriptor, x: PadicElement, prec: int) -> PadicElement:
    if x.F.p != F.p or x.F.e != F.e or x.F.f != F.f:
        raise InvalidField("incompatible fields")
    return PadicElement(F, x.k, list(x.c), min(prec, x.prec))


def _from_coefficients(F: FieldDescriptor, coeffs: Sequence, prec: int) -> PadicElement:
    """Coefficients in the basis pi**i (outer) and u**j (inner lists when f > 1)."""
    total = F.zero(prec)
    for i, ci in enumerate(coeffs):
        if isinstance(ci, (list, tuple)):
            if F.f == 1 and len(ci) != 1:
                raise SchemaError("inner coefficient lists need an unramified extension")
            parts = ci
        else:
            parts = [ci]
        if len(parts) > F.f:
            raise SchemaError("too many unramified coefficients")
        for j, cij in enumerate(parts):
            r = Fraction(cij)
            if r == 0:
                continue
            term = lift(F, r, prec + F.degree + i) * F.pi_power(i, prec + F.degree)
            if j:
                term = term * (F.unram_generator(prec + F.degree) ** j)
            total = total + term
    return total.add_bigoh(prec)


def from_json(F: FieldDescriptor, d: dict) -> PadicElement:
    try:
        digits = list(d["digits"])
        val = int(d["val"])
        prec = int(d["prec"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError("p-adic JSON needs digits, val and prec") from exc
    total = F.zero(prec - val)
    for n, dig in enumerate(digits):
        parts = list(dig) if isinstance(dig, (list, tuple)) else [dig]
        if len(parts) > F.f:
            raise SchemaError("digit has too many residue coordinates")
        if any(parts):
            total = total + F.from_residue([int(x) for x in parts], prec - val).shift(n)
    return total.shift(val).add_bigoh(prec)


def sqrt(a: PadicElement, sign_hint: Any = None) -> PadicElement:
    """Square root; ``sign_hint`` selects the root by its leading residue digit."""
    F = a.F
    if a.is_zero():
        raise OddValuation("square root of an element indistinguishable from zero")
    v = a.valuation()
    if v % 2:
        raise OddValuation(f"valuation {v} is odd")
    w = a.shift(-v)
    rel = w.prec
    roots = F.fq_sqrts(w.residue())
    if not roots:
        raise NonSquareResidue("residue is not a square")
    if sign_hint is None:
        r0 = roots[0]
    else:
        hint = tuple(int(x) % F.p for x in (sign_hint if isinstance(sign_hint, (list, tuple)) else [sign_hint]))
        hint = hint + (0,) * (F.f - len(hint))
        matches = [r for r in roots if r == hint]
        if not matches:
            raise NonSquareResidue(f"no square root with leading digit {list(hint)}")
        r0 = matches[0]
    s = F.from_residue(r0, rel)
    w = w.lift_to(rel)
    # s <- s - (s^2 - w)/(2 s) doubles the number of correct digits
    n = 1
    while n < rel:
        n *= 2
        s = (s + w / s) * Fraction(1, 2)
        s = s.lift_to(rel)
    s = s.add_bigoh(rel)
    return s.shift(v // 2)


def is_square(a: PadicElement) -> bool:
    if a.is_zero():
        return True
    v = a.valuation()
    return v % 2 == 0 and bool(a.F.fq_sqrts(a.shift(-v).residue()))


def log_iwasawa(a: PadicElement) -> PadicElement:
    """Iwasawa logarithm: Log(p) = 0, hence Log(pi) = 0 because pi**e = p."""
    F = a.F
    if a.is_zero():
        raise DivisionByZero("logarithm of zero")
    w = a.unit_part()
    target = w.prec
    z = w ** (F.q - 1)
    t = z - 1
    vt = t.valuation()
    if t.is_zero() or vt >= target:
        return F.zero(target)
    total = F.zero(target)
    power = t
    n = 1
    while True:
        term = power * Fraction(1, n)
        total = total + (term if n % 2 else -term)
        n += 1
        # m*vt - e*log_p(m) increases for m >= e and bounds every later term
        if n >= F.e and n * vt - F.e * math.log(n, F.p) >= target:
            break
        power = power * t
    return total.add_bigoh(target) * Fraction(1, F.q - 1)
