"""Frobenius on odd-degree chart curves y^2 = g(x) over Z_p.

Integers modulo p^(W+S) hold form coefficients scaled by p^S so that the
divisions by 2m - 1 in the descent stay exact.  The lift is x -> x^p,
y -> y^p (1 + E/y^(2p))^(1/2) with E = g(x^p) - g(x)^p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import HypothesisViolated
from .padic import vp_int


def _trim(a):
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _add(a, b, mod):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % mod for i in range(n)]
    return _trim(out) if out else [0]


def _scale(a, c, mod):
    return [x * c % mod for x in a]


def _mul(a, b, mod):
    if not a or not b:
        return [0]
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([x % mod for x in out])


def _divmod_monic(a, g, mod):
    a = list(a)
    d = len(g) - 1
    if len(a) - 1 < d:
        return [0], a
    q = [0] * (len(a) - d)
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i] % mod
        if c:
            q[i - d] = c
            for k in range(d + 1):
                a[i - d + k] -= c * g[k]
    r = [x % mod for x in a[:d]] or [0]
    return _trim(q), _trim(r)


def _deriv(a, mod):
    return _trim([i * a[i] % mod for i in range(1, len(a))]) if len(a) > 1 else [0]


def _inverse_mod_p(a, g, p):
    """Inverse of a modulo g over F_p by extended Euclid."""

    def pdivmod(x, y):
        x = [c % p for c in x]
        _trim(x)
        q = [0] * max(len(x) - len(y) + 1, 1)
        inv = pow(y[-1], -1, p)
        while len(x) >= len(y) and any(x):
            c = x[-1] * inv % p
            k = len(x) - len(y)
            q[k] = c
            for i, yi in enumerate(y):
                x[k + i] = (x[k + i] - c * yi) % p
            x.pop()
            _trim(x)
        return _trim(q), x

    r0, r1 = [c % p for c in g], _trim([c % p for c in a])
    s0, s1 = [0], [1]
    while any(r1):
        q, r = pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _add(s0, _scale(_mul(q, s1, p), p - 1, p), p)
    if len(r0) != 1 or r0[0] % p == 0:
        raise HypothesisViolated("g is not squarefree modulo p")
    inv = pow(r0[0], -1, p)
    return _trim([c * inv % p for c in s0])


@dataclass
class KedlayaResult:
    p: int
    W: int  # p-adic digits certified
    S: int  # scaling exponent
    g: list  # integer coefficients
    M: list  # rows: phi^* omega_i = df_i + sum_j M[i][j] omega_j (Fractions)
    f: list  # per i: (dict m -> poly coefficient of y^(1-2m), poly coefficient of y) scaled by p^S
    nu: dict | None = None  # third-kind data for nu = dx/(x 2y)


class _Reducer:
    def __init__(self, g: list[int], p: int, W: int, S: int):
        self.p, self.W, self.S = p, W, S
        self.mod = p ** (W + S)
        self.g = [c % self.mod for c in g]
        self.d = len(g) - 1
        self.gp = _deriv(self.g, self.mod)
        # b = 1/g' mod g by Newton from the residue inverse
        b = _inverse_mod_p(self.gp, self.g, p)
        prec = 1
        mod = self.mod
        while prec < W + S:
            prec *= 2
            t = _divmod_monic(_mul(self.gp, b, mod), self.g, mod)[1]
            t = _add([2], _scale(t, mod - 1, mod), mod)
            b = _divmod_monic(_mul(b, t, mod), self.g, mod)[1]
        self.b = b

    def descend(self, forms: dict) -> tuple[list, dict, list]:
        """forms: m -> poly A_m (scaled); sum A_m y^(-2m) dx/2y.
        Returns (c, fpoles, fpoly): c_0..c_{d-2}, exact part
        sum_m fpoles[m] y^(1-2m) + fpoly y."""
        mod, p = self.mod, self.p
        forms = {m: list(a) for m, a in forms.items()}
        fpoles: dict = {}
        top = max(forms, default=0)
        for m in range(top, 0, -1):
            A = forms.pop(m, None)
            if A is None or not any(A):
                continue
            V = _divmod_monic(_mul(A, self.b, mod), self.g, mod)[1]
            U, rem = _divmod_monic(_add(A, _scale(_mul(V, self.gp, mod), mod - 1, mod), mod), self.g, mod)
            k = 2 * m - 1
            s = vp_int(k, p)
            uinv = pow(k // p ** s, -1, mod)
            Vd = [x * uinv % mod for x in V]
            if s:
                Vd = [x // p ** s for x in Vd]
            # A y^-2m = d(-V y^(1-2m)/(2m-1)) + (U + 2V'/(2m-1)) y^(2-2m)
            fpoles[m] = _scale(Vd, mod - 1, mod)
            new = _add(U, _scale(_deriv(Vd, mod), 2, mod), mod)
            forms[m - 1] = _add(forms.get(m - 1, [0]), new, mod)
        A0 = forms.get(0, [0])
        c, fpoly = self.reduce_poly(A0)
        return c, fpoles, fpoly

    def reduce_poly(self, A: list) -> tuple[list, list]:
        """A dx/2y = d(R y) + sum_{i<=d-2} c_i x^i dx/2y."""
        mod, p, d = self.mod, self.p, self.d
        A = list(A) + [0]
        R = [0] * max(len(A) - d + 1, 1)
        for n in range(len(A) - 1, d - 2, -1):
            a = A[n] % mod
            if not a:
                continue
            m = n - d + 1
            k = d + 2 * m
            s = vp_int(k, p)
            coef = a * pow(k // p ** s, -1, mod) % mod
            if s:
                coef //= p ** s
            R[m] = coef
            # d(x^m y) = (2m x^(m-1) g + x^m g') dx/2y
            if m:
                for i, gi in enumerate(self.g):
                    A[i + m - 1] -= coef * gi * 2 * m
            for i, gi in enumerate(self.gp):
                A[i + m] -= coef * gi
            A = [x % mod for x in A]
        c = [A[i] % mod if i < len(A) else 0 for i in range(d - 1)]
        return c, _trim(R)


def _binom_half(k: int) -> Fraction:
    # binom(-1/2, k)
    out = Fraction(1)
    for j in range(k):
        out *= Fraction(-1, 2) - j
        out /= j + 1
    return out


def _frac_mod(x: Fraction, mod: int) -> int:
    return x.numerator * pow(x.denominator, -1, mod) % mod


def kedlaya(g: list[int], p: int, W: int, with_nu: bool = False) -> KedlayaResult:
    d = len(g) - 1
    if d < 3 or d % 2 == 0:
        raise HypothesisViolated("odd degree >= 3 is required")
    if g[-1] % p == 0 or (g[-1] - 1) % p ** W:
        if g[-1] != 1:
            raise HypothesisViolated("g must be monic")
    K = W + 2  # p^k divides the k-th term
    mmax = (p - 1) // 2 + p * K
    S = 2 * (math.ceil(math.log(2 * mmax + d + 2, p)) + 2)
    red = _Reducer(g, p, W, S)
    mod = red.mod
    gpow_x = [0] * (d * p + 1)
    for i, c in enumerate(g):
        gpow_x[i * p] = c % mod
    gp_ = [1]
    for _ in range(p):
        gp_ = _mul(gp_, red.g, mod)
    E = _add(gpow_x, _scale(gp_, mod - 1, mod), mod)
    Epows = [[1]]
    for _ in range(K):
        Epows.append(_mul(Epows[-1], E, mod))
    scale = p ** S
    M = []
    fs = []
    for i in range(d - 1):
        forms = {}
        for k in range(K + 1):
            coef = _frac_mod(p * _binom_half(k), mod) * scale % mod
            m = (p - 1) // 2 + p * k
            poly = [0] * (p * (i + 1) - 1) + [1]
            forms[m] = _scale(_mul(poly, Epows[k], mod), coef, mod)
        c, fpoles, fpoly = red.descend(forms)
        M.append([_unscale(x, p, S, mod) for x in c])
        fs.append((fpoles, fpoly))
    res = KedlayaResult(p, W, S, list(g), M, fs)
    if with_nu:
        res.nu = _third_kind(red, g, p, W, S, K, Epows)
    return res


def _unscale(x: int, p: int, S: int, mod: int) -> Fraction:
    x %= mod
    if x > mod // 2:
        x -= mod
    return Fraction(x, p ** S)


def _third_kind(red: _Reducer, g, p, W, S, K, Epows) -> dict:
    """phi^* nu - lam nu = dh + sum A_i omega_i for nu = dx/(x 2y), g(0) a unit."""
    mod = red.mod
    g0 = g[0] % p ** (W + S)
    if g0 % p == 0:
        raise HypothesisViolated("the centre of nu must not be a Weierstrass point")
    eps = 1 if pow(g0, (p - 1) // 2, p) == 1 else -1
    lam = eps * p
    g1 = red.g[1:]  # (g - g(0))/x
    g0inv = pow(g0, -1, mod)
    scale = p ** S
    forms: dict = {}
    nu_coef = 0
    for k in range(K + 1):
        coef = _frac_mod(p * _binom_half(k), mod) * scale % mod
        m = (p - 1) // 2 + p * k
        Ek = Epows[k]
        e0 = Ek[0] % mod
        rest = Ek[1:] or [0]  # (E^k - E^k(0))/x
        forms[m] = _add(forms.get(m, [0]), _scale(rest, coef, mod), mod)
        # e0 / (x g^m) = e0 (g0^-m / x - sum_j g0^-(m-j+1) g1 / g^j)
        ce = coef * e0 % mod
        nu_coef = (nu_coef + ce * pow(g0inv, m, mod)) % mod
        for j in range(1, m + 1):
            t = ce * pow(g0inv, m - j + 1, mod) % mod
            forms[j] = _add(forms.get(j, [0]), _scale(g1, mod - t, mod), mod)
    c, fpoles, fpoly = red.descend(forms)
    lam_err = _unscale((nu_coef - lam * scale) % mod, p, S, mod)
    return {
        "lam": lam,
        "A": [_unscale(x, p, S, mod) for x in c],
        "h": (fpoles, fpoly),
        "residual_nu": lam_err,
    }
