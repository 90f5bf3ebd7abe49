"""Random generators shared by the property tests and the acceptance run."""

from __future__ import annotations

import random
from fractions import Fraction

from artifact import _poly
from artifact.newton_cover import build_covering, build_dual_graph
from artifact.padic import FieldDescriptor
from artifact.reduction import Center, MeromorphicForm

HEADROOM = 30


def random_chart(rng: random.Random, N: int = 20):
    """A good-reduction chart y^2 = g(x) with a few Weierstrass and
    non-Weierstrass centres, plus the field it lives over."""
    p = rng.choice([5, 7, 11, 13])
    e = rng.choice([1, 1, 2])
    F = FieldDescriptor(p, e, 1, N=N + HEADROOM)
    d = rng.choice([3, 4, 5]) if p > 5 else rng.choice([3, 4])
    residues = rng.sample(range(p), d + 1)
    roots = [r + p * rng.randrange(p) for r in residues[:d]]
    g = _poly.from_roots(F, [F(r) for r in roots])
    centers = [Center(F(r), True) for r in roots[: rng.randint(1, min(2, d))]]
    free = residues[d]
    centers.append(Center(F(free + p * rng.randrange(p)), False))
    return F, g, centers


def random_form(rng: random.Random, F, centers, d: int, n_terms: int) -> MeromorphicForm:
    form = MeromorphicForm([{} for _ in centers], {})
    for _ in range(n_terms):
        c = F(Fraction(rng.randint(-50, 50) or 1, rng.choice([1, 1, 2, 3])))
        where = rng.randrange(len(centers) + 1)
        if where == len(centers):
            n = rng.randint(0, d + 4)
            form.polynomial[n] = form.polynomial.get(n, F.zero()) + c
        else:
            m = rng.randint(1, 6)
            pp = form.principal[where]
            pp[m] = pp.get(m, F.zero()) + c
    return form


def random_roots(rng: random.Random, p: int = 5, depth: int = 3):
    """Distinct integers whose p-adic clusters give a random covering tree."""
    n = rng.randint(3, 8)
    seen: set = set()
    while len(seen) < n:
        x = sum(rng.randrange(p) * p**k for k in range(depth)) * rng.choice([1, 1, p])
        seen.add(x)
    return sorted(seen)


def random_dual_graph(rng: random.Random, p: int = 5):
    F = FieldDescriptor(p, 2, 1, N=30)
    roots = random_roots(rng, p)
    odd = rng.choice([None, None, False]) if len(roots) % 2 == 0 else None
    tree = build_covering(F, [F(r) for r in roots], odd_degree=odd)
    return build_dual_graph(tree)


def point_count(g: list[int], p: int) -> int:
    """Points of y^2 = g(x) over F_p on the smooth model, one at infinity (odd degree)."""
    total = 1
    for x in range(p):
        v = sum(c * pow(x, i, p) for i, c in enumerate(g)) % p
        total += 1 if v == 0 else (2 if pow(v, (p - 1) // 2, p) == 1 else 0)
    return total


def squarefree_mod_p(g: list[int], p: int) -> bool:
    a = [c % p for c in g]
    da = [(i * c) % p for i, c in enumerate(a)][1:]
    return len(_gcd_mod_p(a, da, p)) == 1


def _gcd_mod_p(a, b, p):
    def trim(x):
        while x and x[-1] % p == 0:
            x = x[:-1]
        return x

    a, b = trim(list(a)), trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b) and a:
            c = a[-1] * inv % p
            s = len(a) - len(b)
            a = trim([(x - c * (b[i - s] if 0 <= i - s < len(b) else 0)) % p for i, x in enumerate(a)])
        a, b = b, a
    return a


def random_odd_model(rng: random.Random):
    """Monic odd-degree g over Z with squarefree reduction at a small prime."""
    while True:
        p = rng.choice([5, 7, 11, 13])
        d = rng.choice([3, 5])
        g = [rng.randrange(-p, p) for _ in range(d)] + [1]
        if squarefree_mod_p(g, p):
            return p, g


# --- example curves ---------------------------------------------------------------

from functools import lru_cache  # noqa: E402

from artifact.bc_abelian import lift_point, set_reference_points, setup_curve  # noqa: E402
from artifact.coleman import CurvePoint  # noqa: E402


def series_in(F, terms: dict):
    """Element sum c * pi^k from {k: c}."""
    n = max(terms) + 1
    return F([terms.get(k, 0) for k in range(n)])


def agrees(x, terms: dict, n: int) -> bool:
    """x equals the given expansion modulo pi^n, and x is known that far."""
    if x.prec < n:
        return False
    d = x - series_in(x.F, terms) if terms else x
    return d.is_zero() or d.valuation() >= n


@lru_cache(maxsize=None)
def genus1(N: int = 24):
    F = FieldDescriptor(17, 2, 1, N=N, name="a")
    a = F.uniformizer()
    C = setup_curve(F, [6, 5, -11])
    refs = set_reference_points(C, {"U1": F(1), "U2": F(-28)}, {"U1-U2+": a + 6, "U1-U2-": a + 6})
    S = CurvePoint(F(7), F(6))
    R = CurvePoint(F(23), F(102))
    return C, refs, S, R


@lru_cache(maxsize=None)
def genus2(N: int = 24):
    F = FieldDescriptor(7, 2, 1, N=N, name="a")
    a = F.uniformizer()
    C = setup_curve(F, [0, 1, 2, 3, 7])
    refs = set_reference_points(C, {"U1": F(-1), "U2": F(14)}, {"U1-U2+": a, "U1-U2-": a})
    return C, refs, CurvePoint(F(1), F(0)), CurvePoint(F(0), F(0))


@lru_cache(maxsize=None)
def genus3(N: int = 40):
    F = FieldDescriptor(13, 4, 1, N=N, name="a")
    a2 = F.uniformizer() ** 2
    C = setup_curve(F, [0, 13, 169, 1, 14, 27, 4])
    refs = set_reference_points(
        C,
        {"U1": F(2), "U3": F(Fraction(20, 7)), "U2": F(Fraction(-13, 12)), "U4": F(Fraction(169, 14))},
        {"U1-U3": a2 + 1, "U1-U2": a2, "U2-U4+": 13 * a2, "U2-U4-": 13 * a2},
    )
    S = lift_point(C, F(7))
    R = lift_point(C, F(13**3))
    return C, refs, S, R


@lru_cache(maxsize=None)
def chabauty_curve(N: int = 30):
    F = FieldDescriptor(5, 2, 2, (-2, 0, 1), N=N, name="pi")
    pi, u = F.uniformizer(), F.unram_generator()
    h = F(Fraction(1, 2))
    roots = [u, -u, h + pi * h, h - pi * h, -h + pi * h, -h - pi * h]
    C = setup_curve(F, roots, odd_degree=False)
    return C, CurvePoint(F(1), F(1)), CurvePoint(F(1), F(-1))
