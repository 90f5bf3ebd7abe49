"""HTTP service wrapping the integration library.

``run_problem`` is the whole pipeline and is also what the CLI calls through
an in-process client.  Library errors become JSON bodies carrying the exit
code the CLI should return.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import ValidationError

from . import __version__
from .bc_abelian import (Curve, abelian_integral, bc_integral, chabauty_annihilator, homology_difference,
                         lift_point, periods, set_reference_points, setup_curve)
from .coleman import CurvePoint
from .errors import ArtifactError, PointNotOnCurve, PrecisionExhausted, SchemaError
from .padic import FieldDescriptor, PadicElement, lift
from .schemas import TASKS, ErrorResult, ProblemFile, TaskResult

log = logging.getLogger("artifact.service")

HTTP_STATUS = {2: 422, 3: 409, 4: 507}
RETRIES = 3


# --- input conversion ---------------------------------------------------------------


def field_of(problem: ProblemFile, N: int) -> FieldDescriptor:
    fs = problem.field
    modulus = tuple(fs.modulus) if fs.modulus else ()
    return FieldDescriptor(fs.p, fs.e, fs.f, modulus, N, fs.uniformizer)


def element(F: FieldDescriptor, x: Any) -> PadicElement:
    return lift(F, x, F.N)


def point(curve: Curve, spec) -> CurvePoint:
    """Curve point from a PointSpec; a given y only selects the branch, y is re-lifted from f(x)."""
    F = curve.F
    x = element(F, spec.x)
    fx = curve.f_at(x)
    if fx.is_zero() or fx.valuation() >= fx.prec:
        return CurvePoint(x, F.zero(F.N))
    if spec.y is None:
        return lift_point(curve, x, spec.sign_hint)
    y_given = element(F, spec.y)
    P = lift_point(curve, x)
    tol = min(y_given.prec, P.y.prec)
    for cand in (P, CurvePoint(x, -P.y)):
        d = cand.y - y_given
        if d.is_zero() or d.valuation() >= tol:
            return cand
    raise PointNotOnCurve("given y is not a square root of f(x)")


def forms_of(problem: ProblemFile) -> list[list[Fraction]]:
    out = []
    for form in problem.forms:
        try:
            out.append([Fraction(str(c)) for c in form])
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"form coefficients must be rational: {form}") from exc
    return out


def base_p_json(x: PadicElement) -> dict | None:
    """Digits in powers of p for a value lying in Q_p."""
    F = x.F
    if F.e == 1 and F.f == 1:
        return None
    if not x.in_base_field():
        return None
    prec = x.prec // F.e
    if x.is_zero() or x.valuation() >= x.prec:
        return {"digits": [], "val": prec, "prec": prec, "uniformizer": str(F.p)}
    r = x.to_fraction()
    v = 0
    while r.numerator % F.p == 0:
        r /= F.p
        v += 1
    while r.denominator % F.p == 0:
        r *= F.p
        v -= 1
    n = max(prec - v, 0)
    m = F.p**n
    u = r.numerator * pow(r.denominator, -1, m) % m if n else 0
    digits = []
    for _ in range(n):
        u, d = divmod(u, F.p)
        digits.append(d)
    return {"digits": digits, "val": v, "prec": prec, "uniformizer": str(F.p)}


def integral_json(val: PadicElement, kind: str, form, path, N: int) -> dict:
    v = val.add_bigoh(N)
    out = {"kind": kind, "form": [str(c) for c in form], "value": v.to_json(), "precision": v.prec,
           "path": [[e, d] for e, d in path]}
    bp = base_p_json(v)
    if bp is not None:
        out["value_base_p"] = bp
    return out


# --- tasks ----------------------------------------------------------------------------


def _setup(problem: ProblemFile, N: int, work: int):
    F = field_of(problem, work)
    roots = [element(F, r) for r in problem.curve.roots]
    curve = setup_curve(F, roots, element(F, problem.curve.lead), work, problem.curve.odd_degree)
    return F, curve


def _refs(problem: ProblemFile, curve: Curve):
    spec = problem.reference_points
    F = curve.F
    verts = {k: (element(F, p.x), None if p.y is None else point(curve, p).y) for k, p in spec.vertices.items()}
    edges = {k: (element(F, p.x), None if p.y is None else point(curve, p).y) for k, p in spec.edges.items()}
    for name in verts:
        if name not in curve.graph.vertices:
            raise SchemaError(f"unknown vertex {name}")
    for name in edges:
        if name not in curve.graph.edges:
            raise SchemaError(f"unknown edge {name}")
    return set_reference_points(curve, verts, edges)


def _check(values: list[PadicElement], N: int) -> None:
    worst = min((v.prec for v in values), default=N)
    if worst < N:
        raise PrecisionExhausted(f"certified only {worst} of {N} digits")


def _cover(problem, N, work):
    F, curve = _setup(problem, N, work)
    return {"tree": curve.tree.to_json()}, {"T.dot": curve.tree.to_dot()}, []


def _skeleton(problem, N, work):
    F, curve = _setup(problem, N, work)
    data = {"tree": curve.tree.to_json(), "graph": curve.graph.to_json(), "homology": curve.basis.to_json(),
            "genus": curve.genus}
    return data, {"T.dot": curve.tree.to_dot(), "Gamma.dot": curve.graph.to_dot()}, []


def _periods(problem, N, work):
    F, curve = _setup(problem, N, work)
    refs = _refs(problem, curve)
    out, vals = [], []
    for form in forms_of(problem):
        pers = periods(curve, refs, form)
        vals += [p.value for p in pers]
        out.append([integral_json(p.value, "period", form, p.path, N) for p in pers])
    return {"periods": out, "cycles": curve.basis.to_json()}, {}, vals


def _bc(problem, N, work):
    F, curve = _setup(problem, N, work)
    refs = _refs(problem, curve)
    S, R = point(curve, problem.start), point(curve, problem.end)
    path = problem.path or []
    out, vals = [], []
    for form in forms_of(problem):
        bc = bc_integral(curve, refs, form, S, R, path) if path else bc_integral(
            curve, refs, form, S, R, [], start_vertex=curve.vertex_of(S))
        vals.append(bc.value)
        item = integral_json(bc.value, "BC", form, path, N)
        item["legs"] = [{"chart": n, "value": v.add_bigoh(N).to_json()} for n, v in bc.parts]
        out.append(item)
    return {"integrals": out}, {}, vals


def _abelian(problem, N, work):
    F, curve = _setup(problem, N, work)
    refs = _refs(problem, curve)
    S, R = point(curve, problem.start), point(curve, problem.end)
    out, vals = [], []
    for form in forms_of(problem):
        pers = periods(curve, refs, form)
        ab, bc, _, trop = abelian_integral(curve, refs, form, S, R, problem.path, pers)
        vals += [ab.value, bc.value] + [p.value for p in pers]
        item = {
            "abelian": integral_json(ab.value, "abelian", form, ab.path, N),
            "bc": integral_json(bc.value, "BC", form, bc.path, N),
            "periods": [integral_json(p.value, "period", form, p.path, N) for p in pers],
            "tropical": [str(t) for t in trop],
        }
        if problem.alternate_path is not None:
            ab2, bc2, _, _ = abelian_integral(curve, refs, form, S, R, problem.alternate_path, pers)
            vals.append(ab2.value)
            item["alternate"] = {
                "abelian": integral_json(ab2.value, "abelian", form, ab2.path, N),
                "bc": integral_json(bc2.value, "BC", form, bc2.path, N),
                "homology_difference": [str(c) for c in homology_difference(curve, ab.path, ab2.path)],
            }
        out.append(item)
    return {"integrals": out}, {}, vals


def _chabauty(problem, N, work):
    F, curve = _setup(problem, N, work)
    S, R = point(curve, problem.start), point(curve, problem.end)
    res = chabauty_annihilator(curve, S, R)
    a, b = res["a"], res["b"]
    data = {
        "chart": res["chart"],
        "a": integral_json(a, "BC", [1], [], N),
        "b": integral_json(b, "BC", [0, 1], [], N),
        "annihilator": [b.add_bigoh(N).to_json(), (-a).add_bigoh(N).to_json()],
    }
    return data, {}, [a, b]


HANDLERS = {
    "cover": _cover,
    "skeleton": _skeleton,
    "periods": _periods,
    "bc-integrate": _bc,
    "abelian-integrate": _abelian,
    "chabauty": _chabauty,
}


def run_problem(problem: ProblemFile, task: str | None = None, precision: int | None = None) -> dict:
    """Run one task, raising working precision until the target is certified."""
    task = task or problem.task
    if task not in TASKS:
        raise SchemaError(f"unknown task {task!r}")
    if problem.task is not None and task != problem.task:
        problem = problem.model_copy(update={"task": task})
        ProblemFile.model_validate(problem.model_dump())
    N = precision or problem.precision
    work = N + 8 + N // 4
    last: Exception | None = None
    for attempt in range(RETRIES):
        try:
            data, dot, vals = HANDLERS[task](problem, N, work)
            _check(vals, N)
            fd = field_of(problem, N).describe()
            return TaskResult(task=task, field=fd, precision=N, data=data, dot=dot).model_dump()
        except PrecisionExhausted as exc:
            last = exc
            log.info("attempt %d at %d digits: %s", attempt, work, exc)
            work = work + work // 2
    raise PrecisionExhausted(f"target precision {N} not reached: {last}")


# --- FastAPI --------------------------------------------------------------------------

app = FastAPI(title="artifact", version=__version__)


@app.exception_handler(ArtifactError)
async def _artifact_error(request: Request, exc: ArtifactError):
    body = ErrorResult(error=exc.kind, message=str(exc), exit_code=exc.exit_code)
    return JSONResponse(status_code=HTTP_STATUS.get(exc.exit_code, 500), content=body.model_dump())


@app.exception_handler(RequestValidationError)
async def _validation_error(request: Request, exc: RequestValidationError):
    body = ErrorResult(error="schema", message=str(exc.errors()[:3]), exit_code=2)
    return JSONResponse(status_code=422, content=body.model_dump())


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/tasks/{task}")
def post_task(task: str, problem: ProblemFile, precision: int | None = None):
    if task not in TASKS:
        raise SchemaError(f"unknown task {task!r}")
    try:
        return run_problem(problem, task, precision)
    except ValidationError as exc:
        raise SchemaError(str(exc)) from exc
