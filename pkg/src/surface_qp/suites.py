"""Named verification suites shared by the command line tool and the test
battery.  Each suite returns a list of fixture-result dicts (see io.fixture_
result); a suite passes when every fixture does.

The mutate knob exercises sensitivity: it perturbs the structure being
verified (a bivector coefficient, or the overall bracket orientation) and is
expected to make the suite fail.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import cross_section as cx
from .diagrams import realize_pair
from .goldman import GoldmanAlgebra, NormalForm, PathEntrySymbol, bracket_symbolic
from .io import fixture_result, fmt_float
from .lie import AlgebraContext, entry_observable, trace_observable
from .quasipoisson import (WordFunction, bracket_combinatorial, bracket_numeric,
                           build_bivector, schouten_residual, verify_moment)
from .repspace import random_point
from .surfaces import SurfaceSpec, polygon_model
from .words import Word

SUITES = ("qp-identity", "moment", "main-theorem", "splitting", "goldman",
          "cross-section")

# word pairs of length <= 3 per fixture surface, composable on the polygon
WORD_PAIRS: Dict[Tuple[int, int], List[Tuple[str, str]]] = {
    (0, 2): [("A2", "B2"), ("A2 B2", "B2 B2"), ("A2 B2 A2'", "A2 B2")],
    (1, 1): [("C1", "D1"), ("C1 D1", "D1"), ("C1 D1 C1'", "D1")],
    (0, 3): [("A2", "A3"), ("A2 B2", "A3"), ("A2 B2 A2'", "A3 B3 A3'")],
    (1, 2): [("C1", "D1"), ("A2", "C1"), ("A2 B2 A2'", "C1 D1")],
}

FIXTURE_SURFACES = [SurfaceSpec(0, 2), SurfaceSpec(1, 1),
                    SurfaceSpec(0, 3), SurfaceSpec(1, 2)]


def _word(s: str, spec: SurfaceSpec) -> Word:
    return Word.from_string(s, spec.genus, spec.boundary_count)


def _pool_map(fn, items):
    workers = int(os.environ.get("SURFACE_QP_THREADS", "0") or 0)
    if workers <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def suite_qp_identity(n: int = 2, tol: float = 1e-9, seeds=range(5),
                      mutate: float = 0.0) -> list:
    ctx = AlgebraContext("gl", n)
    out = []
    for spec in (SurfaceSpec(0, 2), SurfaceSpec(1, 1)):
        h = build_bivector(spec, ctx)

        def one(seed):
            m = random_point(ctx, spec, seed)
            r = schouten_residual(h, m, mutate=mutate)["residual"]
            return fixture_result("qp-identity %s seed=%d" % (spec, seed),
                                  r, 0.0, tol)
        out += _pool_map(one, list(seeds))
        # sensitivity: a 1% coefficient mutation must break the identity
        m = random_point(ctx, spec, 0)
        bad = schouten_residual(h, m, mutate=0.01)["residual"]
        out.append({"fixture": "qp-identity mutation %s" % spec,
                    "lhs": fmt_float(bad), "rhs": "0", "residual": fmt_float(bad),
                    "tolerance": fmt_float(1e-3), "pass": bool(bad > 1e-3)})
    return out


def suite_moment(n: int = 2, tol: float = 1e-6, seeds=range(10),
                 mutate: float = 0.0) -> list:
    ctx = AlgebraContext("gl", n)
    out = []
    for spec in (SurfaceSpec(0, 2), SurfaceSpec(1, 1), SurfaceSpec(1, 2)):
        h = build_bivector(spec, ctx)
        if mutate:
            h.terms[0] = type(h.terms[0])(h.terms[0].coeff * (1 + mutate),
                                          h.terms[0].v, h.terms[0].w)
        wa, _ = WORD_PAIRS[(spec.genus, spec.boundary_count)][-1]
        f = WordFunction(trace_observable(ctx), _word(wa, spec))

        def one(seed):
            m = random_point(ctx, spec, seed)
            rows = []
            for p in range(spec.boundary_count):
                r = verify_moment(h, p, f, m)["residual"]
                rows.append(fixture_result(
                    "moment %s mu_%d seed=%d" % (spec, p + 1, seed), r, 0.0, tol))
            return rows
        for rows in _pool_map(one, list(seeds)):
            out += rows
    return out


def _observable_pairs(ctx: AlgebraContext):
    return [("entry", entry_observable(ctx, 0, 1, "re"),
             entry_observable(ctx, 1, 0, "re")),
            ("trace", trace_observable(ctx), trace_observable(ctx))]


def suite_main_theorem(n: int = 2, tol: float = 1e-8, seeds=range(20),
                       mutate: float = 0.0) -> list:
    ctx = AlgebraContext("gl", n)
    out = []
    for spec in FIXTURE_SURFACES:
        pm = polygon_model(spec)
        h = build_bivector(spec, ctx)
        for wa_s, wb_s in WORD_PAIRS[(spec.genus, spec.boundary_count)]:
            wa, wb = _word(wa_s, spec), _word(wb_s, spec)
            _, _, data = realize_pair(wa, wb, pm, 1)
            for label, oa, ob in _observable_pairs(ctx):
                f, g = WordFunction(oa, wa), WordFunction(ob, wb)

                def one(seed):
                    m = random_point(ctx, spec, seed)
                    comb = bracket_combinatorial(oa, wa, ob, wb, data, m)
                    if mutate:
                        comb = -comb  # flipped orientation convention
                    num = bracket_numeric(h, f, g, m)
                    return fixture_result(
                        "main-theorem %s %s|%s %s seed=%d" %
                        (spec, wa_s, wb_s, label, seed), comb, num, tol)
                out += _pool_map(one, list(seeds))
    return out


def suite_splitting(n: int = 2, tol: float = 1e-9, seeds=range(10),
                    mutate: float = 0.0) -> list:
    ctx = AlgebraContext("gl", n)
    out = []
    for spec in (SurfaceSpec(0, 3), SurfaceSpec(1, 2)):
        hl = build_bivector(spec, ctx, order="left")
        hr = build_bivector(spec, ctx, order="right")
        if mutate:
            hl.terms[0] = type(hl.terms[0])(hl.terms[0].coeff * (1 + mutate),
                                            hl.terms[0].v, hl.terms[0].w)
        wa_s, wb_s = WORD_PAIRS[(spec.genus, spec.boundary_count)][-1]
        wa, wb = _word(wa_s, spec), _word(wb_s, spec)
        f = WordFunction(trace_observable(ctx), wa)
        g = WordFunction(entry_observable(ctx, 0, 0, "re"), wb)

        def one(seed):
            m = random_point(ctx, spec, seed)
            return fixture_result(
                "splitting %s %s|%s seed=%d" % (spec, wa_s, wb_s, seed),
                bracket_numeric(hl, f, g, m), bracket_numeric(hr, f, g, m), tol)
        out += _pool_map(one, list(seeds))
    return out


def suite_goldman(n: int = 2, tol: float = 1e-8, seeds=range(3),
                  mutate: float = 0.0) -> list:
    ctx = AlgebraContext("gl", n)
    out = []
    for spec in FIXTURE_SURFACES:
        pm = polygon_model(spec)
        alg = GoldmanAlgebra(pm, n)
        wa_s, wb_s = WORD_PAIRS[(spec.genus, spec.boundary_count)][0]
        wa, wb = _word(wa_s, spec), _word(wb_s, spec)
        # defining relation sum_j alpha_ij beta_jk = (alpha beta)_ik, exact
        if wa.target == wb.source:
            rel_ok = True
            prod = wa.concat(wb)
            for i in range(1, n + 1):
                for k in range(1, n + 1):
                    s = alg.normal_form(sum(
                        alg.symbol(wa, i, j) * alg.symbol(wb, j, k)
                        for j in range(1, n + 1)))
                    rel_ok = rel_ok and (s - alg.normal_form(
                        alg.symbol(prod, i, k))).is_zero()
            out.append({"fixture": "goldman relation %s %s*%s" % (spec, wa_s, wb_s),
                        "residual": "0" if rel_ok else "nonzero",
                        "tolerance": "0", "pass": bool(rel_ok)})
        a = PathEntrySymbol(wa, 1, 1)
        b = PathEntrySymbol(wb, 1, 2)
        data = alg.pair_data(wa, wb)
        br = bracket_symbolic(a, b, data, n)
        if mutate:
            br = br.scale(-1)
        # antisymmetry, exact
        data_ba = alg.pair_data(wb, wa)
        br_ba = bracket_symbolic(b, a, data_ba, n)
        anti = (br + br_ba).is_zero()
        out.append({"fixture": "goldman antisymmetry %s" % spec,
                    "residual": "0" if anti else "nonzero",
                    "tolerance": "0", "pass": bool(anti)})
        # homotopy invariance across realizations, exact
        stable = True
        for var in ((1, 0), (0, 1), (1, 1)):
            _, _, d2 = realize_pair(wa, wb, pm, 5, var)
            stable = stable and (bracket_symbolic(a, b, d2, n) == br)
        out.append({"fixture": "goldman homotopy invariance %s" % spec,
                    "residual": "0" if stable else "nonzero",
                    "tolerance": "0", "pass": bool(stable)})
        # numeric evaluation agreement
        h = build_bivector(spec, ctx)
        f = WordFunction(entry_observable(ctx, 0, 0, "re"), wa)
        g = WordFunction(entry_observable(ctx, 0, 1, "re"), wb)

        def one(seed):
            m = random_point(ctx, spec, seed)
            return fixture_result(
                "goldman evaluate %s %s_11|%s_12 seed=%d" % (spec, wa_s, wb_s, seed),
                br.evaluate(m), bracket_numeric(h, f, g, m), tol,
                {"normal_form": br.canonical_str()})
        out += _pool_map(one, list(seeds))
    return out


def suite_cross_section(tol: float = 1e-7, seeds=range(10),
                        mutate: float = 0.0) -> list:
    out = []
    rng = np.random.default_rng(0)
    for n in (2, 3):
        ctx = AlgebraContext("u", n)
        worst = 0.0
        for _ in range(50):
            phases = rng.uniform(-np.pi, np.pi, n)
            if min(abs(np.angle(np.exp(1j * (phases[a] - phases[b]))))
                   for a in range(n) for b in range(a + 1, n)) <= cx.TOL_REG:
                continue
            hmat = np.diag(np.exp(1j * phases))
            t = cx.theta_matrix(ctx, hmat)
            tt = cx.theta_matrix(ctx, hmat, transpose=True)
            worst = max(worst, float(np.max(np.abs(t + tt - 2 * np.eye(len(t))))))
        out.append(fixture_result("cross-section theta identity U(%d)" % n,
                                  worst, 0.0, 1e-12))
    ctx = AlgebraContext("u", 2)
    for spec in (SurfaceSpec(0, 2), SurfaceSpec(1, 1)):
        pm = polygon_model(spec)
        h = build_bivector(spec, ctx)
        wa_s, wb_s = WORD_PAIRS[(spec.genus, spec.boundary_count)][1]
        wa, wb = _word(wa_s, spec), _word(wb_s, spec)
        _, _, data = realize_pair(wa, wb, pm, 1)
        oa = trace_observable(ctx)
        ob = entry_observable(ctx, 0, 1, "re")
        f, g = WordFunction(oa, wa), WordFunction(ob, wb)

        def one(seed):
            m = random_point(ctx, spec, seed)
            cs = cx.project_to_cross_section(m)
            lhs = cx.bracket_cross(oa, wa, ob, wb, data, cs)
            if mutate:
                lhs = -lhs
            rhs = cx.bracket_cross_numeric(h, f, g, cs)
            return fixture_result(
                "cross-section routes %s %s|%s seed=%d" % (spec, wa_s, wb_s, seed),
                lhs, rhs, tol)
        out += _pool_map(one, list(seeds))
    return out


def run_suite(name: str, n: int = 2, tol: Optional[float] = None,
              mutate: float = 0.0) -> list:
    table = {
        "qp-identity": lambda: suite_qp_identity(n, tol or 1e-9, mutate=mutate),
        "moment": lambda: suite_moment(n, tol or 1e-6, mutate=mutate),
        "main-theorem": lambda: suite_main_theorem(n, tol or 1e-8, mutate=mutate),
        "splitting": lambda: suite_splitting(n, tol or 1e-9, mutate=mutate),
        "goldman": lambda: suite_goldman(n, tol or 1e-8, mutate=mutate),
        "cross-section": lambda: suite_cross_section(tol or 1e-7, mutate=mutate),
    }
    if name not in table:
        raise ValueError("unknown suite %r (have: %s)" % (name, ", ".join(SUITES)))
    return table[name]()
