"""Quasi-Poisson structure on M_G(Sigma): bivectors by iterated fusion,
numeric brackets, the defining identities, and the combinatorial bracket
formula of the main theorem.

The bivector lives on the coordinates of the canonical split pieces: an
annulus piece i carries double coordinates (a_i, b_i) with u_i = a_i and
v_i = b_i a_i; a torus piece j carries (c_j, d_j) = (Hol_gamma, Hol_delta).
Fields are stored as basic descriptors (slot, side, algebra element) where
side "L" is the left-invariant field g x and "R" the right-invariant x g.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .diagrams import IntersectionData
from .lie import (AlgebraContext, CartanTrivector, DualBasisPair, Observable,
                  cartan_trivector, dual_basis, wedge3_tensor)
from .repspace import RepPoint, holonomy
from .surfaces import SurfaceSpec, split_canonical
from .words import Word, free_reduce, invert

# Overall sign relating the polygon orientation to the bracket; calibrated
# against the numeric bivector on the fixture surfaces.
ORIENTATION_SIGN = 1.0

Slot = Tuple[str, int]          # ("a", i) | ("b", i) | ("c", j) | ("d", j)
ActionEntry = Tuple[Slot, str, int]   # (slot, field side, coefficient)


@dataclass(frozen=True)
class Field:
    slot: Slot
    side: str  # "L" | "R"
    mat: np.ndarray


@dataclass(frozen=True)
class Term:
    coeff: float
    v: Field
    w: Field


@dataclass
class HamiltonianQP:
    ctx: AlgebraContext
    pair: DualBasisPair
    slots: List[Slot]
    terms: List[Term]
    actions: List[List[ActionEntry]]        # natural (sign-free) action fields
    moments: Optional[List[tuple]]          # slot-letter words, one per action


def _letter_slots(sym: str) -> list:
    kind, idx = sym[0], int(sym[1:])
    if kind == "A":
        return [(("a", idx), 1)]
    if kind == "B":
        if idx == 1:
            raise ValueError("B1 must be expanded before slot conversion")
        return [(("b", idx), 1), (("a", idx), 1)]
    if kind == "C":
        return [(("c", idx), 1)]
    if kind == "D":
        return [(("d", idx), 1)]
    raise ValueError("unknown generator %r" % sym)


def slot_word(w: Word) -> tuple:
    out = []
    for sym, sgn in w.letters:
        ls = _letter_slots(sym)
        out += ls if sgn == 1 else list(invert(ls))
    return free_reduce(out)


def slot_values(m: RepPoint) -> Dict[Slot, np.ndarray]:
    vals: Dict[Slot, np.ndarray] = {}
    b, g = m.spec.boundary_count, m.spec.genus
    for i in range(2, b + 1):
        u, v = m.mat("A%d" % i), m.mat("B%d" % i)
        vals[("a", i)] = u
        vals[("b", i)] = v @ np.linalg.inv(u)
    for j in range(1, g + 1):
        vals[("c", j)] = m.mat("C%d" % j)
        vals[("d", j)] = m.mat("D%d" % j)
    return vals


def eval_slot_word(letters: Sequence, vals: Dict[Slot, np.ndarray], n: int, dtype):
    out = np.eye(n, dtype=dtype)
    for s, sgn in letters:
        out = out @ (vals[s] if sgn == 1 else np.linalg.inv(vals[s]))
    return out


# --- constructors ---------------------------------------------------------

def trivial_pair(ctx: AlgebraContext, slot: Slot = ("a", 0)) -> HamiltonianQP:
    """(G, P=0) with the left and right multiplication actions; admits no
    moment map."""
    return HamiltonianQP(ctx, dual_basis(ctx), [slot], [],
                         [[(slot, "R", 1)], [(slot, "L", -1)]], None)


def double(ctx: AlgebraContext, sa: Slot = ("a", 2), sb: Slot = ("b", 2)) -> HamiltonianQP:
    """The double D(G) on slots (a, b) with moment (ab, a^-1 b^-1)."""
    pair = dual_basis(ctx)
    terms = []
    for ek, fk in zip(pair.e, pair.f):
        terms.append(Term(0.5, Field(sa, "L", ek), Field(sb, "R", fk)))
        terms.append(Term(0.5, Field(sa, "R", ek), Field(sb, "L", fk)))
    act1 = [(sa, "R", 1), (sb, "L", -1)]   # a -> g a,  b -> b g^-1
    act2 = [(sa, "L", -1), (sb, "R", 1)]   # a -> a g^-1,  b -> g b
    mom1 = ((sa, 1), (sb, 1))
    mom2 = ((sa, -1), (sb, -1))
    return HamiltonianQP(ctx, pair, [sa, sb], terms, [act1, act2], [mom1, mom2])


def fuse(h: HamiltonianQP, p: int = 0, q: int = 1) -> HamiltonianQP:
    """Fuse action slots p and q: P' = P - rho_psi, moments multiply."""
    if p == q or not (0 <= p < len(h.actions)) or not (0 <= q < len(h.actions)):
        raise ValueError("invalid action slots")
    terms = list(h.terms)
    for ek, fk in zip(h.pair.e, h.pair.f):
        for (s1, side1, c1) in h.actions[p]:
            for (s2, side2, c2) in h.actions[q]:
                # rho_psi = 1/2 sum rho_e^p ^ rho_f^q; the two action minus
                # signs cancel, leaving the natural action fields
                terms.append(Term(-0.5 * c1 * c2,
                                  Field(s1, side1, ek), Field(s2, side2, fk)))
    fused = h.actions[p] + h.actions[q]
    rest = [a for k, a in enumerate(h.actions) if k not in (p, q)]
    moments = None
    if h.moments is not None:
        mom = tuple(free_reduce(tuple(h.moments[p]) + tuple(h.moments[q])))
        moments = [mom] + [h.moments[k] for k in range(len(h.moments)) if k not in (p, q)]
    return HamiltonianQP(h.ctx, h.pair, list(h.slots), terms,
                         [fused] + rest, moments)


def fused_double(ctx: AlgebraContext, sa: Slot = ("c", 1), sb: Slot = ("d", 1)) -> HamiltonianQP:
    return fuse(double(ctx, sa, sb), 0, 1)


def conjugation_tensor(ctx: AlgebraContext, slot: Slot = ("a", 0)) -> HamiltonianQP:
    """Fusing the trivial pair: P_G = 1/2 sum e^R ^ e^L, moment the identity."""
    h = fuse(trivial_pair(ctx, slot), 0, 1)
    return replace(h, moments=[((slot, 1),)])


def product(h1: HamiltonianQP, h2: HamiltonianQP) -> HamiltonianQP:
    if set(h1.slots) & set(h2.slots):
        raise ValueError("slot clash in product")
    moments = None
    if h1.moments is not None and h2.moments is not None:
        moments = list(h1.moments) + list(h2.moments)
    return HamiltonianQP(h1.ctx, h1.pair, h1.slots + h2.slots,
                         h1.terms + h2.terms, h1.actions + h2.actions, moments)


def fusion_product(h1: HamiltonianQP, h2: HamiltonianQP) -> HamiltonianQP:
    """h1 (x) h2 with the first action of each factor fused."""
    pr = product(h1, h2)
    return fuse(pr, 0, len(h1.actions))


def piece_structure(ctx: AlgebraContext, kind: str, index: int) -> HamiltonianQP:
    if kind == "annulus":
        return double(ctx, ("a", index), ("b", index))
    if kind == "torus":
        return fused_double(ctx, ("c", index), ("d", index))
    raise ValueError(kind)


def build_bivector(spec: SurfaceSpec, ctx: AlgebraContext,
                   order: str = "left") -> HamiltonianQP:
    """Fusion product of b-1 doubles and g fused doubles.

    order="left" folds ((1 (x) 2) (x) 3); order="right" folds (1 (x) (2 (x) 3));
    the results agree up to the splitting-independence theorem (verified in
    tests, not assumed)."""
    if spec.is_disk:
        return HamiltonianQP(ctx, dual_basis(ctx), [], [], [[]], [()])
    hs = [piece_structure(ctx, p.kind, p.index) for p in split_canonical(spec)]
    if order == "left":
        acc = hs[0]
        for h in hs[1:]:
            acc = fusion_product(acc, h)
    elif order == "right":
        acc = hs[-1]
        for h in reversed(hs[:-1]):
            acc = fusion_product(h, acc)
    else:
        raise ValueError("order must be 'left' or 'right'")
    return acc


# --- functions on M and their derivatives ---------------------------------

@dataclass
class WordFunction:
    """f = Phi(Hol_w), with closed-form derivatives along basic fields."""
    obs: Observable
    word: Word

    def __post_init__(self):
        self.slots = slot_word(self.word)

    def bind(self, m: RepPoint) -> "BoundFunction":
        return BoundFunction(self, slot_values(m), m.ctx)


class BoundFunction:
    def __init__(self, fn: WordFunction, vals: Dict[Slot, np.ndarray],
                 ctx: AlgebraContext):
        self.fn = fn
        self.vals = vals
        self.ctx = ctx
        n, dt = ctx.n, ctx.dtype
        letters = fn.slots
        self.factors = [vals[s] if sgn == 1 else np.linalg.inv(vals[s])
                        for s, sgn in letters]
        self.pre = [np.eye(n, dtype=dt)]
        for f in self.factors:
            self.pre.append(self.pre[-1] @ f)
        self.hol = self.pre[-1]
        self.post = [np.eye(n, dtype=dt)]
        for f in reversed(self.factors):
            self.post.append(f @ self.post[-1])
        self.post.reverse()

    def value(self) -> float:
        return self.fn.obs.value(self.hol)

    def holonomy_tangent(self, field: Field) -> np.ndarray:
        """d(Hol)/dt when the slot value moves along the basic field."""
        x, s, side = field.mat, field.slot, field.side
        out = np.zeros((self.ctx.n, self.ctx.n), dtype=self.ctx.dtype)
        for t, (sym, sgn) in enumerate(self.fn.slots):
            if sym != s:
                continue
            val = self.vals[s]
            if sgn == 1:
                mid = val @ x if side == "L" else x @ val
            else:
                vi = np.linalg.inv(val)
                mid = -x @ vi if side == "L" else -vi @ x
            out = out + self.pre[t] @ mid @ self.post[t + 1]
        return out

    def derivative(self, field: Field) -> float:
        if not any(sym == field.slot for sym, _ in self.fn.slots):
            return 0.0
        t = self.holonomy_tangent(field)
        if not np.any(t):
            return 0.0
        return self.fn.obs.dvalue(self.hol, t)


def bracket_numeric(h: HamiltonianQP, f: WordFunction, g: WordFunction,
                    m: RepPoint) -> float:
    bf, bg = f.bind(m), g.bind(m)
    tot = 0.0
    for t in h.terms:
        fv, fw = bf.derivative(t.v), bf.derivative(t.w)
        gv, gw = bg.derivative(t.v), bg.derivative(t.w)
        tot += t.coeff * (fv * gw - fw * gv)
    return tot


def sharp(h: HamiltonianQP, f: WordFunction, m: RepPoint) -> Dict[Slot, np.ndarray]:
    """P#(df) as a tangent vector, one matrix per coordinate slot."""
    bf = f.bind(m)
    vals = slot_values(m)
    out = {s: np.zeros((h.ctx.n, h.ctx.n), dtype=h.ctx.dtype) for s in h.slots}

    def mat_of(field: Field) -> np.ndarray:
        v = vals[field.slot]
        return v @ field.mat if field.side == "L" else field.mat @ v

    for t in h.terms:
        fv, fw = bf.derivative(t.v), bf.derivative(t.w)
        if fv:
            out[t.w.slot] = out[t.w.slot] + t.coeff * fv * mat_of(t.w)
        if fw:
            out[t.v.slot] = out[t.v.slot] - t.coeff * fw * mat_of(t.v)
    return out


def action_sigma(h: HamiltonianQP, p: int, x: np.ndarray,
                 vals: Dict[Slot, np.ndarray]) -> Dict[Slot, np.ndarray]:
    """Natural infinitesimal action d/dt exp(tx).m of action slot p."""
    out: Dict[Slot, np.ndarray] = {}
    for (s, side, c) in h.actions[p]:
        v = vals[s]
        t = (v @ x if side == "L" else x @ v) * c
        out[s] = out.get(s, 0) + t
    return out


def chi(h: HamiltonianQP, f: WordFunction, p: int, m: RepPoint) -> np.ndarray:
    """chi_f at action slot p: <chi_f, x> = d/dt f(exp(-tx).m)."""
    bf = f.bind(m)
    vals = slot_values(m)
    out = np.zeros((h.ctx.n, h.ctx.n), dtype=h.ctx.dtype)
    for ek, fk in zip(h.pair.e, h.pair.f):
        sig = action_sigma(h, p, ek, vals)
        d = _df_along(bf, sig)
        out = out + (-d) * fk
    return out


def _df_along(bf: BoundFunction, tangents: Dict[Slot, np.ndarray]) -> float:
    """Derivative of the bound function along a per-slot tangent vector."""
    n, dt = bf.ctx.n, bf.ctx.dtype
    out = np.zeros((n, n), dtype=dt)
    for t, (s, sgn) in enumerate(bf.fn.slots):
        if s not in tangents:
            continue
        tan = tangents[s]
        if sgn == 1:
            mid = tan
        else:
            vi = np.linalg.inv(bf.vals[s])
            mid = -vi @ tan @ vi
        out = out + bf.pre[t] @ mid @ bf.post[t + 1]
    if not np.any(out):
        return 0.0
    return bf.fn.obs.dvalue(bf.hol, out)


def moment_value(h: HamiltonianQP, p: int, m: RepPoint) -> np.ndarray:
    vals = slot_values(m)
    return eval_slot_word(h.moments[p], vals, h.ctx.n, h.ctx.dtype)


def verify_moment(h: HamiltonianQP, p: int, f: WordFunction, m: RepPoint,
                  step: float = 1e-5) -> dict:
    """Residual of the moment condition mu*theta(P#df) = -1/2(1+Ad_mu^-1)chi_f
    for the action slot p, finite differences on the left-hand side."""
    vals = slot_values(m)
    x = sharp(h, f, m)
    vplus = {s: vals[s] + step * x[s] for s in vals}
    vminus = {s: vals[s] - step * x[s] for s in vals}
    n, dt = h.ctx.n, h.ctx.dtype
    mu = eval_slot_word(h.moments[p], vals, n, dt)
    dmu = (eval_slot_word(h.moments[p], vplus, n, dt)
           - eval_slot_word(h.moments[p], vminus, n, dt)) / (2 * step)
    lhs = np.linalg.inv(mu) @ dmu
    c = chi(h, f, p, m)
    rhs = -0.5 * (c + np.linalg.inv(mu) @ c @ mu)
    res = float(np.max(np.abs(lhs - rhs)))
    return {"lhs": lhs, "rhs": rhs, "residual": res}


# --- Schouten identity in the GL matrix-entry chart -----------------------

def _chart_index(h: HamiltonianQP):
    idx = {}
    n = h.ctx.n
    k = 0
    for s in h.slots:
        idx[s] = k
        k += n * n
    return idx, k


def _field_vector_and_jac(field: Field, vals, idx, dim, n):
    """Component vector and Jacobian of a basic field in the entry chart."""
    vec = np.zeros(dim)
    jac = np.zeros((dim, dim))
    base = idx[field.slot]
    v = vals[field.slot]
    x = field.mat
    comp = v @ x if field.side == "L" else x @ v
    vec[base:base + n * n] = np.real(comp).reshape(-1)
    for p in range(n):
        for q in range(n):
            a = base + p * n + q
            for r in range(n):
                for t in range(n):
                    d = base + r * n + t
                    if field.side == "L":
                        jac[a, d] = x[t, q].real if p == r else 0.0
                    else:
                        jac[a, d] = x[p, r].real if q == t else 0.0
    return vec, jac


def schouten_residual(h: HamiltonianQP, m: RepPoint,
                      tv: Optional[CartanTrivector] = None,
                      mutate: float = 0.0) -> dict:
    """Componentwise residual of [P,P] = rho_phi in the matrix-entry chart
    (GL contexts only).  mutate scales one wedge coefficient by (1+mutate)
    to exercise the sensitivity of the identity."""
    if h.ctx.kind != "gl":
        raise ValueError("the entry chart requires the GL context")
    if tv is None:
        tv = cartan_trivector(h.ctx, h.pair)
    vals = slot_values(m)
    idx, dim = _chart_index(h)
    n = h.ctx.n

    coeffs = [t.coeff for t in h.terms]
    if mutate and coeffs:
        coeffs[0] *= (1.0 + mutate)

    pi = np.zeros((dim, dim))
    dpi = np.zeros((dim, dim, dim))  # dpi[d,a,b] = d_d Pi^{ab}
    for c, t in zip(coeffs, h.terms):
        v, jv = _field_vector_and_jac(t.v, vals, idx, dim, n)
        w, jw = _field_vector_and_jac(t.w, vals, idx, dim, n)
        pi += c * (np.outer(v, w) - np.outer(w, v))
        dpi += c * (np.einsum('ad,b->dab', jv, w) + np.einsum('a,bd->dab', v, jw)
                    - np.einsum('ad,b->dab', jw, v) - np.einsum('a,bd->dab', w, jv))

    jac = 2.0 * (np.einsum('ad,dbc->abc', pi, dpi)
                 + np.einsum('bd,dca->abc', pi, dpi)
                 + np.einsum('cd,dab->abc', pi, dpi))

    rho = np.zeros((dim, dim, dim))
    for p in range(len(h.actions)):
        rows = np.zeros((tv.pair.dim, dim))
        for i, fk in enumerate(tv.pair.f):
            sig = action_sigma(h, p, fk, vals)
            for s, tan in sig.items():
                base = idx[s]
                rows[i, base:base + n * n] += np.real(tan).reshape(-1)
        g = np.einsum('ijk,ia,jb,kc->abc', tv.coeffs, rows, rows, rows)
        rho -= wedge3_tensor(g)  # rho_x = -sigma_x, three factors

    res = jac - rho
    return {"residual": float(np.max(np.abs(res))),
            "jacobiator": jac, "rho_phi": rho}


# --- combinatorial bracket (main formula) ---------------------------------

def _variation(obs: Observable, incidence: str, hol: np.ndarray) -> np.ndarray:
    return obs.var_right(hol) if incidence == "start" else obs.var_left(hol)


def bracket_combinatorial(phi: Observable, w_alpha: Word,
                          psi: Observable, w_beta: Word,
                          data: IntersectionData, m: RepPoint) -> float:
    ha = holonomy(m, w_alpha)
    hb = holonomy(m, w_beta)
    tot = 0.0
    for (I, J), s in data.endpoint_signs.items():
        if s.value == 0:
            continue
        tot += float(s.value) * m.ctx.form(_variation(phi, I, ha),
                                           _variation(psi, J, hb))
    for q in data.crossings:
        c = holonomy(m, q.reroute_ab())
        adv = c @ psi.var_left(hb) @ np.linalg.inv(c)
        tot += q.sign * m.ctx.form(phi.var_right(ha), adv)
    return ORIENTATION_SIGN * tot


def crossing_term(phi: Observable, w_alpha: Word, psi: Observable,
                  w_beta: Word, q, m: RepPoint, variant: str = "primary") -> float:
    """B^q, either the primary expression or the alternate of the remark
    following the main theorem (used as a consistency check)."""
    ha = holonomy(m, w_alpha)
    hb = holonomy(m, w_beta)
    if variant == "primary":
        c = holonomy(m, q.reroute_ab())
        return m.ctx.form(phi.var_right(ha), c @ psi.var_left(hb) @ np.linalg.inv(c))
    if variant == "swapped":
        c = holonomy(m, q.reroute_ba())
        return m.ctx.form(psi.var_right(hb), c @ phi.var_left(ha) @ np.linalg.inv(c))
    if variant == "alternate":
        # gamma = alpha^-1 *_q beta^-1: reversed prefix of the other halves
        g = q.alpha_suffix.inverse().concat(q.beta_prefix.inverse())
        c = holonomy(m, g)
        return m.ctx.form(phi.var_left(ha), c @ psi.var_right(hb) @ np.linalg.inv(c))
    raise ValueError(variant)


def endpoint_subtotal(phi: Observable, w_alpha: Word, psi: Observable,
                      w_beta: Word, data: IntersectionData, m: RepPoint) -> float:
    ha = holonomy(m, w_alpha)
    hb = holonomy(m, w_beta)
    tot = 0.0
    for (I, J), s in data.endpoint_signs.items():
        if s.value == 0:
            continue
        tot += float(s.value) * m.ctx.form(_variation(phi, I, ha),
                                           _variation(psi, J, hb))
    return ORIENTATION_SIGN * tot
