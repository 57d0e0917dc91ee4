"""Symbolic quasi-Poisson Goldman algebra: path-entry symbols, normal forms
in the localized polynomial ring, and the entry-level bracket formula.

Each free generator L contributes n^2 indeterminates L_rc; inverse letters
expand through adjugate/determinant, so a normal form is a polynomial
numerator over a monomial in the det(X_L).  Equality of normal forms is
decided by expanded cross-multiplication; canonical strings use a fixed
generator and graded-lex monomial order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

import sympy as sp

from .diagrams import IntersectionData
from .quasipoisson import ORIENTATION_SIGN
from .words import Word

_ORIENT = sp.Integer(1) if ORIENTATION_SIGN > 0 else sp.Integer(-1)


def entry_symbol(label: str, r: int, c: int) -> sp.Symbol:
    return sp.Symbol("%s_%d%d" % (label, r, c))


def generator_matrix(label: str, n: int) -> sp.Matrix:
    return sp.Matrix(n, n, lambda r, c: entry_symbol(label, r + 1, c + 1))


def generator_det(label: str, n: int) -> sp.Expr:
    return generator_matrix(label, n).det()


@dataclass(frozen=True)
class PathEntrySymbol:
    word: Word
    i: int  # row, 1-based
    j: int  # column, 1-based

    def __post_init__(self):
        if len(self.word.letters) == 0:
            raise ValueError("constant words carry no entry symbols")


class NormalForm:
    """numerator / prod_L det(X_L)^den[L], gcd-reduced by det factors."""

    def __init__(self, num: sp.Expr, den: Optional[Dict[str, int]] = None, n: int = 2):
        self.num = sp.expand(num)
        self.den = {k: v for k, v in (den or {}).items() if v > 0}
        self.n = n
        self._reduce()

    def _reduce(self):
        if self.num == 0:
            self.den = {}
            return
        for label in list(self.den):
            d = generator_det(label, self.n)
            while self.den.get(label, 0) > 0:
                q, r = sp.div(self.num, d)
                if r != 0:
                    break
                self.num = sp.expand(q)
                self.den[label] -= 1
            if self.den.get(label) == 0:
                del self.den[label]

    def _den_expr(self) -> sp.Expr:
        out = sp.Integer(1)
        for label, p in self.den.items():
            out *= generator_det(label, self.n) ** p
        return out

    def __add__(self, other: "NormalForm") -> "NormalForm":
        den = {k: max(self.den.get(k, 0), other.den.get(k, 0))
               for k in set(self.den) | set(other.den)}
        fs = sp.Integer(1)
        fo = sp.Integer(1)
        for k, p in den.items():
            d = generator_det(k, self.n)
            fs *= d ** (p - self.den.get(k, 0))
            fo *= d ** (p - other.den.get(k, 0))
        return NormalForm(self.num * fs + other.num * fo, den, self.n)

    def __sub__(self, other: "NormalForm") -> "NormalForm":
        return self + other.scale(-1)

    def __mul__(self, other: "NormalForm") -> "NormalForm":
        den = {k: self.den.get(k, 0) + other.den.get(k, 0)
               for k in set(self.den) | set(other.den)}
        return NormalForm(self.num * other.num, den, self.n)

    def scale(self, c) -> "NormalForm":
        return NormalForm(sp.nsimplify(c) * self.num, dict(self.den), self.n)

    def is_zero(self) -> bool:
        return self.num == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalForm):
            return NotImplemented
        return sp.expand(self.num * other._den_expr()
                         - other.num * self._den_expr()) == 0

    def __hash__(self):
        return hash(self.canonical_str())

    def canonical_str(self) -> str:
        gens = sorted(self.num.free_symbols, key=lambda s: s.name)
        if not gens:
            num = str(self.num)
        else:
            num = str(sp.Poly(self.num, *gens).as_expr())
        den = "*".join("det(%s)^%d" % (k, p) for k, p in sorted(self.den.items()))
        return num + (" / " + den if den else "")

    def evaluate(self, m) -> float:
        """Exact rational evaluation at a RepPoint with exact coordinates."""
        if m.exact is None:
            raise ValueError("exact evaluation needs exact rational coordinates")
        subs = {}
        for label, rows in m.exact.items():
            for r in range(m.ctx.n):
                for c in range(m.ctx.n):
                    subs[entry_symbol(label, r + 1, c + 1)] = sp.Rational(
                        rows[r][c].numerator, rows[r][c].denominator)
        num = sp.together(self.num.xreplace(subs))
        if num.free_symbols:
            raise ValueError("point does not cover all generators")
        den = sp.Integer(1)
        for label, p in self.den.items():
            rows = m.exact[label]
            dmat = sp.Matrix(m.ctx.n, m.ctx.n, lambda r, c: sp.Rational(
                rows[r][c].numerator, rows[r][c].denominator))
            dv = dmat.det()
            if dv == 0:
                raise ZeroDivisionError("vanishing determinant at the point")
            den *= dv ** p
        return float(sp.Rational(num) / den)


def path_matrix(w: Word, n: int) -> Tuple[sp.Matrix, Dict[str, int]]:
    """Matrix of normal-form numerators for Hol_w, with the det denominator."""
    out = sp.eye(n)
    den: Dict[str, int] = {}
    for sym, sgn in w.letters:
        x = generator_matrix(sym, n)
        if sgn == 1:
            out = out * x
        else:
            out = out * x.adjugate()
            den[sym] = den.get(sym, 0) + 1
    return sp.expand(out), den


def normalize(ps: PathEntrySymbol, n: int) -> NormalForm:
    mat, den = path_matrix(ps.word, n)
    return NormalForm(mat[ps.i - 1, ps.j - 1], den, n)


def _entry_nf(w: Word, i: int, j: int, n: int, cache: dict) -> NormalForm:
    key = (w.letters, i, j)
    if key not in cache:
        mat, den = path_matrix(w, n)
        for r in range(n):
            for c in range(n):
                cache[(w.letters, r + 1, c + 1)] = NormalForm(mat[r, c], dict(den), n)
    return cache[key]


def bracket_symbolic(a: PathEntrySymbol, b: PathEntrySymbol,
                     data: IntersectionData, n: int,
                     cache: Optional[dict] = None) -> NormalForm:
    """The five-term entry bracket {alpha_ij, beta_kl} driven by exact
    intersection data of diagrams for the two words."""
    cache = cache if cache is not None else {}
    i, j = a.i, a.j
    k, l = b.i, b.j
    wa, wb = a.word, b.word
    out = NormalForm(sp.Integer(0), None, n)
    sv = data.endpoint_signs

    def eps(I, J):
        v = sv[(I, J)].value
        return sp.Rational(v.numerator, v.denominator) * _ORIENT

    if sv[("start", "start")].value != 0:
        out = out + (_entry_nf(wa, k, j, n, cache) * _entry_nf(wb, i, l, n, cache)
                     ).scale(eps("start", "start"))
    if sv[("end", "end")].value != 0:
        out = out + (_entry_nf(wa, i, l, n, cache) * _entry_nf(wb, k, j, n, cache)
                     ).scale(eps("end", "end"))
    if sv[("start", "end")].value != 0 and i == l:
        out = out + _entry_nf(wb.concat(wa), k, j, n, cache).scale(eps("start", "end"))
    if sv[("end", "start")].value != 0 and j == k:
        out = out + _entry_nf(wa.concat(wb), i, l, n, cache).scale(eps("end", "start"))
    for q in data.crossings:
        re_ab = q.reroute_ab()
        re_ba = q.reroute_ba()
        term = _reroute_entry(re_ab, i, l, n, cache) * _reroute_entry(re_ba, k, j, n, cache)
        out = out + term.scale(sp.Integer(q.sign) * _ORIENT)
    return out


def _reroute_entry(w: Word, r: int, c: int, n: int, cache: dict) -> NormalForm:
    if len(w.letters) == 0:
        return NormalForm(sp.Integer(1 if r == c else 0), None, n)
    return _entry_nf(w, r, c, n, cache)


class GoldmanAlgebra:
    """Symbolic bracket engine over a fixed polygon model.

    Words are realized by seeded diagrams; intersection data per word pair is
    cached, and polynomial arguments extend the entry bracket by Leibniz."""

    def __init__(self, pm, n: int, seed: int = 0):
        self.pm = pm
        self.n = n
        self.seed = seed
        self.registry: Dict[sp.Symbol, PathEntrySymbol] = {}
        self._pair_cache: Dict[tuple, IntersectionData] = {}
        self._nf_cache: dict = {}

    def symbol(self, w: Word, i: int, j: int) -> sp.Symbol:
        s = sp.Symbol("p<%s>_%d%d" % ("".join(
            "%s%s" % (sym, "" if sg == 1 else "'") for sym, sg in w.letters), i, j))
        self.registry[s] = PathEntrySymbol(w, i, j)
        return s

    def pair_data(self, wa: Word, wb: Word) -> IntersectionData:
        from .diagrams import realize_pair
        key = (wa.letters, wb.letters)
        if key not in self._pair_cache:
            _, _, data = realize_pair(wa, wb, self.pm, self.seed)
            self._pair_cache[key] = data
        return self._pair_cache[key]

    def normal_form(self, expr: sp.Expr) -> NormalForm:
        poly = sp.expand(expr)
        out = NormalForm(sp.Integer(0), None, self.n)
        for term in sp.Add.make_args(poly):
            coeff, rest = term.as_coeff_Mul()
            nf = NormalForm(sp.Integer(1), None, self.n).scale(coeff)
            for fac in sp.Mul.make_args(rest):
                base, exp = fac.as_base_exp()
                if base in self.registry:
                    ps = self.registry[base]
                    fnf = _entry_nf(ps.word, ps.i, ps.j, self.n, self._nf_cache)
                    for _ in range(int(exp)):
                        nf = nf * fnf
                else:
                    nf = nf * NormalForm(fac, None, self.n)
            out = out + nf
        return out

    def bracket(self, F: sp.Expr, G: sp.Expr) -> NormalForm:
        """Leibniz extension of the entry bracket to polynomials."""
        out = NormalForm(sp.Integer(0), None, self.n)
        fs = [s for s in F.free_symbols if s in self.registry]
        gs = [s for s in G.free_symbols if s in self.registry]
        for s in fs:
            dfs = self.normal_form(sp.diff(F, s))
            for t in gs:
                dgt = self.normal_form(sp.diff(G, t))
                ps, pt = self.registry[s], self.registry[t]
                data = self.pair_data(ps.word, pt.word)
                br = bracket_symbolic(ps, pt, data, self.n, self._nf_cache)
                out = out + dfs * dgt * br
        return out
