"""One-dimensional commutative formal group laws over truncated series rings.

Three built-in laws:

* ``additive``        F(x, y) = x + y
* ``multiplicative``  F(x, y) = x + y - x*y
* ``universal``       F(x, y) = exp(log(x) + log(y)) over free generators
  m_1, m_2, ... of degree -i, where log(x) = x + sum_i m_i x^(i+1).  This is
  the rational model of the universal law at the chosen truncation order: the
  m_i are algebraically independent, so an identity that holds here holds for
  every law obtained by assigning rational values to the m_i.

A law carries its own context (the two formal variables plus any coefficient
generators); geometry contexts for Chern-class computations are derived from
it so the generators stay available.
"""

from __future__ import annotations

from .series import (
    CalculusError,
    Context,
    RATIONALS,
    RequiresRationals,
    Series,
    Var,
    first_difference,
    invert_unit,
)
from .reports import CheckItem, Report

ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"
UNIVERSAL = "universal"


class FormalGroupLaw:
    """A formal group law F(x, y) together with its ambient context."""

    def __init__(self, F: Series, kind="custom", x="x", y="y", graded=True):
        self.F = F
        self.kind = kind
        self.x = x
        self.y = y
        self.graded = graded
        self.context = F.context
        self.coefficient_names = tuple(
            n for n in self.context.names if n not in (x, y)
        )
        self._inverse = None
        self._log = None
        self._templates = {}

    @property
    def truncation(self):
        return self.context.truncation

    def __repr__(self):
        return f"<FormalGroupLaw {self.kind} N={self.truncation}>"

    # -- basic evaluation ----------------------------------------------------

    def apply(self, a: Series, b: Series) -> Series:
        """F(a, b) for two series over a common context containing the generators."""
        if a.context != b.context:
            raise CalculusError("incompatible contexts")
        return self.F.substitute({self.x: a, self.y: b}, into=a.context)

    def coefficient(self, i, j) -> Series:
        """Coefficient of x^i y^j as a series in the coefficient generators."""
        return self.F.partial_coefficient({self.x: i, self.y: j})

    # -- inverse, n-series, logarithm ----------------------------------------

    def formal_inverse(self) -> Series:
        """The series i(x) with F(x, i(x)) = 0, in the law's own context."""
        if self._inverse is not None:
            return self._inverse
        ctx = self.context
        xs = ctx.var(self.x)
        iota = -xs
        for w in range(2, ctx.truncation + 1):
            err = self.apply(xs, iota).weight_component(w)
            if not err.is_zero:
                iota = iota - err
        if not self.apply(xs, iota).is_zero:
            raise CalculusError("formal inverse does not exist (not a group law?)")
        self._inverse = iota
        return iota

    def inverse_at(self, s: Series) -> Series:
        return self.formal_inverse().substitute({self.x: s}, into=s.context)

    def formal_sum_n(self, n: int) -> Series:
        """The n-series [n](x); negative n via the formal inverse."""
        ctx = self.context
        xs = ctx.var(self.x)
        if n == 0:
            return ctx.zero()
        if n < 0:
            return self.inverse_at(self.formal_sum_n(-n))
        acc = xs
        for _ in range(n - 1):
            acc = self.apply(acc, xs)
        return acc

    def sum_n_at(self, n: int, s: Series) -> Series:
        return self.formal_sum_n(n).substitute({self.x: s}, into=s.context)

    def log(self) -> Series:
        """The logarithm l(x) with l(F(x, y)) = l(x) + l(y), rational mode only.

        Computed from the classical formula l'(x) = 1 / (dF/dy)(x, 0) by
        termwise integration, then verified against the defining identity.
        """
        if self._log is not None:
            return self._log
        ctx = self.context
        if ctx.mode != RATIONALS:
            raise RequiresRationals("requires rational coefficients")
        iy = ctx.index(self.y)
        ix = ctx.index(self.x)
        # dF/dy at y = 0: the y-linear part of F
        dy = {}
        for m, c in self.F.terms.items():
            if m[iy] == 1:
                key = tuple(0 if i == iy else e for i, e in enumerate(m))
                dy[key] = c
        g = invert_unit(Series(ctx, dy, _trusted=True))
        ell = {}
        for m, c in g.terms.items():
            key = tuple(e + 1 if i == ix else e for i, e in enumerate(m))
            if ctx.weight(key) <= ctx.truncation:
                ell[key] = c / (m[ix] + 1)
        ell = Series(ctx, ell, _trusted=True)
        xs, ys = ctx.var(self.x), ctx.var(self.y)
        lhs = ell.substitute({self.x: self.apply(xs, ys)}, into=ctx)
        if lhs != ell + ell.substitute({self.x: ys}, into=ctx):
            raise CalculusError("law has no logarithm at this truncation")
        self._log = ell
        return ell

    # -- truncation changes ------------------------------------------------------

    def at_truncation(self, order) -> "FormalGroupLaw":
        """This same law recomputed at another truncation order.

        The additive and multiplicative laws extend exactly.  The universal
        law keeps its original generator set and re-expands exp/log: it is the
        law of the theory whose logarithm is exactly the original polynomial,
        so every truncation of it restricts to this law.  Custom laws carry no
        rule for extending and raise.
        """
        if order == self.truncation:
            return self
        cached = self._templates.get(("law", order))
        if cached is not None:
            return cached
        if self.kind in (ADDITIVE, MULTIPLICATIVE):
            law = make_law(self.kind, order, self.context.mode, self.x, self.y)
        elif self.kind == UNIVERSAL:
            law = _universal_law(self.coefficient_names, order, self.x, self.y)
        else:
            raise CalculusError("cannot change the truncation of a custom law")
        self._templates[("law", order)] = law
        return law

    # -- derived contexts ------------------------------------------------------

    def geometry_context(self, class_names, truncation=None, extra=()) -> Context:
        """A context with degree-1 nilpotent class variables plus the generators."""
        gens = tuple(
            v for v in self.context.variables if v.name in self.coefficient_names
        )
        vs = tuple(Var(n, 1, True) for n in class_names) + tuple(extra) + gens
        return Context(vs, truncation or self.truncation, self.context.mode)

    def into_geometry(self, s: Series, ctx: Context) -> Series:
        """Move a series in the law context (no x, y) into a geometry context."""
        return s.substitute({}, into=ctx)

    # -- axiom checks -----------------------------------------------------------

    def check_axioms(self) -> Report:
        """Verify unit, commutativity, associativity and (if graded) homogeneity."""
        ctx = self.context
        xs, ys = ctx.var(self.x), ctx.var(self.y)
        items = []

        unit = self.apply(xs, ctx.zero())
        items.append(_diff_item("unit", unit, xs))

        swapped = self.F.substitute({self.x: ys, self.y: xs}, into=ctx)
        items.append(_diff_item("commutativity", self.F, swapped))

        zname = _fresh_name("z", ctx.names)
        ctx3 = Context(
            (Var(self.x, 1, True), Var(self.y, 1, True), Var(zname, 1, True))
            + tuple(v for v in ctx.variables if v.name in self.coefficient_names),
            ctx.truncation,
            ctx.mode,
        )
        x3, y3, z3 = ctx3.var(self.x), ctx3.var(self.y), ctx3.var(zname)
        left = self.apply(self.apply(x3, y3), z3)
        right = self.apply(x3, self.apply(y3, z3))
        items.append(_diff_item("associativity", left, right))

        if self.graded:
            ok = self.F.is_homogeneous(1)
            bad = ""
            if not ok:
                for m, _ in self.F.sorted_terms():
                    d = ctx.degree_of(m)
                    if d != 1:
                        bad = f"term of degree {d}"
                        break
            items.append(CheckItem("homogeneity", ok, bad))
        else:
            items.append(CheckItem("homogeneity", True, "ungraded theory"))

        return Report(f"axioms[{self.kind}, N={ctx.truncation}]", tuple(items))


def _fresh_name(base, taken):
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def _diff_item(name, got, expected):
    d = first_difference(got, expected)
    if d is None:
        return CheckItem(name, True, "")
    mono, ca, cb = d
    return CheckItem(name, False, f"first difference at {mono}: {ca} != {cb}")


# -- constructors ---------------------------------------------------------------


def make_law(kind, truncation, mode=RATIONALS, x="x", y="y") -> FormalGroupLaw:
    """Build one of the three built-in laws at a truncation order."""
    if kind == ADDITIVE:
        ctx = Context([Var(x, 1, True), Var(y, 1, True)], truncation, mode)
        return FormalGroupLaw(ctx.var(x) + ctx.var(y), ADDITIVE, x, y, graded=True)
    if kind == MULTIPLICATIVE:
        ctx = Context([Var(x, 1, True), Var(y, 1, True)], truncation, mode)
        xs, ys = ctx.var(x), ctx.var(y)
        # x + y - xy does not respect the grading; the theory is ungraded
        return FormalGroupLaw(xs + ys - xs * ys, MULTIPLICATIVE, x, y, graded=False)
    if kind == UNIVERSAL:
        if mode != RATIONALS:
            raise RequiresRationals("requires rational coefficients")
        gen_names = tuple(f"m{i}" for i in range(1, truncation))
        return _universal_law(gen_names, truncation, x, y)
    raise CalculusError(f"unknown law kind {kind!r}")


def _universal_law(gen_names, truncation, x, y) -> FormalGroupLaw:
    """exp(log x + log y) for log(x) = x + sum m_i x^(i+1) over given generators."""
    gens = [Var(n, -int(n[1:]), False) for n in gen_names]
    ctx = Context([Var(x, 1, True), Var(y, 1, True)] + gens, truncation, RATIONALS)
    zname = _fresh_name("z", ctx.names)
    uctx = Context([Var(zname, 1, True)] + gens, truncation, RATIONALS)
    z = uctx.var(zname)
    log_u = z
    for v in gens:
        log_u = log_u + uctx.var(v.name) * z ** (-v.degree + 1)
    # exp = compositional inverse of log, solved weight by weight
    exp_u = z
    for w in range(2, truncation + 1):
        err = log_u.substitute({zname: exp_u}, into=uctx) - z
        exp_u = exp_u - err.weight_component(w)
    check = log_u.substitute({zname: exp_u}, into=uctx) - z
    if not check.is_zero:
        raise CalculusError("exp/log inversion failed")
    logx = log_u.substitute({zname: ctx.var(x)}, into=ctx)
    logy = log_u.substitute({zname: ctx.var(y)}, into=ctx)
    F = exp_u.substitute({zname: logx + logy}, into=ctx)
    law = FormalGroupLaw(F, UNIVERSAL, x, y, graded=True)
    law._log = logx
    return law


def custom_law(F: Series, x="x", y="y") -> FormalGroupLaw:
    """Wrap an arbitrary series as a (candidate) law; axioms are not assumed.

    Custom laws carry no coefficient grading, so `check_axioms` skips the
    homogeneity item for them (a correct hand-entered multiplicative law
    would otherwise fail on its degree-2 term).
    """
    return FormalGroupLaw(F, "custom", x, y, graded=False)
