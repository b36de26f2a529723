"""Projective-bundle rings, towers, and residue-formula Gysin pushforwards.

For a split bundle E of rank r over X with roots x_1..x_r, the ring of
P(E) is presented as the base ring with one fresh degree-1 nilpotent
generator t (the first Chern class of O(1)) modulo the relation

    f(t) = sum_{i=0}^{r} (-1)^i c_{r-i}(E*) t^i  =  prod_i (iota(x_i) - t),

which is weight-homogeneous of weight r with leading coefficient (-1)^r.
`reduce` rewrites t^r via f and so normalizes every element to t-degree < r;
towers of projective bundles chain the rewriting level by level.

`pushforward` implements the Gysin map along P(E) -> X by the residue
formula: with formal roots xh_i and tau_i = iota(xh_i),

    pi_!(p) = sum_i p(tau_i) * prod_{j != i} F(tau_i, iota(tau_j))^{-1}.

Each pairwise factor F(iota(xh_i), xh_j) is (xh_j - xh_i) times a unit, so
the sum is assembled over a common Vandermonde denominator, divided exactly,
rewritten in the elementary symmetric functions of the formal roots, and only
then specialized at the actual roots.  That order of operations is what makes
repeated (or zero) roots legal.  The division lowers nilpotent weight by the
Vandermonde weight r(r-1)/2, so the computation runs at a truncation order
raised by exactly that margin and restricts back afterwards.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .series import (
    CalculusError,
    Context,
    ContextMismatch,
    NotDivisible,
    NotSymmetric,
    Series,
    Var,
    elementary_symmetric,
    exact_divide,
    first_difference,
    invert_unit,
    symmetric_reduce,
)
from .bundles import SplitBundle
from .reports import CheckItem, Report


def _fresh_names(base, count, taken):
    out = []
    taken = set(taken)
    for i in range(1, count + 1):
        name = f"{base}{i}"
        while name in taken:
            name = "_" + name
        taken.add(name)
        out.append(name)
    return out


class ProjBundleRing:
    """The ring of P(E) presented over the ring of the base.

    Elements are ordinary series over `self.context` (the base context plus
    the tautological class `t`); `reduce` brings them to the normal form with
    t-degree below the rank, recursing through `base` for towers.
    """

    def __init__(self, bundle: SplitBundle, t="t", base: "ProjBundleRing | None" = None):
        if base is not None and bundle.context != base.context:
            raise ContextMismatch("incompatible contexts")
        if t in bundle.context.names:
            raise CalculusError("variable collision")
        self.bundle = bundle
        self.law = bundle.law
        self.rank = bundle.rank
        self.t = t
        self.base = base
        self.parent_context = bundle.context
        self.context = bundle.context.extend([Var(t, 1, True)])
        coeffs = bundle.relation_coefficients(self.context)
        ts = self.context.var(t)
        rel = self.context.zero()
        for i, a in enumerate(coeffs):
            rel = rel + a * ts**i
        self.relation = rel
        self.relation_coefficients = coeffs
        # rewrite polynomial G with t^rank == G modulo the relation
        lead = coeffs[self.rank].constant_term  # (-1)^rank
        G = self.context.zero()
        for i in range(self.rank):
            G = G - coeffs[i] * ts**i * (1 / lead)
        self._G = G
        self._images = None

    def __repr__(self):
        return f"<ProjBundleRing rank {self.rank} over {self.parent_context!r}, t={self.t}>"

    def lift(self, p: Series) -> Series:
        """Pull a base-ring element up (t-degree zero)."""
        return p.substitute({}, into=self.context)

    def var(self, name):
        return self.context.var(name)

    def reduce(self, p: Series) -> Series:
        """Normal form: rewrite t^rank via the relation, then reduce the base."""
        if p.context != self.context:
            raise ContextMismatch("incompatible contexts")
        r = self.rank
        terms = p.terms
        # Rewrite all of t^{>=r} at once per pass: every term of G carries
        # positive base weight, so the high part gains weight each pass and
        # the loop ends within the truncation bound.
        while True:
            low = {}
            high = {}
            for m, c in terms.items():
                if m[-1] >= r:
                    high[m[:-1] + (m[-1] - r,)] = c
                else:
                    low[m] = c
            if not high:
                terms = low
                break
            prod = Series(self.context, high, _trusted=True) * self._G
            for m, c in prod.terms.items():
                s = low.get(m, Fraction(0)) + c
                if s:
                    low[m] = s
                elif m in low:
                    del low[m]
            terms = low
        if self.base is not None:
            regrouped = {}
            by_deg = {}
            for m, c in terms.items():
                by_deg.setdefault(m[-1], {})[m[:-1]] = c
            for e, sub in sorted(by_deg.items()):
                red = self.base.reduce(Series(self.parent_context, sub, _trusted=True))
                for m2, c2 in red.terms.items():
                    regrouped[m2 + (e,)] = c2
            terms = regrouped
        return Series(self.context, {m: c for m, c in terms.items() if c}, _trusted=True)

    def _reduce_parent(self, p: Series) -> Series:
        return self.base.reduce(p) if self.base is not None else p

    def pushforward(self, p: Series) -> Series:
        """Gysin pushforward to the base ring by the residue formula.

        The map is linear over the base, so the residue machinery runs once
        per ring on the monomial basis 1, t, ..., t^{r-1} (cached on the
        instance); a general element is reduced, split by t-degree, and
        assembled from the basis images.
        """
        law = self.law
        r = self.rank
        parent = self.parent_context
        p = self.reduce(p)
        if r == 1:
            tau = law.inverse_at(self.bundle.roots[0])
            return self._reduce_parent(p.substitute({self.t: tau}, into=parent))
        images = self._basis_images()
        split = [dict() for _ in range(r)]
        for m, c in p.terms.items():
            split[m[-1]][m[:-1]] = c
        out = parent.zero()
        for k in range(r):
            if split[k]:
                out = out + Series(parent, split[k], _trusted=True) * images[k]
        return self._reduce_parent(out)

    def _basis_images(self):
        """pi_!(t^k) for k < rank, each computed by the residue formula."""
        if self._images is not None:
            return self._images
        law = self.law
        r = self.rank
        parent = self.parent_context
        # the Vandermonde division lowers weight by margin; the pairwise unit
        # factors each lose one more weight to their own binomial division
        margin = r * (r - 1) // 2
        order = parent.truncation + margin + 1
        law_w = law.at_truncation(order)
        xh = _fresh_names("xh", r, parent.names)
        ch = _fresh_names("ch", r, list(parent.names) + xh)
        wctx = Context(
            parent.variables
            + tuple(Var(n, 1, True) for n in xh)
            + tuple(Var(n, k + 1, True) for k, n in enumerate(ch)),
            order,
            parent.mode,
        )
        xs = [wctx.var(n) for n in xh]
        iota_w = law_w.formal_inverse()
        taus = [iota_w.substitute({law.x: xi}, into=wctx) for xi in xs]
        # pairwise unit factors: F(iota(xh_i), xh_j) = (xh_j - xh_i) * W_ij;
        # everything here lives in the xh variables alone, so the cost does
        # not grow with the base ring
        weights = []
        for i in range(r):
            wprod = wctx.one()
            vi = wctx.one()
            for a in range(r):
                for b in range(a + 1, r):
                    if i in (a, b):
                        continue
                    vi = vi * (xs[a] - xs[b])
            for j in range(r):
                if j == i:
                    continue
                D = law_w.apply(taus[i], xs[j])
                W = exact_divide(D, xs[j] - xs[i])
                wprod = wprod * W
            sign = (-1) ** (r - (i + 1))
            weights.append(invert_unit(wprod) * vi * sign)
        vandermonde = wctx.one()
        for a in range(r):
            for b in range(a + 1, r):
                vandermonde = vandermonde * (xs[a] - xs[b])
        good = parent.truncation + margin
        es = elementary_symmetric(self.bundle.roots, None, one=parent.one())
        mapping = {ch[k - 1]: es[k] for k in range(1, r + 1)}
        images = []
        tau_pow = [wctx.one() for _ in range(r)]
        for k in range(r):
            S = wctx.zero()
            for i in range(r):
                S = S + tau_pow[i] * weights[i]
            # everything above weight N + margin is contaminated by the
            # unit-factor divisions; drop it so the quotient is exact to
            # weight N and the remainder check stays meaningful
            S = Series(
                wctx,
                {m: c for m, c in S.terms.items() if wctx.weight(m) <= good},
                _trusted=True,
            )
            try:
                Q = exact_divide(S, vandermonde)
            except NotDivisible:
                raise CalculusError("pushforward not polynomial") from None
            try:
                Qc = symmetric_reduce(Q, xh, ch)
            except NotSymmetric:
                raise CalculusError("pushforward not symmetric") from None
            images.append(Qc.substitute(mapping, into=parent))
            if k + 1 < r:
                tau_pow = [tau_pow[i] * taus[i] for i in range(r)]
        self._images = images
        return images


def pb_relation_check(truncation: int = 6) -> Report:
    """The defining relation of P(E) against the Euler class of E*(-1).

    For generic roots and r <= 3: e(E*(-1)) factors as f(t) * U with U a
    unit of constant term 1 (each F(iota(x_i), iota(t)) is (iota(x_i) - t)
    times a unit); for the additive law U = 1 and the factorization is the
    literal expansion sum_i (-1)^i c_{r-i}(E*) t^i; and e(E*(-1)) reduces
    to zero in the quotient ring.
    """
    from .fgl import make_law

    items = []
    for kind in ("additive", "multiplicative", "universal"):
        law = make_law(kind, truncation)
        for r in (1, 2, 3):
            names = [f"u{i}" for i in range(1, r + 1)]
            ctx = law.geometry_context(names)
            bundle = SplitBundle(law, [ctx.var(n) for n in names])
            ring = ProjBundleRing(bundle, "t")
            tv = ring.var("t")
            up = SplitBundle(law, [ring.lift(x) for x in bundle.roots])
            euler = up.dual().twist_by_line(law.inverse_at(tv)).euler()
            tag = f"{kind},r={r}"
            try:
                unit = exact_divide(euler, ring.relation)
                items.append(
                    CheckItem(
                        f"pbf[{tag}] euler = relation * unit",
                        unit.constant_term == 1,
                        "" if unit.constant_term == 1 else f"unit constant term {unit.constant_term}",
                    )
                )
            except NotDivisible as exc:
                items.append(CheckItem(f"pbf[{tag}] euler = relation * unit", False, str(exc)))
            if kind == "additive":
                d = first_difference(euler, ring.relation)
                items.append(
                    CheckItem(
                        f"pbf[{tag}] literal expansion",
                        d is None,
                        "" if d is None else f"first difference at {d[0]}: {d[1]} != {d[2]}",
                    )
                )
            items.append(
                CheckItem(f"pbf[{tag}] reduce(euler) = 0", ring.reduce(euler).is_zero)
            )
            items.append(
                CheckItem(f"pbf[{tag}] reduce(relation) = 0", ring.reduce(ring.relation).is_zero)
            )
    return Report(f"pbf[N={truncation}]", tuple(items))


def projection_formula_check(truncation: int = 6, cases: int = 20, seed: int = 0) -> Report:
    """pi_!(pi^*(a) * b) = a * pi_!(b) on randomized bundles of rank <= 3.

    Both sides land in the base ring; the pushforward is base-linear, so the
    identity pins down the residue normalization against ordinary products.
    The pushforward lowers weight by rank-1, so the product upstairs is formed
    at truncation N + rank - 1 and the two sides are compared on all terms of
    weight <= N, where they are exact.
    """
    from .fgl import make_law
    from .bundles import _random_root

    rng = random.Random(seed)
    laws = {}
    items = []
    for case in range(cases):
        kind = ("additive", "multiplicative", "universal")[case % 3]
        r = rng.randint(1, 3)
        law = laws.get((kind, r))
        if law is None:
            law = laws[kind, r] = make_law(kind, truncation + r - 1)
        nvars = rng.randint(1, 2)
        names = [f"v{i}" for i in range(1, nvars + 1)]
        ctx = law.geometry_context(names)
        vs = [ctx.var(n) for n in names]
        bundle = SplitBundle(law, [_random_root(rng, law, vs) for _ in range(r)])
        ring = ProjBundleRing(bundle, "t")
        a = _random_element(rng, ctx, names)
        b = _random_element(rng, ring.context, names + ["t"])
        lhs = ring.pushforward(ring.lift(a) * b)
        rhs = a * ring.pushforward(b)
        d = first_difference(_weight_cut(lhs, truncation), _weight_cut(rhs, truncation))
        items.append(
            CheckItem(
                f"case {case}: {kind}, rank {r}, {nvars} base vars",
                d is None,
                "" if d is None else f"first difference at {d[0]}: {d[1]} != {d[2]}",
            )
        )
    return Report(f"projection-formula[N={truncation},cases={cases}]", tuple(items))


def _weight_cut(p: Series, bound: int) -> Series:
    ctx = p.context
    return Series(
        ctx,
        {m: c for m, c in p.terms.items() if ctx.weight(m) <= bound},
        _trusted=True,
    )


def _random_element(rng, ctx, names, max_terms=4, max_pow=2):
    acc = ctx.const(Fraction(rng.randint(-2, 2)))
    for _ in range(rng.randint(1, max_terms)):
        term = ctx.const(Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
        for n in names:
            e = rng.randrange(max_pow + 1)
            if e:
                term = term * ctx.var(n) ** e
        acc = acc + term
    return acc


# -- the P(L + O) pushforward formula ------------------------------------------


def pushforward_p1_formula(law, u: Series) -> Series:
    """pi_!(1) on P(L + O) as -sum_{i,j>=1} b_ij e(L)^(i-1) e(L*)^(j-1).

    b_ij are the law coefficients; the sum needs them up to total order
    N + 2 to be exact at truncation N, so the law is re-expanded that far.
    """
    ctx = u.context
    N = ctx.truncation
    law2 = law.at_truncation(N + 2)
    iu = law.inverse_at(u)
    pow_u = [ctx.one()]
    pow_iu = [ctx.one()]
    for _ in range(N + 1):
        pow_u.append(pow_u[-1] * u)
        pow_iu.append(pow_iu[-1] * iu)
    ctx2 = law2.context
    ix, iy = ctx2.index(law2.x), ctx2.index(law2.y)
    trans = {}
    for k, name in enumerate(ctx2.names):
        if k not in (ix, iy):
            trans[k] = ctx.index(name)
    nvars = len(ctx.variables)
    groups = {}
    for m, c in law2.F.terms.items():
        i, j = m[ix], m[iy]
        if i < 1 or j < 1 or i - 1 > N or j - 1 > N:
            continue
        exps = [0] * nvars
        for k, e in enumerate(m):
            if e and k not in (ix, iy):
                exps[trans[k]] = e
        g = groups.setdefault((i, j), {})
        key = tuple(exps)
        g[key] = g.get(key, Fraction(0)) + c
    acc = ctx.zero()
    for (i, j), g in sorted(groups.items()):
        acc = acc + Series(ctx, g, _trusted=True) * pow_u[i - 1] * pow_iu[j - 1]
    return -acc


# -- towers ---------------------------------------------------------------------


class TowerRing:
    """The tower over a point: P_0 = pt, P_{k+1} = P(M_k + O), M_{k+1} = M_k(1).

    M_0 = O.  Level k lives in the context of the base point extended by
    t_1..t_k; `m_classes[k]` is the first Chern class of M_k on P_k.
    """

    def __init__(self, law, depth, t_prefix="t", base_context=None):
        self.law = law
        ctx = base_context if base_context is not None else law.geometry_context([])
        self.base_context = ctx
        self.rings = []
        self.m_classes = [ctx.zero()]
        ring = None
        for k in range(1, depth + 1):
            bundle = SplitBundle(law, [self.m_classes[-1], ctx.zero()])
            ring = ProjBundleRing(bundle, f"{t_prefix}{k}", base=ring)
            ctx = ring.context
            self.rings.append(ring)
            lifted = self.m_classes[-1].substitute({}, into=ctx)
            self.m_classes.append(law.apply(lifted, ctx.var(f"{t_prefix}{k}")))

    @property
    def depth(self):
        return len(self.rings)

    def push_to_base(self, p: Series, level: int) -> Series:
        """Push an element of the level-`level` ring all the way down.

        Every level after the first consumes one weight of precision (the
        truncation cut above re-enters one weight lower), so the result of an
        l-level descent is exact up to weight N - l + 1.
        """
        for ring in reversed(self.rings[:level]):
            p = ring.pushforward(p)
        return p

    def point_class(self, level: int) -> Series:
        """[P_level]: the pushforward of 1 from level `level` to the base."""
        if level == 0:
            return self.base_context.one()
        return self.push_to_base(self.rings[level - 1].context.one(), level)


def tower_classes(law, depth) -> list:
    """[P_0], ..., [P_depth] for the standard tower over a point.

    Each pushforward level consumes one weight of precision from the level
    above, so the constants are exact for depth <= N+1; deeper towers are
    evaluated at an internally raised truncation (canonical laws only).
    """
    work = law if depth <= law.truncation + 1 else law.at_truncation(depth - 1)
    tower = TowerRing(work, depth)
    out = [tower.point_class(k) for k in range(depth + 1)]
    if work is not law:
        ctx = law.geometry_context([])
        out = [c.substitute({}, into=ctx) for c in out]
    return out


def class_of_proj_line(law, u: Series) -> Series:
    """[P(L + O)] for a line with Euler class u, via the tower-ratio identity.

    Equals (sum_i [P_{i+1}] u^i) / (sum_i [P_i] u^i); the denominator is a
    unit because [P_0] = 1.
    """
    ctx = u.context
    N = ctx.truncation
    classes = tower_classes(law, N + 1)
    cl = [c.substitute({}, into=ctx) for c in classes]
    num = ctx.zero()
    den = ctx.zero()
    pw = ctx.one()
    for i in range(N + 1):
        num = num + cl[i + 1] * pw
        den = den + cl[i] * pw
        pw = pw * u
    return num * invert_unit(den)


# -- the geometric law identity ---------------------------------------------------


def geometric_fgl_check(law, names=("u1", "u2")) -> Report:
    """Verify F(u1,u2) * (1 + u1 u2 ([P2]-[P3])) = u1 + u2 - u1 u2 [P1].

    P1 = P(L1+O) and P2 = P(L1 + L1 L2 + O); P3 = P(O(-1)+O) over
    P(L2 + L1 L2), all classes computed by residue pushforwards of 1.
    The identity holds only with [P1] and the base of [P3] on
    complementary lines: pairing both with L1 breaks it at weight 4
    (first at the u1^3 u2 coefficient, universal law).
    """
    ctx = law.geometry_context(names)
    u1, u2 = ctx.var(names[0]), ctx.var(names[1])
    F12 = law.apply(u1, u2)
    zero = ctx.zero()

    ring1 = ProjBundleRing(SplitBundle(law, [u1, zero]), "s1")
    p1 = ring1.pushforward(ring1.context.one())

    ring2 = ProjBundleRing(SplitBundle(law, [u1, F12, zero]), "s1")
    p2 = ring2.pushforward(ring2.context.one())

    # [P3] passes through two pushforward levels and the inner truncation
    # cut would leak into the top weight downstairs, so compute one order
    # higher when the law allows it and restrict back.
    try:
        law3 = law.at_truncation(ctx.truncation + 1)
    except CalculusError:
        law3 = law
    ctx3 = law3.geometry_context(names)
    v1, v2 = ctx3.var(names[0]), ctx3.var(names[1])
    lower = ProjBundleRing(SplitBundle(law3, [v2, law3.apply(v1, v2)]), "s1")
    o_minus_1 = law3.inverse_at(lower.context.var("s1"))
    upper = ProjBundleRing(
        SplitBundle(law3, [o_minus_1, lower.context.zero()]), "s2", base=lower
    )
    p3 = lower.pushforward(upper.pushforward(upper.context.one())).to_context(ctx)

    lhs = F12 * (1 + u1 * u2 * (p2 - p3))
    rhs = u1 + u2 - u1 * u2 * p1
    diff = first_difference(lhs, rhs)
    if diff is None:
        item = CheckItem("geometric-fgl-identity", True, "")
    else:
        mono, ca, cb = diff
        item = CheckItem(
            "geometric-fgl-identity", False, f"first difference at {mono}: {ca} != {cb}"
        )
    return Report(
        f"geometric-fgl[{law.kind}, N={ctx.truncation}]",
        (
            item,
            CheckItem("p1-class", True, f"[P1] = {p1}"),
            CheckItem("p2-class", True, f"[P2] = {p2}"),
            CheckItem("p3-class", True, f"[P3] = {p3}"),
        ),
    )


# -- linear recursions from the relation -------------------------------------------


def sequence_extend(cs, seed, limit):
    """Extend a_0..a_{r-1} by the recursion sum_j cs[j] * a_{n+j} = 0 up to `limit`.

    `cs` are the r+1 relation coefficients (leading one a constant unit).
    Returns (values, stabilization index): the index after the last nonzero
    entry, certified by >= r consecutive zero entries at the tail; raises
    "finiteness violated" when the tail has not stabilized by `limit`.
    """
    r = len(cs) - 1
    if r < 1:
        raise CalculusError("need at least two relation coefficients")
    if len(seed) != r:
        raise CalculusError(f"seed must have length {r}")
    lead = cs[r]
    ctx = lead.context
    if lead != ctx.const(lead.constant_term) or lead.constant_term == 0:
        raise CalculusError("leading relation coefficient must be a constant unit")
    inv_lead = Fraction(1) / lead.constant_term
    vals = [s if isinstance(s, Series) else ctx.const(s) for s in seed]
    for n in range(0, limit - r + 1):
        acc = ctx.zero()
        for j in range(r):
            acc = acc + cs[j] * vals[n + j]
        vals.append(acc * (-inv_lead))
    s = len(vals)
    while s > 0 and vals[s - 1].is_zero:
        s -= 1
    if len(vals) - s < r:
        raise CalculusError("finiteness violated")
    return vals, s
