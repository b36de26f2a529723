"""Exact sparse arithmetic for truncated multivariate power series.

Coefficients are rational numbers (`fractions.Fraction`), never floats.
Variables are declared up front in a :class:`Context`, each with a name, an
integer degree, and a nilpotency flag.  Truncation is by *nilpotent weight*:
the weight of a monomial is the degree-weighted sum of the exponents of its
nilpotent variables, and every term of weight exceeding the context's
truncation order is identically zero.  Exponents of non-nilpotent variables
(e.g. free coefficient generators of negative degree) are never truncated.

The canonical order on terms is ascending nilpotent weight, then descending
lexicographic exponent order in the context's variable order.  Printing,
JSON serialization and first-discrepancy reporting all follow it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple

INTEGERS = "integers"
RATIONALS = "rationals"


class CalculusError(Exception):
    """Base class for all arithmetic/validation errors raised here."""


class ContextMismatch(CalculusError):
    pass


class NotAUnit(CalculusError):
    pass


class NotDivisible(CalculusError):
    pass


class NotSymmetric(CalculusError):
    pass


class SubstitutionError(CalculusError):
    pass


class ReductionFailed(CalculusError):
    pass


class RequiresRationals(CalculusError):
    pass


class Var(NamedTuple):
    name: str
    degree: int
    nilpotent: bool = True


def _coerce_coeff(c, mode):
    if isinstance(c, Fraction):
        q = c
    elif isinstance(c, int):
        q = Fraction(c)
    else:
        raise CalculusError(f"coefficient must be an integer or Fraction, got {type(c).__name__}")
    if mode == INTEGERS and q.denominator != 1:
        raise RequiresRationals("requires rational coefficients")
    return q


class Context:
    """An ordered list of variables plus a truncation order and coefficient mode.

    Series are only compatible when their contexts are equal (same variables
    in the same order, same truncation, same mode).
    """

    __slots__ = ("variables", "truncation", "mode", "names", "_index", "_nilp_idx", "_hash")

    def __init__(self, variables, truncation, mode=RATIONALS):
        vs = []
        for v in variables:
            if isinstance(v, Var):
                vs.append(v)
            else:
                vs.append(Var(*v))
        self.variables = tuple(vs)
        self.names = tuple(v.name for v in vs)
        if len(set(self.names)) != len(self.names):
            raise CalculusError("duplicate variable names")
        for v in vs:
            if v.nilpotent and v.degree < 1:
                raise CalculusError(f"nilpotent variable {v.name} must have degree >= 1")
        if not isinstance(truncation, int) or truncation < 1:
            raise CalculusError("truncation order must be a positive integer")
        if mode not in (INTEGERS, RATIONALS):
            raise CalculusError(f"unknown coefficient mode {mode!r}")
        self.truncation = truncation
        self.mode = mode
        self._index = {v.name: i for i, v in enumerate(vs)}
        self._nilp_idx = tuple((i, v.degree) for i, v in enumerate(vs) if v.nilpotent)
        self._hash = hash((self.variables, truncation, mode))

    def __eq__(self, other):
        return (
            isinstance(other, Context)
            and self.variables == other.variables
            and self.truncation == other.truncation
            and self.mode == other.mode
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        vs = ", ".join(
            f"{v.name}:{v.degree}" + ("" if v.nilpotent else "!") for v in self.variables
        )
        return f"Context([{vs}], N={self.truncation}, {self.mode})"

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise CalculusError(f"unknown variable {name!r}") from None

    def weight(self, exps):
        """Nilpotent weight of an exponent tuple."""
        return sum(exps[i] * d for i, d in self._nilp_idx)

    def degree_of(self, exps):
        """Total degree of an exponent tuple (all variables, signed degrees)."""
        return sum(e * v.degree for e, v in zip(exps, self.variables))

    # -- constructors -------------------------------------------------------

    def zero(self):
        return Series(self, {}, _trusted=True)

    def one(self):
        return self.const(1)

    def const(self, c):
        q = _coerce_coeff(c, self.mode)
        zero = (0,) * len(self.variables)
        return Series(self, {zero: q} if q else {}, _trusted=True)

    def var(self, name):
        i = self.index(name)
        exps = tuple(1 if j == i else 0 for j in range(len(self.variables)))
        if self.weight(exps) > self.truncation:
            return self.zero()
        return Series(self, {exps: Fraction(1)}, _trusted=True)

    def series(self, terms):
        """Build a series from {exponent tuple or {name: exp}: coefficient}."""
        out = {}
        for mono, c in (terms.items() if isinstance(terms, dict) else terms):
            if isinstance(mono, dict):
                exps = [0] * len(self.variables)
                for name, e in mono.items():
                    exps[self.index(name)] = e
                mono = tuple(exps)
            else:
                mono = tuple(mono)
                if len(mono) != len(self.variables):
                    raise CalculusError("exponent tuple has wrong length")
            if any(e < 0 for e in mono):
                raise CalculusError("negative exponent")
            q = _coerce_coeff(c, self.mode)
            if q and self.weight(mono) <= self.truncation:
                out[mono] = out.get(mono, Fraction(0)) + q
        return Series(self, {m: c for m, c in out.items() if c}, _trusted=True)

    # -- derived contexts ----------------------------------------------------

    def extend(self, new_vars, truncation=None):
        vs = [v if isinstance(v, Var) else Var(*v) for v in new_vars]
        return Context(self.variables + tuple(vs), truncation or self.truncation, self.mode)

    def with_truncation(self, truncation):
        return Context(self.variables, truncation, self.mode)


def _term_key(ctx, exps):
    # canonical order: ascending weight, then descending lex in variable order
    return (ctx.weight(exps), tuple(-e for e in exps))


class Series:
    """A truncated power series: a sparse map from exponent tuples to Fractions."""

    __slots__ = ("context", "terms")

    def __init__(self, context, terms, _trusted=False):
        self.context = context
        if _trusted:
            self.terms = terms
        else:
            self.terms = {}
            for m, c in terms.items():
                q = _coerce_coeff(c, context.mode)
                if q and context.weight(m) <= context.truncation:
                    self.terms[tuple(m)] = q

    # -- inspection ----------------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    @property
    def constant_term(self):
        zero = (0,) * len(self.context.variables)
        return self.terms.get(zero, Fraction(0))

    def coefficient_of(self, mono):
        """Coefficient of a single monomial, given as {name: exp}."""
        exps = [0] * len(self.context.variables)
        for name, e in mono.items():
            exps[self.context.index(name)] = e
        return self.terms.get(tuple(exps), Fraction(0))

    def partial_coefficient(self, fixed):
        """Sub-series of the terms matching given exponents, with those slots zeroed.

        `fixed` maps variable names to required exponents; the returned series
        lives in the same context with the matched exponents removed.
        """
        ctx = self.context
        idx = {ctx.index(name): e for name, e in fixed.items()}
        out = {}
        for m, c in self.terms.items():
            if all(m[i] == e for i, e in idx.items()):
                stripped = tuple(0 if i in idx else e for i, e in enumerate(m))
                out[stripped] = c
        return Series(ctx, out, _trusted=True)

    def min_weight(self):
        if not self.terms:
            return None
        w = self.context.weight
        return min(w(m) for m in self.terms)

    def weight_component(self, k):
        w = self.context.weight
        return Series(self.context, {m: c for m, c in self.terms.items() if w(m) == k}, _trusted=True)

    def is_homogeneous(self, degree):
        d = self.context.degree_of
        return all(d(m) == degree for m in self.terms)

    def support_names(self):
        """Names of variables occurring with positive exponent."""
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(self.context.names[i])
        return used

    # -- ring operations -----------------------------------------------------

    def _check_ctx(self, other):
        if self.context != other.context:
            raise ContextMismatch("incompatible contexts")

    def __add__(self, other):
        if not isinstance(other, Series):
            other = self.context.const(other)
        self._check_ctx(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            elif m in out:
                del out[m]
        return Series(self.context, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.context, {m: -c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        if not isinstance(other, Series):
            other = self.context.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Series):
            q = _coerce_coeff(other, self.context.mode)
            if not q:
                return self.context.zero()
            return Series(self.context, {m: c * q for m, c in self.terms.items()}, _trusted=True)
        self._check_ctx(other)
        ctx = self.context
        N = ctx.truncation
        w = ctx.weight
        # bucket both operands by weight so over-truncation pairs are skipped early
        a = sorted(((w(m), m, c) for m, c in self.terms.items()), key=lambda t: t[0])
        b = sorted(((w(m), m, c) for m, c in other.terms.items()), key=lambda t: t[0])
        out = {}
        for wa, ma, ca in a:
            limit = N - wa
            for wb, mb, cb in b:
                if wb > limit:
                    break
                key = tuple(x + y for x, y in zip(ma, mb))
                s = out.get(key, Fraction(0)) + ca * cb
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
        return Series(ctx, out, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise CalculusError("exponent must be a non-negative integer")
        result = self.context.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.context == other.context and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                return self.is_zero
            zero = (0,) * len(self.context.variables)
            return self.terms == {zero: q}
        return NotImplemented

    __hash__ = None

    # -- substitution --------------------------------------------------------

    def substitute(self, mapping, into=None):
        """Substitute series (or scalars) for variables, landing in `into`.

        Every mapped nilpotent variable must receive a series with zero
        constant term.  Variables that are not mapped but occur in a term must
        exist in the target context with the same degree and nilpotency.  The
        target context defaults to the context of the first series image, or
        to this series' own context when the mapping is scalar-only.
        """
        ctx = self.context
        target = into
        if target is None:
            for v in mapping.values():
                if isinstance(v, Series):
                    target = v.context
                    break
        if target is None:
            target = ctx
        images = {}
        for name, val in mapping.items():
            i = ctx.index(name)
            if isinstance(val, Series):
                if val.context != target:
                    raise ContextMismatch("incompatible contexts")
                img = val
            else:
                img = target.const(val)
            if ctx.variables[i].nilpotent and img.constant_term != 0:
                raise SubstitutionError("non-nilpotent substitution")
            images[i] = img
        if not self.terms:
            return target.zero()
        # identity translation for unmapped variables that actually occur
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e and i not in images:
                    used.add(i)
        ident = {}
        for i in sorted(used):
            v = ctx.variables[i]
            if v.name not in target._index:
                raise ContextMismatch(f"incompatible contexts: variable {v.name!r} not in target")
            j = target.index(v.name)
            if target.variables[j][1:] != v[1:]:
                raise ContextMismatch(f"incompatible contexts: variable {v.name!r} differs in target")
            ident[i] = j
        mapped_idx = sorted(images)
        nt = len(target.variables)
        N = target.truncation
        pow_cache = {i: [target.one()] for i in mapped_idx}
        prof_cache = {}
        out = {}
        for m, c in self.terms.items():
            prof = tuple(m[i] for i in mapped_idx)
            P = prof_cache.get(prof)
            if P is None:
                P = target.one()
                for i, e in zip(mapped_idx, prof):
                    cache = pow_cache[i]
                    while len(cache) <= e:
                        cache.append(cache[-1] * images[i])
                    P = P * cache[e]
                prof_cache[prof] = P
            base = [0] * nt
            for i, j in ident.items():
                base[j] = m[i]
            wb = target.weight(tuple(base))
            if wb > N:
                continue
            for mp, cp in P.terms.items():
                if wb + target.weight(mp) > N:
                    continue
                key = tuple(x + y for x, y in zip(base, mp))
                s = out.get(key, Fraction(0)) + c * cp
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
        if target.mode == INTEGERS:
            for c in out.values():
                if c.denominator != 1:
                    raise RequiresRationals("requires rational coefficients")
        return Series(target, out, _trusted=True)

    def to_context(self, target):
        """Reinterpret in another context (same-named variables), retruncating."""
        return self.substitute({}, into=target)

    # -- presentation --------------------------------------------------------

    def sorted_terms(self):
        ctx = self.context
        return sorted(self.terms.items(), key=lambda mc: _term_key(ctx, mc[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.context.names
        pieces = []
        for m, c in self.sorted_terms():
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            mag = -c if c < 0 else c
            if mono:
                body = mono if mag == 1 else f"{mag}*{mono}"
            else:
                body = str(mag)
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self):
        return f"<Series {self} | {self.context!r}>"

    def to_json_obj(self):
        names = self.context.names
        terms = []
        for m, c in self.sorted_terms():
            mono = {name: e for name, e in zip(names, m) if e}
            terms.append({"monomial": mono, "coeff": str(c)})
        return {"terms": terms}


def first_difference(a, b):
    """First differing term of two series in canonical order, or None.

    Returns (monomial string, coefficient of a, coefficient of b).
    """
    a._check_ctx(b)
    ctx = a.context
    monos = set(a.terms) | set(b.terms)
    for m in sorted(monos, key=lambda m: _term_key(ctx, m)):
        ca = a.terms.get(m, Fraction(0))
        cb = b.terms.get(m, Fraction(0))
        if ca != cb:
            name = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(ctx.names, m) if e
            ) or "1"
            return (name, ca, cb)
    return None


# -- units and exact division ------------------------------------------------


def invert_unit(a: Series) -> Series:
    """Multiplicative inverse of a series whose constant term is a unit."""
    ctx = a.context
    c0 = a.constant_term
    if c0 == 0:
        raise NotAUnit("not a unit")
    if ctx.mode == INTEGERS and abs(c0) != 1:
        raise NotAUnit("not a unit")
    N = ctx.truncation
    w = ctx.weight
    zero = (0,) * len(ctx.variables)
    inv0 = 1 / c0
    # higher-weight components of a, bucketed
    by_weight = {}
    for m, c in a.terms.items():
        wm = w(m)
        if wm:
            by_weight.setdefault(wm, []).append((m, c))
    q_by_weight = {0: {zero: inv0}}
    out = {zero: inv0}
    for k in range(1, N + 1):
        comp = {}
        for v, items in by_weight.items():
            if v > k:
                continue
            qprev = q_by_weight.get(k - v)
            if not qprev:
                continue
            for ma, ca in items:
                for mq, cq in qprev.items():
                    key = tuple(x + y for x, y in zip(ma, mq))
                    s = comp.get(key, Fraction(0)) + ca * cq
                    if s:
                        comp[key] = s
                    elif key in comp:
                        del comp[key]
        if not comp:
            continue
        qk = {m: -inv0 * c for m, c in comp.items()}
        q_by_weight[k] = qk
        out.update(qk)
    return Series(ctx, out, _trusted=True)


def _divide_homogeneous(ctx, num, den):
    """Divide weight-homogeneous term dicts exactly; raise NotDivisible otherwise.

    Reduction by the lexicographically leading monomial of `den`; lex order on
    exponent tuples is multiplication-compatible and well-ordered, so the loop
    terminates even when the division fails.
    """
    lm_d = max(den)
    lc_d = den[lm_d]
    rest = [(m, c) for m, c in den.items() if m != lm_d]
    p = dict(num)
    q = {}
    while p:
        lm_p = max(p)
        diff = tuple(a - b for a, b in zip(lm_p, lm_d))
        if any(e < 0 for e in diff):
            raise NotDivisible("not divisible")
        c = p[lm_p] / lc_d
        q[diff] = q.get(diff, Fraction(0)) + c
        del p[lm_p]
        for md, cd in rest:
            key = tuple(x + y for x, y in zip(diff, md))
            s = p.get(key, Fraction(0)) - c * cd
            if s:
                p[key] = s
            elif key in p:
                del p[key]
    return {m: c for m, c in q.items() if c}


def exact_divide(num: Series, den: Series) -> Series:
    """Exact quotient num/den; raises NotDivisible on any nonzero remainder.

    Works weight by weight against the lowest-weight homogeneous component of
    the divisor, so the divisor need not be a unit (e.g. dividing by a
    Vandermonde product or by a single nilpotent variable is fine as long as
    the division is exact within the truncation order).
    """
    num._check_ctx(den)
    ctx = num.context
    if den.is_zero:
        raise NotDivisible("division by zero series")
    if num.is_zero:
        return ctx.zero()
    w = ctx.weight
    d = den.min_weight()
    if num.min_weight() < d:
        raise NotDivisible("not divisible")
    den_low = {m: c for m, c in den.terms.items() if w(m) == d}
    N = ctx.truncation
    rem = dict(num.terms)
    q = {}
    for k in range(0, N - d + 1):
        comp = {m: c for m, c in rem.items() if w(m) == k + d}
        if not comp:
            continue
        qk = _divide_homogeneous(ctx, comp, den_low)
        q.update(qk)
        for mq, cq in qk.items():
            for md, cd in den.terms.items():
                key = tuple(x + y for x, y in zip(mq, md))
                if w(key) > N:
                    continue
                s = rem.get(key, Fraction(0)) - cq * cd
                if s:
                    rem[key] = s
                elif key in rem:
                    del rem[key]
    if rem:
        raise NotDivisible("not divisible")
    if ctx.mode == INTEGERS:
        for c in q.values():
            if c.denominator != 1:
                raise NotDivisible("not divisible")
    return Series(ctx, q, _trusted=True)


# -- symmetric functions -------------------------------------------------------


def elementary_symmetric(values, k, one=None):
    """e_k of a list of series (or the full list e_0..e_len as `None` k).

    Computed by the stable product recurrence; `values` must be non-empty
    series over a common context unless `one` supplies the ring unit.
    """
    if one is None:
        one = values[0].context.one()
    es = [one] + [one.context.zero()] * len(values)
    for v in values:
        for j in range(len(es) - 1, 0, -1):
            es[j] = es[j] + es[j - 1] * v
    if k is None:
        return es
    return es[k]


def symmetric_reduce(p: Series, roots, targets) -> Series:
    """Rewrite a series symmetric in `roots` as a polynomial in `targets`.

    `targets[k-1]` stands for the k-th elementary symmetric function of the
    root variables and must be declared with matching degree.  The result
    contains no root variables; substituting e_k(roots) back for the targets
    recovers `p` exactly.
    """
    ctx = p.context
    r = len(roots)
    if len(targets) != r:
        raise CalculusError("need one target per root")
    r_idx = [ctx.index(n) for n in roots]
    t_idx = [ctx.index(n) for n in targets]
    if set(r_idx) & set(t_idx):
        raise CalculusError("roots and targets overlap")
    root_deg = ctx.variables[r_idx[0]].degree
    for i in r_idx:
        if not ctx.variables[i].nilpotent or ctx.variables[i].degree != root_deg:
            raise CalculusError("roots must be nilpotent of equal degree")
    for k, i in enumerate(t_idx, start=1):
        if ctx.variables[i].degree != k * root_deg:
            raise CalculusError(f"target {ctx.names[i]!r} must have degree {k * root_deg}")
    for i in t_idx:
        for m in p.terms:
            if m[i]:
                raise CalculusError("input already contains a target variable")
    # symmetry check: invariance under all adjacent transpositions
    for a in range(r - 1):
        ia, ib = r_idx[a], r_idx[a + 1]
        for m, c in p.terms.items():
            if m[ia] == m[ib]:
                continue
            swapped = list(m)
            swapped[ia], swapped[ib] = swapped[ib], swapped[ia]
            if p.terms.get(tuple(swapped), Fraction(0)) != c:
                raise NotSymmetric("not symmetric")
    e_expanded = [None]  # e_k of the root variables as series, 1-indexed
    root_series = [ctx.var(n) for n in roots]
    e_expanded.extend(elementary_symmetric(root_series, None)[1:])
    work = dict(p.terms)
    out = {}
    while work:
        lam = max(tuple(m[i] for i in r_idx) for m in work)
        if not any(lam):
            for m, c in work.items():
                out[m] = out.get(m, Fraction(0)) + c
            break
        if any(lam[a] < lam[a + 1] for a in range(r - 1)):
            raise ReductionFailed("reduction failed")
        cof = {}
        for m, c in work.items():
            if tuple(m[i] for i in r_idx) == lam:
                stripped = list(m)
                for i in r_idx:
                    stripped[i] = 0
                cof[tuple(stripped)] = c
        # multiplicities a_k = lam_k - lam_{k+1} give the e-product and t-monomial
        mult = [lam[a] - (lam[a + 1] if a + 1 < r else 0) for a in range(r)]
        t_shift = [0] * len(ctx.variables)
        for k, a in enumerate(mult):
            t_shift[t_idx[k]] = a
        t_shift = tuple(t_shift)
        for m, c in cof.items():
            key = tuple(x + y for x, y in zip(m, t_shift))
            out[key] = out.get(key, Fraction(0)) + c
        e_prod = ctx.one()
        for k, a in enumerate(mult, start=1):
            for _ in range(a):
                e_prod = e_prod * e_expanded[k]
        sub = Series(ctx, cof, _trusted=True) * e_prod
        for m, c in sub.terms.items():
            s = work.get(m, Fraction(0)) - c
            if s:
                work[m] = s
            elif m in work:
                del work[m]
    out = {m: c for m, c in out.items() if c}
    for m in out:
        for i in r_idx:
            if m[i]:
                raise ReductionFailed("reduction failed")
    return Series(ctx, out, _trusted=True)


# -- univariate composition helpers -------------------------------------------


def compose_coeffs(coeff_fn, s: Series, start=0) -> Series:
    """Sum coeff_fn(k) * s**k for k >= start, until powers of s vanish.

    `s` must have zero constant term so the sum is finite under truncation.
    """
    if s.constant_term != 0:
        raise SubstitutionError("non-nilpotent substitution")
    ctx = s.context
    out = ctx.zero()
    power = ctx.one()
    for _ in range(start):
        power = power * s
    k = start
    while not (k > 0 and power.is_zero):
        c = coeff_fn(k)
        if c:
            out = out + power * c
        power = power * s
        k += 1
        if k > ctx.truncation + 1:
            break
    return out


def exp_of(s: Series) -> Series:
    """exp(s) for a series with zero constant term (rational mode only)."""
    if s.context.mode != RATIONALS:
        raise RequiresRationals("requires rational coefficients")
    from math import factorial

    return compose_coeffs(lambda k: Fraction(1, factorial(k)), s)


def log1p_of(s: Series) -> Series:
    """log(1 + s) for a series with zero constant term (rational mode only)."""
    if s.context.mode != RATIONALS:
        raise RequiresRationals("requires rational coefficients")
    return compose_coeffs(lambda k: Fraction((-1) ** (k - 1), k), s, start=1)
