"""Projective bundles: the defining relation, normal forms, Gysin pushforwards.

P(E) for a rank-r split bundle adds one degree-1 class t = c1(O(1)) subject
to f(t) = sum_i (-1)^i c_{r-i}(E*) t^i = 0.  `reduce` rewrites t^r away;
`pushforward` integrates down to the base by the residue formula.
"""

from occ import (
    ProjBundleRing,
    SplitBundle,
    geometric_fgl_check,
    make_law,
    pushforward_p1_formula,
    sequence_extend,
    tower_classes,
)

law = make_law("universal", 5)
ctx = law.geometry_context(["u"])
u = ctx.var("u")

print("== P(L + O) over one class variable ==")
ring = ProjBundleRing(SplitBundle(law, [u, ctx.zero()]), "t")
t = ring.var("t")
print("relation:      ", ring.relation)
print("reduce(t^2):   ", ring.reduce(t * t))
print("pi_!(1):       ", ring.pushforward(ring.context.one()))
print("pi_!(t):       ", ring.pushforward(t))
print("formula for pi_!(1) from the law coefficients b_ij:")
print("               ", pushforward_p1_formula(law, u))

print("\n== the projective-line tower over a point ==")
for kind in ("additive", "multiplicative", "universal"):
    cl = tower_classes(make_law(kind, 5), 3)
    print(f"{kind:15s} [P0..P3] =", ", ".join(str(c) for c in cl))

print("\n== the group law is forced by point classes of P1-bundles ==")
rep = geometric_fgl_check(make_law("universal", 4))
for line in rep.lines():
    print(" ", line)

print("\n== the relation as a linear recursion on base classes ==")
E = SplitBundle(law, [u, ctx.zero()])
cs = E.relation_coefficients()
print("relation coefficients:", ", ".join(str(c) for c in cs))
vals, stab = sequence_extend(cs, [ctx.zero(), ctx.one()], 12)
print("seed (0, 1) extends to:", ", ".join(str(v) for v in vals[:8]), "...")
print("stabilizes to zero at index", stab, "(truncation forces a finite tail)")
