"""Chern classes of split bundles: Whitney sums, duals, line-bundle twists.

A split bundle is a list of first Chern classes ("roots"); c_k is the k-th
elementary symmetric function of the roots and the law governs how duals
and tensor twists act on them.
"""

from occ import SplitBundle, make_law, whitney_check

law = make_law("universal", 3)  # low order keeps the printed formulas short
ctx = law.geometry_context(["a", "b", "c"])
a, b, c = ctx.var("a"), ctx.var("b"), ctx.var("c")

E = SplitBundle(law, [a, b])
F = SplitBundle(law, [c])

print("== a rank-2 and a rank-1 bundle over three class variables ==")
print("c1(E) =", E.chern(1))
print("c2(E) =", E.chern(2))
print("e(E)  =", E.euler(), " (top Chern class)")

print("\n== Whitney: c(E + F) = c(E) c(F) ==")
lhs = E.direct_sum(F).total_chern()
rhs = E.total_chern() * F.total_chern()
print("c(E+F)       =", lhs)
print("difference   =", lhs - rhs)

print("\n== duals and twists follow the law ==")
print("c1(E*)        =", E.dual().chern(1), "  (additive part is -c1(E))")
tw = E.twist_by_line(c)
print("c1(E(L_c))    =", tw.chern(1))
print("e(L_a* (x) L_c) =", SplitBundle(law, [a]).dual().twist_by_line(c).euler(),
      "  (= F(iota(a), c))")

print("\n== randomized Whitney battery (50 cases, rank <= 3, seeded) ==")
rep = whitney_check(truncation=6, cases=50, seed=0)
print(rep.lines()[-1])
