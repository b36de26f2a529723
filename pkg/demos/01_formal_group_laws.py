"""Formal group laws: construction, axioms, inverses, n-series, specialization.

A law is a series F(x, y) with F(x, 0) = x, F(x, y) = F(y, x) and
F(F(x, y), z) = F(x, F(y, z)).  Everything here is exact rational
arithmetic on series truncated at a nilpotent weight N.
"""

from occ import SpecializationMap, first_difference, make_law, specialize

N = 6

print("== the three stock laws at truncation", N, "==")
for kind in ("additive", "multiplicative", "universal"):
    law = make_law(kind, N)
    print(f"\n{kind}:")
    shown = str(law.F)
    if len(shown) > 100:
        shown = shown[:100] + f"...  ({len(law.F.terms)} terms)"
    print("  F(x,y) =", shown)
    rep = law.check_axioms()
    print(" ", rep.lines()[-1], "(unit, commutativity, associativity, homogeneity)")

law = make_law("universal", N)
print("\n== universal law: rational model with free generators m1..m%d ==" % (N - 1))
print("coefficient of x*y:      ", law.coefficient(1, 1))
print("coefficient of x^2*y:    ", law.coefficient(2, 1))
print("coefficient of x^2*y^2:  ", law.coefficient(2, 2))

print("\n== inverse and n-series ==")
for kind in ("multiplicative", "universal"):
    law = make_law(kind, 5)
    iota = law.formal_inverse()
    print(f"{kind}: iota(x) =", iota)
    two = law.formal_sum_n(2)
    print(f"{kind}: [2](x)  =", two)
    check = law.apply(law.formal_sum_n(3), law.formal_sum_n(-3))
    print(f"{kind}: F([3]x, [-3]x) = {check}")

print("\n== specialization: the universal law covers the other two ==")
law = make_law("universal", N)
to_add = specialize(SpecializationMap.to_additive(law), law.F)
to_mul = specialize(SpecializationMap.to_multiplicative(law), law.F)
add = make_law("additive", N).F.substitute({}, into=to_add.context)
mul = make_law("multiplicative", N).F.substitute({}, into=to_mul.context)
print("at m_i = 0:        F ->", to_add, "   matches additive:", first_difference(to_add, add) is None)
print("at m_i = 1/(i+1):  matches multiplicative:", first_difference(to_mul, mul) is None)
