"""K-theory and additive specializations: Euler characteristics, Riemann-Roch.

The multiplicative law models K-theory (a line with Euler class u has class
1 - iota(u) = 1/(1-u)); the additive law models the rational theory where
Todd classes and exponential characters live.  Pushing [O(k)] off a trivial
projective bundle must reproduce binomial coefficients, and the additive
pushforward of ch * Todd must agree.
"""

from occ import (
    conner_floyd_check,
    grr_check,
    k_chi_oracle,
    k_euler_characteristic,
    line_class,
    make_law,
    todd_factor,
    todd_prime_at_dual,
    twisted_c1,
)

print("== chi(P^(r-1), O(k)) by pushforward vs binomial(k+r-1, r-1) ==")
for r in (2, 3, 4):
    row = [str(k_euler_characteristic(r, k)) for k in range(6)]
    oracle = [str(k_chi_oracle(r, k)) for k in range(6)]
    print(f"r={r}: pushforward {row}  oracle {oracle}")

print("\n== K-classes of line bundles ==")
law_m = make_law("multiplicative", 6)
u = law_m.geometry_context(["u"]).var("u")
print("[L]      =", line_class(law_m, u))
print("[L]*(1-u) - 1 =", line_class(law_m, u).series * (1 - u) - 1)

print("\n== Riemann-Roch on P^1 and P^2 ==")
for r in (2, 3):
    for k in (0, 2, 4):
        rep = grr_check(r, k)
        status = "OK " if rep.passed else "FAIL"
        print(f"{status} r={r} k={k}: both sides = {rep.items[0].actual}")

print("\n== the two Todd normalizations invert through the twisted c1 ==")
ctx = law_m.geometry_context(["u", "v"])
u, v = ctx.var("u"), ctx.var("v")
print("Td(u)                          =", todd_factor(u))
print("Td'(c1^t(-u)) * Td(u)          =", todd_prime_at_dual(twisted_c1("t", -u)) * todd_factor(u))
print("c1^t'(F(u,v)) - c1^t'(u) - c1^t'(v) =",
      twisted_c1("t-prime", law_m.apply(u, v))
      - twisted_c1("t-prime", u) - twisted_c1("t-prime", v))

print("\n== universal-to-multiplicative consistency battery ==")
rep = conner_floyd_check(truncation=5, seed=0)
print(rep.lines()[-1])
