"""Recover raw moments of a uniform variable from grouped moments, then show symbolic corrections."""

from __future__ import annotations

from fractions import Fraction

import sympy as sp

from momentforge.sheppard import sheppard_correct, sheppard_discrete

h = sp.Rational(1, 4)
x, z = sp.symbols("x z")
grouped = []
for i in range(7):
    v = sp.integrate(sp.integrate(x**i, (x, -z, 1 - z)), (z, -h / 2, h / 2)) / h
    grouped.append(Fraction(int(v.p), int(v.q)))

print("grouped  :", [str(g) for g in grouped])
print("corrected:", [str(a) for a in sheppard_correct(grouped, Fraction(1, 4))])

corrected = sheppard_discrete([1, 0, Fraction(1, 3), 0, Fraction(1, 5)], "h", "m")
print("discrete correction of the 2nd moment:", sp.expand(corrected[2]))
print("discrete correction of the 4th moment:", sp.expand(corrected[4]))
