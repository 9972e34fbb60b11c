"""Build k_4 and the polykay k_{2,1}, check unbiasedness symbolically, evaluate on data."""

from __future__ import annotations

import random
from fractions import Fraction

from momentforge.sampling import cumulant_in_moments, evaluate_on_sample, expectation_of_statistic, k_statistic, polykay

k4 = k_statistic(4)
print("k_4 =", k4)
print("E[k_4] == c_4:", expectation_of_statistic(k4) == cumulant_in_moments(4))

k21 = polykay((2, 1))
print("k_{2,1} =", k21)
print("E[k_{2,1}] == c_2 c_1:", expectation_of_statistic(k21) == cumulant_in_moments(2) * cumulant_in_moments(1))

rng = random.Random(0)
sample = [Fraction(rng.randint(0, 20), 4) for _ in range(12)]
print("sample:", [str(x) for x in sample])
print("k_2 on the sample:", evaluate_on_sample(k_statistic(2), sample))
