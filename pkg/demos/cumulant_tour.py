"""Classical, Boolean and free cumulants of a few familiar moment sequences."""

from __future__ import annotations

from momentforge.cumulants import moments_to_cumulants
from momentforge.kernel import format_rational
from momentforge.umbral import named_umbra

ORDER = 6

sequences = {
    "Bell numbers": named_umbra("bell", ORDER),
    "Catalan numbers": named_umbra("catalan", ORDER),
    "standard normal": [1, 0, 1, 0, 3, 0, 15],
    "uniform on [0,1]": named_umbra("uniform", ORDER),
}

for label, moments in sequences.items():
    print(label)
    for kind in ("classical", "boolean", "free"):
        values = moments_to_cumulants(moments, kind).values
        print(f"  {kind:9s}", " ".join(format_rational(v) for v in values))
