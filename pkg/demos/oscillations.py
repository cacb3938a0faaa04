"""
Oscillating two-valued sequences
================================

Any value between alpha and beta is a weak* limit of functions that only
take the values alpha and beta.  Build such sequences and watch the pairings
and the value histograms settle.
"""

from nlsup import (
    OscillationSpec,
    SimpleFunction,
    build_sequence,
    empirical_young_measure,
    weak_star_report,
)
from nlsup.oscillation import error_table

u = SimpleFunction.from_cells([(0.0, 0.5, 0.0), (0.5, 1.0, 0.5)])
spec = OscillationSpec(-1.0, 1.0, u)
print("fractions of alpha per cell:", spec.lambdas.tolist())

u4 = build_sequence(spec, 4)
print("j = 4 breaks:", u4.breaks.tolist())
print("j = 4 values:", u4.values[:, 0].tolist())

reports = weak_star_report(spec)
print("violations:", [r.violations for r in reports])
print("error against x, by j")
print(error_table(reports, "mono_1"), end="")

mu = empirical_young_measure(build_sequence(spec, 64), (0.5, 1.0))
print("value histogram on the second cell:", mu.atoms)
