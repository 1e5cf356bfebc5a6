"""
Pulse patterns and the co-occurrence matrix
===========================================

Between two bayan strokes we count pulses. Consecutive counts form pairs,
tallied in a 16 x 16 matrix whose largest cell names the rhythm.
"""

from taladetect.cooccurrence import (DominantPattern, PulseCountSeries, build_matrix,
                                     dominant_pattern)
from taladetect.grammar import (basic_patterns, builtin_thekas, classify, default_grammars,
                                extended_patterns)

for theka in builtin_thekas():
    basic = sorted(basic_patterns(theka).pairs)
    extra = sorted(extended_patterns(theka).pairs - set(basic))
    print(f"{theka.tala_name:8s} basic {basic}  extended adds {len(extra)} pairs")

# %%
# A dadra performance where the player sometimes also stresses ``dhi``:
# mostly 6-6, with a few 1-5 and 5-1 detours.

counts = [1, 5, 9, 1, 5, 9, 1, 5, 1, 3] + [6] * 11
m = build_matrix(PulseCountSeries(tuple(counts)))
print("nonzero cells:", m.nonzero())
dom = dominant_pattern(m)
print("dominant pair", dom.pair, "->", classify(dom, default_grammars()).tala_name)

# %%
# A slightly off count still lands on the right tala through the +-1 stage.

print("(5, 6) ->", classify(DominantPattern(5, 6, 1), default_grammars()))
