"""
Isolating the bayan
===================

The left drum of the tabla sits low: most of its energy lies between roughly
60 and 200 Hz. An ERB-spaced bank of 20 bands over 0-22050 Hz puts its second
band right there, so that band is all we keep to find bayan strokes.
"""

import numpy as np

from taladetect.filterbank import design_erb_bank, magnitude_response_db

bank = design_erb_bank(20, 44100)
for k in range(1, 5):
    lo, c, hi = bank.band(k)
    print(f"band {k:2d}: {lo:7.1f} - {hi:7.1f} Hz, centre {c:6.1f} Hz")

# %%
# The band-pass actually applied is a Butterworth over 60-200 Hz, run forward
# and backward so stroke onsets are not delayed. Its gain in dB:

freqs = np.array([30, 60, 130, 200, 400, 1000])
for f, g in zip(freqs, magnitude_response_db(freqs)):
    print(f"{f:5d} Hz  {g:7.1f} dB")
