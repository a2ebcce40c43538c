"""Outlier robustness: plain Rips loses the circle, the weighted one keeps it.

A clean circle sample has one dominant 1-dimensional feature.  Sprinkle
outliers into the disk and the plain Rips diagram shatters; reweighting
by the distance to measure suppresses the outliers and the circle's
feature survives essentially unchanged.
"""

import numpy as np

import dtmfilt as df


def top_cycles(diagram, k=3):
    pts = diagram.points(1)
    pts = pts[np.isfinite(pts[:, 1])]
    order = np.argsort(pts[:, 1] - pts[:, 0])[::-1][:k]
    return [(float(b), float(d)) for b, d in pts[order]]


clean = df.synth("circle", 80, seed=5)
noisy = df.synth("circle-with-outliers", 80, 20, seed=5)

K_clean = df.build_weighted_rips(clean, np.zeros(80), 1.0, max_dim=2)
K_noisy = df.build_weighted_rips(noisy, np.zeros(100), 1.0, max_dim=2)
K_dtm = df.dtm_filtration(noisy, m=0.1, p=1.0, max_dim=2)

d_clean = df.reduce(K_clean, (1,))
d_noisy = df.reduce(K_noisy, (1,))
d_dtm = df.reduce(K_dtm, (1,))

print("strongest 1-cycles (birth, death):")
print("  clean circle, plain Rips:   ", top_cycles(d_clean))
print("  with outliers, plain Rips:  ", top_cycles(d_noisy))
print("  with outliers, DTM weights: ", top_cycles(d_dtm))

persistence = lambda bars: bars[0][1] - bars[0][0] if bars else 0.0
print("\ntop persistence:")
print(f"  clean plain    {persistence(top_cycles(d_clean)):.3f}")
print(f"  noisy plain    {persistence(top_cycles(d_noisy)):.3f}   <- feature drowned")
print(f"  noisy weighted {persistence(top_cycles(d_dtm)):.3f}   <- feature preserved")
