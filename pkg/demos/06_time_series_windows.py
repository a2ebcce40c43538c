"""Sliding-window embeddings: persistence flags a regime shift.

A stationary oscillation embeds as a loop in R^3; a mid-series level
jump displaces the second half's loop, and the late merger of the two
loops leaves a strong extra 0-dimensional feature in the weighted
diagram.
"""

import numpy as np

import dtmfilt as df


def series(shift=False, n=140, seed=0):
    rng = np.random.default_rng(seed)
    t = np.arange(n) * 0.3
    level = np.where(t > t[n // 2], 1.8, 0.0) if shift else 0.0
    return np.sin(t) + level + rng.normal(scale=0.03, size=n)


def summarize(samples, label):
    cloud = df.delay_embedding(samples, dim=3, stride=1)
    D = df.reduce(df.dtm_filtration(cloud, m=0.1, p=1.0, max_dim=1), (0,))
    pts = D.points(0)
    finite = pts[np.isfinite(pts[:, 1])]
    lifetimes = np.sort(finite[:, 1] - finite[:, 0])[::-1]
    print(f"{label}: {len(cloud)} windows in R^3")
    print(f"  strongest component merges: {np.round(lifetimes[:4], 3)}")
    return lifetimes


steady = summarize(series(shift=False), "steady oscillation")
print()
shifted = summarize(series(shift=True), "oscillation with a level jump")

print("\nsecond-strongest component lifetime (split detector):")
print(f"  steady  {steady[1]:.3f}")
print(f"  shifted {shifted[1]:.3f}   <- the jump shows up as a long-lived extra component")
