"""Why the stability bound needs its subset terms: a two-point family.

One can hope the diagram distance is simply bounded by a constant times
the transport distance between the measures.  This family refutes it:
moving a sliver of mass eps from -1 to -0.1 costs O(sqrt(eps)) in
transport but permanently shifts the weight of the point at -1, so the
diagrams stay a fixed distance apart while eps -> 0.
"""

import dtmfilt as df

q, m, x_new = 0.2, 0.3, -0.1

mu = df.DiscreteMeasure(df.PointCloud([[-1.0], [1.0]]), [q, 1 - q])
w_mu = df.dtm_values(mu, mu.support.points, m)
d_mu = df.reduce(df.build_weighted_cech(mu.support, w_mu, 1.0, 1, None), (0,))
print("reference diagram (dim 0):", d_mu.as_multiset(0))

print(f"\n{'eps':>6}  {'transport W2':>12}  {'bottleneck':>10}  {'ratio':>8}")
for eps in (0.05, 0.02, 0.01, 0.005, 0.002):
    nu = df.DiscreteMeasure(
        df.PointCloud([[-1.0], [1.0], [x_new]]), [q - eps, 1 - q, eps]
    )
    w_nu = df.dtm_values(nu, nu.support.points, m)
    d_nu = df.reduce(df.build_weighted_cech(nu.support, w_nu, 1.0, 1, None), (0,))
    gap = df.bottleneck(d_mu, d_nu, 0)
    w2 = df.wasserstein2(mu, nu)
    print(f"{eps:6.3f}  {w2:12.4f}  {gap:10.4f}  {gap / w2:8.2f}")

print("\nthe ratio diverges: no constant C with bottleneck <= C * W2 exists.")
