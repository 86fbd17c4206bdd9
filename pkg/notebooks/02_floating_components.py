"""Walkthrough: why floating components break the regular model.

A path of length two with no boundary is a 1x1 graph matrix.  In G(n, p)
its value is a centered sum of about n^3 terms, of order n^1.5.  On a
d-regular graph every vertex has the same degree, the centering fails,
and the value is -n^2 + 2nd/(n-d) exactly.

Run: python3 notebooks/02_floating_components.py
"""
from math import ceil, log

import numpy as np

from graphmat import corpus
from graphmat import graph_models as gm
from graphmat.norm_bounds import BoundParams, closed_form_bound
from graphmat.spectral_lab import scalar_statistic

path2 = corpus.path2_scalar()
for n in (200, 400, 800):
    d = ceil(log(n) ** 2)
    reg = [scalar_statistic("path2_sum", gm.sample_regular(n, d, seed=s)) for s in range(10)]
    er = [scalar_statistic("path2_sum", gm.sample_er(n, d, seed=s)) for s in range(10)]
    pr = BoundParams.for_shape(path2, n, d, q=1)
    print(f"n={n} d={d}")
    print(f"  regular  {np.median(reg):12.1f}   exact {-n * n + 2 * n * d / (n - d):12.1f}")
    print(f"  G(n,p)   median |.| {np.median(np.abs(er)):10.1f}   (n^1.5 = {n ** 1.5:.0f})")
    print(f"  float-free bound {closed_form_bound(path2, pr, theorem='user').value:10.1f}"
          f"   full bound {closed_form_bound(path2, pr).value:10.1f}")
