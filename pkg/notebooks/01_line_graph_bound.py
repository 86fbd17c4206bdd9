"""Walkthrough: the line shape, its separators and its predicted norm.

The line shape has one edge u-v with U=(u), V=(v); its graph matrix is the
centered adjacency matrix X.  We compare the closed-form bound with the
measured spectral norm in both random graph models.

Run: python3 notebooks/01_line_graph_bound.py
"""
from math import ceil, log2

from graphmat import corpus
from graphmat.norm_bounds import BoundParams, closed_form_bound
from graphmat.shape_core import enumerate_separators
from graphmat.spectral_lab import verify_norm

line = corpus.line()
print("separators:", [sorted(s) for s in enumerate_separators(line)])

params = BoundParams.for_shape(line, 1024, 64, q=10)
report = closed_form_bound(line, params)
print(report.as_text())
for term in report.terms:
    print(f"  S={sorted(term.separator)} -> {term.value:.4g}")

# Each separator of size one contributes sqrt(n)*q; {u, v} only sqrt((1-p)/p).
for n in (256, 512, 1024):
    for model in ("reg", "er"):
        rep = verify_norm(line, model, n, 64, seeds=range(5), q=ceil(log2(n)))
        print(f"n={n:5d} {model:3s} median norm {rep.median_norm:8.2f}  bound {rep.bound:8.1f}")
