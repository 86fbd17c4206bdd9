"""Command-line experiments.

Exit status: 0 success, 1 failed assertion (``--assert``), 2 configuration
error.  Every CSV report starts with ``#`` header lines carrying the full
config, its hash and the package version.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, corpus
from . import graph_models as gm
from . import matrix_builder as mb
from . import norm_bounds as nb
from . import shape_core as sc
from . import sos_indset as si
from . import spectral_lab as sl


class ConfigError(Exception):
    pass


class AssertionFailed(Exception):
    pass


# --- helpers -------------------------------------------------------------------

def load_shape(ref: str) -> sc.Shape:
    """``corpus:NAME`` or a path to a shape record."""
    if ref.startswith("corpus:"):
        try:
            return corpus.get(ref.split(":", 1)[1])
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
    path = Path(ref)
    if not path.is_file():
        raise ConfigError(f"shape file not found: {ref}")
    try:
        return sc.load(path)
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"cannot parse shape file {ref}: {exc}") from None


def _shape_list(refs: list[str]) -> list[sc.Shape]:
    if refs == ["corpus"]:
        return corpus.corpus()
    return [load_shape(r) for r in refs]


def _models(model: str) -> list[str]:
    if model == "both":
        return [gm.REG, gm.ER]
    try:
        return [gm.canonical_model(model)]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def config_of(args: argparse.Namespace) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out")}


def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def write_csv(path: str | None, cfg: dict, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(f"# graphmat {__version__}\n")
    buf.write(f"# config_hash {config_hash(cfg)}\n")
    buf.write(f"# config {json.dumps(cfg, sort_keys=True, default=str)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    text = buf.getvalue()
    if path:
        Path(path).write_text(text)
    return text


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return x


def _seeds(args) -> list[int]:
    return list(range(args.seed0, args.seed0 + args.seeds))


# --- subcommands -----------------------------------------------------------------

def cmd_validate_shape(args) -> int:
    shape = load_shape(args.shape)
    res = sc.validate(shape)
    if res.ok:
        rep = sc.component_report(shape)
        print(f"valid: {shape}")
        print(f"separators: {[sorted(s) for s in sc.enumerate_separators(shape)]}")
        print(f"automorphisms: {sc.automorphism_count(shape)}")
        print(f"floating_tree_components: {rep.floating_tree_count()}")
        print(f"isolated_vertices: {sorted(rep.isolated_vertices)}")
        return 0
    for v in res.violations:
        print(f"violation: {v}")
    return 1


def cmd_build_matrix(args) -> int:
    shape = load_shape(args.shape)
    g = gm.sample(args.model, args.n, args.d, seed=args.seed)
    M = mb.build(shape, g, mode=args.mode)
    est = sl.spectral_norm(M)
    print(f"shape: {shape.name or args.shape}")
    print(f"dims: {M.dims[0]}x{M.dims[1]}")
    print(f"spectral_norm: {est.value!r} ({est.method})")
    if args.out:
        np.save(args.out, M.to_dense())
        print(f"saved: {args.out}")
    return 0


def cmd_bound(args) -> int:
    shape = load_shape(args.shape)
    params = nb.BoundParams.for_shape(shape, args.n, args.d, q=args.q, c_norm=args.c_norm)
    rep = nb.closed_form_bound(shape, params, theorem=args.theorem,
                               per_labeling=args.per_labeling)
    print(f"shape: {shape.name or args.shape}")
    print(f"q: {params.q}")
    print(f"q_tau: {params.q_tau}")
    print(rep.as_text())
    for w in params.warnings:
        print(f"regime_warning: {w}")
    if rep.per_labeling:
        print("labeling,block_value")
        for lab, val in rep.per_labeling:
            print(f"{'|'.join(x.value for x in lab)},{val!r}")
    return 0


def cmd_verify_norm(args) -> int:
    shapes = _shape_list(args.shape)
    rows, ok = [], True
    for shape in shapes:
        if not shape.is_simple():
            raise ConfigError(f"{shape.name}: multi-edge shapes have no closed-form bound")
        for model in _models(args.model):
            for n in args.n_list:
                rep = sl.verify_norm(shape, model, n, args.d, _seeds(args), q=args.q,
                                     c_norm=args.c_norm)
                for r in rep.rows:
                    rows.append([r.shape, r.model, r.n, r.d, r.q, r.seed, r.norm, r.bound,
                                 r.ratio, r.method, r.converged])
                frac = rep.fraction_within
                ok &= frac >= args.min_fraction
                print(f"{shape.name} {model} n={n}: median={rep.median_norm:.6g} "
                      f"bound={rep.bound:.6g} within={frac:.2f}")
    write_csv(args.out, config_of(args), ["shape", "model", "n", "d", "q", "seed", "norm",
                                          "bound", "ratio", "method", "converged"], rows)
    if args.assert_ and not ok:
        raise AssertionFailed("empirical norm exceeded the bound too often")
    return 0


def cmd_distinguish(args) -> int:
    rows, medians = [], {}
    for n in args.n_list:
        d = args.d if args.d is not None else math.ceil(math.log(n) ** 2)
        for model in (gm.REG, gm.ER):
            vals = []
            for s in _seeds(args):
                v = sl.scalar_statistic(args.statistic, gm.sample(model, n, d, seed=s))
                vals.append(v)
                rows.append([args.statistic, model, n, d, s, v])
            medians[(n, model)] = float(np.median(np.abs(vals)))
        ratio = medians[(n, gm.REG)] / medians[(n, gm.ER)]
        print(f"n={n} d={d}: median|reg|={medians[(n, gm.REG)]:.6g} "
              f"median|er|={medians[(n, gm.ER)]:.6g} ratio={ratio:.4g}")
    write_csv(args.out, config_of(args), ["statistic", "model", "n", "d", "seed", "value"], rows)
    if args.assert_:
        ratios = [medians[(n, gm.REG)] / medians[(n, gm.ER)] for n in args.n_list]
        if min(ratios) < args.min_ratio or any(b <= a for a, b in zip(ratios, ratios[1:])):
            raise AssertionFailed(f"ratios {ratios} fail the separation check")
    return 0


def cmd_sos(args) -> int:
    if args.dsos % 2:
        raise ConfigError("--dsos must be even")
    k = args.k if args.k is not None else si.default_k(args.n, args.d)
    rows, passes = [], 0
    for model in _models(args.model):
        for s in _seeds(args):
            g = gm.sample(model, args.n, args.d, seed=s)
            r = si.run_sos(g, k, args.dsos, D_V=args.dv, dv_extra=args.dv_extra)
            ok = r.psd and r.is_constraint_pass and r.objective_ratio >= args.min_objective
            passes += ok
            rows.append([s, model, r.min_eig, r.objective, r.objective_ratio,
                         r.is_constraint_pass, r.dim, round(r.runtime, 3)])
            print(f"{model} seed={s}: min_eig={r.min_eig:.4g} objective/k={r.objective_ratio:.4f} "
                  f"constraints={'pass' if r.is_constraint_pass else 'FAIL'}")
    write_csv(args.out, config_of(args), ["seed", "model", "min_eig", "objective", "objective/k",
                                          "is_constraint_pass", "dim", "runtime"], rows)
    total = len(rows)
    print(f"passing runs: {passes}/{total}")
    if args.assert_ and passes < math.ceil(0.9 * total):
        raise AssertionFailed(f"only {passes}/{total} runs passed")
    return 0


def cmd_oracle(args) -> int:
    sets, G = gm.er_character_gram(args.n_er, args.p, args.max_size)
    err = float(np.abs(G - np.eye(len(sets))).max())
    print(f"er n={args.n_er} p={args.p}: {len(sets)} edge sets, max|E[χSχT] − δ| = {err:.3e}")
    sets_r, Gr = gm.regular_character_gram(args.n_reg, args.d_reg, args.max_size)
    off = Gr - np.diag(np.diag(Gr))
    worst = float(np.abs(off).max())
    p = args.d_reg / args.n_reg
    want = (args.d_reg / (args.n_reg - 1) - p) / math.sqrt(p * (1 - p))
    single = [j for j, S in enumerate(sets_r) if len(S) == 1]
    mean_err = float(np.abs(Gr[0, single] - want).max())
    print(f"regular n={args.n_reg} d={args.d_reg}: max off-diagonal |E[χSχT]| = {worst:.4f}; "
          f"E[χ_e] error vs closed form = {mean_err:.3e}")
    if args.assert_ and (err > 1e-9 or worst <= 0.01 or mean_err > 1e-12):
        raise AssertionFailed("oracle check failed")
    return 0


# --- parser --------------------------------------------------------------------

def _common_seeds(p):
    p.add_argument("--seeds", type=int, default=20, help="number of seeds")
    p.add_argument("--seed0", type=int, default=0, help="first seed")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="graphmat", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"graphmat {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate-shape", help="validate and summarize a shape")
    p.add_argument("--shape", required=True, help="shape file or corpus:NAME")
    p.set_defaults(func=cmd_validate_shape)

    p = sub.add_parser("build-matrix", help="materialize one graph matrix")
    p.add_argument("--shape", required=True)
    p.add_argument("--model", default="reg")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["explicit", "implicit"], default="explicit")
    p.add_argument("--out", help="save the dense matrix as .npy")
    p.set_defaults(func=cmd_build_matrix)

    p = sub.add_parser("bound", help="closed-form norm bound")
    p.add_argument("--shape", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--c-norm", type=float, default=1.0)
    p.add_argument("--theorem", choices=["full", "user"], default="full")
    p.add_argument("--per-labeling", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify-norm", help="empirical norms against the bound")
    p.add_argument("--shape", nargs="+", required=True, help="files, corpus:NAME, or 'corpus'")
    p.add_argument("--model", default="both", help="er, reg or both")
    p.add_argument("--n-list", type=int, nargs="+", required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--c-norm", type=float, default=1.0)
    p.add_argument("--min-fraction", type=float, default=0.95)
    _common_seeds(p)
    p.add_argument("--out")
    p.add_argument("--assert", dest="assert_", action="store_true")
    p.set_defaults(func=cmd_verify_norm)

    p = sub.add_parser("distinguish", help="scalar statistic, regular vs G(n,p)")
    p.add_argument("--statistic", choices=["path2_sum", "floating_edge_sum"], default="path2_sum")
    p.add_argument("--n-list", type=int, nargs="+", default=[200, 400, 800])
    p.add_argument("--d", type=int, default=None, help="default ⌈(ln n)²⌉")
    p.add_argument("--min-ratio", type=float, default=4.0)
    _common_seeds(p)
    p.add_argument("--out")
    p.add_argument("--assert", dest="assert_", action="store_true")
    p.set_defaults(func=cmd_distinguish)

    p = sub.add_parser("sos", help="moment matrix constraint/PSD/objective checks")
    p.add_argument("--model", default="reg")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--dsos", type=int, default=2)
    p.add_argument("--dv", type=int, default=None, help="absolute vertex truncation")
    p.add_argument("--dv-extra", type=int, default=si.DEFAULT_DV_EXTRA,
                   help="truncation |S| + DV_EXTRA when --dv is not given")
    p.add_argument("--min-objective", type=float, default=0.9)
    _common_seeds(p)
    p.set_defaults(seeds=10)
    p.add_argument("--out")
    p.add_argument("--assert", dest="assert_", action="store_true")
    p.set_defaults(func=cmd_sos)

    p = sub.add_parser("oracle", help="tiny-n exact character checks")
    p.add_argument("--n-er", type=int, default=5)
    p.add_argument("--p", type=float, default=0.4)
    p.add_argument("--n-reg", type=int, default=6)
    p.add_argument("--d-reg", type=int, default=2)
    p.add_argument("--max-size", type=int, default=3)
    p.add_argument("--assert", dest="assert_", action="store_true")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (gm.InfeasibleParameters, mb.MemoryBudgetExceeded, si.BudgetExceeded,
            sc.EnumerationInfeasible, nb.UnsupportedShape, sl.SizeInfeasible) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except AssertionFailed as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
