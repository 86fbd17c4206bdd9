"""Graph matrices over random graphs: construction, norm bounds, spectra and
pseudo-calibrated moment matrices for independent set."""
import os

__version__ = "0.1.0"

# GRAPHMAT_THREADS caps BLAS/numba threads; must be set before numpy loads.
_threads = os.environ.get("GRAPHMAT_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                 "NUMBA_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

from .shape_core import Shape, validate, transpose  # noqa: E402
from .graph_models import GraphSample, sample, sample_er, sample_regular  # noqa: E402
from .matrix_builder import build  # noqa: E402
from .norm_bounds import BoundParams, closed_form_bound  # noqa: E402
from .spectral_lab import spectral_norm, trace_moment  # noqa: E402
from .sos_indset import build_moment_matrix, pseudo_moment, psd_check  # noqa: E402

__all__ = [
    "Shape", "validate", "transpose", "GraphSample", "sample", "sample_er", "sample_regular",
    "build", "BoundParams", "closed_form_bound", "spectral_norm", "trace_moment",
    "build_moment_matrix", "pseudo_moment", "psd_check", "__version__",
]
