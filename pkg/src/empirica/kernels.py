"""Kernel backend selection.

The hot inner loops (replication counting, change-point scans, the J1
alignment DP) live in the compiled extension ``empirica._ckernels``; a
pure-numpy twin ``empirica._pykernels`` is selected at import when the
extension is unavailable or ``EMPIRICA_PURE=1`` is set.  Both backends
produce bit-identical output; ``benchmarks/bench_kernels.py`` compares
their speed.
"""

import os

if os.environ.get("EMPIRICA_PURE") == "1":
    from . import _pykernels as _impl

    BACKEND = "pure"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _pykernels as _impl

        BACKEND = "pure"

count_leq = _impl.count_leq
changepoint_scan = _impl.changepoint_scan
j1_alignment_dp = _impl.j1_alignment_dp

__all__ = ["BACKEND", "count_leq", "changepoint_scan", "j1_alignment_dp"]
