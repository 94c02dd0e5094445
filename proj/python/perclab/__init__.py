"""Site percolation on the triangular lattice.

Configuration sampling, interface-loop extraction on the hexagonal dual,
correlation-length and crossing-probability estimators, regime sweeps, and
the compactified-plane curve metric. The heavy lifting lives in the C++
extension module `_perclab`.
"""

try:
    from . import _perclab as _core  # wheel layout
except ImportError:  # plain CMake build tree: extension directly on sys.path
    import _perclab as _core

__all__ = [
    "Config",
    "CorrEstimate",
    "EventStats",
    "LevelReport",
    "Loop",
    "LoopSet",
    "PowerLawFit",
    "PPlusEstimate",
    "ProbeLog",
    "RegimeReport",
    "ScaledBracket",
    "SearchBudget",
    "Verdict",
    "Window",
    "classify",
    "crossing_prob",
    "curve_dist",
    "delta_dist",
    "dist_to_infinity",
    "estimate_L",
    "estimate_p_plus",
    "fit_power_law",
    "horizontal_crossing",
    "load_config",
    "near_critical_band",
    "run_sweep",
    "sample",
    "set_dist",
    "trace_loops",
]

for _name in __all__:
    globals()[_name] = getattr(_core, _name)
del _name
