"""Fourier spectra, spectral gaps and sumset coverage on prime fields."""
from .coverage import (
    CoverageReport,
    ErrorProfile,
    conjecture_probe,
    error_profile,
    select_gap_difference,
    theorem1_bound,
    theorem1_report,
)
from .differences import (
    RepTable,
    UniqueDifference,
    find_unique_difference,
    lemma3_few_reps,
    lemma3_unique,
    rep_table,
)
from .diophantine import DilationWitness, balanced, dilate_set, find_dilation
from .field import (
    DensityFunction,
    GapCertificate,
    PrimeField,
    Spectrum,
    convolve,
    dft,
    gap_ratio,
    idft,
    modulate,
    order_spectrum,
)
from .kernels import BACKEND
from .repeated import (
    DifferenceChain,
    Theorem2Verdict,
    build_difference_chain,
    gamma_threshold,
    k_range_check,
    tfold_convolution,
    theorem2_report,
)

__version__ = "0.1.0"
