"""Simultaneous unsharp measurement of two complementary qubit observables.

Layers: `qmath` (fixed-dimension complex linear algebra), `protocol` (the
entangled-probe measurement scheme and its uncertainty bookkeeping),
`experiment` (partial-polarizer digital twin with seeded coincidence
sampling) and `cli` (command-line front end).
"""

from . import cli, experiment, protocol, qmath
from .errors import (
    CalibrationInfeasibleError,
    DegenerateBasisError,
    EmptyEnsembleError,
    RescalingSingularError,
    SimulmeasError,
    UsageError,
)
from .experiment import (
    CoincidenceCounts,
    NoiseModel,
    PolarizerConfig,
    PreparedState,
    RunResult,
    calibrate_alpha,
    estimate_report,
    plate_transmittance,
    polarizer_operator,
    prepare,
    run_setting,
    run_state_setting,
    sample_coincidences,
    singlet,
)
from .protocol import (
    EntangledDecomposition,
    EquatorialState,
    ObservablePair,
    ProbeBasis,
    ScanResult,
    UncertaintyReport,
    VonNeumannCounterexample,
    decompose,
    entangle,
    inferred_means,
    joint_probabilities,
    make_equatorial,
    max_product,
    min_product,
    numeric_c_scan,
    observable_pair,
    probe_basis,
    probe_basis_for_overlap,
    rescaled_eigenvalues,
    sharp_probabilities,
    sharp_uncertainties,
    unsharp_uncertainties,
    von_neumann_counterexample,
)

__version__ = "0.1.0"
