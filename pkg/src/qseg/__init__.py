"""qseg: graph-cut image segmentation on a simulated quantum register.

Small grayscale images become weighted graphs (max-flow min-cut with
terminals, or normalized cuts without); the cut objective is encoded as a
diagonal cost operator and optimized by an alternating phase/mixer
variational circuit on a dense statevector simulator, with exhaustive and
max-flow classical oracles for validation.
"""

from ._backend import BACKEND
from .datasets import LabeledImage, generate_bas, load_cropped_medical
from .hamiltonian import (
    DiagonalHamiltonian,
    eval_objective,
    maxcut_hamiltonian,
    mincut_hamiltonian,
    ncut_hamiltonian,
)
from .imagegraph import (
    Image,
    SegGraph,
    TerminalModel,
    assign_qubits,
    attach_terminals,
    build_grid_graph,
    graph_for_image,
    nlink_weight,
)
from .oracles import (
    CutResult,
    dice,
    dice_ambiguous,
    exhaustive_mincut,
    exhaustive_ncut,
    maxflow_mincut,
)
from .qaoa import (
    OptimizerConfig,
    QaoaParams,
    QaoaProblem,
    RunReport,
    mincut_problem,
    ncut_problem,
    objective,
    optimize,
    prepare_state,
    run,
)
from .statevector import NoiseConfig, PauliKind, StateVector, apply_pauli_noise

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CutResult",
    "DiagonalHamiltonian",
    "Image",
    "LabeledImage",
    "NoiseConfig",
    "OptimizerConfig",
    "PauliKind",
    "QaoaParams",
    "QaoaProblem",
    "RunReport",
    "SegGraph",
    "StateVector",
    "TerminalModel",
    "apply_pauli_noise",
    "assign_qubits",
    "attach_terminals",
    "build_grid_graph",
    "dice",
    "dice_ambiguous",
    "eval_objective",
    "exhaustive_mincut",
    "exhaustive_ncut",
    "generate_bas",
    "graph_for_image",
    "load_cropped_medical",
    "maxcut_hamiltonian",
    "maxflow_mincut",
    "mincut_hamiltonian",
    "mincut_problem",
    "ncut_hamiltonian",
    "ncut_problem",
    "nlink_weight",
    "objective",
    "optimize",
    "prepare_state",
    "run",
    "__version__",
]
