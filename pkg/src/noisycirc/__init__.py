"""noisycirc: entanglement dynamics of qudit chains under random channels.

Subpackages:
  gf          -- GF(d) linear algebra (bit-packed fast path for d = 2)
  pauli       -- Pauli/Weyl words and symplectic algebra
  stabilizer  -- mixed-state stabilizer simulator
  circuits    -- architectures, gate sampling, trajectory sweeps
  replica     -- S_Q algebra, Weingarten tables, spin-model partition functions
  domainwall  -- large-d domain-wall recursions and closed forms
  toy         -- one-qudit closed-form model
  oracle      -- dense density-matrix reference implementation
  cli         -- batch experiment driver
"""

__version__ = "0.1.0"

from .circuits import (BoundaryNoise1D, Brickwork1D, NoiseModel, Plaquette2D,
                       ensemble_average, run_trajectory, sample_random_clifford)
from .pauli import PauliWord, symplectic_form
from .stabilizer import CliffordGate, MixedStabilizerState, product_state

__all__ = [
    "__version__",
    "BoundaryNoise1D", "Brickwork1D", "NoiseModel", "Plaquette2D",
    "ensemble_average", "run_trajectory", "sample_random_clifford",
    "PauliWord", "symplectic_form",
    "CliffordGate", "MixedStabilizerState", "product_state",
]
