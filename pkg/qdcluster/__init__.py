"""
qdcluster - One-step cluster states in double-quantum-dot qubits
Version 1.0.0

Simulation and analysis toolkit for N double-dot charge qubits coupled to
a single transmission-line-resonator mode.

Modules:
    config: Constants and run configuration
    core: Hilbert-space core and exceptions
    analysis: Dot physics, dynamics, cluster states, noise and fidelity
    commands: Command implementations for the CLI
    utils: Logging and helper functions
"""

__version__ = "1.0.0"
__author__ = "qdcluster Team"
__license__ = "MIT"

# Public API exports
from qdcluster.config.constants import (
    PHYSICAL,
    DEVICE_DEFAULTS,
    LIMITS,
)

__all__ = [
    "__version__",
    "PHYSICAL",
    "DEVICE_DEFAULTS",
    "LIMITS",
]
