"""
Núcleo del espacio de Hilbert compuesto: N qubits ⊗ modo de Fock truncado

Convenciones:
- Ordenación: qubit 1 es el índice más lento, la cavidad el más rápido.
- Base de qubit: índice 0 -> |+⟩ (nivel superior), índice 1 -> |−⟩,
  de modo que σ⁺ = |+⟩⟨−| es la matriz con un único 1 en (0, 1).
- Layouts solo de qubits: fock_cutoff = 0.

Todos los objetos son inmutables tras su construcción.
"""
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg

from qdcluster.config.constants import LIMITS, TOLERANCES
from qdcluster.core.errors import (
    LayoutError,
    NumericalDegeneracyError,
    OperatorError,
)

# ================================
# MATRICES LOCALES
# ================================

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)   # |+⟩⟨−|
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |−⟩⟨+|
SIGMA_X = SIGMA_PLUS + SIGMA_MINUS
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Columnas: |0⟩ = (|−⟩ + |+⟩)/√2 (σˣ = +1) y |1⟩ = (|−⟩ − |+⟩)/√2 (σˣ = −1)
X_BASIS = np.array([[1, -1], [1, 1]], dtype=complex) / np.sqrt(2.0)

for _m in (IDENTITY2, SIGMA_PLUS, SIGMA_MINUS, SIGMA_X, SIGMA_Y, SIGMA_Z, X_BASIS):
    _m.setflags(write=False)


def annihilation(fock_cutoff: int) -> np.ndarray:
    """Operador a truncado: ⟨n−1|a|n⟩ = √n sobre {0..n_max}"""
    if fock_cutoff < 0:
        raise LayoutError(f"fock_cutoff must be >= 0, got {fock_cutoff}")
    return np.diag(np.sqrt(np.arange(1, fock_cutoff + 1, dtype=float)), k=1).astype(complex)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex, copy=True)
    array.setflags(write=False)
    return array


# ================================
# TIPOS
# ================================

@dataclass(frozen=True)
class HilbertLayout:
    """Forma del espacio compuesto: n_qubits qubits ⊗ Fock {0..fock_cutoff}"""

    n_qubits: int
    fock_cutoff: int = 0

    def __post_init__(self):
        if int(self.n_qubits) != self.n_qubits or self.n_qubits < 1:
            raise LayoutError(f"n_qubits must be a positive integer, got {self.n_qubits}")
        if int(self.fock_cutoff) != self.fock_cutoff or self.fock_cutoff < 0:
            raise LayoutError(f"fock_cutoff must be a non-negative integer, got {self.fock_cutoff}")
        # Comparación en enteros de Python: no hay desbordamiento posible
        if (2 ** int(self.n_qubits)) * (int(self.fock_cutoff) + 1) > LIMITS['max_dimension']:
            raise LayoutError(
                f"dimension 2^{self.n_qubits} x {self.fock_cutoff + 1} exceeds "
                f"{LIMITS['max_dimension']}"
            )

    @property
    def qubit_dim(self) -> int:
        return 2 ** self.n_qubits

    @property
    def cavity_dim(self) -> int:
        return self.fock_cutoff + 1

    @property
    def dim(self) -> int:
        return self.qubit_dim * self.cavity_dim

    @property
    def qubits_only(self) -> 'HilbertLayout':
        return HilbertLayout(self.n_qubits, 0)

    def index(self, qubit_bits: Sequence[int], photons: int = 0) -> int:
        """Índice plano de |b_1 ... b_N, n⟩ (b = 0 para |+⟩, 1 para |−⟩)"""
        if len(qubit_bits) != self.n_qubits:
            raise LayoutError("wrong number of qubit labels")
        if not 0 <= photons <= self.fock_cutoff:
            raise LayoutError(f"photon number {photons} outside 0..{self.fock_cutoff}")
        q = 0
        for bit in qubit_bits:
            q = 2 * q + int(bit)
        return q * self.cavity_dim + photons


@dataclass(frozen=True)
class StateVector:
    """Vector de amplitudes complejas sobre un HilbertLayout"""

    layout: HilbertLayout
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != self.layout.dim:
            raise LayoutError(f"expected {self.layout.dim} amplitudes, got {amps.shape[0]}")
        if not np.all(np.isfinite(amps)):
            raise OperatorError("non-finite amplitudes")
        object.__setattr__(self, 'amplitudes', _frozen(amps))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> 'StateVector':
        norm = self.norm
        if norm == 0.0:
            raise OperatorError("cannot normalize the zero vector")
        return StateVector(self.layout, self.amplitudes / norm)

    @classmethod
    def basis(cls, layout: HilbertLayout, index: int) -> 'StateVector':
        amps = np.zeros(layout.dim, dtype=complex)
        amps[index] = 1.0
        return cls(layout, amps)


@dataclass(frozen=True)
class LinOperator:
    """Matriz densa compleja cuadrada sobre un HilbertLayout"""

    layout: HilbertLayout
    matrix: np.ndarray = field(repr=False)
    hermitian_hint: bool = False

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        dim = self.layout.dim
        if mat.shape != (dim, dim):
            raise OperatorError(f"expected a {dim}x{dim} matrix, got shape {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise OperatorError("non-finite matrix entries")
        if self.hermitian_hint:
            scale = float(np.max(np.abs(mat))) if mat.size else 0.0
            asym = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
            if asym > TOLERANCES['validation'] * max(scale, 1e-300) and asym > 0.0:
                raise OperatorError(f"hermitian_hint set but max|M - M†| = {asym:.3e}")
        object.__setattr__(self, 'matrix', _frozen(mat))

    # Álgebra mínima: los resultados son nuevos objetos
    def __matmul__(self, other):
        if isinstance(other, LinOperator):
            _check_same_layout(self.layout, other.layout)
            return LinOperator(self.layout, self.matrix @ other.matrix)
        if isinstance(other, StateVector):
            _check_same_layout(self.layout, other.layout)
            return StateVector(self.layout, self.matrix @ other.amplitudes)
        return NotImplemented

    def __add__(self, other: 'LinOperator') -> 'LinOperator':
        _check_same_layout(self.layout, other.layout)
        return LinOperator(
            self.layout,
            self.matrix + other.matrix,
            hermitian_hint=self.hermitian_hint and other.hermitian_hint,
        )

    def scaled(self, factor: complex) -> 'LinOperator':
        hermitian = self.hermitian_hint and complex(factor).imag == 0.0
        return LinOperator(self.layout, factor * self.matrix, hermitian_hint=hermitian)

    def dagger(self) -> 'LinOperator':
        return LinOperator(self.layout, self.matrix.conj().T, hermitian_hint=self.hermitian_hint)

    def unitarity_error(self) -> float:
        """max|U†U − I|"""
        product = self.matrix.conj().T @ self.matrix
        return float(np.max(np.abs(product - np.eye(self.layout.dim))))

    @classmethod
    def identity(cls, layout: HilbertLayout) -> 'LinOperator':
        return cls(layout, np.eye(layout.dim, dtype=complex), hermitian_hint=True)

    @classmethod
    def zeros(cls, layout: HilbertLayout) -> 'LinOperator':
        return cls(layout, np.zeros((layout.dim, layout.dim), dtype=complex), hermitian_hint=True)


def _check_same_layout(a: HilbertLayout, b: HilbertLayout):
    if a != b:
        raise LayoutError(f"layout mismatch: {a} vs {b}")


def _is_hermitian(mat: np.ndarray, tol: float) -> bool:
    scale = max(float(np.max(np.abs(mat))), 1e-300)
    return float(np.max(np.abs(mat - mat.conj().T))) <= tol * scale


# ================================
# EMBEDDING
# ================================

def embed_qubit_op(layout: HilbertLayout, site: int, local: np.ndarray) -> LinOperator:
    """
    Coloca un operador 2×2 en el qubit `site` (1-based) con identidad en el resto.

    Args:
        layout: Layout compuesto
        site: Índice de qubit, 1 ≤ site ≤ n_qubits
        local: Matriz 2×2

    Returns:
        LinOperator de dimensión completa
    """
    local = np.asarray(local, dtype=complex)
    if local.shape != (2, 2):
        raise OperatorError(f"qubit operator must be 2x2, got shape {local.shape}")
    if not 1 <= site <= layout.n_qubits:
        raise LayoutError(f"site {site} outside 1..{layout.n_qubits}")

    before = np.eye(2 ** (site - 1), dtype=complex)
    after = np.eye(2 ** (layout.n_qubits - site) * layout.cavity_dim, dtype=complex)
    matrix = np.kron(np.kron(before, local), after)
    return LinOperator(layout, matrix, hermitian_hint=_is_hermitian(local, TOLERANCES['validation']))


def embed_cavity_op(layout: HilbertLayout, local: np.ndarray) -> LinOperator:
    """Identidad en todos los qubits ⊗ `local` en el factor de cavidad"""
    local = np.asarray(local, dtype=complex)
    if local.shape != (layout.cavity_dim, layout.cavity_dim):
        raise OperatorError(
            f"cavity operator must be {layout.cavity_dim}x{layout.cavity_dim}, got {local.shape}"
        )
    matrix = np.kron(np.eye(layout.qubit_dim, dtype=complex), local)
    return LinOperator(layout, matrix, hermitian_hint=_is_hermitian(local, TOLERANCES['validation']))


def collective_qubit_op(layout: HilbertLayout, local: np.ndarray) -> LinOperator:
    """Σᵢ local_i sobre todos los qubits"""
    total = np.zeros((layout.dim, layout.dim), dtype=complex)
    for site in range(1, layout.n_qubits + 1):
        total += embed_qubit_op(layout, site, local).matrix
    return LinOperator(layout, total, hermitian_hint=_is_hermitian(np.asarray(local), TOLERANCES['validation']))


def cavity_vacuum_projector(layout: HilbertLayout) -> LinOperator:
    """I_qubits ⊗ |0⟩⟨0|"""
    vacuum = np.zeros((layout.cavity_dim, layout.cavity_dim), dtype=complex)
    vacuum[0, 0] = 1.0
    return embed_cavity_op(layout, vacuum)


def extend_to_cavity(op: LinOperator, layout: HilbertLayout) -> LinOperator:
    """Operador de solo-qubits ⊗ I_cavidad"""
    if op.layout != layout.qubits_only:
        raise LayoutError("operator must live on the qubits-only layout of the target")
    matrix = np.kron(op.matrix, np.eye(layout.cavity_dim, dtype=complex))
    return LinOperator(layout, matrix, hermitian_hint=op.hermitian_hint)


# ================================
# EXPONENCIAL MATRICIAL
# ================================

def mat_exp(op: LinOperator, scale: complex) -> LinOperator:
    """
    exp(scale · M).

    Ruta hermítica (hermitian_hint): descomposición espectral con eigh.
    Ruta general: scaling-and-squaring con aproximante de Padé (scipy.linalg.expm).
    """
    scale = complex(scale)
    if not np.isfinite(scale.real) or not np.isfinite(scale.imag):
        raise OperatorError("non-finite scale")

    if op.hermitian_hint:
        try:
            eigenvalues, eigenvectors = linalg.eigh(op.matrix)
        except (linalg.LinAlgError, ValueError) as exc:
            raise NumericalDegeneracyError(f"eigendecomposition failed: {exc}") from exc
        phases = np.exp(scale * eigenvalues)
        matrix = (eigenvectors * phases[None, :]) @ eigenvectors.conj().T
    else:
        matrix = linalg.expm(scale * op.matrix)

    if not np.all(np.isfinite(matrix)):
        raise OperatorError("matrix exponential produced non-finite entries")
    hermitian = op.hermitian_hint and scale.imag == 0.0
    return LinOperator(op.layout, matrix, hermitian_hint=hermitian)


# ================================
# OVERLAPS Y MÉTRICAS
# ================================

def overlap(a: StateVector, b: StateVector) -> complex:
    """⟨a|b⟩ (argumento izquierdo conjugado)"""
    _check_same_layout(a.layout, b.layout)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def unitary_fidelity_up_to_phase(u: LinOperator, v: LinOperator, projector: LinOperator) -> float:
    """
    |Tr(P u† v P)| / d con d = rango de P.

    Invariante bajo fases globales de u y v, simétrica en (u, v).
    """
    _check_same_layout(u.layout, v.layout)
    _check_same_layout(u.layout, projector.layout)

    p = projector.matrix
    tol = TOLERANCES['projector']
    if float(np.max(np.abs(p @ p - p))) > tol or float(np.max(np.abs(p - p.conj().T))) > tol:
        raise OperatorError("projector is not an orthogonal projector (P² = P = P†)")
    rank = int(round(float(np.trace(p).real)))
    if rank == 0:
        raise OperatorError("projector has rank 0")

    value = abs(np.trace(p @ u.matrix.conj().T @ v.matrix @ p)) / rank
    return float(min(value, 1.0))


# ================================
# OPERACIONES LOCALES SOBRE ESTADOS (solo qubits)
# ================================

def apply_qubit_op(state: StateVector, site: int, local: np.ndarray) -> StateVector:
    """
    Aplica un operador 2×2 al qubit `site` sin construir la matriz completa.
    """
    layout = state.layout
    if not 1 <= site <= layout.n_qubits:
        raise LayoutError(f"site {site} outside 1..{layout.n_qubits}")
    local = np.asarray(local, dtype=complex)
    if local.shape != (2, 2):
        raise OperatorError("qubit operator must be 2x2")
    shape = (2 ** (site - 1), 2, 2 ** (layout.n_qubits - site) * layout.cavity_dim)
    tensor = state.amplitudes.reshape(shape)
    result = np.einsum('ab,ibj->iaj', local, tensor)
    return StateVector(layout, result.reshape(-1))


def apply_to_all_qubits(amplitudes: np.ndarray, n_qubits: int, local: np.ndarray) -> np.ndarray:
    """local^{⊗N} aplicado a un vector de 2^N amplitudes"""
    tensor = np.asarray(amplitudes, dtype=complex).reshape((2,) * n_qubits)
    local = np.asarray(local, dtype=complex)
    for axis in range(n_qubits):
        tensor = np.moveaxis(np.tensordot(local, tensor, axes=([1], [axis])), 0, axis)
    return tensor.reshape(-1)


def permute_qubits(state: StateVector, permutation: Sequence[int]) -> StateVector:
    """
    Reordena los qubits: el qubit i del resultado es el qubit permutation[i-1] del original.
    """
    layout = state.layout
    n = layout.n_qubits
    if sorted(permutation) != list(range(1, n + 1)):
        raise LayoutError(f"not a permutation of 1..{n}: {permutation}")
    tensor = state.amplitudes.reshape((2,) * n + (layout.cavity_dim,))
    axes = [p - 1 for p in permutation] + [n]
    return StateVector(layout, np.transpose(tensor, axes).reshape(-1))


def reduced_density_matrix(state: StateVector, keep: Sequence[int]) -> np.ndarray:
    """Matriz densidad reducida de los qubits `keep` (1-based), trazando el resto"""
    layout = state.layout
    n = layout.n_qubits
    keep = sorted(set(keep))
    if not keep or keep[0] < 1 or keep[-1] > n:
        raise LayoutError(f"invalid qubits to keep: {keep}")
    tensor = state.amplitudes.reshape((2,) * n + (layout.cavity_dim,))
    traced = [i for i in range(n + 1) if (i + 1) not in keep]
    order = [k - 1 for k in keep] + traced
    psi = np.transpose(tensor, order).reshape(2 ** len(keep), -1)
    return psi @ psi.conj().T


def purity(rho: np.ndarray) -> float:
    """Tr(ρ²)"""
    return float(np.real(np.trace(rho @ rho)))
