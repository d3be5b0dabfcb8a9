"""
Estados cluster / grafo

Convención de etiquetas: |0⟩ = (|−⟩ + |+⟩)/√2 y |1⟩ = (|−⟩ − |+⟩)/√2 son
autoestados de σˣ con autovalores +1 y −1 (nˣ = 1 y nˣ = 0). El gate de
cluster pone una fase −1 en cada par de qubits con ambas etiquetas a 0.

Estabilizadores en la base física: Kᵢ = (−σᵢᶻ) Π_{j∈N(i)} (−σⱼˣ).
En etiquetas σᶻ actúa como −X y σˣ como Z, así que Kᵢ es el generador
estándar X_i Π Z_j una vez que se intercambian las etiquetas 0 ↔ 1.

Ejemplo con 2 qubits: el estado generado es (−|00⟩ + |01⟩ + |10⟩ + |11⟩)/2,
con ⟨K₁⟩ = ⟨K₂⟩ = +1 y pureza reducida 1/2.
"""
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import FrozenSet, List, Sequence, Tuple, Union

import networkx as nx
import numpy as np
import pandas as pd

from qdcluster.analysis.dotmodel import GateSchedule
from qdcluster.analysis.dynamics import cluster_phases, u_cluster_gate
from qdcluster.config.constants import TOLERANCES
from qdcluster.core.errors import LayoutError, ScheduleError
from qdcluster.core.qsys import (
    SIGMA_X,
    SIGMA_Z,
    X_BASIS,
    HilbertLayout,
    StateVector,
    apply_qubit_op,
    apply_to_all_qubits,
    overlap,
)
from qdcluster.utils.helpers import bit_table

Edge = Tuple[int, int]


# ================================
# GRAFO DE INTERACCIÓN
# ================================

@dataclass(frozen=True)
class InteractionGraph:
    """Grafo simple sobre los vértices 1..n; aristas como pares (i, j) con i < j"""

    n_vertices: int
    edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self):
        if int(self.n_vertices) != self.n_vertices or self.n_vertices < 1:
            raise ValueError(f"n_vertices must be a positive integer, got {self.n_vertices}")
        normalized = set()
        for edge in self.edges:
            i, j = (int(v) for v in edge)
            if i == j:
                raise ValueError(f"self-loop on vertex {i}")
            if not (1 <= i <= self.n_vertices and 1 <= j <= self.n_vertices):
                raise ValueError(f"edge {edge} outside vertices 1..{self.n_vertices}")
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, 'edges', frozenset(normalized))

    @classmethod
    def complete(cls, n: int) -> 'InteractionGraph':
        return cls(n, frozenset((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))

    @classmethod
    def chain(cls, n: int) -> 'InteractionGraph':
        return cls(n, frozenset((i, i + 1) for i in range(1, n)))

    @classmethod
    def empty(cls, n: int) -> 'InteractionGraph':
        return cls(n)

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> 'InteractionGraph':
        """Reetiqueta los nodos (en orden) a 1..n"""
        nodes = sorted(graph.nodes)
        mapping = {node: position for position, node in enumerate(nodes, start=1)}
        return cls(len(nodes), frozenset((mapping[u], mapping[v]) for u, v in graph.edges))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(1, self.n_vertices + 1))
        graph.add_edges_from(self.sorted_edges)
        return graph

    @cached_property
    def nx_graph(self) -> nx.Graph:
        return self.to_networkx()

    @property
    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def neighbors(self, vertex: int) -> List[int]:
        if not 1 <= vertex <= self.n_vertices:
            raise LayoutError(f"vertex {vertex} outside 1..{self.n_vertices}")
        return sorted(self.nx_graph.neighbors(vertex))

    def adjacency(self) -> np.ndarray:
        """Matriz de adyacencia 0/1, fila i-1 para el vértice i"""
        nodes = list(range(1, self.n_vertices + 1))
        return nx.to_numpy_array(self.nx_graph, nodelist=nodes, dtype=np.int64)

    @property
    def tag(self) -> str:
        """'chain', 'complete', 'empty' o 'custom'"""
        if self == InteractionGraph.chain(self.n_vertices):
            return 'chain'
        if self == InteractionGraph.complete(self.n_vertices):
            return 'complete'
        if not self.edges:
            return 'empty'
        return 'custom'


def resolve_graph(graph: Union[str, InteractionGraph], n: int) -> InteractionGraph:
    """Acepta 'chain' / 'complete' / 'empty' o un InteractionGraph ya construido"""
    if isinstance(graph, InteractionGraph):
        if graph.n_vertices != n:
            raise LayoutError(f"graph has {graph.n_vertices} vertices, expected {n}")
        return graph
    builders = {
        'chain': InteractionGraph.chain,
        'complete': InteractionGraph.complete,
        'empty': InteractionGraph.empty,
    }
    if graph not in builders:
        raise ValueError(f"unknown graph {graph!r}; expected one of {sorted(builders)}")
    return builders[graph](n)


# ================================
# ESTADOS
# ================================

def from_label_amplitudes(amplitudes: np.ndarray, n_qubits: int) -> StateVector:
    """Amplitudes en la base de etiquetas σˣ -> StateVector en la base {|+⟩, |−⟩}"""
    layout = HilbertLayout(n_qubits, 0)
    return StateVector(layout, apply_to_all_qubits(amplitudes, n_qubits, X_BASIS))


def to_label_amplitudes(state: StateVector) -> np.ndarray:
    """Inversa de from_label_amplitudes"""
    return apply_to_all_qubits(state.amplitudes, state.layout.n_qubits, X_BASIS.conj().T)


def _require_qubits_only(state: StateVector):
    if state.layout.fock_cutoff != 0:
        raise LayoutError("expected a qubits-only state")


def initial_product_state(n_qubits: int) -> StateVector:
    """⊗ᵢ|−⟩ᵢ = 2^{−N/2} ⊗ᵢ(|0⟩ᵢ + |1⟩ᵢ)"""
    layout = HilbertLayout(n_qubits, 0)
    return StateVector.basis(layout, layout.dim - 1)


def generated_cluster_state(n_qubits: int, schedule: GateSchedule) -> StateVector:
    """
    Gate de cluster de la temporización aplicado al estado producto inicial.

    Args:
        n_qubits: Número de qubits
        schedule: Debe cumplir 4λτ = (2n+1)π

    Returns:
        Estado grafo del grafo completo
    """
    residual = schedule.residuals['four_lambda_tau']
    if residual > TOLERANCES['schedule_odd_phase']:
        raise ScheduleError(
            f"4*lambda*tau is not an odd multiple of pi (relative residual {residual:.2e})"
        )
    initial = initial_product_state(n_qubits)
    if n_qubits == 1:
        return initial
    return u_cluster_gate(n_qubits, schedule.lam, schedule.tau) @ initial


def graph_state(graph: InteractionGraph, phase: float = np.pi) -> StateVector:
    """exp(−i·phase Σ_{(i,j)∈E} nᵢˣnⱼˣ) sobre el estado producto"""
    if not np.isfinite(phase):
        raise ValueError("phase must be finite")
    n = graph.n_vertices
    occupied = 1 - bit_table(n).astype(np.int64)
    # pares ocupados por arista: ½ oᵀAo
    exponent = np.einsum('si,ij,sj->s', occupied, graph.adjacency(), occupied) // 2
    amplitudes = np.exp(-1j * phase * exponent) / np.sqrt(2.0 ** n)
    return from_label_amplitudes(amplitudes, n)


def complete_graph_amplitudes(n_qubits: int) -> np.ndarray:
    """Amplitudes en etiquetas σˣ del estado generado (grafo completo, fase π)"""
    return cluster_phases(n_qubits, np.pi) / np.sqrt(2.0 ** n_qubits)


# ================================
# LECTURAS DE LA FÓRMULA CERRADA
# ================================

class FormulaReading(Enum):
    """
    Lecturas de la expresión cerrada ⊗ᵢ(|0⟩ᵢ(−1)^{N−i} Π σˣ + |1⟩ᵢ)/√2,
    cuyo producto de operadores no indica sobre qué qubit actúa.
    """

    LITERAL = 'literal'
    LATER_ALL = 'later_all'
    CHAIN = 'chain'
    LATER_ALL_UNSIGNED = 'later_all_unsigned'

    @property
    def rule(self) -> str:
        return _READING_RULES[self]


_READING_RULES = {
    FormulaReading.LITERAL: (
        "product as printed: sigma^x_i acts on its own factor |0>_i, "
        "giving the product state (x)_i ((-1)^(N-i)|0>_i + |1>_i)"
    ),
    FormulaReading.LATER_ALL: (
        "product re-indexed to sigma^x_j for j = i+1..N, acting rightward on "
        "every later factor, with the sign (-1)^(N-i)"
    ),
    FormulaReading.CHAIN: (
        "product re-indexed to the nearest neighbour only (j = i+1), "
        "with the sign (-1)^(N-i)"
    ),
    FormulaReading.LATER_ALL_UNSIGNED: (
        "product re-indexed to sigma^x_j for j = i+1..N without the (-1)^(N-i) sign"
    ),
}


def _reading_targets(reading: FormulaReading, site: int, n: int) -> Sequence[int]:
    if reading in (FormulaReading.LATER_ALL, FormulaReading.LATER_ALL_UNSIGNED):
        return range(site + 1, n + 1)
    if reading is FormulaReading.CHAIN:
        return [site + 1] if site < n else []
    return []


def cluster_formula_state(n_qubits: int, reading: Union[str, FormulaReading]) -> StateVector:
    """
    Construye la expresión cerrada bajo una lectura concreta.

    En etiquetas, σⱼˣ vale (−1)^{p_j}, de modo que la amplitud de |p⟩ es el
    producto sobre los qubits con p_i = 0 del signo y de las σˣ que actúan
    sobre factores posteriores.
    """
    try:
        reading = FormulaReading(reading)
    except ValueError as exc:
        choices = [r.value for r in FormulaReading]
        raise ValueError(f"unknown reading {reading!r}; expected one of {choices}") from exc

    n = n_qubits
    labels = bit_table(n).astype(np.int64)
    parity = np.zeros(2 ** n, dtype=np.int64)
    for site in range(1, n + 1):
        active = labels[:, site - 1] == 0
        if reading is not FormulaReading.LATER_ALL_UNSIGNED:
            parity += active * (n - site)
        for target in _reading_targets(reading, site, n):
            parity += active * labels[:, target - 1]
    amplitudes = np.where(parity % 2 == 0, 1.0, -1.0) / np.sqrt(2.0 ** n)
    return from_label_amplitudes(amplitudes, n).normalize()


def formula_reading_table(n_qubits: int) -> pd.DataFrame:
    """Fidelidad de cada lectura frente al estado generado por el gate"""
    reference = from_label_amplitudes(complete_graph_amplitudes(n_qubits), n_qubits)
    rows = []
    for reading in FormulaReading:
        state = cluster_formula_state(n_qubits, reading)
        rows.append({
            'reading': reading.value,
            'rule': reading.rule,
            'fidelity_to_generated': state_fidelity(state, reference),
        })
    return pd.DataFrame(rows, columns=['reading', 'rule', 'fidelity_to_generated'])


# ================================
# VERIFICACIÓN
# ================================

def stabilizer_expectations(state: StateVector, graph: InteractionGraph) -> np.ndarray:
    """⟨Kᵢ⟩ para cada vértice, Kᵢ = (−σᵢᶻ) Π_{j∈N(i)} (−σⱼˣ)"""
    _require_qubits_only(state)
    if state.layout.n_qubits != graph.n_vertices:
        raise LayoutError(
            f"state has {state.layout.n_qubits} qubits, graph has {graph.n_vertices} vertices"
        )
    values = np.empty(graph.n_vertices, dtype=float)
    for vertex in range(1, graph.n_vertices + 1):
        image = apply_qubit_op(state, vertex, -SIGMA_Z)
        for neighbor in graph.neighbors(vertex):
            image = apply_qubit_op(image, neighbor, -SIGMA_X)
        values[vertex - 1] = overlap(state, image).real
    return values


def state_fidelity(a: StateVector, b: StateVector) -> float:
    """|⟨a|b⟩|²"""
    return float(min(abs(overlap(a, b)) ** 2, 1.0))


def graph_comparison(n_qubits: int, phase: float = np.pi) -> float:
    """Fidelidad entre los estados grafo de la cadena y del grafo completo"""
    chain = graph_state(InteractionGraph.chain(n_qubits), phase)
    complete = graph_state(InteractionGraph.complete(n_qubits), phase)
    return state_fidelity(chain, complete)
