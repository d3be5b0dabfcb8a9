"""
Comando cluster: estabilizadores, lecturas de la fórmula cerrada y cadena
frente a grafo completo
"""
from qdcluster.analysis.cluster import (
    InteractionGraph,
    formula_reading_table,
    generated_cluster_state,
    graph_comparison,
    stabilizer_expectations,
)
from qdcluster.commands.common import build_schedule, check_guard, emit_report
from qdcluster.config.constants import EXIT_CODES
from qdcluster.config.settings import RunConfig
from qdcluster.core.qsys import purity, reduced_density_matrix
from qdcluster.utils.log import get_logger

logger = get_logger(__name__)


def cmd_cluster(config: RunConfig) -> int:
    n_qubits = config['n_qubits']
    check_guard(config, 'n_qubits', n_qubits, 'max_qubits_cluster')

    schedule = build_schedule(config)
    state = generated_cluster_state(n_qubits, schedule)
    graph = InteractionGraph.complete(n_qubits)
    expectations = stabilizer_expectations(state, graph)
    table = formula_reading_table(n_qubits)

    result = {
        'n_qubits': n_qubits,
        'edges': len(graph.edges),
        'stabilizer_expectations': expectations,
        'min_stabilizer_expectation': float(expectations.min()),
        'single_qubit_purity': purity(reduced_density_matrix(state, [1])),
        'formula_readings': table.to_dict(orient='records'),
        'chain_vs_complete_fidelity': graph_comparison(n_qubits),
    }
    emit_report('cluster', config, result)

    best = table.loc[table['fidelity_to_generated'].idxmax()]
    logger.info("N=%d: min stabilizer %.12f, best closed-form reading %s (F=%.6f)",
                n_qubits, result['min_stabilizer_expectation'], best['reading'],
                best['fidelity_to_generated'])
    return EXIT_CODES['ok']
