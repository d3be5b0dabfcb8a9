"""
Comando montecarlo: fidelidad muestreada para ambos modelos de ruido
"""
import time

from qdcluster.analysis.noise import (
    NoiseModel,
    fidelity_monte_carlo,
    fidelity_transfer_matrix,
)
from qdcluster.commands.common import build_noise, emit_report
from qdcluster.config.constants import EXIT_CODES, LIMITS
from qdcluster.config.settings import RunConfig
from qdcluster.utils.log import get_logger

logger = get_logger(__name__)

# Muestras si mc_samples = 0
DEFAULT_SAMPLES = 20000


def cmd_montecarlo(config: RunConfig) -> int:
    """
    Monte Carlo con el modelo configurado y, si cabe, con el otro modelo al
    mismo σ para compararlos. Determinista por semilla salvo wall_clock_s.
    """
    started = time.perf_counter()
    n_qubits = config['n_qubits']
    samples = config['mc_samples'] or DEFAULT_SAMPLES
    noise = build_noise(config).matched(config['sigma_rad'])
    model = NoiseModel(config['model'])
    graph = config['graph']

    def run(which: NoiseModel):
        return fidelity_monte_carlo(n_qubits, noise, which, graph, samples, config['seed'],
                                    batches=config['mc_batches'], workers=config['workers'])

    primary = run(model)
    result = {'fidelity': primary.as_dict()}

    other = NoiseModel.WIDETEXT if model is NoiseModel.BOND_PHASE else NoiseModel.BOND_PHASE
    if n_qubits <= LIMITS['max_qubits_bruteforce']:
        result['comparison'] = {other.value: run(other).as_dict()}
    if graph == 'chain' and n_qubits >= 2:
        result['transfer_matrix'] = fidelity_transfer_matrix(n_qubits, noise.sigma).value
    result['wall_clock_s'] = time.perf_counter() - started
    emit_report('montecarlo', config, result)

    logger.info("N=%d %s/%s: F=%.6f +- %.2e (%d samples)", n_qubits, model.value, graph,
                primary.value, primary.mc_stderr, samples)
    return EXIT_CODES['ok']
