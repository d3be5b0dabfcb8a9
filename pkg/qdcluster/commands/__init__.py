"""
Comandos del CLI
Un módulo por comando; cada uno recibe la RunConfig resuelta y devuelve el código de salida
"""
from .params import cmd_params
from .evolve import cmd_evolve
from .cluster import cmd_cluster
from .fidelity_curve import cmd_fidelity_curve
from .montecarlo import cmd_montecarlo

COMMANDS = {
    'params': cmd_params,
    'evolve': cmd_evolve,
    'cluster': cmd_cluster,
    'fidelity-curve': cmd_fidelity_curve,
    'montecarlo': cmd_montecarlo,
}

__all__ = [
    'COMMANDS',
    'cmd_params',
    'cmd_evolve',
    'cmd_cluster',
    'cmd_fidelity_curve',
    'cmd_montecarlo',
]
