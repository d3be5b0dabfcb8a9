"""
Punto de entrada de línea de comandos

Salida legible por máquina (JSON/CSV) a stdout o --out; resúmenes a stderr.
Códigos de salida: 0 ok, 1 error de uso/configuración/E-S, 2 presupuesto fallido.
"""
import argparse
import sys
from typing import Any, Dict, List, Optional

from qdcluster import __version__
from qdcluster.commands import COMMANDS
from qdcluster.config.constants import EXIT_CODES
from qdcluster.config.settings import RunConfig, parse_float, parse_override
from qdcluster.core.errors import QDClusterError
from qdcluster.utils.log import configure_logging, get_logger

logger = get_logger(__name__)

# Flag -> clave de configuración
_FLAG_KEYS = {
    'out': 'out',
    'seed': 'seed',
    'mc_samples': 'mc_samples',
    'sigma': 'sigma_rad',
    'n_range': 'n_range',
    'model': 'model',
    'graph': 'graph',
    'workers': 'workers',
    'unsafe_dims': 'unsafe_dims',
}


def _common_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument('--config', metavar='PATH', help='config file (key = value per line)')
    parent.add_argument('--out', metavar='PATH', help='write the report here instead of stdout')
    parent.add_argument('--seed', type=int, help='RNG seed')
    parent.add_argument('--mc-samples', type=int, help='Monte Carlo samples (0 = off for curves)')
    parent.add_argument('--sigma', type=parse_float, metavar='RAD', help="phase noise std, e.g. 0.023pi")
    parent.add_argument('--n-range', metavar='A..B', help='qubit counts for the fidelity curve')
    parent.add_argument('--model', choices=['bond_phase', 'widetext'])
    parent.add_argument('--graph', choices=['chain', 'complete'])
    parent.add_argument('--workers', type=int, help='worker processes for Monte Carlo')
    parent.add_argument('--unsafe-dims', action='store_true', default=None,
                        help='lift the size guard rails')
    parent.add_argument('--set', action='append', default=[], metavar='KEY=VALUE',
                        help='override any config key (repeatable)')
    parent.add_argument('--log-level', default=None, help='DEBUG, INFO, WARNING...')
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='qdcluster',
        description='One-step cluster states of double-dot qubits coupled to a resonator',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', required=True)
    parent = _common_options()
    helps = {
        'params': 'coupling, gate timing and decoherence budget (JSON)',
        'evolve': 'full dynamics vs effective gate (JSON)',
        'cluster': 'stabilizers and closed-form readings (JSON)',
        'fidelity-curve': 'fidelity vs N (CSV)',
        'montecarlo': 'sampled fidelity under phase noise (JSON)',
    }
    for name in COMMANDS:
        subparsers.add_parser(name, parents=[parent], help=helps[name])
    return parser


def collect_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Flags explícitos y --set; los flags ganan sobre --set"""
    overrides: Dict[str, Any] = {}
    for item in args.set:
        overrides.update(parse_override(item))
    for attribute, key in _FLAG_KEYS.items():
        value = getattr(args, attribute)
        if value is not None:
            overrides[key] = value
    return overrides


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)

    try:
        config = RunConfig.load(args.config, collect_overrides(args))
        return COMMANDS[args.command](config)
    except (QDClusterError, ValueError) as exc:
        logger.error("%s", exc)
    except OSError as exc:
        logger.error("I/O error: %s", exc)
    return EXIT_CODES['error']


if __name__ == '__main__':
    sys.exit(main())
