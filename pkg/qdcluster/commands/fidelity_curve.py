"""
Comando fidelity-curve: tabla F(N) en CSV
"""
import io
from pathlib import Path

from qdcluster.analysis.noise import fidelity_curve
from qdcluster.commands.common import write_output
from qdcluster.config.constants import EXIT_CODES
from qdcluster.config.settings import RunConfig
from qdcluster.utils.helpers import parse_range
from qdcluster.utils.log import get_logger

logger = get_logger(__name__)


def curve_csv(config: RunConfig) -> str:
    """CSV con cabecera N,sigma_rad,F_transfer,F_bruteforce,F_mc,mc_stderr"""
    start, stop = parse_range(config['n_range'])
    frame = fidelity_curve(
        range(start, stop + 1),
        config['sigma_rad'],
        mc_samples=config['mc_samples'],
        rng_seed=config['seed'],
        workers=config['workers'],
    )
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, na_rep='', lineterminator='\n')
    if stop >= 30 >= start:
        logger.info("F(N=30) = %.6f", float(frame.loc[frame['N'] == 30, 'F_transfer'].iloc[0]))
    return buffer.getvalue()


def cmd_fidelity_curve(config: RunConfig) -> int:
    """
    Escribe el CSV en --out o stdout. Con --out, la configuración resuelta
    se guarda al lado como <out>.config, en formato de --config.
    """
    text = curve_csv(config)
    out = config['out']
    write_output(text, out)
    if out:
        Path(f"{out}.config").write_text(config.to_text(), encoding='utf-8')
    else:
        logger.debug("resolved config:\n%s", config.to_text())
    logger.info("fidelity curve: %d rows", text.count('\n') - 1)
    return EXIT_CODES['ok']
