"""
Logging centralizado: un logger por módulo, resúmenes humanos a stderr
"""
import logging
import os
import sys
from typing import Optional

_LEVEL_COLORS = {
    'DEBUG': '\033[2m',
    'INFO': '\033[36m',
    'WARNING': '\033[33m',
    'ERROR': '\033[31m',
    'CRITICAL': '\033[1;31m',
}
_RESET = '\033[0m'

_HANDLER_NAME = 'qdcluster-stderr'


class _LevelFormatter(logging.Formatter):
    """Formatter con etiqueta de nivel opcionalmente coloreada"""

    def __init__(self, color: bool):
        super().__init__('%(levelname)s %(name)s: %(message)s')
        self.color = color

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        if not self.color:
            return text
        tag = _LEVEL_COLORS.get(record.levelname, '')
        return f"{tag}{text}{_RESET}" if tag else text


def color_enabled(stream=None) -> bool:
    """
    Decide si usar colores ANSI:
    1. NO_COLOR definido -> nunca
    2. stream no es TTY -> nunca
    """
    if 'NO_COLOR' in os.environ:
        return False
    stream = stream if stream is not None else sys.stderr
    return bool(getattr(stream, 'isatty', lambda: False)())


def configure_logging(level: Optional[str] = None, color: Optional[bool] = None) -> logging.Logger:
    """
    Instala el handler de stderr del paquete, sustituyendo el anterior.

    Args:
        level: Nivel ('DEBUG', 'INFO', ...). Por defecto QDCLUSTER_LOG_LEVEL o INFO
        color: Forzar colores; None = autodetección

    Returns:
        Logger raíz del paquete
    """
    root = logging.getLogger('qdcluster')
    level = (level or os.getenv('QDCLUSTER_LOG_LEVEL') or 'INFO').upper()
    root.setLevel(level)

    if color is None:
        color = color_enabled()

    # Se sustituye el handler previo: su stream puede estar ya cerrado
    for handler in list(root.handlers):
        if handler.get_name() == _HANDLER_NAME:
            root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(_HANDLER_NAME)
    handler.setFormatter(_LevelFormatter(color))
    root.addHandler(handler)
    return root


def get_logger(name: str) -> logging.Logger:
    """Logger hijo del paquete"""
    return logging.getLogger(name)
