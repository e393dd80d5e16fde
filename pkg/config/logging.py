"""
Логирование: цветная консоль в stderr и JSON-файл с ротацией.

stdout занят строками результатов CLI, поэтому консольный обработчик
всегда пишет в stderr.
"""
import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional, Tuple

try:
    from pythonjsonlogger.json import JsonFormatter
except ImportError:  # python-json-logger < 3
    from pythonjsonlogger.jsonlogger import JsonFormatter

from config.settings import (
    ENABLE_JSON_LOGGING,
    JSON_LOG_FILE,
    LOG_BACKUP_COUNT,
    LOG_DATE_FORMAT,
    LOG_FORMAT,
    LOG_LEVEL,
    LOG_MAX_BYTES,
    LOG_ROTATION_ENABLED,
)

JSON_LOG_FIELDS = '%(asctime)s %(name)s %(levelname)s %(message)s'


class ColoredFormatter(logging.Formatter):
    """Строка лога с цветом уровня, эмодзи модуля и эмодзи события"""

    RESET = '\033[0m'
    DIM = '\033[2m'

    LEVELS = {
        'DEBUG': ('\033[36m', '🐛'),
        'INFO': ('\033[32m', '✓'),
        'WARNING': ('\033[33m', '⚠️'),
        'ERROR': ('\033[31m', '❌'),
        'CRITICAL': ('\033[35m', '🔥'),
    }

    # Порядок важен: 'dfvs' совпал бы и с hybrid_to_dfvs
    COMPONENT_EMOJIS: Tuple[Tuple[str, str], ...] = (
        ('io_formats', '📄'),
        ('phylo_core', '🌳'),
        ('tree_reduction', '✂️'),
        ('agreement_forest', '🌲'),
        ('network', '🕸️'),
        ('hybrid_to_dfvs', '🧬'),
        ('dfvs_to_hybrid', '🔀'),
        ('dfvs', '🔁'),
        ('oracles', '🔮'),
        ('corpus', '🎲'),
        ('cli', '🐍'),
    )

    # Ключевое слово в сообщении -> префикс
    EVENT_EMOJIS: Tuple[Tuple[Tuple[str, ...], str], ...] = (
        (('started', 'starting'), '✨'),
        (('reduced', 'reduction'), '✂️'),
        (('solved', 'optimum'), '🎯'),
        (('cycle',), '🔁'),
        (('error', 'failed'), '☠️'),
        (('finished', 'done'), '㊗️'),
    )

    def _component(self, name: str) -> str:
        return next((emoji for key, emoji in self.COMPONENT_EMOJIS if key in name), '📝')

    def _event(self, msg: str) -> str:
        lowered = msg.lower()
        for keywords, emoji in self.EVENT_EMOJIS:
            if any(word in lowered for word in keywords):
                return f"{emoji} {msg}"
        return msg

    def format(self, record):
        color, level_emoji = self.LEVELS.get(record.levelname, (self.RESET, ''))
        parts = record.name.split('.')
        short_name = f"{parts[0]}.{parts[-1]}" if len(parts) > 2 else record.name

        msg = self._event(record.getMessage())
        if record.levelno >= logging.ERROR:
            msg = f"{color}{msg}{self.RESET}"

        return (
            f"{self.DIM}{self.formatTime(record, self.datefmt)}{self.RESET} "
            f"{self._component(record.name)} {level_emoji} "
            f"{color}{self.DIM}{record.levelname:8s}{self.RESET} "
            f"{self.DIM}{short_name}{self.RESET} - {msg}"
        )


_logging_configured = False
_console_handler: Optional[logging.Handler] = None
_json_handler: Optional[logging.Handler] = None
_effective_level = LOG_LEVEL


def _console_formatter() -> logging.Formatter:
    # Цвет только для терминала; в файл или пайп пишем обычный формат
    if hasattr(sys.stderr, 'isatty') and sys.stderr.isatty():
        return ColoredFormatter(datefmt=LOG_DATE_FORMAT)
    return logging.Formatter(LOG_FORMAT, datefmt=LOG_DATE_FORMAT)


def _json_file_handler(path: str) -> logging.Handler:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    if LOG_ROTATION_ENABLED:
        handler: logging.Handler = RotatingFileHandler(
            path,
            maxBytes=LOG_MAX_BYTES,
            backupCount=LOG_BACKUP_COUNT,
            encoding='utf-8',
        )
    else:
        handler = logging.FileHandler(path, encoding='utf-8')
    handler.setFormatter(JsonFormatter(JSON_LOG_FIELDS, datefmt=LOG_DATE_FORMAT))
    return handler


def _apply_level(root: logging.Logger) -> None:
    root.setLevel(_effective_level)
    for handler in (_console_handler, _json_handler):
        if handler is not None:
            handler.setLevel(_effective_level)


def setup_logging(
    level: Optional[str] = None,
    json_logging: Optional[bool] = None,
    json_log_file: Optional[str] = None,
) -> logging.Logger:
    """
    Настройка корневого логгера. Идемпотентна: повторный вызов
    меняет уровень и может включить JSON-файл, если его ещё нет.
    json_logging=None берёт HYBRID_JSON_LOGGING из окружения.
    """
    global _logging_configured, _console_handler, _json_handler, _effective_level

    if level:
        _effective_level = level.upper()
    root_logger = logging.getLogger()

    if not _logging_configured:
        _console_handler = logging.StreamHandler(sys.stderr)
        _console_handler.setFormatter(_console_formatter())
        root_logger.addHandler(_console_handler)

        logging.getLogger("concurrent.futures").setLevel(logging.WARNING)

        # Уже созданные логгеры переводим на обработчики корня
        for logger_name in logging.root.manager.loggerDict:
            existing = logging.getLogger(logger_name)
            existing.handlers = []
            existing.propagate = True

        _logging_configured = True

    if json_logging is None:
        json_logging = ENABLE_JSON_LOGGING
    if json_logging and _json_handler is None:
        _json_handler = _json_file_handler(json_log_file or JSON_LOG_FILE)
        root_logger.addHandler(_json_handler)

    _apply_level(root_logger)
    return root_logger


def get_logger(name: str) -> logging.Logger:
    """Логгер модуля; уровень и обработчики берутся у корня"""
    logger = logging.getLogger(name)
    if _logging_configured:
        logger.handlers = []
        logger.propagate = True
        logger.setLevel(logging.NOTSET)
    return logger
