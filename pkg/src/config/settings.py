"""
Toolkit configuration.

Values come from, in increasing priority: the defaults below, an optional flat
``key = value`` file (``--config FILE`` or ``$WRIGHT_TOOLKIT_CONFIG``), and CLI flags.
"""

import os
import logging
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Optional, Tuple

from algebra.errors import ConfigError, InvalidAlgebra, PolyParseError
from algebra.laurent_poly import Rational, format_rational, to_rational

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = 'WRIGHT_TOOLKIT_CONFIG'
OUTPUT_MODES = ('text', 'json')


def parse_rational_list(text: str) -> Tuple[Rational, ...]:
    """``"0,1,-2/3"`` -> rationals; an empty string gives an empty tuple"""
    items = [item.strip() for item in text.split(',') if item.strip()]
    return tuple(to_rational(item) for item in items)


@dataclass(frozen=True)
class Config:
    m: int = 3
    alphas: Tuple[Rational, ...] = (0, 1)
    alpha: Rational = 1
    t_degree_bound: int = 2
    d_max: int = 3
    coeff_degree_max: int = 2
    max_degree: int = 4
    slack: int = 0
    coefficients: Tuple[Rational, ...] = (-1, 0, 1)
    output: str = 'text'
    checkpoint_path: Optional[str] = None
    workers: int = 1
    chunk_size: int = 4096
    db_path: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, 'alphas', tuple(to_rational(a) for a in self.alphas))
        object.__setattr__(self, 'alpha', to_rational(self.alpha))
        object.__setattr__(self, 'coefficients', tuple(to_rational(c) for c in self.coefficients))

    def override(self, **values) -> 'Config':
        """Copy with every non-None value replaced"""
        changes = {key: value for key, value in values.items() if value is not None}
        return replace(self, **changes)

    def validate(self) -> 'Config':
        from models.wright_algebra import WrightAlgebra

        for name in ('t_degree_bound', 'd_max', 'max_degree', 'workers', 'chunk_size'):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ('coeff_degree_max', 'slack'):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.output not in OUTPUT_MODES:
            raise ConfigError(f"output must be one of {', '.join(OUTPUT_MODES)}, got {self.output!r}")
        if 0 not in self.coefficients:
            raise ConfigError("coefficients must contain 0")
        if not self.alpha:
            raise ConfigError("alpha must be nonzero")
        try:
            WrightAlgebra(self.m, self.alphas)
        except InvalidAlgebra as e:
            raise ConfigError(f"invalid algebra parameters: {e}") from e
        return self

    def to_dict(self) -> Dict[str, Any]:
        data = {}
        for item in fields(self):
            value = getattr(self, item.name)
            if isinstance(value, tuple):
                value = ','.join(format_rational(v) for v in value)
            elif item.name == 'alpha':
                value = format_rational(value)
            data[item.name] = value
        return data


_INT_KEYS = {'m', 't_degree_bound', 'd_max', 'coeff_degree_max', 'max_degree', 'slack', 'workers', 'chunk_size'}
_LIST_KEYS = {'alphas', 'coefficients'}
_TEXT_KEYS = {'output', 'checkpoint_path', 'db_path'}


def _convert(key: str, raw: str, source: str) -> Any:
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _LIST_KEYS:
            return parse_rational_list(raw)
        if key == 'alpha':
            return to_rational(raw)
        return raw
    except (ValueError, PolyParseError) as e:
        raise ConfigError(f"{source}: invalid value {raw!r} for {key}") from e


def parse_config_text(text: str, source: str = '<config>') -> Dict[str, Any]:
    """Parse ``key = value`` lines; ``#`` starts a comment"""
    values: Dict[str, Any] = {}
    known = _INT_KEYS | _LIST_KEYS | _TEXT_KEYS | {'alpha'}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f"{source}:{number}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split('=', 1))
        if key not in known:
            raise ConfigError(f"{source}:{number}: unknown key {key!r}")
        values[key] = _convert(key, raw, f"{source}:{number}")
    return values


def load_config(path: Optional[str] = None) -> Config:
    """
    Build the effective configuration before CLI overrides

    Args:
        path: Config file; falls back to ``$WRIGHT_TOOLKIT_CONFIG`` and then to defaults

    Returns:
        Config with file values applied
    """
    path = path or os.environ.get(CONFIG_ENV_VAR)
    config = Config(db_path=os.environ.get('DB_PATH'))
    if not path:
        return config
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    logger.debug(f"Loaded configuration from {path}")
    return config.override(**parse_config_text(text, path))
