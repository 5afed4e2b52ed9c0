"""Text and JSON-lines rendering for the command-line interface."""

import json
import sys
from typing import Any, Dict, Iterable, Optional, TextIO

from algebra.laurent_poly import LaurentPoly
from models.hirzebruch import HirzebruchClass


class Output:
    """Writes either plain text lines or one JSON object per line to ``stream``"""

    def __init__(self, mode: str = 'text', stream: Optional[TextIO] = None):
        self.mode = mode
        self.stream = stream if stream is not None else sys.stdout

    @property
    def json(self) -> bool:
        return self.mode == 'json'

    def emit(self, text: Iterable[str], data: Dict[str, Any]):
        if self.json:
            self.stream.write(json.dumps(data, sort_keys=True) + '\n')
        else:
            for line in text:
                self.stream.write(line + '\n')
        self.stream.flush()

    def error(self, name: str, message: str):
        self.emit([f"{name}: {message}"], {'error': name, 'message': message})


def bool_text(value: bool) -> str:
    return 'true' if value else 'false'


def class_text(c: HirzebruchClass) -> str:
    """``a*C0 + b*F`` with signs folded, e.g. ``-2*C0 - 3*F``"""
    parts = []
    for coeff, name in ((c.a, 'C0'), (c.b, 'F')):
        if coeff == 0:
            continue
        magnitude = '' if abs(coeff) == 1 else f"{abs(coeff)}*"
        if not parts:
            parts.append(('-' if coeff < 0 else '') + magnitude + name)
        else:
            parts.append((' - ' if coeff < 0 else ' + ') + magnitude + name)
    return ''.join(parts) or '0'


def class_data(c: HirzebruchClass) -> Dict[str, Any]:
    return {**c.to_dict(), 'text': class_text(c)}


def components_text(components: Dict[int, LaurentPoly]) -> Iterable[str]:
    return [f"{degree}: {poly.to_text()}" for degree, poly in components.items()]
