"""
Write-then-rename file output, so readers never see partial files.
"""
import json
import os
import tempfile
from typing import Any, Dict

from sagnac_toolbox.utils.errors import OutputError, ParseError


def atomic_write_text(path: str, text: str) -> None:
    """Write text to a temporary file next to path, then rename it over path.

    Args:
        path: Destination file. Its directory is created if missing.
        text: Contents.
    """
    directory = os.path.dirname(os.path.abspath(path))
    tmp_path = None
    try:
        os.makedirs(directory, exist_ok=True)
        with tempfile.NamedTemporaryFile('w', dir=directory, delete=False,
                                         suffix='.tmp', encoding='utf-8',
                                         newline='') as tmp:
            tmp_path = tmp.name
            tmp.write(text)
        os.replace(tmp_path, path)
    except OSError as err:
        if tmp_path is not None and os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise OutputError(f'Could not write {path}: {err}') from err


def dump_json(payload: Dict[str, Any]) -> str:
    """Canonical JSON text: sorted keys, indent 2, trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + '\n'


def write_json(path: str, payload: Dict[str, Any]) -> str:
    atomic_write_text(path, dump_json(payload))
    return path


def read_json(path: str) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError as err:
        raise OutputError(f'Cannot find {path}.') from err
    except json.JSONDecodeError as err:
        raise ParseError(err.lineno, err.msg, path) from err
