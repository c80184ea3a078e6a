"""
CSV storage of CountRecords.

Two schemas exist: analyzer records and HOM records, told apart by the
header. Sweep files prepend sweep_value and repeat columns.
"""
import re
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from sagnac_toolbox.detection.counting import CountRecord
from sagnac_toolbox.quantum.polarization_optics import AnalyzerSetting
from sagnac_toolbox.utils.errors import InvalidArgumentError, OutputError, ParseError
from sagnac_toolbox.utils.storage.atomic import atomic_write_text

RECORD_COLUMNS = ('setting_a_qwp', 'setting_a_hwp', 'setting_b_qwp', 'setting_b_hwp',
                  'duration_s', 'singles_a', 'singles_b', 'coincidences', 'seed')
HOM_COLUMNS = ('gap_mm', 'duration_s', 'singles_a', 'singles_b', 'coincidences', 'seed')
SWEEP_COLUMNS = ('sweep_value', 'repeat')


def format_number(value: Optional[float]) -> str:
    """repr of a float, integral values without the decimal point, None empty."""
    if value is None:
        return ''
    value = float(value)
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _record_row(record: CountRecord) -> Dict[str, str]:
    row = {
        'duration_s': format_number(record.duration),
        'singles_a': format_number(record.singles_a),
        'singles_b': format_number(record.singles_b),
        'coincidences': format_number(record.coincidences),
        'seed': str(int(record.rng_seed)),
    }
    if record.gap_position is not None:
        row['gap_mm'] = format_number(record.gap_position)
        return row
    for arm, setting in (('a', record.setting_a), ('b', record.setting_b)):
        row[f'setting_{arm}_qwp'] = format_number(setting.qwp_angle)
        row[f'setting_{arm}_hwp'] = format_number(setting.hwp_angle)
    return row


def records_to_csv(
    records: Sequence[CountRecord],
    sweep_values: Optional[Sequence[float]] = None,
    repeats: Optional[Sequence[int]] = None,
) -> str:
    """Render records as CSV text.

    Args:
        records: Records of one schema.
        sweep_values: Sweep value of each record, for sweep files.
        repeats: Repeat index of each record, for sweep files.

    Returns: The CSV text with a header line.
    """
    if not records:
        raise InvalidArgumentError('records', 'nothing to write')
    hom = records[0].gap_position is not None
    if any((r.gap_position is not None) != hom for r in records):
        raise InvalidArgumentError('records', 'cannot mix HOM and analyzer records')
    columns = list(HOM_COLUMNS if hom else RECORD_COLUMNS)
    rows = [_record_row(r) for r in records]
    if sweep_values is not None:
        columns = list(SWEEP_COLUMNS) + columns
        for row, value, repeat in zip(rows, sweep_values, repeats):
            row['sweep_value'] = format_number(value)
            row['repeat'] = str(int(repeat))
    return pd.DataFrame(rows, columns=columns).to_csv(index=False)


def write_records(path: str, records: Sequence[CountRecord], **kwargs) -> str:
    """Write records with write-then-rename. Returns the path."""
    atomic_write_text(path, records_to_csv(records, **kwargs))
    return path


def _parse_float(value, column: str, line: int, path: str, allow_empty: bool = False):
    if not isinstance(value, str):
        raise ParseError(line, f'missing value for {column}', path)
    if value.strip() == '':
        if allow_empty:
            return None
        raise ParseError(line, f'empty value for {column}', path)
    try:
        number = float(value)
    except ValueError:
        raise ParseError(line, f'cannot parse {column}={value!r} as a number', path)
    if not np.isfinite(number):
        raise ParseError(line, f'{column}={value!r} is not finite', path)
    return number


def _parse_seed(value, line: int, path: str) -> int:
    if not isinstance(value, str):
        raise ParseError(line, 'missing value for seed', path)
    if value.strip() == '':
        return 0
    try:
        return int(value)
    except ValueError:
        raise ParseError(line, f'cannot parse seed={value!r} as an integer', path)


def read_records(path: str, hom: Optional[bool] = None) -> List[CountRecord]:
    """Read a records CSV.

    Args:
        path: The file.
        hom: Require the HOM schema (True) or the analyzer schema (False).
            None accepts either.

    Returns: The records in file order.
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False,
                            skip_blank_lines=False)
    except FileNotFoundError as err:
        raise OutputError(f'Cannot find {path}.') from err
    except pd.errors.EmptyDataError as err:
        raise ParseError(1, 'file is empty', path) from err
    except pd.errors.ParserError as err:
        match = re.search(r'line (\d+)', str(err))
        raise ParseError(int(match.group(1)) if match else 0, str(err), path) from err
    columns = tuple(frame.columns)
    for prefix in ((), SWEEP_COLUMNS):
        if columns[len(prefix):] == HOM_COLUMNS:
            file_is_hom = True
            break
        if columns[len(prefix):] == RECORD_COLUMNS:
            file_is_hom = False
            break
    else:
        raise ParseError(1, f'unexpected columns {list(columns)}, expected '
                            f'{list(RECORD_COLUMNS)} or {list(HOM_COLUMNS)}', path)
    if hom is not None and hom != file_is_hom:
        expected = HOM_COLUMNS if hom else RECORD_COLUMNS
        raise ParseError(1, f'expected columns {list(expected)}', path)
    records = []
    for idx, row in enumerate(frame.to_dict('records')):
        line = idx + 2
        if all(isinstance(v, str) and v == '' for v in row.values()):
            raise ParseError(line, 'empty row', path)
        kwargs = dict(
            duration=_parse_float(row['duration_s'], 'duration_s', line, path),
            singles_a=_parse_float(row['singles_a'], 'singles_a', line, path),
            singles_b=_parse_float(row['singles_b'], 'singles_b', line, path),
            coincidences=_parse_float(row['coincidences'], 'coincidences', line, path),
            rng_seed=_parse_seed(row['seed'], line, path),
        )
        if file_is_hom:
            kwargs['setting_a'] = kwargs['setting_b'] = None
            kwargs['gap_position'] = _parse_float(row['gap_mm'], 'gap_mm', line, path)
        else:
            for arm in ('a', 'b'):
                qwp = _parse_float(row[f'setting_{arm}_qwp'], f'setting_{arm}_qwp',
                                   line, path, allow_empty=True)
                hwp = _parse_float(row[f'setting_{arm}_hwp'], f'setting_{arm}_hwp',
                                   line, path)
                kwargs[f'setting_{arm}'] = AnalyzerSetting(hwp_angle=hwp, qwp_angle=qwp)
        try:
            records.append(CountRecord(**kwargs))
        except InvalidArgumentError as err:
            raise ParseError(line, str(err), path) from err
    if not records:
        raise ParseError(2, 'no records', path)
    return records
