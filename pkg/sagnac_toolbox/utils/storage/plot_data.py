"""
Plain-text columnar tables from reports, one whitespace separated row per
point, '#'-prefixed header lines.
"""
from typing import Any, Dict, Iterable, List, Optional, Sequence

from sagnac_toolbox.constants import experiment_kinds
from sagnac_toolbox.utils.errors import InvalidArgumentError
from sagnac_toolbox.utils.storage.records_io import format_number


def _table(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> List[str]:
    lines = ['# ' + ' '.join(columns)]
    for row in rows:
        lines.append(' '.join('nan' if v is None else format_number(v) for v in row))
    return lines


def _fringe_lines(analysis: Dict[str, Any]) -> List[str]:
    lines = []
    for idx, fringe in enumerate(analysis['fringes']):
        if idx:
            lines.append('')
        lines.append(f'# fixed_hwp_deg {format_number(fringe["fixed_hwp"])}')
        lines.extend(_table(('hwp_deg', 'counts', 'fit'),
                            zip(fringe['hwp_deg'], fringe['counts'], fringe['fit_curve'])))
    return lines


def _hom_lines(analysis: Dict[str, Any]) -> List[str]:
    return _table(('gap_mm', 'counts', 'fit'),
                  zip(analysis['gap_mm'], analysis['counts'], analysis['fit_curve']))


def _chsh_lines(analysis: Dict[str, Any]) -> List[str]:
    return _table(('term', 'correlation', 'sign', 'total'),
                  zip(range(len(analysis['correlations'])), analysis['correlations'],
                      analysis['signs'], analysis['totals']))


def _tomography_lines(analysis: Dict[str, Any]) -> List[str]:
    density = analysis['density']
    return _table(('row', 'col', 're', 'im'),
                  ((r, c, density['re'][r][c], density['im'][r][c])
                   for r in range(len(density['re'])) for c in range(len(density['re'][r]))))


def _sweep_lines(analysis: Dict[str, Any]) -> List[str]:
    return _table(('sweep_value', 'visibility', 'sigma'),
                  ((p['sweep_value'], p['visibility'], p['sigma'])
                   for p in analysis['points']))


_RENDERERS = {
    experiment_kinds.FRINGE: _fringe_lines,
    experiment_kinds.HOM: _hom_lines,
    experiment_kinds.CHSH: _chsh_lines,
    experiment_kinds.TOMOGRAPHY: _tomography_lines,
    experiment_kinds.SWEEP_POWER: _sweep_lines,
    experiment_kinds.SWEEP_TEMPERATURE: _sweep_lines,
}


def render_plot_data(report: Dict[str, Any], kind: Optional[str] = None) -> str:
    """Plot-ready text for a report.

    Args:
        report: A run or analysis report.
        kind: Expected report kind, defaults to the report's own.

    Returns: The table text.
    """
    report_kind = report.get('kind')
    if kind is None:
        kind = report_kind
    if kind not in _RENDERERS:
        raise InvalidArgumentError('kind', f'must be one of {tuple(_RENDERERS)}, got {kind!r}')
    if report_kind != kind:
        raise InvalidArgumentError('kind', f'report is of kind {report_kind!r}, not {kind!r}')
    return '\n'.join(_RENDERERS[kind](report['analysis'])) + '\n'
