import pytest

from sagnac_toolbox.detection.counting import CountRecord
from sagnac_toolbox.quantum.polarization_optics import AnalyzerSetting
from sagnac_toolbox.utils.errors import InvalidArgumentError, OutputError, ParseError
from sagnac_toolbox.utils.storage.records_io import (
    RECORD_COLUMNS,
    format_number,
    read_records,
    records_to_csv,
    write_records,
)

HEADER = ','.join(RECORD_COLUMNS)


def _analyzer_records():
    return [
        CountRecord(AnalyzerSetting(0.0), AnalyzerSetting(22.5), 10.0, 23791.0, 116110.0,
                    1432.0, rng_seed=12345678901),
        CountRecord(AnalyzerSetting(11.25, 45.0), AnalyzerSetting(33.75, 0.0), 10.0,
                    2379.125, 11611.5, 0.1 + 0.2, rng_seed=7),
    ]


def _hom_records():
    return [CountRecord(None, None, 10.0, 2000.0, 9000.0, 1250.0, rng_seed=1,
                        gap_position=-0.01),
            CountRecord(None, None, 10.0, 2000.0, 9000.0, 60.0, rng_seed=2,
                        gap_position=0.0)]


def test_number_formatting():
    assert format_number(10.0) == '10'
    assert format_number(0.30000000000000004) == '0.30000000000000004'
    assert format_number(None) == ''


def test_analyzer_records_survive_a_file(tmp_path):
    path = str(tmp_path / 'counts.csv')
    records = _analyzer_records()
    write_records(path, records)
    assert read_records(path) == records
    assert read_records(path, hom=False) == records


def test_hom_records_survive_a_file(tmp_path):
    path = str(tmp_path / 'hom.csv')
    write_records(path, _hom_records())
    assert read_records(path, hom=True) == _hom_records()


def test_sweep_columns_are_prefixed(tmp_path):
    records = _analyzer_records()
    text = records_to_csv(records, sweep_values=[15.0, 30.0], repeats=[0, 1])
    assert text.splitlines()[0] == 'sweep_value,repeat,' + HEADER
    assert text.splitlines()[2].startswith('30,1,')
    path = tmp_path / 'sweep.csv'
    path.write_text(text)
    assert read_records(str(path)) == records


def test_schema_mismatch(tmp_path):
    path = str(tmp_path / 'hom.csv')
    write_records(path, _hom_records())
    with pytest.raises(ParseError) as err:
        read_records(path, hom=False)
    assert err.value.line == 1


def test_cannot_write_mixed_or_empty():
    with pytest.raises(InvalidArgumentError):
        records_to_csv(_analyzer_records() + _hom_records())
    with pytest.raises(InvalidArgumentError):
        records_to_csv([])


@pytest.mark.parametrize('rows, line, fragment', [
    ([',0,,22.5,10,100,100,5,1', ',0,,22.5,10,abc,100,5,1'], 3, 'singles_a'),
    ([',0,,22.5,10,100,100,5,1', ',0,,22.5,10,100,100,5,1,9'], 3, 'fields'),
    ([',0,,22.5,10,100,100,500,1'], 2, 'exceeds the singles'),
    ([',0,,22.5,10,100,100,inf,1'], 2, 'not finite'),
    ([',0,,22.5,10,100,100,5,x'], 2, 'seed'),
])
def test_bad_rows_report_their_line(tmp_path, rows, line, fragment):
    path = tmp_path / 'bad.csv'
    path.write_text('\n'.join([HEADER] + rows) + '\n')
    with pytest.raises(ParseError) as err:
        read_records(str(path))
    assert err.value.line == line
    assert fragment in str(err.value)


def test_bad_header(tmp_path):
    path = tmp_path / 'bad.csv'
    path.write_text('hwp,counts\n0,10\n')
    with pytest.raises(ParseError) as err:
        read_records(str(path))
    assert err.value.line == 1


def test_header_only(tmp_path):
    path = tmp_path / 'empty.csv'
    path.write_text(HEADER + '\n')
    with pytest.raises(ParseError):
        read_records(str(path))


def test_missing_file(tmp_path):
    with pytest.raises(OutputError):
        read_records(str(tmp_path / 'nowhere.csv'))
