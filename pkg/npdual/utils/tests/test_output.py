"""Tests for the report writers."""
import csv
import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from npdual.utils.output import to_jsonable, write_csv, write_json


class Colour(Enum):
    """Enum for conversion tests."""

    DARK_RED = 'dark red'


@dataclass
class Record:
    """Dataclass for conversion tests."""

    values: np.ndarray
    colour: Colour


def test_to_jsonable():
    """numpy values, enums and dataclasses become plain JSON values."""
    converted = to_jsonable(Record(values=np.array([1.0, np.inf]), colour=Colour.DARK_RED))
    assert converted == {'values': [1.0, None], 'colour': 'dark_red'}
    assert to_jsonable((np.int64(3), np.bool_(True))) == [3, True]

def test_write_json(tmp_path):
    """Key order follows insertion order."""
    path = tmp_path / 'report.json'
    write_json(path, {'b': np.float64(0.5), 'a': [np.int32(1)]})
    text = path.read_text(encoding='utf-8')
    assert text.index('"b"') < text.index('"a"')
    assert json.loads(text) == {'b': 0.5, 'a': [1]}

def test_write_csv(tmp_path):
    """Floats are written at full precision."""
    path = tmp_path / 'table.csv'
    write_csv(path, ['atom', 'value'], [('a', 1.0 / 3.0), ('b', np.float64(0.25))])
    with open(path, encoding='utf-8') as csv_fh:
        rows = list(csv.reader(csv_fh))
    assert rows == [['atom', 'value'], ['a', repr(1.0 / 3.0)], ['b', '0.25']]
