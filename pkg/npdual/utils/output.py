"""Writers for the machine-readable report artifacts."""
import csv
import json
import math
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np


def to_jsonable(value: Any) -> Any:
    """Convert numpy arrays/scalars, dataclasses, enums and tuples into JSON friendly values."""
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))

    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}

    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]

    if isinstance(value, np.ndarray):
        return [to_jsonable(item) for item in value.tolist()]

    if isinstance(value, Enum):
        return value.name.lower()

    if isinstance(value, (np.bool_, bool)):
        return bool(value)

    if isinstance(value, (np.integer,)):
        return int(value)

    if isinstance(value, (np.floating, float)):
        value = float(value)
        # JSON has no infinity; the report format uses null
        if math.isinf(value) or math.isnan(value):
            return None
        return value

    return value


def write_json(path: Path, payload: Any) -> None:
    """Write a JSON document. Key order follows insertion order so identical inputs give identical bytes."""
    text = json.dumps(to_jsonable(payload), indent=2)
    Path(path).write_text(text + '\n', encoding='utf-8')


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Write a comma separated file with a header row."""
    with open(path, 'w', encoding='utf-8', newline='') as csv_fh:
        writer = csv.writer(csv_fh)
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_cell(item) for item in row])


def _cell(value: Any) -> Any:
    if isinstance(value, (np.floating, float)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return int(value)
    return value

