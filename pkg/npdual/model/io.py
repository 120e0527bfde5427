"""Reading and writing the JSON problem file format."""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from npdual.logger.core import CoreLogger
from npdual.model.exceptions import (DimensionMismatch, InvalidReferenceMeasure,
                                     ProblemFormatError)
from npdual.model.model import (HypothesisFamily, ReferenceMeasure, Side,
                                TestingProblem)
from npdual.utils.constants import INGEST_SUM_TOL

logger = CoreLogger(component='model')

REQUIRED_FIELDS = ('atoms', 'R', 'null', 'alt', 'alpha')


def _number_list(data: Any, field: str, index: Optional[int] = None) -> List[float]:
    if not isinstance(data, list):
        raise ProblemFormatError(field=field, index=index, reason='expected an array of numbers')
    values = []
    for position, item in enumerate(data):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            where = f'{field}[{index}][{position}]' if index is not None else f'{field}[{position}]'
            raise ProblemFormatError(field=field, index=index, reason=f'{where} is not a number: {item!r}')
        values.append(float(item))
    return values


def _density_lists(data: Any, field: str) -> List[List[float]]:
    if not isinstance(data, list):
        raise ProblemFormatError(field=field, reason='expected an array of density arrays')
    return [_number_list(member, field, index) for index, member in enumerate(data)]


def _labels(data: Dict[str, Any], side: str) -> Optional[Tuple[str, ...]]:
    labels = data.get('labels')
    if labels is None:
        return None
    if not isinstance(labels, dict):
        raise ProblemFormatError(field='labels', reason='expected an object with "null" and/or "alt" arrays')
    side_labels = labels.get(side)
    if side_labels is None:
        return None
    if not isinstance(side_labels, list):
        raise ProblemFormatError(field=f'labels.{side}', reason='expected an array of strings')
    return tuple(str(label) for label in side_labels)


def problem_from_dict(data: Dict[str, Any]) -> TestingProblem:
    """Build a TestingProblem from the decoded JSON object.

    Atoms with zero reference weight are dropped (with a warning), together with their density
    entries. Reference weights within 1e-9 of summing to one are renormalized.

    Raises:
        ProblemFormatError: When a field is missing or has the wrong shape/type.
        ProblemValidationError: For zero/negative weights that can not be repaired.
    """
    if not isinstance(data, dict):
        raise ProblemFormatError(field='<root>', reason='problem file must contain a JSON object')

    for name in REQUIRED_FIELDS:
        if name not in data:
            raise ProblemFormatError(field=name, reason='required field is missing')

    atoms = data['atoms']
    if not isinstance(atoms, list):
        raise ProblemFormatError(field='atoms', reason='expected an array of labels')
    atoms = [str(atom) for atom in atoms]

    weights = np.array(_number_list(data['R'], 'R'))
    if weights.size != len(atoms):
        raise DimensionMismatch(field='R', reason=f'{weights.size} weights for {len(atoms)} atoms')

    null = _density_lists(data['null'], 'null')
    alt = _density_lists(data['alt'], 'alt')
    for field, members in (('null', null), ('alt', alt)):
        for index, member in enumerate(members):
            if len(member) != len(atoms):
                raise DimensionMismatch(field=field, index=index, reason=f'{len(member)} values for {len(atoms)} atoms')

    negative = np.flatnonzero(weights < 0.0)
    if negative.size:
        raise InvalidReferenceMeasure(field='R', index=int(negative[0]),
                                      reason=f'weight {weights[negative[0]]} must be > 0')

    keep = np.flatnonzero(weights > 0.0)
    if keep.size < len(atoms):
        dropped = [atoms[index] for index in range(len(atoms)) if weights[index] == 0.0]
        logger.warning(f'Dropping {len(dropped)} zero-weight atom(s): {", ".join(dropped)}')
        atoms = [atoms[index] for index in keep]
        weights = weights[keep]
        null = [[member[index] for index in keep] for member in null]
        alt = [[member[index] for index in keep] for member in alt]

    total = float(weights.sum())
    if keep.size and abs(total - 1.0) <= INGEST_SUM_TOL:
        weights = weights / total

    alpha = data['alpha']
    if isinstance(alpha, list):
        alpha = tuple(_number_list(alpha, 'alpha'))
    elif isinstance(alpha, bool) or not isinstance(alpha, (int, float)):
        raise ProblemFormatError(field='alpha', reason='expected a number or an array of numbers')

    generalized = data.get('generalized', False)
    if not isinstance(generalized, bool):
        raise ProblemFormatError(field='generalized', reason='expected true or false')

    reference = ReferenceMeasure(atoms=tuple(atoms), weights=weights)
    return TestingProblem(
        reference=reference,
        null_family=HypothesisFamily(members=tuple(null), side=Side.NULL, labels=_labels(data, 'null')),
        alt_family=HypothesisFamily(members=tuple(alt), side=Side.ALTERNATIVE, labels=_labels(data, 'alt')),
        alpha=alpha,
        generalized=generalized,
    )


def read_json(path: Union[str, Path]) -> Dict[str, Any]:
    """Decode a JSON file.

    Raises:
        OSError: When the file can not be read.
        ProblemFormatError: When the contents are not valid JSON.
    """
    text = Path(path).read_text(encoding='utf-8')
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(field='<json>', reason=f'line {exc.lineno} column {exc.colno}: {exc.msg}') from exc


def load_problem(path: Union[str, Path]) -> TestingProblem:
    """Read a problem file from disk (not yet validated)."""
    return problem_from_dict(read_json(path))


def problem_to_dict(problem: TestingProblem) -> Dict[str, Any]:
    """Inverse of problem_from_dict."""
    data: Dict[str, Any] = {
        'atoms': list(problem.atoms),
        'R': problem.reference.weights.tolist(),
        'null': problem.null_family.matrix.tolist(),
        'alt': problem.alt_family.matrix.tolist(),
        'alpha': list(problem.alpha) if isinstance(problem.alpha, tuple) else problem.alpha,
    }

    labels = {}
    if problem.null_family.labels is not None:
        labels['null'] = list(problem.null_family.labels)
    if problem.alt_family.labels is not None:
        labels['alt'] = list(problem.alt_family.labels)
    if labels:
        data['labels'] = labels

    if problem.generalized:
        data['generalized'] = True

    return data


def _atom_vector(data: Any, field: str, problem: TestingProblem, file_atoms: Sequence[str]) -> np.ndarray:
    """Map a per-atom candidate vector onto the canonical atom order.

    Accepts either an object keyed by atom label or an array in file order.
    """
    if isinstance(data, dict):
        missing = [atom for atom in problem.atoms if atom not in data]
        if missing:
            raise ProblemFormatError(field=field, reason=f'missing atoms: {", ".join(missing)}')
        entries = [data[atom] for atom in problem.atoms]
        for atom, item in zip(problem.atoms, entries):
            if isinstance(item, bool) or not isinstance(item, (int, float)):
                raise ProblemFormatError(field=field, reason=f'{field}[{atom!r}] is not a number: {item!r}')
        return np.array(entries, dtype=float)

    values = _number_list(data, field)
    if len(values) != len(file_atoms):
        raise DimensionMismatch(field=field, reason=f'{len(values)} values for {len(file_atoms)} atoms')
    by_label = dict(zip(file_atoms, values))
    return np.array([by_label[atom] for atom in problem.atoms])


def load_candidate(data: Dict[str, Any], problem: TestingProblem,
                   file_atoms: Sequence[str]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Read a candidate triple (phi, q, lambda) for certification.

    Args:
        data (Dict[str, Any]): Decoded JSON with fields "phi", "q" and "lambda"
        problem (TestingProblem): The validated problem the triple belongs to
        file_atoms (Sequence[str]): Atom labels in problem-file order (after zero-weight drops)
    """
    if not isinstance(data, dict):
        raise ProblemFormatError(field='candidate', reason='expected an object with "phi", "q" and "lambda"')
    for name in ('phi', 'q', 'lambda'):
        if name not in data:
            raise ProblemFormatError(field=name, reason='required field is missing')

    phi = _atom_vector(data['phi'], 'phi', problem, file_atoms)
    alt_weights = np.array(_number_list(data['q'], 'q'))
    prior = np.array(_number_list(data['lambda'], 'lambda'))

    if alt_weights.size != len(problem.alt_family):
        raise DimensionMismatch(field='q', reason=f'{alt_weights.size} weights for {len(problem.alt_family)} members')
    if prior.size != len(problem.null_family):
        raise DimensionMismatch(field='lambda', reason=f'{prior.size} weights for {len(problem.null_family)} members')

    return phi, alt_weights, prior
