"""Reading state files and writing JSON documents"""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Optional, Union

import numpy as np
import orjson
from pydantic import BaseModel, ValidationError

from stellar.config import get_settings
from stellar.errors import StateFileError
from stellar.models.domain import MultiQubitState, SpinState
from stellar.models.schemas import MatrixFile, StateFile
from stellar.utils.normalization import complex_pairs, format_half, round_floats, twice

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-6

State = Union[SpinState, MultiQubitState]


def _read_json(path: str) -> object:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return orjson.loads(raw)
    except orjson.JSONDecodeError as exc:
        raise StateFileError(f"{path} is not valid JSON: {exc}") from exc


def load_state(path: str) -> State:
    """
    Load a StateFile document.

    Amplitudes whose norm is off by more than 1e-6 are renormalized with a warning.

    Raises:
        StateFileError: If the file is unreadable, not JSON, or violates the schema
    """
    try:
        document = StateFile.model_validate(_read_json(path))
    except ValidationError as exc:
        raise StateFileError(f"{path} is not a state file: {exc.errors()[0]['msg']}") from exc

    amps = document.amplitudes
    if document.kind == "spin":
        try:
            two_j = twice(document.J)
        except (ValueError, ZeroDivisionError) as exc:
            raise StateFileError(f"{path}: J = {document.J} is not a half-integer") from exc
        expected = two_j + 1
    else:
        expected = 2**document.N
    if len(amps) != expected:
        raise StateFileError(f"{path}: expected {expected} amplitudes, got {len(amps)}")

    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > NORM_TOLERANCE:
        logger.warning("%s has norm %.6g; renormalizing", path, norm)
    if document.kind == "spin":
        return SpinState(two_j=two_j, amps=amps)
    return MultiQubitState(n_qubits=document.N, amps=amps)


def load_matrix(path: str) -> np.ndarray:
    try:
        return MatrixFile.model_validate(_read_json(path)).matrix
    except ValidationError as exc:
        raise StateFileError(f"{path} is not a 2x2 matrix file: {exc.errors()[0]['msg']}") from exc


def state_document(state: State) -> StateFile:
    pairs = complex_pairs(state.amps)
    if isinstance(state, SpinState):
        return StateFile(kind="spin", J=format_half(state.two_j), amps=pairs)
    return StateFile(kind="qubits", N=state.n_qubits, amps=pairs)


def render(document: BaseModel) -> bytes:
    """Indented JSON with floats cut to the configured significant digits"""
    data = round_floats(document.model_dump(mode="json", exclude_none=True), get_settings().float_digits)
    return orjson.dumps(data, option=orjson.OPT_INDENT_2) + b"\n"


def write_document(document: BaseModel, out: Optional[str]) -> None:
    payload = render(document)
    if out is None or out == "-":
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
        return
    try:
        Path(out).write_bytes(payload)
    except OSError as exc:
        raise StateFileError(f"cannot write {out}: {exc.strerror or exc}") from exc
    logger.info("wrote %s", out)
