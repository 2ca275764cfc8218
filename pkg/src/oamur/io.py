"""Reading and writing wavefunction files.

Binary layout (all little-endian), 40-byte header then payload::

    offset  size  field
    0       8     magic  b"OAMURWF\\0"
    8       4     uint32 format version (1)
    12      4     uint32 nx
    16      4     uint32 ny
    20      4     uint32 reserved (0)
    24      8     float64 half_extent
    32      8     float64 hbar
    40      16*nx*ny  amplitudes as (re, im) float64 pairs, row-major, y outer

The JSON variant is an object with keys ``format`` ("oamur-wavefunction"),
``version``, ``nx``, ``ny``, ``half_extent``, ``hbar``, ``re`` and ``im``
(flat row-major lists).  It is meant for small grids.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import OamurError, StateFileError
from .gridstate import NORM_TOL, GridSpec, GridState

MAGIC = b"OAMURWF\x00"
VERSION = 1
HEADER = np.dtype([
    ("magic", "S8"), ("version", "<u4"), ("nx", "<u4"), ("ny", "<u4"),
    ("reserved", "<u4"), ("half_extent", "<f8"), ("hbar", "<f8"),
])
assert HEADER.itemsize == 40


def atomic_write(path, data: bytes | str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode("utf-8")
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def state_to_bytes(state: GridState) -> bytes:
    g = state.grid
    head = np.zeros((), dtype=HEADER)
    head["magic"] = MAGIC
    head["version"] = VERSION
    head["nx"], head["ny"] = g.nx, g.ny
    head["half_extent"] = g.half_extent
    head["hbar"] = state.hbar
    payload = state.amplitudes.astype("<c16", copy=False)
    return head.tobytes() + payload.tobytes(order="C")


def state_from_bytes(buf: bytes) -> GridState:
    if len(buf) < HEADER.itemsize:
        raise StateFileError("file shorter than the 40-byte header")
    head = np.frombuffer(buf, dtype=HEADER, count=1)[0]
    if bytes(head["magic"]).ljust(8, b"\x00") != MAGIC:
        raise StateFileError("bad magic; not an oamur wavefunction file")
    if int(head["version"]) != VERSION:
        raise StateFileError(f"unsupported version {int(head['version'])}")
    nx, ny = int(head["nx"]), int(head["ny"])
    expected = HEADER.itemsize + 16 * nx * ny
    if len(buf) != expected:
        raise StateFileError(f"payload size mismatch: {len(buf)} bytes, expected {expected}")
    try:
        grid = GridSpec(nx, ny, float(head["half_extent"]))
        amps = np.frombuffer(buf, dtype="<c16", offset=HEADER.itemsize).reshape(ny, nx)
        return GridState(grid, amps, float(head["hbar"]))
    except OamurError as exc:
        raise StateFileError(str(exc)) from exc


def state_to_json(state: GridState) -> str:
    g = state.grid
    a = state.amplitudes.ravel()
    doc = {
        "format": "oamur-wavefunction",
        "version": VERSION,
        "nx": g.nx,
        "ny": g.ny,
        "half_extent": g.half_extent,
        "hbar": state.hbar,
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }
    return json.dumps(doc)


def state_from_json(text: str) -> GridState:
    try:
        doc = json.loads(text)
        if doc.get("format") != "oamur-wavefunction":
            raise StateFileError("JSON document is not an oamur wavefunction")
        if doc.get("version") != VERSION:
            raise StateFileError(f"unsupported version {doc.get('version')!r}")
        nx, ny = int(doc["nx"]), int(doc["ny"])
        re = np.asarray(doc["re"], dtype=np.float64)
        im = np.asarray(doc["im"], dtype=np.float64)
        if re.size != nx * ny or im.size != nx * ny:
            raise StateFileError("amplitude list length does not match nx*ny")
        grid = GridSpec(nx, ny, float(doc["half_extent"]))
        return GridState(grid, (re + 1j * im).reshape(ny, nx), float(doc["hbar"]))
    except StateFileError:
        raise
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise StateFileError(f"malformed JSON wavefunction: {exc}") from exc


def save_state(state: GridState, path) -> None:
    """Write ``state``; a ``.json`` suffix selects the JSON variant."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        atomic_write(path, state_to_json(state))
    else:
        atomic_write(path, state_to_bytes(state))


def _checked(state: GridState) -> GridState:
    if abs(state.norm() - 1.0) > NORM_TOL:
        raise StateFileError(f"stored wavefunction is not normalized (norm {state.norm():.15g})")
    return state


def load_state(path) -> GridState:
    """Read a binary or JSON wavefunction; the stored state must be normalized."""
    path = Path(path)
    try:
        buf = path.read_bytes()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    if buf[:8] == MAGIC:
        return _checked(state_from_bytes(buf))
    if buf.lstrip()[:1] == b"{":
        try:
            text = buf.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise StateFileError("JSON wavefunction is not valid UTF-8") from exc
        return _checked(state_from_json(text))
    raise StateFileError(f"{path} is neither a binary nor a JSON wavefunction")
