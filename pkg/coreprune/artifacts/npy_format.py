"""
NPY v1.0 reader / writer for dense float64 matrices.

Header parsing and emission go through ``numpy.lib.format``; this module
adds the validation and the error classes the CLI maps to exit codes.
Only little-endian '<f8' is produced; '<f4' input is promoted to float64.
"""
from __future__ import annotations

import logging
import os
from pathlib import Path

import numpy as np
import numpy.lib.format as npformat

from ..errors import BadMagic, TruncatedPayload, UnsupportedDtype

logger = logging.getLogger(__name__)

ACCEPTED_DTYPES: tuple[str, ...] = ("<f8", "<f4")


def read_array(path: str | Path) -> np.ndarray:
    """
    Load an NPY file as a C-contiguous float64 array.

    Raises:
        BadMagic: Missing "\\x93NUMPY" prefix, unknown version or broken header.
        UnsupportedDtype: Anything other than '<f8' / '<f4'.
        TruncatedPayload: Fewer payload bytes than the header promises.
    """
    path = Path(path)
    with open(path, "rb") as fh:
        prefix = fh.read(len(npformat.MAGIC_PREFIX))
        if prefix != npformat.MAGIC_PREFIX:
            raise BadMagic(f"{path}: not an NPY file (starts with {prefix[:6]!r})")
        version = tuple(fh.read(2))
        try:
            if version == (1, 0):
                shape, fortran_order, dtype = npformat.read_array_header_1_0(fh)
            elif version == (2, 0):
                shape, fortran_order, dtype = npformat.read_array_header_2_0(fh)
            else:
                raise BadMagic(f"{path}: unsupported NPY version {version}")
        except ValueError as exc:
            raise BadMagic(f"{path}: malformed NPY header ({exc})") from exc

        descr = npformat.dtype_to_descr(dtype)
        if descr not in ACCEPTED_DTYPES:
            raise UnsupportedDtype(f"{path}: dtype {descr!r} not in {ACCEPTED_DTYPES}")

        count = int(np.prod(shape, dtype=np.int64))
        expected = count * dtype.itemsize
        available = os.fstat(fh.fileno()).st_size - fh.tell()
        if available < expected:
            raise TruncatedPayload(f"{path}: payload has {available} of {expected} bytes")
        payload = fh.read(expected)

    order = "F" if fortran_order else "C"
    array = np.frombuffer(payload, dtype=dtype, count=count).reshape(shape, order=order)
    if descr == "<f4":
        logger.info("%s: promoting float32 payload to float64", path)
    return np.ascontiguousarray(array, dtype=np.float64)


def write_array(path: str | Path, matrix) -> Path:
    """Write ``matrix`` as NPY v1.0, '<f8', C order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    array = np.ascontiguousarray(matrix, dtype="<f8")
    with open(path, "wb") as fh:
        npformat.write_array(fh, array, version=(1, 0), allow_pickle=False)
    return path
