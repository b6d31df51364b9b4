"""Matrix files: ``.bin`` (raw float64), ``.csv`` and ``.pgm`` (P2/P5).

Binary layout, all little-endian::

    b"RLAM" | u32 version = 1 | u64 rows | u64 cols | rows*cols float64, row-major
"""

import csv
import io
import os
import struct

import numpy as np

MAGIC = b"RLAM"
VERSION = 1
_HEADER = struct.Struct("<4sIQQ")
FORMATS = ("bin", "csv", "pgm")


class MatrixFormatError(ValueError):
    """A matrix file is malformed."""


def infer_format(path, fmt=None):
    if fmt is None:
        fmt = os.path.splitext(str(path))[1].lstrip(".").lower()
    if fmt not in FORMATS:
        raise MatrixFormatError(f"cannot tell the matrix format of {path!r}; use one of {FORMATS}")
    return fmt


def read_matrix(path, fmt=None):
    """Load a matrix; the format comes from the extension unless ``fmt`` is given."""
    fmt = infer_format(path, fmt)
    if fmt == "bin":
        return read_bin(path)
    if fmt == "csv":
        return read_csv(path)
    return read_pgm(path)[0]


def write_matrix(A, path, fmt=None, maxval=255):
    fmt = infer_format(path, fmt)
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {A.shape}")
    if fmt == "bin":
        write_bin(A, path)
    elif fmt == "csv":
        write_csv(A, path)
    else:
        write_pgm(A, path, maxval)


def _reject_nonfinite(A, path):
    bad = np.argwhere(~np.isfinite(A))
    if bad.size:
        i, j = bad[0]
        raise MatrixFormatError(f"{path}: non-finite value at row {i}, column {j}")


def read_bin(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise MatrixFormatError(f"{path}: truncated header ({len(raw)} bytes)")
    magic, version, rows, cols = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise MatrixFormatError(f"{path}: bad magic {magic!r} at offset 0")
    if version != VERSION:
        raise MatrixFormatError(f"{path}: unsupported version {version} at offset 4")
    expected = _HEADER.size + 8 * rows * cols
    if len(raw) != expected:
        raise MatrixFormatError(
            f"{path}: expected {expected} bytes for {rows}x{cols}, found {len(raw)}"
        )
    A = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size).reshape(rows, cols)
    A = A.astype(np.float64)
    _reject_nonfinite(A, path)
    return A


def write_bin(A, path):
    A = np.ascontiguousarray(A, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, A.shape[0], A.shape[1]))
        fh.write(A.tobytes())


def _numeric(cells):
    try:
        return [float(c) for c in cells]
    except ValueError:
        return None


def read_csv(path):
    """Numeric CSV with an optional single header row (any non-numeric first row)."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    data = []
    width = None
    for lineno, cells in enumerate(rows, 1):
        if not cells or all(not c.strip() for c in cells):
            continue
        vals = _numeric(cells)
        if vals is None:
            if lineno == 1:
                continue
            raise MatrixFormatError(f"{path}: line {lineno}: non-numeric cell")
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise MatrixFormatError(f"{path}: line {lineno}: expected {width} cells, found {len(vals)}")
        data.append(vals)
    if not data:
        raise MatrixFormatError(f"{path}: no numeric rows")
    A = np.array(data, dtype=np.float64)
    _reject_nonfinite(A, path)
    return A


def write_csv(A, path, header=None):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header is not None:
        w.writerow(header)
    for row in np.asarray(A, dtype=np.float64):
        w.writerow(["%.17g" % v for v in row])
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def _pgm_tokens(raw, count, start):
    """Read ``count`` whitespace-separated header tokens, skipping ``#`` comments."""
    tokens = []
    pos = start
    while len(tokens) < count:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        if pos >= len(raw):
            raise MatrixFormatError(f"truncated PGM header at offset {pos}")
        if raw[pos : pos + 1] == b"#":
            while pos < len(raw) and raw[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        end = pos
        while end < len(raw) and not raw[end : end + 1].isspace():
            end += 1
        tokens.append((raw[pos:end], pos))
        pos = end
    return tokens, pos


def read_pgm(path):
    """Load a P2 or P5 image as gray levels in [0, maxval].

    Returns
    -------
    (A, maxval)
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    magic = raw[:2]
    if magic not in (b"P2", b"P5"):
        raise MatrixFormatError(f"{path}: not a P2/P5 PGM (magic {magic!r} at offset 0)")
    tokens, pos = _pgm_tokens(raw, 3, 2)
    try:
        width, height, maxval = (int(t) for t, _ in tokens)
    except ValueError:
        bad = next((o for t, o in tokens if not t.isdigit()), 2)
        raise MatrixFormatError(f"{path}: malformed PGM header at offset {bad}") from None
    if width < 1 or height < 1 or not 0 < maxval <= 65535:
        raise MatrixFormatError(f"{path}: invalid PGM size {width}x{height} or maxval {maxval}")
    count = width * height
    if magic == b"P5":
        pos += 1  # single whitespace byte before the raster
        dtype = ">u1" if maxval < 256 else ">u2"
        need = count * np.dtype(dtype).itemsize
        if len(raw) - pos < need:
            raise MatrixFormatError(f"{path}: raster truncated at offset {len(raw)}")
        vals = np.frombuffer(raw, dtype=dtype, count=count, offset=pos)
    else:
        parts = _strip_comments(raw[pos:]).split()
        if len(parts) < count:
            raise MatrixFormatError(f"{path}: expected {count} gray levels, found {len(parts)}")
        try:
            vals = np.array([int(p) for p in parts[:count]])
        except ValueError:
            raise MatrixFormatError(f"{path}: non-integer gray level in raster") from None
    if vals.max(initial=0) > maxval:
        raise MatrixFormatError(f"{path}: gray level exceeds maxval {maxval}")
    return vals.reshape(height, width).astype(np.float64), maxval


def _strip_comments(body):
    return b"\n".join(line.split(b"#", 1)[0] for line in body.splitlines())


def write_pgm(A, path, maxval=255):
    """Write a binary PGM; values are rounded and clamped to [0, maxval]."""
    if not 0 < maxval <= 65535:
        raise ValueError(f"maxval must lie in (0, 65535], got {maxval}")
    A = np.clip(np.rint(np.asarray(A, dtype=np.float64)), 0, maxval)
    dtype = ">u1" if maxval < 256 else ">u2"
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n%d\n" % (A.shape[1], A.shape[0], maxval))
        fh.write(A.astype(dtype).tobytes())
