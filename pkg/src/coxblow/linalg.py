"""Exact linear algebra over QQ and GF(p).

Elimination is delegated to a kernel module chosen at import time: the
compiled ``_ckernels`` extension when it is importable, otherwise the
pure-Python ``_pykernels``.  Set ``COXBLOW_PURE_PYTHON=1`` to force the
fallback.  Over the rationals rows are scaled to integers and reduced
fraction-free (Bareiss); over F_p a word-size modular kernel is used.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

from . import _pykernels
from .field import Field, canonical_scale

if os.environ.get("COXBLOW_PURE_PYTHON"):
    _kernels = _pykernels
else:
    try:
        from . import _ckernels as _kernels
    except ImportError:  # extension not built
        _kernels = _pykernels

BACKEND = "cython" if _kernels is not _pykernels else "python"


def available_backends() -> dict:
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out


@dataclass(frozen=True)
class ExactMatrix:
    """Sparse exact matrix: ``entries`` maps ``(row, col)`` to a nonzero scalar."""

    rows: int
    cols: int
    entries: Mapping[tuple[int, int], object] = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")
            if v:
                clean[(i, j)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    def to_rows(self) -> list[list]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def apply(self, vec: Sequence, fld: Field) -> list:
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        out = [0] * self.rows
        for (i, j), v in self.entries.items():
            out[i] += v * vec[j]
        return [fld.normalize(x) for x in out]


def _integer_rows(rows):
    out = []
    for r in rows:
        den = 1
        for v in r:
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
        out.append([int(v * den) for v in r] if den != 1 else [int(v) for v in r])
    return out


def rref(rows: Sequence[Sequence], ncols: int, fld: Field, kernels=None):
    """Nonzero rows of the reduced row echelon form and their pivot columns."""
    k = kernels or _kernels
    for r in rows:
        if len(r) != ncols:
            raise ValueError("vector length mismatch")
    if not rows or ncols == 0:
        return [], []
    if fld.characteristic == 0:
        red, pivots, det = k.rref_integer(_integer_rows(rows), ncols)
        norm = fld.normalize
        if det == 1:
            return [list(r) for r in red], pivots
        return [[norm(Fraction(v, det)) if v else 0 for v in r] for r in red], pivots
    p = fld.characteristic
    if k is not _pykernels and p >= getattr(k, "MODP_LIMIT", 0):
        k = _pykernels
    int_rows = [[fld.normalize(v) for v in r] for r in rows]
    return k.rref_modp(int_rows, ncols, p)


def kernel_basis(matrix: ExactMatrix | Sequence[Sequence], fld: Field, ncols: int | None = None,
                 kernels=None) -> list[list]:
    """Canonical basis of the right kernel.

    One vector per free column of the RREF, scaled to primitive integers with a
    positive leading entry (rationals) or to a monic leading entry (F_p).
    """
    if isinstance(matrix, ExactMatrix):
        rows, ncols = matrix.to_rows(), matrix.cols
    else:
        rows = [list(r) for r in matrix]
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for an empty row list")
            ncols = len(rows[0])
    red, pivots = rref(rows, ncols, fld, kernels)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            if row[f]:
                v[pc] = fld.normalize(-row[f])
        basis.append(canonical_scale(v, fld))
    return basis


def row_space_dim(vectors: Sequence[Sequence], fld: Field, kernels=None) -> int:
    if not vectors:
        return 0
    n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise ValueError("vector length mismatch")
    return len(rref(vectors, n, fld, kernels)[1])


def canonical_basis(vectors: Sequence[Sequence], ncols: int, fld: Field, kernels=None) -> list[list]:
    """Basis of the span in canonical form: RREF rows, each canonically scaled."""
    red, _ = rref(vectors, ncols, fld, kernels)
    return [canonical_scale(r, fld) for r in red]


def reduce_against(vectors: Sequence[Sequence], reduced: Sequence[Sequence], pivots: Sequence[int],
                   fld: Field) -> list[list]:
    """Eliminate the pivot columns of an RREF system from each vector."""
    norm = fld.normalize
    out = []
    for v in vectors:
        v = list(v)
        for row, pc in zip(reduced, pivots):
            c = v[pc]
            if c:
                v = [norm(a - c * b) if b else a for a, b in zip(v, row)]
        out.append(v)
    return out


def complement_basis(vectors: Sequence[Sequence], span: Sequence[Sequence], ncols: int, fld: Field,
                     kernels=None) -> list[list]:
    """Canonical basis for a complement of ``span`` inside ``span + vectors``.

    The vectors are reduced modulo the RREF of ``span`` and the remainders are
    row reduced, so the result depends only on the two subspaces.
    """
    red, pivots = rref(span, ncols, fld, kernels) if span else ([], [])
    rest = reduce_against(vectors, red, pivots, fld)
    rest = [r for r in rest if any(r)]
    if not rest:
        return []
    return canonical_basis(rest, ncols, fld, kernels)
