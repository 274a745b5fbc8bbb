"""Blow-up models: variable catalog, Picard grading, derivation data, weights.

A model describes the toric blow-up ``X'`` whose Cox ring is the polynomial
ring ``k[y_1..y_m, x_1..x_E]`` together with the additive group acting by
``y_j -> y_j + (sum_k lambda_k V[k][j]) z_j``, ``x_e -> x_e`` where
``z_j = prod_{e : j in S_e} x_e``.

Variables are indexed ``0..m-1`` for the ``y``'s and ``m..m+E-1`` for the
``x``'s.  Exceptional divisors are ordered by (size, lexicographic) for the
``M_{0,n}`` family and in input order for linear configurations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Sequence

from .field import Field, QQ
from .linalg import kernel_basis, row_space_dim
from .polynomial import Monomial, Polynomial, monomial


class ConfigError(ValueError):
    """An invalid configuration (wrong n, dependent block points, ...)."""


class ClassSyntaxError(ValueError):
    """A divisor-class expression that does not parse or names an unknown divisor."""


@dataclass(frozen=True, order=True)
class PicClass:
    """Integer vector ``dH*H + sum_e dE[e]*E_e``."""

    dH: int
    dE: tuple[int, ...]

    @classmethod
    def zero(cls, E: int) -> "PicClass":
        return cls(0, (0,) * E)

    @classmethod
    def hyperplane(cls, E: int) -> "PicClass":
        return cls(1, (0,) * E)

    @classmethod
    def exceptional(cls, E: int, e: int) -> "PicClass":
        dE = [0] * E
        dE[e] = 1
        return cls(0, tuple(dE))

    @classmethod
    def from_vector(cls, vec: Sequence[int]) -> "PicClass":
        return cls(int(vec[0]), tuple(int(v) for v in vec[1:]))

    def vector(self) -> tuple[int, ...]:
        return (self.dH,) + self.dE

    def _check(self, other: "PicClass"):
        if len(self.dE) != len(other.dE):
            raise ValueError("Picard classes of different rank")

    def __add__(self, other: "PicClass") -> "PicClass":
        self._check(other)
        return PicClass(self.dH + other.dH, tuple(a + b for a, b in zip(self.dE, other.dE)))

    def __sub__(self, other: "PicClass") -> "PicClass":
        self._check(other)
        return PicClass(self.dH - other.dH, tuple(a - b for a, b in zip(self.dE, other.dE)))

    def __neg__(self) -> "PicClass":
        return PicClass(-self.dH, tuple(-a for a in self.dE))

    def __mul__(self, k: int) -> "PicClass":
        return PicClass(k * self.dH, tuple(k * a for a in self.dE))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.dH == 0 and not any(self.dE)


@dataclass(frozen=True)
class ConfigSpec:
    """User-level description of a configuration.

    ``kind == "m0n"`` uses ``n``; ``kind == "linear"`` uses ``r`` and
    ``subspaces``, a list of blocks of spanning points with ``r + 1`` exact
    coordinates each.
    """

    kind: str
    n: int | None = None
    r: int | None = None
    subspaces: tuple = ()
    field: Field = QQ

    def __post_init__(self):
        if self.kind not in ("m0n", "linear"):
            raise ConfigError(f"unknown kind {self.kind!r} (expected 'm0n' or 'linear')")
        if self.kind == "linear":
            if self.r is None or isinstance(self.r, bool) or not isinstance(self.r, int) or self.r < 1:
                raise ConfigError("linear configurations need an integer ambient dimension r >= 1")
            blocks = []
            for i, block in enumerate(self.subspaces, 1):
                if not block:
                    raise ConfigError(f"subspace {i} has no spanning points")
                pts = []
                for k, pt in enumerate(block, 1):
                    if len(pt) != self.r + 1:
                        raise ConfigError(
                            f"subspace {i}, point {k}: expected {self.r + 1} coordinates, got {len(pt)}")
                    try:
                        pts.append(tuple(QQ.parse(v) for v in pt))
                    except (TypeError, ValueError) as exc:
                        raise ConfigError(f"subspace {i}, point {k}: {exc}") from None
                blocks.append(tuple(pts))
            if not blocks:
                raise ConfigError("linear configurations need at least one subspace")
            object.__setattr__(self, "subspaces", tuple(blocks))
        elif self.n is None or isinstance(self.n, bool) or not isinstance(self.n, int):
            raise ConfigError("m0n configurations need an integer n")


@dataclass(frozen=True)
class BlowupModel:
    kind: str
    field: Field
    m: int
    incidence: tuple[tuple[int, ...], ...]
    derivations: tuple[tuple, ...]
    labels: tuple[str, ...]
    n: int | None = None
    r: int | None = None
    points: tuple = dc_field(default=(), compare=False)

    # -- sizes ------------------------------------------------------------
    @property
    def E(self) -> int:
        return len(self.incidence)

    @property
    def t(self) -> int:
        return len(self.derivations)

    @property
    def nvars(self) -> int:
        return self.m + self.E

    @property
    def pic_rank(self) -> int:
        return 1 + self.E

    def y(self, j: int) -> int:
        """Catalog index of ``y_{j+1}``."""
        return j

    def x(self, e: int) -> int:
        """Catalog index of ``x_e`` (0-based exceptional index)."""
        return self.m + e

    # -- names ------------------------------------------------------------
    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(f"y{j + 1}" for j in range(self.m)) + tuple(f"x{lab}" for lab in self.labels)

    @cached_property
    def name_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def var_index(self, var) -> int:
        if isinstance(var, str):
            try:
                return self.name_index[var]
            except KeyError:
                raise KeyError(f"unknown variable {var!r}") from None
        if isinstance(var, bool) or not isinstance(var, int) or not 0 <= var < self.nvars:
            raise KeyError(f"unknown variable {var!r}")
        return var

    @cached_property
    def subset_index(self) -> dict[frozenset, int]:
        """m0n only: 1-based subset ``I`` -> exceptional index."""
        return {frozenset(j + 1 for j in s): e for e, s in enumerate(self.incidence)}

    # -- incidence-derived data ----------------------------------------------
    @cached_property
    def incidence_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(s) for s in self.incidence)

    @cached_property
    def avoiding(self) -> tuple[tuple[int, ...], ...]:
        """``avoiding[j]`` = exceptional indices ``e`` with ``j`` not in ``S_e``."""
        return tuple(tuple(e for e, s in enumerate(self.incidence_sets) if j not in s)
                     for j in range(self.m))

    @cached_property
    def z_exponents(self) -> tuple[Monomial, ...]:
        return tuple(monomial({self.x(e): 1 for e, s in enumerate(self.incidence_sets) if j in s})
                     for j in range(self.m))

    @cached_property
    def weights(self) -> tuple[int, ...]:
        E = self.E
        return tuple(E + 1 - len(self.avoiding[j]) for j in range(self.m)) + (1,) * E

    @cached_property
    def var_degrees(self) -> tuple[PicClass, ...]:
        E = self.E
        out = []
        for j in range(self.m):
            dE = [0] * E
            for e in self.avoiding[j]:
                dE[e] = -1
            out.append(PicClass(1, tuple(dE)))
        out.extend(PicClass.exceptional(E, e) for e in range(E))
        return tuple(out)

    @property
    def shift_class(self) -> PicClass:
        """Degree of every derivation: ``sum_e E_e - H``."""
        return PicClass(-1, (1,) * self.E)

    def class_weight(self, d: PicClass) -> int:
        return (self.E + 1) * d.dH + sum(d.dE)

    def z(self, j: int) -> Polynomial:
        return Polynomial.from_monomial(self.field, self.nvars, self.z_exponents[j])

    def var(self, v) -> Polynomial:
        return Polynomial.variable(self.field, self.nvars, self.var_index(v))

    def poly(self, text: str) -> Polynomial:
        from .polynomial import parse_polynomial

        return parse_polynomial(text, self.names, self.field)

    def fmt(self, f: Polynomial) -> str:
        return f.format(self.names)

    def with_field(self, fld: Field) -> "BlowupModel":
        """Rebuild the same configuration over another field."""
        if self.kind == "m0n":
            return build_m0n(self.n, fld)
        return build_linear(ConfigSpec("linear", r=self.r, subspaces=self.points, field=fld))

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "field": self.field.descriptor(),
            "m": self.m,
            "E": self.E,
            "t": self.t,
            "nvars": self.nvars,
            "pic_rank": self.pic_rank,
            "derivations": [[str(v) for v in row] for row in self.derivations],
            "incidence": [[j + 1 for j in s] for s in self.incidence],
            "weights": {name: w for name, w in zip(self.names, self.weights)},
            "shift_class": format_class(self.shift_class, self),
        }


def m0n_exceptional_count(n: int) -> int:
    return sum(comb(n - 1, k) for k in range(1, n - 3))


def build_m0n(n: int, fld: Field = QQ) -> BlowupModel:
    if isinstance(n, bool) or not isinstance(n, int) or n < 5:
        raise ConfigError(
            f"m0n requires n >= 5 (got {n!r}): for n <= 4 there are no subsets with 1 <= |I| <= n-4; "
            "M_{0,4} = P^1 is toric, describe it as a linear configuration instead (toric passthrough)")
    m = n - 1
    incidence = tuple(c for k in range(1, n - 3) for c in combinations(range(m), k))
    labels = tuple("{" + ",".join(str(j + 1) for j in s) + "}" for s in incidence)
    return BlowupModel("m0n", fld, m, incidence, ((1,) * m,), labels, n=n)


def build_linear(spec: ConfigSpec) -> BlowupModel:
    if spec.kind != "linear":
        raise ConfigError("build_linear needs a linear configuration")
    fld, r = spec.field, spec.r
    cols = []
    blocks = []
    for i, block in enumerate(spec.subspaces, 1):
        pts = []
        for k, pt in enumerate(block, 1):
            try:
                vec = [fld.normalize(v) for v in pt]
            except ZeroDivisionError as exc:
                raise ConfigError(f"subspace {i}, point {k}: {exc}") from None
            if not any(vec):
                raise ConfigError(f"subspace {i}, point {k} has all coordinates zero")
            pts.append(vec)
        if row_space_dim(pts, fld) != len(pts):
            raise ConfigError(
                f"subspace {i}: spanning points are linearly dependent, so its lift would meet "
                "the projection centre; give a basis of the subspace")
        blocks.append(tuple(range(len(cols), len(cols) + len(pts))))
        cols.extend(pts)
    n = len(cols)
    rank = row_space_dim(cols, fld)
    labels = tuple(str(i + 1) for i in range(len(blocks)))
    if n <= r + 1:
        if rank != n:
            raise ConfigError(
                "with at most r+1 points the points must be linearly independent to be moved to "
                "coordinate points (toric passthrough)")
        # Remaining r+1-n coordinates of P^r are y-variables lying in no block.
        return BlowupModel("linear", fld, r + 1, tuple(blocks), (), labels, r=r, points=spec.subspaces)
    if rank != r + 1:
        raise ConfigError(f"points span only a P^{rank - 1} inside P^{r}")
    a_rows = [[cols[j][i] for j in range(n)] for i in range(r + 1)]
    V = tuple(tuple(v) for v in kernel_basis(a_rows, fld, n))
    return BlowupModel("linear", fld, n, tuple(blocks), V, labels, r=r, points=spec.subspaces)


def build_model(spec: ConfigSpec) -> BlowupModel:
    if spec.kind == "m0n":
        return build_m0n(spec.n, spec.field)
    return build_linear(spec)


def point_matrix(model: BlowupModel) -> list[list]:
    """The ``(r+1) x n`` matrix whose columns are the spanning points (linear models)."""
    cols = [[model.field.normalize(v) for v in pt] for block in model.points for pt in block]
    return [[c[i] for c in cols] for i in range(model.r + 1)] if cols else []


def degree_of_variable(model: BlowupModel, var) -> PicClass:
    return model.var_degrees[model.var_index(var)]


def degree_of_monomial(model: BlowupModel, mono: Monomial) -> PicClass:
    dH = 0
    dE = [0] * model.E
    m = model.m
    avoiding = model.avoiding
    for v, k in mono:
        if v < m:
            dH += k
            for e in avoiding[v]:
                dE[e] -= k
        else:
            dE[v - m] += k
    return PicClass(dH, tuple(dE))


def monomial_weight(model: BlowupModel, mono: Monomial) -> int:
    w = model.weights
    return sum(w[v] * k for v, k in mono)


def homogeneous_degree(model: BlowupModel, f: Polynomial) -> PicClass | None:
    """Common degree of all terms, or ``None`` for zero / inhomogeneous input."""
    degs = {degree_of_monomial(model, m) for m in f.terms}
    return degs.pop() if len(degs) == 1 else None


# -- class expressions ------------------------------------------------------

_TERM = re.compile(r"([+-]?)(\d*)(H|E\{[^}]*\}|E\d+)")


def parse_class(text: str, model: BlowupModel) -> PicClass:
    """Parse ``"2H - E{1,2} + E{3}"`` (m0n) or ``"3H - E1 - E2"`` (linear)."""
    src = "".join(text.split())
    if not src:
        raise ClassSyntaxError("empty class expression")
    if src == "0":
        return PicClass.zero(model.E)
    dH = 0
    dE = [0] * model.E
    pos = 0
    while pos < len(src):
        mt = _TERM.match(src, pos)
        if mt is None or (pos > 0 and not mt.group(1)):
            raise ClassSyntaxError(f"syntax error at position {pos} in {text!r}")
        sign = -1 if mt.group(1) == "-" else 1
        coeff = sign * (int(mt.group(2)) if mt.group(2) else 1)
        atom = mt.group(3)
        if atom == "H":
            dH += coeff
        else:
            dE[_exceptional_from_atom(atom, model)] += coeff
        pos = mt.end()
    return PicClass(dH, tuple(dE))


def _exceptional_from_atom(atom: str, model: BlowupModel) -> int:
    if model.kind == "m0n":
        if not atom.startswith("E{"):
            raise ClassSyntaxError(f"m0n classes name exceptional divisors as E{{i,j,...}}, got {atom!r}")
        body = atom[2:-1]
        try:
            idx = [int(tok) for tok in body.split(",")]
        except ValueError:
            raise ClassSyntaxError(f"bad index list in {atom!r}") from None
        key = frozenset(idx)
        if len(key) != len(idx):
            raise ClassSyntaxError(f"repeated index in {atom!r}")
        e = model.subset_index.get(key)
        if e is None:
            raise ClassSyntaxError(
                f"{atom} is not an exceptional divisor: need a subset of [1..{model.m}] "
                f"with 1 <= |I| <= {model.n - 4}")
        return e
    if atom.startswith("E{"):
        raise ClassSyntaxError(f"linear models name exceptional divisors as E<i>, got {atom!r}")
    i = int(atom[1:])
    if not 1 <= i <= model.E:
        raise ClassSyntaxError(f"{atom} out of range (model has E1..E{model.E})")
    return i - 1


def format_class(d: PicClass, model: BlowupModel) -> str:
    parts = []
    atoms = [("H", d.dH)] + [(f"E{lab}", c) for lab, c in zip(model.labels, d.dE)]
    for atom, c in atoms:
        if not c:
            continue
        mag = abs(c)
        body = atom if mag == 1 else f"{mag}{atom}"
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"{'-' if c < 0 else '+'} {body}")
    return " ".join(parts) if parts else "0"
