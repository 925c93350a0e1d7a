"""Grid data model for the weighted half-space geometry.

A GridSpec describes a uniform tensor grid on an axis-aligned box that is
symmetric in the last coordinate x_d about 0, with the thin plane
{x_d = 0} lying exactly on a grid plane.  ScalarField stores node values
only for x_d >= 0; the even reflection u(x', -t) = u(x', t) is applied at
query time, so the symmetry invariant cannot be broken by construction.

The Muckenhoupt weight |x_d|^(1-2s) is evaluated at cell centers
(x_d offset by h/2), never at nodes on the thin plane, which avoids the
singular (s > 1/2) and degenerate (s < 1/2) value at x_d = 0.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass

import numpy as np

from thinlab.errors import FieldFormatError, GeometryError, GridError

FBX1_MAGIC = "FBX1"
_HEADER_KEYS = ("dim", "n", "side_length", "s", "origin")


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on a box symmetric in x_d about 0.

    dim   : spatial dimension, 2 or 3 (x_d is the last coordinate)
    n     : cells per axis (power of two, >= 8); spacing h = side / n
    side  : box side length
    s     : fractional parameter in (0, 1) of the weight |x_d|^(1-2s)
    origin: coordinates of the box corner; origin[-1] = -side/2
    """

    dim: int
    n: int
    side: float
    s: float
    origin: tuple[float, ...]

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise GridError(f"dim must be 2 or 3, got {self.dim}")
        if self.n < 8 or (self.n & (self.n - 1)) != 0:
            raise GridError(
                f"n must be a power of two >= 8 (refinement ladder), got {self.n}"
            )
        if not (0.0 < self.s < 1.0):
            raise GridError(f"s must lie in (0, 1), got {self.s}")
        if not (np.isfinite(self.side) and self.side > 0):
            raise GridError(f"side_length must be positive, got {self.side}")
        if len(self.origin) != self.dim:
            raise GridError("origin must have one coordinate per axis")
        if abs(self.origin[-1] + self.side / 2) > 1e-12 * self.side:
            raise GridError("box must be symmetric in x_d: origin[-1] = -side/2")

    @property
    def h(self) -> float:
        return self.side / self.n

    @property
    def m(self) -> int:
        """Number of cells between the thin plane and the top face."""
        return self.n // 2

    def node_coords(self, axis: int) -> np.ndarray:
        """Node coordinates along a full axis (n + 1 values)."""
        return self.origin[axis] + self.h * np.arange(self.n + 1)

    def half_xd(self) -> np.ndarray:
        """x_d node coordinates of the stored half grid (0 .. side/2)."""
        return self.h * np.arange(self.m + 1)

    @property
    def half_shape(self) -> tuple[int, ...]:
        return (self.n + 1,) * (self.dim - 1) + (self.m + 1,)

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        """Boolean mask of points inside the closed box (with tolerance)."""
        pts = np.atleast_2d(points)
        lo = np.asarray(self.origin)
        hi = lo + self.side
        return np.all((pts >= lo - tol) & (pts <= hi + tol), axis=1)

    def ball_inside(self, center, r: float) -> bool:
        c = np.asarray(center, dtype=float)
        lo = np.asarray(self.origin)
        hi = lo + self.side
        return bool(np.all(c - r >= lo) and np.all(c + r <= hi))


def make_grid(dim: int, n: int, side_length: float, s: float) -> GridSpec:
    """Build a centered GridSpec; rejects invalid (dim, n, s)."""
    side = float(side_length)
    origin = tuple(-side / 2 for _ in range(dim))
    return GridSpec(dim=int(dim), n=int(n), side=side, s=float(s), origin=origin)


def weight_at(spec: GridSpec, cell_center_xd) -> np.ndarray | float:
    """Muckenhoupt weight |x_d|^(1-2s) at cell-center heights.

    Rejects x_d = 0: the weight is only ever sampled at cell centers,
    which are offset h/2 from the thin plane.
    """
    xd = np.asarray(cell_center_xd, dtype=float)
    if np.any(xd == 0.0):
        raise GridError("weight is undefined on the thin plane (x_d = 0)")
    w = np.abs(xd) ** (1.0 - 2.0 * spec.s)
    return float(w) if np.isscalar(cell_center_xd) else w


class ScalarField:
    """Node values on the half grid x_d >= 0 of a GridSpec.

    The array is made read-only; all operations on fields are pure, so
    concurrent reads are safe.  The full (reflected) array is materialized
    lazily for cell sweeps.
    """

    __slots__ = ("spec", "values", "_full")

    def __init__(self, spec: GridSpec, values: np.ndarray):
        values = np.ascontiguousarray(values, dtype=np.float64)
        if values.shape != spec.half_shape:
            raise GridError(
                f"values shape {values.shape} does not match half grid "
                f"{spec.half_shape}"
            )
        if not np.all(np.isfinite(values)):
            raise GridError("field values must all be finite")
        values.setflags(write=False)
        self.spec = spec
        self.values = values
        self._full = None

    @classmethod
    def sample(cls, spec: GridSpec, fn) -> "ScalarField":
        """Sample a callable fn(points) -> values on the half-grid nodes."""
        axes = [spec.node_coords(i) for i in range(spec.dim - 1)]
        axes.append(spec.half_xd())
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        vals = np.asarray(fn(pts), dtype=np.float64).reshape(spec.half_shape)
        return cls(spec, vals)

    def full_values(self) -> np.ndarray:
        """Node values over the full grid, reflected evenly in x_d."""
        if self._full is None:
            v = self.values
            below = v[..., :0:-1]  # x_d = m*h .. h, mirrored
            self._full = np.ascontiguousarray(
                np.concatenate([below, v], axis=-1)
            )
            self._full.setflags(write=False)
        return self._full

    def plane_values(self) -> np.ndarray:
        """Trace on the thin plane {x_d = 0}."""
        return self.values[..., 0]

    def interpolate(self, points) -> np.ndarray | float:
        return interpolate(self, points)

    def scaled(self, c: float) -> "ScalarField":
        return ScalarField(self.spec, c * self.values)


def interpolate(field: ScalarField, points) -> np.ndarray | float:
    """Multilinear interpolation; x_d < 0 handled by even reflection.

    Exact on fields that are multilinear per cell.  Points outside the box
    raise GeometryError (a 1e-9-relative tolerance absorbs round-off on
    the boundary).
    """
    spec = field.spec
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.shape[1] != spec.dim:
        raise GeometryError(f"points must have {spec.dim} coordinates")

    h = spec.h
    tol = 1e-9 * spec.side
    inside = spec.contains(pts, tol=tol)
    if not np.all(inside):
        bad = pts[~inside][0]
        raise GeometryError(f"point outside the grid box: {tuple(bad)}")

    # continuous index coordinates on the half grid
    idx = np.empty_like(pts)
    for ax in range(spec.dim - 1):
        idx[:, ax] = (pts[:, ax] - spec.origin[ax]) / h
    idx[:, -1] = np.abs(pts[:, -1]) / h

    caps = [spec.n] * (spec.dim - 1) + [spec.m]
    i0 = np.empty(idx.shape, dtype=np.intp)
    frac = np.empty_like(idx)
    for ax, cap in enumerate(caps):
        t = np.clip(idx[:, ax], 0.0, cap)
        base = np.minimum(t.astype(np.intp), cap - 1)
        i0[:, ax] = base
        frac[:, ax] = t - base

    v = field.values
    if spec.dim == 2:
        a, b = i0[:, 0], i0[:, 1]
        fa, fb = frac[:, 0], frac[:, 1]
        out = (
            v[a, b] * (1 - fa) * (1 - fb)
            + v[a + 1, b] * fa * (1 - fb)
            + v[a, b + 1] * (1 - fa) * fb
            + v[a + 1, b + 1] * fa * fb
        )
    else:
        a, b, c = i0[:, 0], i0[:, 1], i0[:, 2]
        fa, fb, fc = frac[:, 0], frac[:, 1], frac[:, 2]
        out = (
            v[a, b, c] * (1 - fa) * (1 - fb) * (1 - fc)
            + v[a + 1, b, c] * fa * (1 - fb) * (1 - fc)
            + v[a, b + 1, c] * (1 - fa) * fb * (1 - fc)
            + v[a, b, c + 1] * (1 - fa) * (1 - fb) * fc
            + v[a + 1, b + 1, c] * fa * fb * (1 - fc)
            + v[a + 1, b, c + 1] * fa * (1 - fb) * fc
            + v[a, b + 1, c + 1] * (1 - fa) * fb * fc
            + v[a + 1, b + 1, c + 1] * fa * fb * fc
        )
    return float(out[0]) if single else out


# ---------------------------------------------------------------------------
# FBX1 field files: text header, then little-endian float64 payload over the
# half grid in row-major order (x_d axis last, hence fastest-varying).
# Comment lines starting with '#' are allowed in the header.
# ---------------------------------------------------------------------------


def save_field(field: ScalarField, path, comments: tuple[str, ...] = ()) -> None:
    spec = field.spec
    head = io.StringIO()
    head.write(f"{FBX1_MAGIC}\n")
    for line in comments:
        head.write(f"# {line}\n")
    head.write(f"dim {spec.dim}\n")
    head.write(f"n {spec.n}\n")
    head.write(f"side_length {spec.side!r}\n")
    head.write(f"s {spec.s!r}\n")
    head.write("origin " + " ".join(repr(c) for c in spec.origin) + "\n")
    payload = field.values.astype("<f8").tobytes(order="C")
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(head.getvalue().encode("ascii"))
        fh.write(payload)
    os.replace(tmp, path)


def load_field(path) -> ScalarField:
    with open(path, "rb") as fh:
        magic = fh.readline().decode("ascii", errors="replace").strip()
        if magic != FBX1_MAGIC:
            raise FieldFormatError(f"bad magic {magic!r}, expected {FBX1_MAGIC!r}")
        fields: dict[str, str] = {}
        while len(fields) < len(_HEADER_KEYS):
            raw = fh.readline()
            if not raw:
                raise FieldFormatError("truncated header")
            line = raw.decode("ascii", errors="replace").strip()
            if not line or line.startswith("#"):
                continue
            key, _, rest = line.partition(" ")
            if key not in _HEADER_KEYS:
                raise FieldFormatError(f"unexpected header line {line!r}")
            if key in fields:
                raise FieldFormatError(f"duplicate header key {key!r}")
            fields[key] = rest.strip()
        try:
            dim = int(fields["dim"])
            n = int(fields["n"])
            side = float(fields["side_length"])
            s = float(fields["s"])
            origin = tuple(float(tok) for tok in fields["origin"].split())
        except ValueError as exc:
            raise FieldFormatError(f"unparseable header value: {exc}") from exc
        try:
            spec = GridSpec(dim=dim, n=n, side=side, s=s, origin=origin)
        except GridError as exc:
            raise FieldFormatError(f"invalid header: {exc}") from exc
        payload = fh.read()
    count = int(np.prod(spec.half_shape))
    expected = count * 8
    if len(payload) != expected:
        raise FieldFormatError(
            f"payload has {len(payload)} bytes, expected {expected} "
            f"({count} float64 values)"
        )
    values = np.frombuffer(payload, dtype="<f8").reshape(spec.half_shape)
    if not np.all(np.isfinite(values)):
        raise FieldFormatError("payload contains non-finite values")
    return ScalarField(spec, values.copy())


def export_csv(field: ScalarField, path, comments: tuple[str, ...] = ()) -> None:
    """CSV export for 2D fields: one 'x1,x_d,value' line per full-grid node."""
    spec = field.spec
    if spec.dim != 2:
        raise GridError("CSV export is defined for 2D fields only")
    x1 = spec.node_coords(0)
    xd = spec.node_coords(1)
    full = field.full_values()
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="ascii") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write("x1,x_d,value\n")
        for i in range(spec.n + 1):
            for j in range(spec.n + 1):
                fh.write(f"{x1[i]!r},{xd[j]!r},{full[i, j]!r}\n")
    os.replace(tmp, path)
