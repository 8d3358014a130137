"""Galerkin basis sin(m x) * P_j(y / ell) and fields expanded in it.

Every basis function vanishes on the hinged edges x = 0, pi, is C^2 on the
closed rectangle, and the x-factors are mutually orthogonal on (0, pi),
which makes the energy matrix exactly block diagonal over the sine mode.
The y-factors are Legendre polynomials mapped to (-ell, ell); the free-edge
conditions are natural for the weak form, so no boundary constraint is
needed in y.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre as npleg

from .config import PlateConfig
from .grid import QuadratureGrid, GridField


def _legendre_tables(y: np.ndarray, n_funcs: int, ell: float, max_deriv: int = 0):
    """Values (and y-derivatives up to max_deriv) of P_0..P_{n-1}(y/ell).

    Returns a list of (len(y), n_funcs) arrays, one per derivative order.
    """
    s = np.asarray(y, dtype=float) / ell
    tables = [np.empty((s.size, n_funcs)) for _ in range(max_deriv + 1)]
    for j in range(n_funcs):
        coeff = np.zeros(j + 1)
        coeff[j] = 1.0
        for d in range(max_deriv + 1):
            tables[d][:, j] = npleg.legval(s, npleg.legder(coeff, d) if d else coeff) / ell**d
    return tables


@dataclass(frozen=True)
class SpectralBasis:
    """Tensor basis sin(m x) * psi_j(y), flat index a = (m-1)*n_basis_y + j."""

    modes_x: np.ndarray      # sine wavenumbers 1..M
    y_degrees: np.ndarray    # polynomial degrees 0..J-1
    ell: float

    @classmethod
    def from_config(cls, cfg: PlateConfig) -> "SpectralBasis":
        return cls(
            modes_x=np.arange(1, cfg.n_modes_x + 1),
            y_degrees=np.arange(cfg.n_basis_y),
            ell=cfg.ell,
        )

    @property
    def n_modes_x(self) -> int:
        return self.modes_x.size

    @property
    def n_basis_y(self) -> int:
        return self.y_degrees.size

    @property
    def dimension(self) -> int:
        return self.n_modes_x * self.n_basis_y

    def flat_index(self, m: int, j: int) -> int:
        """Flat position of the function sin(m x) * psi_j, j being the degree."""
        if not (1 <= m <= self.n_modes_x and 0 <= j < self.n_basis_y):
            raise IndexError(f"mode (m={m}, j={j}) outside basis")
        return (m - 1) * self.n_basis_y + j

    def mode_of(self, a: int):
        """Inverse of flat_index."""
        m, j = divmod(int(a), self.n_basis_y)
        return m + 1, j

    def eval_matrix(self, points: np.ndarray, dx: int = 0, dy: int = 0) -> np.ndarray:
        """Basis values (dimension, n_points) at arbitrary points.

        dx, dy select the x- and y-derivative order (0, 1 or 2 each).
        """
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        ms = self.modes_x.astype(float)
        ang = np.outer(ms, pts[:, 0])
        if dx == 0:
            fx = np.sin(ang)
        elif dx == 1:
            fx = ms[:, None] * np.cos(ang)
        elif dx == 2:
            fx = -(ms[:, None] ** 2) * np.sin(ang)
        else:
            raise ValueError("dx must be 0, 1 or 2")
        fy = _legendre_tables(pts[:, 1], self.n_basis_y, self.ell, max_deriv=dy)[dy]
        return np.einsum("mk,kj->mjk", fx, fy).reshape(self.dimension, pts.shape[0])

    def grid_matrix(self, grid: QuadratureGrid, dx: int = 0, dy: int = 0) -> np.ndarray:
        """Basis values (dimension, n_nodes) on the tensor grid, x-major.

        Cached per (basis, grid, dx, dy); the optimization loop reuses it
        every sweep and concurrent multistart workers share it safely.
        """
        key = (id(self), id(grid), dx, dy)
        with _CACHE_LOCK:
            cached = _GRID_CACHE.get(key)
        if cached is not None and cached[0] is self and cached[1] is grid:
            return cached[2]
        ms = self.modes_x.astype(float)
        ang = np.outer(ms, grid.nodes_x)
        if dx == 0:
            fx = np.sin(ang)
        elif dx == 1:
            fx = ms[:, None] * np.cos(ang)
        elif dx == 2:
            fx = -(ms[:, None] ** 2) * np.sin(ang)
        else:
            raise ValueError("dx must be 0, 1 or 2")
        fy = _legendre_tables(grid.nodes_y, self.n_basis_y, self.ell, max_deriv=dy)[dy]
        mat = np.einsum("mi,kj->mjik", fx, fy).reshape(self.dimension, -1)
        with _CACHE_LOCK:
            _GRID_CACHE[key] = (self, grid, mat)
            while len(_GRID_CACHE) > 64:
                _GRID_CACHE.pop(next(iter(_GRID_CACHE)))
        return mat


_GRID_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def build_basis(cfg: PlateConfig) -> SpectralBasis:
    return SpectralBasis.from_config(cfg)


@dataclass(frozen=True)
class SpectralField:
    """A function in the Galerkin space, held as its coefficient vector."""

    basis: SpectralBasis
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if c.shape != (self.basis.dimension,):
            raise ValueError(
                f"coefficient vector has shape {c.shape}, expected ({self.basis.dimension},)"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients contain non-finite entries")
        object.__setattr__(self, "coefficients", c)


def evaluate(field: SpectralField, points: np.ndarray) -> np.ndarray:
    """Pointwise values sum_c c_mj sin(m x) psi_j(y)."""
    return field.coefficients @ field.basis.eval_matrix(points)


def evaluate_dx(field: SpectralField, points: np.ndarray) -> np.ndarray:
    """Pointwise x-derivative sum_c c_mj m cos(m x) psi_j(y)."""
    return field.coefficients @ field.basis.eval_matrix(points, dx=1)


def evaluate_dy(field: SpectralField, points: np.ndarray) -> np.ndarray:
    """Pointwise y-derivative sum_c c_mj sin(m x) psi_j'(y)."""
    return field.coefficients @ field.basis.eval_matrix(points, dy=1)


def evaluate_on_grid(field: SpectralField, grid: QuadratureGrid,
                     dx: int = 0, dy: int = 0) -> GridField:
    """Field (or a derivative) sampled at all quadrature nodes."""
    vals = field.coefficients @ field.basis.grid_matrix(grid, dx=dx, dy=dy)
    return GridField(grid, vals.reshape(grid.shape))
