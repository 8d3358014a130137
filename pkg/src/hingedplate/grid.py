"""Tensor Gauss-Legendre quadrature grid and node-sampled fields."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import PlateConfig


def _gauss_nodes(n: int, lo: float, hi: float):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (hi - lo) * x + 0.5 * (hi + lo), 0.5 * (hi - lo) * w


@dataclass(frozen=True)
class QuadratureGrid:
    """Gauss-Legendre tensor grid on (0, pi) x (-ell, ell).

    Nodes are open-interval (no boundary points) and symmetric under the
    reflections x -> pi - x and y -> -y; the tensor weight of node (i, k)
    is weights_x[i] * weights_y[k].
    """

    nodes_x: np.ndarray
    weights_x: np.ndarray
    nodes_y: np.ndarray
    weights_y: np.ndarray
    ell: float

    @classmethod
    def from_config(cls, cfg: PlateConfig) -> "QuadratureGrid":
        nx, wx = _gauss_nodes(cfg.n_quad_x, 0.0, np.pi)
        ny, wy = _gauss_nodes(cfg.n_quad_y, -cfg.ell, cfg.ell)
        return cls(nodes_x=nx, weights_x=wx, nodes_y=ny, weights_y=wy, ell=cfg.ell)

    @property
    def shape(self):
        return (self.nodes_x.size, self.nodes_y.size)

    def tensor_weights(self) -> np.ndarray:
        """Node weights as an (n_quad_x, n_quad_y) matrix."""
        return np.outer(self.weights_x, self.weights_y)

    def flat_weights(self) -> np.ndarray:
        return self.tensor_weights().ravel()

    def meshgrid(self):
        """Node coordinates X, Y as (n_quad_x, n_quad_y) matrices."""
        return np.meshgrid(self.nodes_x, self.nodes_y, indexing="ij")

    def flat_points(self) -> np.ndarray:
        """All nodes as an (n_nodes, 2) array, x-major ordering."""
        X, Y = self.meshgrid()
        return np.column_stack([X.ravel(), Y.ravel()])

    def integrate(self, values: np.ndarray) -> float:
        """Quadrature of node values (matrix or flat vector)."""
        return float(np.sum(self.tensor_weights() * np.asarray(values).reshape(self.shape)))

    def max_node_weight(self) -> float:
        return float(self.weights_x.max() * self.weights_y.max())


@dataclass(frozen=True)
class GridField:
    """Values of a scalar function at the quadrature nodes."""

    grid: QuadratureGrid
    values: np.ndarray  # (n_quad_x, n_quad_y)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.shape:
            raise ValueError(f"values shape {vals.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field contains non-finite values")
        object.__setattr__(self, "values", vals)

    def integral(self) -> float:
        return self.grid.integrate(self.values)

    def flat(self) -> np.ndarray:
        return self.values.ravel()

    def mirrored_x(self) -> "GridField":
        """Samples of v(pi - x, y); exact node relabeling on the symmetric grid."""
        return GridField(self.grid, self.values[::-1, :])
