"""Domain geometry, material bounds and run parameters.

The plate occupies the fixed rectangle (0, pi) x (-ell, ell): hinged on the
two short edges x = 0, pi and free on the long edges y = +-ell.  Everything
downstream reads its parameters from a validated :class:`PlateConfig`, so
invalid combinations are rejected here once and never rechecked.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict, replace


@dataclass(frozen=True)
class PlateConfig:
    """Physical and discretization parameters of one plate problem.

    Parameters
    ----------
    sigma : float
        Poisson ratio, in [0, 1).
    ell : float
        Half-width of the plate; the domain is (0, pi) x (-ell, ell).
    alpha, beta : float
        Density bounds of the two materials, 0 < alpha < 1 < beta.
    n_modes_x : int
        Number of sine modes sin(m x), m = 1..n_modes_x.
    n_basis_y : int
        Number of polynomial cross-profiles in y (degrees 0..n_basis_y-1).
    n_quad_x, n_quad_y : int
        Gauss-Legendre node counts of the tensor quadrature grid.
    opt_max_iter : int
        Iteration cap of the density-rearrangement loop.
    opt_tol : float
        Relative eigenvalue-stagnation tolerance that stops the loop.
    eig_tol : float
        Relative residual demanded of the returned eigenpair.
    """

    sigma: float = 0.2
    ell: float = math.pi / 5
    alpha: float = 0.5
    beta: float = 3.0
    n_modes_x: int = 20
    n_basis_y: int = 12
    n_quad_x: int = 96
    n_quad_y: int = 48
    opt_max_iter: int = 100
    opt_tol: float = 1e-10
    eig_tol: float = 1e-12

    def __post_init__(self):
        if not 0.0 <= self.sigma < 1.0:
            raise ValueError(f"sigma must lie in [0, 1), got {self.sigma}")
        if not self.ell > 0.0:
            raise ValueError(f"ell must be positive, got {self.ell}")
        if not 0.0 < self.alpha < 1.0 < self.beta:
            raise ValueError(
                f"density bounds must satisfy 0 < alpha < 1 < beta, "
                f"got alpha={self.alpha}, beta={self.beta}"
            )
        for name in ("n_modes_x", "n_basis_y", "n_quad_x", "n_quad_y", "opt_max_iter"):
            v = getattr(self, name)
            if not (isinstance(v, int) and v >= 1):
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if not self.opt_tol > 0.0:
            raise ValueError(f"opt_tol must be positive, got {self.opt_tol}")
        if not self.eig_tol > 0.0:
            raise ValueError(f"eig_tol must be positive, got {self.eig_tol}")

    def with_overrides(self, **kwargs) -> "PlateConfig":
        """Copy of this config with the given fields replaced (revalidated)."""
        return replace(self, **kwargs)

    def as_dict(self) -> dict:
        return asdict(self)


def domain_area(cfg: PlateConfig) -> float:
    """Area of (0, pi) x (-ell, ell), i.e. 2*pi*ell.  Never stored, always derived."""
    return 2.0 * math.pi * cfg.ell


def sublevel_fraction(cfg: PlateConfig) -> float:
    """Fraction (beta-1)/(beta-alpha) of the area that the light material fills.

    This is the measure fraction of the sublevel set picked by every
    rearrangement step; it lies in (0, 1) whenever the config is valid.
    """
    return (cfg.beta - 1.0) / (cfg.beta - cfg.alpha)


@dataclass(frozen=True)
class AdmissibleWeightRule:
    """Mass and bound constraints a density field must satisfy.

    A density is admissible when alpha <= p <= beta at every node and its
    quadrature mass equals target_mass (the domain area, so the homogeneous
    plate p = 1 is always admissible).
    """

    alpha: float
    beta: float
    target_mass: float
    sublevel_fraction: float

    def __post_init__(self):
        if not 0.0 < self.sublevel_fraction < 1.0:
            raise ValueError(
                f"sublevel_fraction must lie in (0, 1), got {self.sublevel_fraction}"
            )
        if not (self.target_mass > 0.0 and self.alpha <= 1.0 <= self.beta):
            # target mass equals the domain area, so reachability within the
            # bounds [alpha, beta] is exactly alpha <= 1 <= beta
            raise ValueError("mass target not reachable within the density bounds")

    @classmethod
    def from_config(cls, cfg: PlateConfig) -> "AdmissibleWeightRule":
        area = domain_area(cfg)
        if not cfg.alpha * area <= area <= cfg.beta * area:
            raise ValueError("target mass not reachable within the density bounds")
        return cls(
            alpha=cfg.alpha,
            beta=cfg.beta,
            target_mass=area,
            sublevel_fraction=sublevel_fraction(cfg),
        )


CONFIG_KEYS = (
    "sigma", "ell", "alpha", "beta",
    "n_modes_x", "n_basis_y", "n_quad_x", "n_quad_y",
    "opt_max_iter", "opt_tol", "eig_tol",
)

_INT_KEYS = {"n_modes_x", "n_basis_y", "n_quad_x", "n_quad_y", "opt_max_iter"}


def load_config(path) -> PlateConfig:
    """Read a JSON config file; keys absent from the file keep their defaults.

    Accepted keys are exactly the fields of :class:`PlateConfig`; anything
    else is rejected so typos cannot silently fall back to a default.
    """
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError(f"config file {path} must contain a JSON object")
    unknown = sorted(set(raw) - set(CONFIG_KEYS))
    if unknown:
        raise ValueError(f"unknown config keys {unknown}; accepted keys: {list(CONFIG_KEYS)}")
    clean = {}
    for key, value in raw.items():
        if key in _INT_KEYS:
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValueError(f"config key {key} must be an integer, got {value!r}")
            clean[key] = value
        else:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"config key {key} must be a number, got {value!r}")
            clean[key] = float(value)
    return PlateConfig(**clean)
