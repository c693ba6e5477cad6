"""Subdomain geometry, discrete Laplacians and interface-flux extraction.

Domains are partitioned into non-overlapping subdomains that share exactly
their interface points; every subdomain carries its own constant diffusion
coefficient and grid step, so neighbors may be resolved differently.  Fluxes
are one-sided second-order three-point derivatives signed as outward-normal
values, the same stencil the solvers use to impose Neumann data, which keeps
the substructuring coupling and the monolithic reference discretization in
exact agreement.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Subdomain1D",
    "Partition1D",
    "Subdomain2D",
    "build_subdomain",
    "build_partition",
    "build_subdomain_2d",
    "laplacian_apply",
    "interface_flux",
    "interface_flux_series",
    "ghost_interpolate",
]

_DIV_TOL = 1e-8


@dataclass(frozen=True)
class Subdomain1D:
    x_left: float
    x_right: float
    kappa: float
    dx: float
    nodes: np.ndarray

    @property
    def length(self) -> float:
        return self.x_right - self.x_left

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def scaled_length(self) -> float:
        """Length divided by sqrt(kappa), the natural convergence variable."""
        return self.length / math.sqrt(self.kappa)


def build_subdomain(x_left: float, x_right: float, kappa: float, dx: float) -> Subdomain1D:
    if not x_left < x_right:
        raise ValueError(f"empty interval [{x_left}, {x_right}]")
    if not kappa > 0.0:
        raise ValueError(f"diffusion coefficient must be positive, got {kappa}")
    length = x_right - x_left
    cells = length / dx
    n_cells = int(round(cells))
    if n_cells < 2 or abs(cells - n_cells) > _DIV_TOL * max(1.0, cells):
        raise ValueError(
            f"dx={dx} does not tile [{x_left}, {x_right}] with at least one interior node"
        )
    nodes = np.linspace(x_left, x_right, n_cells + 1)
    return Subdomain1D(x_left, x_right, kappa, length / n_cells, nodes)


@dataclass(frozen=True)
class Partition1D:
    subdomains: tuple

    @property
    def n_subdomains(self) -> int:
        return len(self.subdomains)

    @property
    def interfaces(self) -> tuple:
        return tuple(s.x_right for s in self.subdomains[:-1])

    @property
    def domain(self) -> tuple:
        return (self.subdomains[0].x_left, self.subdomains[-1].x_right)

    @property
    def kappas(self) -> tuple:
        return tuple(s.kappa for s in self.subdomains)


def build_partition(domain, breakpoints, kappas, dxs) -> Partition1D:
    """Tile ``domain`` at ``breakpoints`` into conforming subdomains."""
    x0, x1 = float(domain[0]), float(domain[1])
    if not x0 < x1:
        raise ValueError(f"empty domain {domain}")
    breaks = [float(b) for b in breakpoints]
    if any(not x0 < b < x1 for b in breaks):
        raise ValueError(f"breakpoints {breaks} must lie strictly inside {domain}")
    if sorted(breaks) != breaks or len(set(breaks)) != len(breaks):
        raise ValueError(f"breakpoints must be strictly increasing, got {breaks}")
    edges = [x0] + breaks + [x1]
    n_sub = len(edges) - 1
    kappas = _per_subdomain(kappas, n_sub, "kappa")
    dxs = _per_subdomain(dxs, n_sub, "dx")
    subs = tuple(
        build_subdomain(edges[i], edges[i + 1], kappas[i], dxs[i]) for i in range(n_sub)
    )
    return Partition1D(subdomains=subs)


def _per_subdomain(values, n_sub, name):
    if np.isscalar(values):
        return [float(values)] * n_sub
    values = [float(v) for v in values]
    if len(values) != n_sub:
        raise ValueError(f"{name} list has {len(values)} entries for {n_sub} subdomains")
    return values


def laplacian_apply(sub: Subdomain1D, field_row) -> np.ndarray:
    """kappa * (u_{i-1} - 2 u_i + u_{i+1}) / dx**2 at interior nodes, 0 at ends."""
    u = np.asarray(field_row, dtype=float)
    if len(u) != sub.n_nodes:
        raise ValueError(f"field has {len(u)} values for {sub.n_nodes} nodes")
    out = np.zeros_like(u)
    out[1:-1] = sub.kappa * (u[:-2] - 2.0 * u[1:-1] + u[2:]) / sub.dx**2
    return out


def interface_flux(field_row, side: str, sub: Subdomain1D) -> float:
    """Outward-normal flux kappa * d_n u at one end, one-sided second order."""
    u = np.asarray(field_row, dtype=float)
    if len(u) != sub.n_nodes:
        raise ValueError(f"field has {len(u)} values for {sub.n_nodes} nodes")
    if sub.n_nodes < 3:
        raise ValueError("one-sided flux needs at least 3 nodes")
    c = sub.kappa / (2.0 * sub.dx)
    if side == "right":
        return float(c * (3.0 * u[-1] - 4.0 * u[-2] + u[-3]))
    if side == "left":
        return float(c * (3.0 * u[0] - 4.0 * u[1] + u[2]))
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def interface_flux_series(fields, side: str, sub: Subdomain1D) -> np.ndarray:
    """Outward flux at one end for every row of a space-time field."""
    u = np.asarray(fields, dtype=float)
    if u.shape[-1] != sub.n_nodes or sub.n_nodes < 3:
        raise ValueError("field width does not match subdomain nodes")
    c = sub.kappa / (2.0 * sub.dx)
    if side == "right":
        return c * (3.0 * u[..., -1] - 4.0 * u[..., -2] + u[..., -3])
    if side == "left":
        return c * (3.0 * u[..., 0] - 4.0 * u[..., 1] + u[..., 2])
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def ghost_interpolate(sub: Subdomain1D, field_row, target_x: float) -> float:
    """Piecewise-quadratic interpolation of nodal values at ``target_x``.

    Used to transfer traces between differently resolved neighbor grids;
    reproduces quadratics exactly, matching the flux stencil order.
    """
    u = np.asarray(field_row, dtype=float)
    if len(u) != sub.n_nodes:
        raise ValueError(f"field has {len(u)} values for {sub.n_nodes} nodes")
    x = float(target_x)
    if x < sub.x_left - _DIV_TOL * sub.dx or x > sub.x_right + _DIV_TOL * sub.dx:
        raise ValueError(f"target {x} outside [{sub.x_left}, {sub.x_right}]")
    i = int(np.clip(round((x - sub.x_left) / sub.dx), 0, sub.n_nodes - 1))
    i0 = int(np.clip(i - 1, 0, sub.n_nodes - 3))
    xs = sub.nodes[i0 : i0 + 3]
    ys = u[i0 : i0 + 3]
    value = 0.0
    for m in range(3):
        lm = 1.0
        for p in range(3):
            if p != m:
                lm *= (x - xs[p]) / (xs[m] - xs[p])
        value += ys[m] * lm
    return float(value)


@dataclass(frozen=True)
class Subdomain2D:
    x_left: float
    x_right: float
    y_bottom: float
    y_top: float
    kappa: float
    dx: float
    dy: float
    xs: np.ndarray
    ys: np.ndarray

    @property
    def nx(self) -> int:
        return len(self.xs) - 1

    @property
    def ny(self) -> int:
        return len(self.ys) - 1

    @property
    def scaled_length(self) -> float:
        return (self.x_right - self.x_left) / math.sqrt(self.kappa)


def build_subdomain_2d(x_left, x_right, y_bottom, y_top, kappa, dx, dy) -> Subdomain2D:
    if not (x_left < x_right and y_bottom < y_top):
        raise ValueError("empty rectangle")
    if not kappa > 0.0:
        raise ValueError(f"diffusion coefficient must be positive, got {kappa}")
    xs = _axis_nodes(x_left, x_right, dx, minimum_cells=2)
    ys = _axis_nodes(y_bottom, y_top, dy, minimum_cells=2)
    return Subdomain2D(
        x_left, x_right, y_bottom, y_top, kappa,
        (x_right - x_left) / (len(xs) - 1), (y_top - y_bottom) / (len(ys) - 1),
        xs, ys,
    )


def _axis_nodes(lo, hi, step, minimum_cells):
    cells = (hi - lo) / step
    n = int(round(cells))
    if n < minimum_cells or abs(cells - n) > _DIV_TOL * max(1.0, cells):
        raise ValueError(f"step {step} does not tile [{lo}, {hi}]")
    return np.linspace(lo, hi, n + 1)
