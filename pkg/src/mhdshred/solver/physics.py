"""Pointwise physics kernels on ghost-padded rectangular fields.

All kernels take fields with one ghost ring already filled with boundary
values, evaluate centred differences, and return interior-sized arrays.
Vector fields are stored as ``(nx, ny, 2)`` with components (x, y).
"""

from __future__ import annotations

import numpy as np


def curl_z(B):
    """Centred x/y differences feeding (d By/dx - d Bx/dy) on interior cells."""
    Bx, By = B[..., 0], B[..., 1]
    dBy_dx = By[2:, 1:-1] - By[:-2, 1:-1]
    dBx_dy = Bx[1:-1, 2:] - Bx[1:-1, :-2]
    return dBy_dx, dBx_dy


def compute_lorentz_force(B, mu0, dx, dy):
    """(1/mu0) (curl B) x B on interior cells; B is ghost-padded (nx+2, ny+2, 2).

    In 2-D the curl is the scalar j = dBy/dx - dBx/dy and the force is
    (j/mu0) * (-By, Bx).
    """
    dBy_dx, dBx_dy = curl_z(B)
    j = dBy_dx / (2.0 * dx) - dBx_dy / (2.0 * dy)
    Bx = B[1:-1, 1:-1, 0]
    By = B[1:-1, 1:-1, 1]
    out = np.empty(Bx.shape + (2,))
    out[..., 0] = -j * By / mu0
    out[..., 1] = j * Bx / mu0
    return out


def compute_joule_heating(B, sigma, mu0, dx, dy):
    """Resistive dissipation |curl B|^2 / (sigma mu0^2), ghost-padded input."""
    dBy_dx, dBx_dy = curl_z(B)
    j = dBy_dx / (2.0 * dx) - dBx_dy / (2.0 * dy)
    return j * j / (sigma * mu0 * mu0)


def compute_viscous_stress_divergence(u, mu, dx, dy):
    """div(tau) for tau = mu*(grad u + grad u^T) - (2/3) mu (div u) I.

    For constant viscosity this expands to
        (div tau)_x = mu * (4/3 u_xx + u_yy + 1/3 v_xy)
        (div tau)_y = mu * (4/3 v_yy + v_xx + 1/3 u_xy)
    evaluated with centred second differences; ``u`` is ghost-padded
    (nx+2, ny+2, 2).
    """
    ux, uy = u[..., 0], u[..., 1]

    def _dxx(f):
        return (f[2:, 1:-1] - 2.0 * f[1:-1, 1:-1] + f[:-2, 1:-1]) / (dx * dx)

    def _dyy(f):
        return (f[1:-1, 2:] - 2.0 * f[1:-1, 1:-1] + f[1:-1, :-2]) / (dy * dy)

    def _dxy(f):
        return (f[2:, 2:] - f[2:, :-2] - f[:-2, 2:] + f[:-2, :-2]) / (4.0 * dx * dy)

    out = np.empty((u.shape[0] - 2, u.shape[1] - 2, 2))
    out[..., 0] = mu * (4.0 / 3.0 * _dxx(ux) + _dyy(ux) + _dxy(uy) / 3.0)
    out[..., 1] = mu * (4.0 / 3.0 * _dyy(uy) + _dxx(uy) + _dxy(ux) / 3.0)
    return out


def temperature_from_energy(e, params):
    """Invert e = rho(T) * cv * T for T with rho(T) = rho0*(1 - beta*(T - T0)).

    The quadratic beta*T^2 - (1 + beta*T0)*T + e/(rho0*cv) = 0 is solved
    with the numerically stable branch that reduces to T = e/(rho0*cv)
    as beta -> 0.
    """
    E = np.asarray(e) / (params.rho0 * params.cv)
    b = 1.0 + params.beta * params.T0
    disc = b * b - 4.0 * params.beta * E
    if np.any(disc <= 0.0):
        raise FloatingPointError("energy outside the invertible EOS range")
    return 2.0 * E / (b + np.sqrt(disc))
