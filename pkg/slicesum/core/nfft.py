"""Non-equispaced Fourier transforms by Gaussian gridding

Nodes are angles theta in [-pi, pi]. The adjoint transform computes
w_hat[k] = sum_n w[n] exp(i k theta_n) for 0 <= k < n_modes, the forward
transform evaluates sum_{|k| < n_modes} G[k] exp(-i k phi_m) for a Hermitian
coefficient sequence given by its non-negative half.
"""

import math
from functools import lru_cache

import numpy as np

from ..errors import ArgumentError


class GaussianGridder:
    """Spread/interpolate with a periodized Gaussian on an oversampled grid

    Args:
        n_modes: Frequencies 0..n_modes-1 (and their negatives) are resolved
        oversampling: Grid points per mode
        half_width: Grid points on each side of a node touched by the window
    """

    def __init__(self, n_modes: int, oversampling: int = 2, half_width: int = 12):
        if n_modes < 1:
            raise ArgumentError(f"n_modes must be >= 1, got {n_modes}")
        if oversampling < 2:
            raise ArgumentError(f"oversampling must be >= 2, got {oversampling}")
        self.n_modes = n_modes
        modes = 2 * n_modes
        self.grid_size = max(oversampling * modes, 4 * half_width)
        self.step = 2 * math.pi / self.grid_size
        self.half_width = half_width
        R = self.grid_size / modes
        self.tau = math.pi * half_width / (modes * modes * R * (R - 0.5))
        k = np.arange(n_modes)
        # reciprocal of the window's Fourier coefficients sqrt(tau/pi) exp(-k^2 tau)
        self.deconvolution = math.sqrt(math.pi / self.tau) * np.exp(k * k * self.tau)

    def _stencil(self, theta: np.ndarray):
        base = np.floor(theta / self.step).astype(np.int64)
        offsets = np.arange(-self.half_width + 1, self.half_width + 1)
        index = base[:, None] + offsets
        distance = theta[:, None] - index * self.step
        window = np.exp(-distance * distance / (4 * self.tau))
        return np.mod(index, self.grid_size), window

    def spread_to_grid(self, theta: np.ndarray, values: np.ndarray) -> np.ndarray:
        index, window = self._stencil(theta)
        return np.bincount(index.ravel(), weights=(values[:, None] * window).ravel(), minlength=self.grid_size)

    def interp_from_grid(self, phi: np.ndarray, grid: np.ndarray) -> np.ndarray:
        index, window = self._stencil(phi)
        return np.sum(grid[index] * window, axis=1) / self.grid_size

    def adjoint(self, theta: np.ndarray, weights: np.ndarray) -> np.ndarray:
        """w_hat[k] = sum_n weights[n] exp(i k theta[n]), k = 0..n_modes-1"""
        grid = self.spread_to_grid(np.mod(theta, 2 * math.pi), weights)
        spectrum = np.fft.ifft(grid)[:self.n_modes]
        return self.deconvolution * spectrum

    def forward(self, phi: np.ndarray, half_coefficients: np.ndarray) -> np.ndarray:
        """Real values of sum_k G[k] exp(-i k phi) with G[-k] = conj(G[k])"""
        if half_coefficients.size != self.n_modes:
            raise ArgumentError(f"Expected {self.n_modes} coefficients, got {half_coefficients.size}")
        psi = np.zeros(self.grid_size, dtype=complex)
        scaled = half_coefficients * self.deconvolution
        psi[:self.n_modes] = scaled
        if self.n_modes > 1:
            psi[-(self.n_modes - 1):] = np.conj(scaled[1:])[::-1]
        grid = np.fft.fft(psi).real
        return self.interp_from_grid(np.mod(phi, 2 * math.pi), grid)


@lru_cache(maxsize=16)
def gridder(n_modes: int) -> GaussianGridder:
    return GaussianGridder(n_modes)
