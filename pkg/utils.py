"""
Utility functions for the ALAG workbench.
"""
import logging
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)


class WorkbenchError(Exception):
    """Base exception for workbench errors"""
    def __init__(self, message: str, code: Optional[int] = None):
        self.message = message
        self.code = code
        super().__init__(self.message)


class SurfaceError(WorkbenchError):
    """Invalid surface, level or point"""


class CycleError(WorkbenchError):
    """Cycle sampling or invariant violation"""


class NotBohrSommerfeldError(CycleError):
    """Cycle fails the Bohr-Sommerfeld tolerance"""


class AttachmentError(WorkbenchError):
    """Tangent pairs attached to different half-weighted cycles"""


class NotCriticalError(WorkbenchError):
    """Half-weighted cycle is not critical for the given function"""


class DegenerateFiberError(WorkbenchError):
    """Fiber contains a zero of the tangential Hamiltonian field"""


class ScanResolutionError(WorkbenchError):
    """Action scan too coarse to isolate roots"""


class QuadratureError(WorkbenchError):
    """Quadrature order does not resolve the integrands"""
    def __init__(self, message: str, suggested_order: int):
        self.suggested_order = suggested_order
        super().__init__(message)


class NonQuantizableError(WorkbenchError):
    """Function flow does not preserve the holomorphic sections"""


class ConvergenceError(WorkbenchError):
    """Iterative search exhausted its budget"""


class ConfigError(WorkbenchError):
    """Invalid scenario configuration"""
    def __init__(self, message: str):
        super().__init__(message, code=2)


def spectral_derivative(values: np.ndarray, order: int = 1) -> np.ndarray:
    """
    Differentiate periodic samples on s_j = j/N, s in [0, 1).

    Works along axis 0, so (N,) and (N, d) arrays are both accepted.
    The Nyquist mode is dropped for odd orders, which keeps the
    first-derivative operator exactly skew-adjoint under the plain mean.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    modes = np.fft.fftfreq(n, d=1.0 / n)
    factor = (2j * np.pi * modes) ** order
    if order % 2 == 1 and n % 2 == 0:
        factor[n // 2] = 0.0
    if values.ndim > 1:
        factor = factor.reshape((n,) + (1,) * (values.ndim - 1))
    return np.real(np.fft.ifft(factor * np.fft.fft(values, axis=0), axis=0))


def spectral_antiderivative(values: np.ndarray) -> np.ndarray:
    """Zero-mean periodic antiderivative; the mean of `values` is ignored."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    modes = np.fft.fftfreq(n, d=1.0 / n)
    coeffs = np.fft.fft(values)
    out = np.zeros_like(coeffs)
    nonzero = modes != 0
    if n % 2 == 0:
        nonzero[n // 2] = False
    out[nonzero] = coeffs[nonzero] / (2j * np.pi * modes[nonzero])
    return np.real(np.fft.ifft(out))


def fourier_diff_matrix(n: int) -> np.ndarray:
    """Dense first-derivative matrix on s_j = j/N (period 1), even N."""
    if n % 2 != 0:
        raise ValueError("Only even number of nodes can be considered")
    h = 2.0 * np.pi / n
    j = np.arange(n)
    column = np.zeros(n)
    column[1:] = 0.5 * (-1.0) ** j[1:] / np.tan(j[1:] * h / 2.0)
    # circulant with first column c: D[i, l] = c[(i - l) mod n]
    idx = (j[:, None] - j[None, :]) % n
    return 2.0 * np.pi * column[idx]


def trig_interpolate(values: np.ndarray, n_new: int) -> np.ndarray:
    """Resample periodic samples to n_new nodes by trigonometric interpolation."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    coeffs = np.fft.fft(values, axis=0)
    shape = (n_new,) + values.shape[1:]
    padded = np.zeros(shape, dtype=complex)
    half = min(n, n_new) // 2
    padded[:half] = coeffs[:half]
    padded[-half + 1:] = coeffs[-half + 1:]
    if n_new > n:
        # split the old Nyquist mode evenly between +/- frequencies
        padded[half] = coeffs[half] / 2.0
        padded[-half] = coeffs[half] / 2.0
    elif n_new < n:
        padded[half] = coeffs[half] + coeffs[n - half]
    else:
        padded[half] = coeffs[half]
    return np.real(np.fft.ifft(padded, axis=0)) * (n_new / n)


def setup_logging(level: int = logging.INFO):
    """Setup logging configuration"""
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )
