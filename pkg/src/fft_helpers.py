import logging
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.fft import fft, fftfreq, next_fast_len


def optimal_fft_length(n: int) -> int:
    """
    Gibt die nächste performant effiziente FFT-Länge zurück.
    next_fast_len liefert garantiert einen int zurück.
    """
    return int(next_fast_len(n))


def multi_fft_evaluation(
    data_matrix: np.ndarray, axis: int = -1, n: Optional[int] = None
) -> np.ndarray:
    """
    Führt mehrere FFTs in einem Array gleichzeitig aus (optional mit
    Nullauffüllung auf Länge n).
    """
    array = np.asarray(data_matrix, dtype=complex)
    return fft(array, n=n, axis=axis)


class FFTInterpolator:
    """
    Exakte trigonometrische Interpolation einer Gitterfunktion.

    Die Daten werden als periodisch auf [x_start, x_start + n·delta)
    aufgefasst. Das trigonometrische Polynom wird auf das kleinste
    symmetrische Band |q| ≤ Q beschnitten, außerhalb dessen alle
    Koeffizienten unter cutoff·max|c| liegen, und per Horner-Schema in
    z = exp(iΔξ(x − x_start)) ausgewertet.
    """

    def __init__(
        self,
        grid_data: np.ndarray,
        delta: float,
        x_start: float,
        cutoff: float = 1e-13,
    ):
        self.grid_data = np.asarray(grid_data, dtype=complex)
        self.delta = float(delta)
        self.x_start = float(x_start)
        self.logger = logging.getLogger(__name__)
        n = self.grid_data.size
        if n == 0 or self.delta <= 0:
            raise ValueError("Interpolation braucht Daten und delta > 0")
        coeffs = fft(self.grid_data) / n
        q = np.rint(fftfreq(n, d=1.0 / n)).astype(int)
        big = np.abs(coeffs) > cutoff * np.abs(coeffs).max()
        self.band = int(np.abs(q[big]).max()) if np.any(big) else -1
        self.d_xi = 2.0 * np.pi / (n * self.delta)
        if self.band < 0:
            self._shifted = np.zeros(1, dtype=complex)
            self.band = 0
            return
        keep = np.abs(q) <= self.band
        shifted = np.zeros(2 * self.band + 1, dtype=complex)
        shifted[q[keep] + self.band] = coeffs[keep]
        self._shifted = shifted

    @property
    def length(self) -> float:
        return self.grid_data.size * self.delta

    def interpolate(self, xs: np.ndarray) -> np.ndarray:
        """
        Interpoliert die Gitterfunktion an beliebigen Stellen xs.
        """
        x = np.asarray(xs, dtype=float) - self.x_start
        if x.size and (x.min() < 0 or x.max() >= self.length):
            self.logger.warning("Stellen außerhalb des Grid-Bereichs, periodisch fortgesetzt")
        phase = self.d_xi * x
        z = np.exp(1j * phase)
        return np.exp(-1j * self.band * phase) * P.polyval(z, self._shifted)

    def __call__(self, xs: np.ndarray) -> np.ndarray:
        return self.interpolate(xs)
