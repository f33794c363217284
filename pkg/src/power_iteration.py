"""
power_iteration.py – größter Singulärwert dichter komplexer Matrizen.

σ_max(M)² ist der größte Eigenwert der Gram-Matrix MᴴM (bzw. MMᴴ, je
nachdem welche kleiner ist). Für min(Zeilen, Spalten) ≤ 2 wird der
Eigenwert geschlossen berechnet, sonst per Potenzmethode mit Abbruch über
die relative Änderung des Rayleigh-Quotienten.
"""

import logging
import math

import numpy as np

from errors import NonFiniteEntry, PowerIterationStall

logger = logging.getLogger(__name__)

REL_TOL = 1e-10
MAX_ITERATIONS = 100_000
START_SEED = 0


def _gram(matrix: np.ndarray) -> np.ndarray:
    rows, cols = matrix.shape
    if cols <= rows:
        return matrix.conj().T @ matrix
    return matrix @ matrix.conj().T


def _closed_form(gram: np.ndarray) -> float:
    if gram.shape[0] == 1:
        return float(gram[0, 0].real)
    a = float(gram[0, 0].real)
    d = float(gram[1, 1].real)
    b = abs(gram[0, 1])
    half_gap = 0.5 * (a - d)
    return 0.5 * (a + d) + math.hypot(half_gap, b)


def largest_singular_value(
    matrix: np.ndarray,
    rel_tol: float = REL_TOL,
    max_iterations: int = MAX_ITERATIONS,
) -> float:
    """
    Berechnet σ_max(matrix).

    :param matrix: komplexe oder reelle 2D-Matrix
    :param rel_tol: Abbruch sobald |λ_k − λ_{k−1}| ≤ rel_tol·λ_k (Rayleigh-Quotient)
    :param max_iterations: Iterationsgrenze der Potenzmethode
    :raises NonFiniteEntry: bei NaN/∞ in der Matrix
    :raises PowerIterationStall: falls der Rayleigh-Quotient nicht zur Ruhe kommt
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"2D-Matrix erwartet, erhalten: Form {m.shape}")
    if m.size == 0:
        return 0.0
    if not np.all(np.isfinite(m)):
        raise NonFiniteEntry("Matrix enthält nicht-endliche Einträge")

    gram = _gram(m)
    if gram.shape[0] <= 2:
        return math.sqrt(max(_closed_form(gram), 0.0))

    # fester Startvektor, damit Ergebnisse bitweise reproduzierbar sind
    rng = np.random.default_rng(START_SEED)
    v = rng.standard_normal(gram.shape[0]) + 1j * rng.standard_normal(gram.shape[0])
    v /= np.linalg.norm(v)
    previous = None
    for iteration in range(1, max_iterations + 1):
        w = gram @ v
        lam = float(np.vdot(v, w).real)
        if lam <= 0.0:
            # v liegt im Kern: Nullmatrix oder Startvektor orthogonal zum Bild
            if not np.any(gram):
                return 0.0
            v = rng.standard_normal(gram.shape[0]) + 0j
            v /= np.linalg.norm(v)
            previous = None
            continue
        if previous is not None and abs(lam - previous) <= rel_tol * lam:
            logger.debug(f"Potenzmethode konvergiert nach {iteration} Schritten")
            return math.sqrt(lam)
        previous = lam
        v = w / np.linalg.norm(w)
    raise PowerIterationStall(
        f"Keine Konvergenz nach {max_iterations} Iterationen (tol={rel_tol})"
    )
