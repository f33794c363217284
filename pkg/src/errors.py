"""
errors.py – Ausnahmehierarchie des hilbert-interp-Pakets.

Alle Fehler erben von HilbertInterpError. Eingabefehler sind zusätzlich
ValueError, numerische Fehlschläge ArithmeticError.
"""

from typing import Optional


class HilbertInterpError(Exception):
    """Basisklasse aller Paketfehler."""


class NonPositiveArgument(HilbertInterpError, ValueError):
    """Auswertung einer Parameterfunktion an t ≤ 0."""


class NonPositiveParameter(HilbertInterpError, ValueError):
    """Ein Parameter (ε, δ, m, c, t₀ …) muss positiv sein."""


class QuadratureNonConvergence(HilbertInterpError, ArithmeticError):
    """Adaptive Simpson-Quadratur hat die maximale Tiefe überschritten."""


class EmptyGrid(HilbertInterpError, ValueError):
    """Leeres Stützstellengitter."""


class InsufficientGrid(EmptyGrid):
    """Zu wenige Stützstellen (mindestens 2 benötigt)."""


class OrderViolation(HilbertInterpError, ValueError):
    """Ordnungsbedingung s₀ ≤ s₁ verletzt."""


class NotInSetM(HilbertInterpError, ValueError):
    """Funktion ist nicht als quasilangsam variierend deklariert."""


class DimensionMismatch(HilbertInterpError, ValueError):
    """Dimensionen von Paar, Vektor oder Operator passen nicht zusammen."""


class PowerIterationStall(HilbertInterpError, ArithmeticError):
    """Potenzmethode konvergiert nicht innerhalb der Iterationsgrenze."""


class UnboundedRatio(HilbertInterpError, ValueError):
    """f/g ist auf dem Spektrum praktisch unbeschränkt."""


class NoCommonLowerBound(HilbertInterpError, ValueError):
    """Ein Eigenwert liegt unter der gemeinsamen unteren Schranke r."""


class HypothesisViolation(HilbertInterpError, ValueError):
    """Voraussetzung eines Satzes ist (stichprobenartig) verletzt."""


class ResolutionTooLow(HilbertInterpError, ValueError):
    """Gitter löst den Trägerabstand nicht mit mindestens 2 Zellen auf."""


class SupportLeak(HilbertInterpError, ValueError):
    """Kartenfunktion hat Masse außerhalb des Abschneideträgers."""


class GridUnderResolved(HilbertInterpError, ArithmeticError):
    """Gitterverfeinerung ändert die Kartennorm um mehr als 1 %."""


class ExpressionParseError(HilbertInterpError, ValueError):
    """Ungültiger Ausdruck für eine Parameterfunktion."""


class DeserializationError(HilbertInterpError, ValueError):
    """Ungültige JSON-Eingabe."""


class ConfigParseError(HilbertInterpError, ValueError):
    """Fehler in der Konfigurationsdatei, mit Zeilennummer."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"Zeile {line}: {message}"
        super().__init__(message)


class NonFiniteEntry(HilbertInterpError, ValueError):
    """Matrix oder Vektor enthält NaN oder ±∞."""
