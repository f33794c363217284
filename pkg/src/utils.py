"""
utils.py – Ein- und Ausgabe: JSON-Instanzen, JSON-Lines- und CSV-Berichte.

JSON-Formate:
    Paar + Vektor:  {"lambda": [...], "r": ..., "u_re": [...], "u_im": [...], "base": [...]}
    Distribution:   {"n": .., "K": .., "modes": [{"k": [..], "re": .., "im": ..}], "real": false}
"""

import json
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import pandas as pd

from couple import SpectralCouple, SpectralVector
from errors import DeserializationError
from hormander import FourierDistribution

PathLike = Union[str, Path]


def load_json(path: PathLike) -> Any:
    """Liest eine JSON-Datei; Syntaxfehler werden zu DeserializationError."""
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise DeserializationError(f"{path}: ungültiges JSON ({e.msg}, Zeile {e.lineno})") from e


def _field(data: Mapping[str, Any], key: str) -> Any:
    if not isinstance(data, Mapping) or key not in data:
        raise DeserializationError(f"Pflichtfeld {key!r} fehlt")
    return data[key]


def _floats(value: Any, key: str) -> List[float]:
    if not isinstance(value, list):
        raise DeserializationError(f"{key!r} muss eine Liste sein")
    try:
        return [float(x) for x in value]
    except (TypeError, ValueError) as e:
        raise DeserializationError(f"{key!r} enthält keine Zahlen") from e


def parse_couple(data: Mapping[str, Any]) -> Tuple[SpectralCouple, SpectralVector]:
    """Paar und Vektor aus dem dokumentierten JSON-Objekt."""
    lam = _floats(_field(data, "lambda"), "lambda")
    try:
        r = float(_field(data, "r"))
    except (TypeError, ValueError) as e:
        raise DeserializationError("'r' muss eine Zahl sein") from e
    re = _floats(_field(data, "u_re"), "u_re")
    im = _floats(data.get("u_im", [0.0] * len(re)), "u_im")
    base = _floats(data["base"], "base") if "base" in data else None
    couple = SpectralCouple(np.array(lam), r, None if base is None else np.array(base))
    return couple, SpectralVector.from_parts(re, im)


def couple_to_json(c: SpectralCouple, u: SpectralVector) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "lambda": c.eigenvalues.tolist(),
        "r": c.r,
        "u_re": u.coefficients.real.tolist(),
        "u_im": u.coefficients.imag.tolist(),
    }
    if not np.all(c.base == 1.0):
        data["base"] = c.base.tolist()
    return data


def parse_distribution(data: Mapping[str, Any]) -> FourierDistribution:
    """FourierDistribution aus dem dokumentierten JSON-Objekt."""
    try:
        n = int(_field(data, "n"))
        K = int(_field(data, "K"))
    except (TypeError, ValueError) as e:
        raise DeserializationError("'n' und 'K' müssen ganze Zahlen sein") from e
    modes = _field(data, "modes")
    if not isinstance(modes, list):
        raise DeserializationError("'modes' muss eine Liste sein")
    ks, cs = [], []
    for entry in modes:
        k = _field(entry, "k")
        if not isinstance(k, list) or len(k) != n:
            raise DeserializationError(f"Modus {k!r} hat nicht die Dimension n={n}")
        try:
            ks.append([int(x) for x in k])
            cs.append(complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0))))
        except (TypeError, ValueError) as e:
            raise DeserializationError(f"Ungültiger Modus {entry!r}") from e
    return FourierDistribution(
        n, K, np.array(ks, dtype=np.int64).reshape(-1, n), np.array(cs, dtype=complex),
        bool(data.get("real", False)),
    )


def distribution_to_json(u: FourierDistribution) -> Dict[str, Any]:
    return {
        "n": u.n,
        "K": u.K,
        "modes": [
            {"k": [int(x) for x in k], "re": float(c.real), "im": float(c.imag)}
            for k, c in zip(u.modes, u.coeffs)
        ],
        "real": u.real,
    }


def write_jsonl(rows: Iterable[Mapping[str, Any]], target: Optional[PathLike] = None) -> None:
    """Schreibt eine Zeile JSON pro Datensatz (Datei oder stdout)."""
    if target is None:
        _dump_lines(rows, sys.stdout)
        return
    with open(target, "w", encoding="utf-8", newline="\n") as f:
        _dump_lines(rows, f)


def _dump_lines(rows: Iterable[Mapping[str, Any]], stream: TextIO) -> None:
    for row in rows:
        stream.write(json.dumps(row, ensure_ascii=False) + "\n")


def write_csv(
    rows: Sequence[Mapping[str, Any]],
    target: Optional[PathLike] = None,
    columns: Optional[Sequence[str]] = None,
) -> None:
    """Speichert Datensätze als CSV (pandas, feste Spaltenreihenfolge)."""
    frame = pd.DataFrame(list(rows), columns=list(columns) if columns else None)
    if target is None:
        frame.to_csv(sys.stdout, index=False, lineterminator="\n")
    else:
        frame.to_csv(target, index=False, lineterminator="\n")
