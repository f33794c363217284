# src/data_pipeline.py

import logging
import time
from pathlib import Path
from typing import Dict, Optional, Sequence

import couple
from config import SuiteConfig
from expression import parse_param
from utils import write_csv, write_jsonl
from verification import report_rows, run_suite

logger = logging.getLogger(__name__)

DEFAULT_PSI = {
    "pow_half": "pow(0.5)",
    "pow_two": "pow(2)",
    "const_one": "const(1)",
    "interp_log": "interp(logms(1), 1, 1)",
}


def ensure_data_directory(data_dir: Path = Path("data")) -> Path:
    """Stellt sicher, dass der data/-Ordner existiert."""
    data_dir.mkdir(parents=True, exist_ok=True)
    return data_dir


def collect_reports(
    suites: Sequence[str], seed: int, data_dir: Path, workers: Optional[int] = None
) -> Dict[str, int]:
    """
    Führt die Suiten aus und speichert je einen JSON-Lines-Bericht.

    Returns:
        Anzahl fehlgeschlagener Prüfungen pro Suite
    """
    failures = {}
    for suite in suites:
        print(f"Verifiziere Suite {suite} (seed={seed})...")
        start_time = time.time()
        run = run_suite(SuiteConfig(suite=suite, seed=seed, workers=workers))
        filepath = data_dir / f"report_{suite}.jsonl"
        write_jsonl(report_rows(run), filepath)
        elapsed = time.time() - start_time
        print(f"{run.summary()} in {elapsed:.2f}s → {filepath}")
        failures[suite] = run.failed
    return failures


def collect_counterexamples(
    psis: Dict[str, str], data_dir: Path, s: float = 2.0
) -> None:
    """Schreibt pro ψ eine CSV-Tabelle der Zweipunkt-Konstruktion (für externe Plots)."""
    for name, text in psis.items():
        rows = couple.counterexample_table(parse_param(text), s)
        filepath = data_dir / f"counterexample_{name}.csv"
        write_csv(rows, filepath, couple.COUNTEREXAMPLE_COLUMNS)
        worst = max(r["bound_ratio"] for r in rows)
        print(f"  ψ={text:24s} max bound_ratio = {worst:.6g}")
    print(f"✓ {len(psis)} Gegenbeispieltabellen → {data_dir}")


def build_dataset(
    suites: Sequence[str] = ("param", "couple"),
    seed: int = 0,
    psis: Optional[Dict[str, str]] = None,
    data_dir: Path = Path("data"),
    workers: Optional[int] = None,
) -> Dict[str, int]:
    """
    Hauptfunktion: Berichte und Gegenbeispieltabellen in data/ erzeugen.

    Args:
        suites: auszuführende Suiten
        seed: Seed aller Suiten
        psis: Name → ψ-Ausdruck für die Gegenbeispieltabellen
        data_dir: Zielordner
        workers: Worker-Prozesse (Standard: alle Kerne)
    """
    print("=== Starte Daten-Pipeline ===")
    print(f"Parameter: suites={','.join(suites)}, seed={seed}")
    data_dir = ensure_data_directory(data_dir)

    failures = collect_reports(suites, seed, data_dir, workers)
    collect_counterexamples(DEFAULT_PSI if psis is None else psis, data_dir)

    print("=== Pipeline abgeschlossen ===")
    if any(failures.values()):
        logger.warning(f"Fehlgeschlagene Prüfungen: {failures}")
    return failures


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s] %(message)s")
    build_dataset()
