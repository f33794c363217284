import logging
import sys
from pathlib import Path

import pandas as pd

sys.path.insert(0, str(Path(__file__).parent / "src"))

from data_pipeline import build_dataset  # noqa: E402

if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(asctime)s [%(levelname)s] %(message)s")

    # Pipeline starten
    failures = build_dataset(suites=("param", "couple", "hormander", "elliptic"))

    # Gegenbeispiel für ψ(t) = t² einlesen: bound_ratio muss mit t/s wachsen
    table = pd.read_csv(Path("data") / "counterexample_pow_two.csv")
    print(table[["t_over_s", "bound_ratio"]].to_string(index=False))

    print("✓ Alle Berichte und Tabellen sind in data/ verfügbar")
    sys.exit(1 if any(failures.values()) else 0)
