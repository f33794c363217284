import argparse
import logging
import sys
from typing import Any, List, Optional

import charts
import couple
import elliptic
import hormander
from config import SuiteConfig, apply_environment, apply_overrides, load_config
from errors import HilbertInterpError
from expression import parse_param
from utils import load_json, parse_couple, parse_distribution, write_csv, write_jsonl
from verification import report_columns, report_rows, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _add_index_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--s", type=float, required=True, help="Glattheit s")
    parser.add_argument(
        "--phi", type=str, default="const(1)", help="Ausdruck für φ, z.B. 'logms(1,-2)'"
    )


def _add_input(parser: argparse.ArgumentParser, what: str) -> None:
    parser.add_argument("--input", type=str, required=True, help=f"JSON-Datei mit {what}")


def parse_args(argv: Optional[List[str]] = None) -> Any:
    parser = argparse.ArgumentParser(
        prog="hilbert-interp",
        description="Interpolation von Hilbert-Paaren mit Funktionsparameter und verfeinerte Hörmander-Skala",
    )
    parser.add_argument("--verbose", action="store_true", help="Debug-Ausgaben einschalten")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Verifikationssuiten
    verify = subparsers.add_parser("verify", help="Verifikationssuite ausführen")
    verify.add_argument(
        "--suite",
        choices=["param", "couple", "hormander", "elliptic", "charts", "all"],
        help="Auszuführende Suite (Standard: all)",
    )
    verify.add_argument("--seed", type=int, help="Seed (überschreibt Datei und Umgebung)")
    verify.add_argument("--config", type=str, help="Konfigurationsdatei (version = 1)")
    verify.add_argument("--output", type=str, help="Berichtsdatei (Standard: stdout)")
    verify.add_argument("--format", choices=["jsonl", "csv"], help="Berichtsformat")
    verify.add_argument("--workers", type=int, help="Anzahl Worker-Prozesse")
    verify.add_argument("--tolerance-scale", type=float, help="Faktor für alle Toleranzen")
    verify.add_argument(
        "--timings", action="store_true", default=None, help="Laufzeit pro Prüfung mitschreiben"
    )

    # Normen
    norm = subparsers.add_parser("norm", help="Norm einer Eingabe berechnen")
    kinds = norm.add_subparsers(dest="kind", required=True)
    hs = kinds.add_parser("hs", help="‖u‖_{s,φ} über Fourier-Koeffizienten")
    _add_index_args(hs)
    _add_input(hs, "Distribution")
    calc = kinds.add_parser("calculus", help="‖φ_s(A)u‖ mit A = 1 − Δ")
    _add_index_args(calc)
    _add_input(calc, "Distribution")
    psi = kinds.add_parser("psi", help="‖u‖_{X_ψ} im Spektralmodell")
    psi.add_argument("--psi", type=str, required=True, help="Ausdruck für ψ")
    _add_input(psi, "Paar und Vektor")
    chart = kinds.add_parser("chart", help="Kartennorm auf dem Kreis")
    _add_index_args(chart)
    _add_input(chart, "Distribution (n = 1)")
    chart.add_argument("--config", type=str, help="Konfigurationsdatei für den Atlas")

    hnorm = subparsers.add_parser("hnorm", help="Kurzform von 'norm hs'")
    _add_index_args(hnorm)
    _add_input(hnorm, "Distribution")

    calc_norm = subparsers.add_parser("calculus-norm", help="Kurzform von 'norm calculus'")
    _add_index_args(calc_norm)
    _add_input(calc_norm, "Distribution")

    # Einzelprüfungen
    interp = subparsers.add_parser(
        "interp-check", help="[H^{s-ε}, H^{s+δ}]_ψ = H^{s,φ} für eine Eingabe prüfen"
    )
    _add_index_args(interp)
    interp.add_argument("--eps", type=float, default=1.0, help="ε > 0")
    interp.add_argument("--delta", type=float, default=1.0, help="δ > 0")
    interp.add_argument("--tol", type=float, default=1e-12, help="Relative Toleranz")
    _add_input(interp, "Distribution")

    for name, text in (
        ("calculus-check", "‖φ_s(A)u‖ = ‖u‖_{s,φ} prüfen"),
        ("lifting-check", "‖Au‖_{s,φ} = ‖u‖_{s+2,φ} prüfen"),
    ):
        sub = subparsers.add_parser(name, help=text)
        _add_index_args(sub)
        sub.add_argument("--tol", type=float, default=1e-12, help="Relative Toleranz")
        _add_input(sub, "Distribution")

    counter = subparsers.add_parser(
        "counterexample", help="Zweipunkt-Konstruktion als CSV-Tabelle"
    )
    counter.add_argument("--psi", type=str, required=True, help="Ausdruck für ψ")
    counter.add_argument("--s", type=float, default=2.0, help="Kleinerer Eigenwert s > 1")
    counter.add_argument(
        "--ratios",
        type=str,
        help="Kommagetrennte Werte t/s (Standard: 10^0 … 10^6)",
    )
    counter.add_argument("--output", type=str, help="CSV-Datei (Standard: stdout)")

    study = subparsers.add_parser(
        "charts-study", help="Kartennorm gegen Fourier-Norm über Einzelmoden"
    )
    _add_index_args(study)
    study.add_argument("--kmax", type=int, default=16, help="Moden k = 0..kmax")
    study.add_argument("--config", type=str, help="Konfigurationsdatei für den Atlas")

    return parser.parse_args(argv)


def _fmt(value: float) -> str:
    return f"{value:.15g}"


def _index(args: Any) -> hormander.SmoothnessIndex:
    return hormander.SmoothnessIndex(args.s, parse_param(args.phi))


def _load_distribution(path: str) -> hormander.FourierDistribution:
    return parse_distribution(load_json(path))


def _base_config(path: Optional[str]) -> SuiteConfig:
    cfg = load_config(path) if path else SuiteConfig()
    return apply_environment(cfg)


def norm_command(args: Any) -> int:
    """Gibt die angeforderte Norm mit 15 signifikanten Stellen aus."""
    kind = {"hnorm": "hs", "calculus-norm": "calculus"}.get(args.command, getattr(args, "kind", None))
    if kind == "psi":
        c, u = parse_couple(load_json(args.input))
        value = couple.norm_psi(c, parse_param(args.psi), u)
    elif kind == "hs":
        value = hormander.hnorm(_load_distribution(args.input), _index(args))
    elif kind == "calculus":
        value = elliptic.calculus_norm(elliptic.EllipticOperator(), _load_distribution(args.input), _index(args))
    else:
        atlas = charts.ChartAtlas(_base_config(args.config).atlas)
        f = charts.CircleFunction.from_distribution(_load_distribution(args.input))
        value = charts.chart_norm(atlas, f, _index(args)).value
    print(_fmt(value))
    return EXIT_OK


def _print_comparison(res: couple.NormComparison, tol: float) -> int:
    ok = res.holds(tol)
    print(f"lhs = {_fmt(res.lhs)}")
    print(f"rhs = {_fmt(res.rhs)}")
    print(f"relativer Fehler = {res.rel_error:.3e} ({'✓' if ok else '✗'} tol={tol:g})")
    return EXIT_OK if ok else EXIT_FAILURE


def counterexample_command(args: Any) -> int:
    """CSV-Tabelle (t/s, norm_ratio, bound_ratio) der Zweipunkt-Konstruktion."""
    psi = parse_param(args.psi)
    ratios = None
    if args.ratios:
        try:
            ratios = [float(x) for x in args.ratios.split(",")]
        except ValueError as e:
            raise HilbertInterpError(f"--ratios: ungültige Zahlenliste {args.ratios!r}") from e
    rows = couple.counterexample_table(psi, args.s, ratios)
    write_csv(rows, args.output, couple.COUNTEREXAMPLE_COLUMNS)
    if args.output:
        print(f"Gegenbeispieltabelle gespeichert in {args.output}", file=sys.stderr)
    return EXIT_OK


def verify_command(args: Any) -> int:
    cfg = apply_overrides(
        _base_config(args.config),
        suite=args.suite,
        seed=args.seed,
        output=args.output,
        format=args.format,
        workers=args.workers,
        tolerance_scale=args.tolerance_scale,
        timings=args.timings,
    )
    run = run_suite(cfg)
    rows = report_rows(run, cfg.timings)
    if cfg.format == "csv":
        write_csv(rows, cfg.output, report_columns(cfg.timings))
    else:
        write_jsonl(rows, cfg.output)
    summary = run.summary()
    if cfg.output:
        print(f"Bericht gespeichert in {cfg.output}")
        print(summary)
    else:
        print(summary, file=sys.stderr)
    return run.exit_status


def charts_study_command(args: Any) -> int:
    cfg = _base_config(args.config)
    atlas = charts.ChartAtlas(cfg.atlas)
    study = charts.equivalence_study(atlas, charts.mode_family(args.kmax), _index(args))
    print(f"ratio_min = {_fmt(study.ratio_min)}")
    print(f"ratio_max = {_fmt(study.ratio_max)}")
    print(f"Streuung = {_fmt(study.spread)} (P: {_fmt(study.coarse_spread)})")
    print(f"Änderung unter P → 2P = {study.refinement_change:.3e}")
    ok = (
        study.spread <= cfg.tolerance("chart_spread")
        and study.refinement_change <= cfg.tolerance("chart_refinement")
    )
    return EXIT_OK if ok else EXIT_FAILURE


def dispatch(args: Any) -> int:
    if args.command == "verify":
        return verify_command(args)

    if args.command in ("norm", "hnorm", "calculus-norm"):
        return norm_command(args)

    if args.command == "interp-check":
        u = _load_distribution(args.input)
        res = hormander.interpolation_identity_check(u, _index(args), args.eps, args.delta)
        return _print_comparison(res, args.tol)

    if args.command == "calculus-check":
        u = _load_distribution(args.input)
        return _print_comparison(elliptic.calculus_equivalence_check(u, _index(args)), args.tol)

    if args.command == "lifting-check":
        u = _load_distribution(args.input)
        res = elliptic.lifting_isomorphism_check(elliptic.EllipticOperator(), u, _index(args))
        return _print_comparison(res, args.tol)

    if args.command == "counterexample":
        return counterexample_command(args)

    return charts_study_command(args)


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s [%(levelname)s] %(message)s",
    )
    try:
        return dispatch(args)
    except (HilbertInterpError, ValueError, OSError) as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
