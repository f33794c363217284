"""
expression.py – Textsyntax für Parameterfunktionen.

Die Syntax ist eine Teilmenge von Python-Ausdrücken und wird mit `ast`
geparst, ohne Code auszuführen:

    pow(0.5)*logms(1,-2)
    karamata(alpha=inv_log(1),beta=const(0),r=2.718)
    interp(logms(1), 1, 1)          ψ der Interpolation zwischen H^{s-ε}, H^{s+δ}
    phis(logms(1), 2, 2)            φ_s
    qsv(logms(1), 1, const(1))      χ(t^θ φ(t))
    clamp(pow(2), 1)                unter t₀ eingefroren
    compose(pow(0.5), pow(2))       äußere(innere(t))
    (pow(1)/logms(2))**0.5 + 1

Binäroperatoren: + * / und ** (reeller Exponent).
"""

import ast
import math
from typing import Any, Callable, Dict, List

from errors import ExpressionParseError
from karamata import AlphaSpec, BetaSpec
from param import (
    CompositionQSV,
    Composition,
    Constant,
    LogMultiscale,
    LowCutoffClamp,
    ParamFn,
    PhiS,
    Power,
    PowerScaledComposition,
    RealPower,
    karamata_build,
)

_ALPHA_BUILDERS: Dict[str, Callable[..., AlphaSpec]] = {
    "zero": AlphaSpec.zero,
    "inv_log": AlphaSpec.inv_log,
    "inv_pow": AlphaSpec.inv_pow,
    "sin_log": AlphaSpec.sin_log,
}

_BETA_BUILDERS: Dict[str, Callable[..., BetaSpec]] = {
    "const": BetaSpec.const,
    "sin_loglog": BetaSpec.sin_loglog,
    "step": BetaSpec.step,
}


def parse_param(text: str) -> ParamFn:
    """
    Parst einen Ausdruck zu einer Parameterfunktion.

    :raises ExpressionParseError: bei Syntaxfehlern, unbekannten Namen oder
        ungültigen Parametern
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as e:
        raise ExpressionParseError(f"Syntaxfehler in {text!r}: {e.msg}") from e
    try:
        result = _to_param(tree.body)
    except ExpressionParseError:
        raise
    except (ValueError, TypeError, IndexError) as e:
        raise ExpressionParseError(f"Ungültiger Ausdruck {text!r}: {e}") from e
    return result


def _number(node: ast.AST) -> float:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        if isinstance(node.value, bool):
            raise ExpressionParseError("Wahrheitswerte sind keine Zahlen")
        return float(node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _number(node.operand)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.Name) and node.id == "e":
        return math.e
    raise ExpressionParseError(f"Zahl erwartet, gefunden: {ast.dump(node)}")


def _call_name(node: ast.AST) -> str:
    if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Name):
        raise ExpressionParseError(f"Funktionsaufruf erwartet, gefunden: {ast.dump(node)}")
    return node.func.id


def _catalog(node: ast.AST, builders: Dict[str, Callable[..., Any]], what: str) -> Any:
    name = _call_name(node)
    if name not in builders:
        raise ExpressionParseError(f"Unbekannte {what}-Funktion: {name}")
    assert isinstance(node, ast.Call)
    return builders[name](*[_number(a) for a in node.args])


def _to_param(node: ast.AST) -> ParamFn:
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            return RealPower(_to_param(node.left), _number(node.right))
        left, right = _to_param(node.left), _to_param(node.right)
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
        if isinstance(node.op, ast.Add):
            return left + right
        raise ExpressionParseError(f"Nicht unterstützter Operator: {type(node.op).__name__}")
    if isinstance(node, (ast.Constant, ast.UnaryOp)):
        return Constant(_number(node))
    if isinstance(node, ast.Call):
        return _call(node)
    raise ExpressionParseError(f"Nicht unterstützter Ausdruck: {ast.dump(node)}")


def _call(node: ast.Call) -> ParamFn:
    name = _call_name(node)
    args: List[ast.AST] = list(node.args)
    kwargs = {kw.arg: kw.value for kw in node.keywords}

    if name == "const":
        return Constant(_number(args[0]) if args else 1.0)
    if name == "pow":
        return Power(_number(args[0]))
    if name == "logms":
        return LogMultiscale(tuple(_number(a) for a in args))
    if name == "karamata":
        names = ["alpha", "beta", "r"]
        for key, value in zip(names, args):
            kwargs.setdefault(key, value)
        if "alpha" not in kwargs or "r" not in kwargs:
            raise ExpressionParseError("karamata benötigt alpha=… und r=…")
        alpha = _catalog(kwargs["alpha"], _ALPHA_BUILDERS, "α")
        beta = (
            _catalog(kwargs["beta"], _BETA_BUILDERS, "β")
            if "beta" in kwargs
            else BetaSpec.const(0.0)
        )
        return karamata_build(alpha, beta, _number(kwargs["r"]))
    if name == "interp":
        _arity(name, args, 3)
        return PowerScaledComposition(_to_param(args[0]), _number(args[1]), _number(args[2]))
    if name == "phis":
        _arity(name, args, 3)
        return PhiS(_to_param(args[0]), _number(args[1]), _number(args[2]))
    if name == "qsv":
        _arity(name, args, 3)
        return CompositionQSV(_to_param(args[0]), _number(args[1]), _to_param(args[2]))
    if name == "clamp":
        _arity(name, args, 2)
        return LowCutoffClamp(_to_param(args[0]), _number(args[1]))
    if name == "compose":
        _arity(name, args, 2)
        return Composition(_to_param(args[0]), _to_param(args[1]))
    raise ExpressionParseError(f"Unbekannte Funktion: {name}")


def _arity(name: str, args: List[ast.AST], n: int) -> None:
    if len(args) != n:
        raise ExpressionParseError(f"{name} erwartet {n} Argumente, erhalten {len(args)}")
