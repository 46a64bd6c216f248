"""Loader for the shipped formula files.

The files use a tiny line-oriented format on top of the expression grammar
(infix, ^ for powers):

    # comment
    param NAME...          declare extra symbols (solution data, exponents)
    let NAME = EXPR        a named sub-expression, usable below
    form NAME dVAR = EXPR  a component of a 1-form
    map NAME VAR = EXPR    a component of a rational map / substitution

``load`` returns the parsed file with every ``let`` expanded, at the sympy
expression level; conversion to RatFun happens after the caller has bound the
declared parameters (see expr.ratfun_from_sympy).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import sympy as sp
from sympy.parsing.sympy_parser import (
    parse_expr, standard_transformations, convert_xor)

from .expr import VAR_ORDER

_TRANSFORMS = standard_transformations + (convert_xor,)


class DataFileError(ValueError):
    pass


@dataclass
class FormulaFile:
    params: list = field(default_factory=list)
    lets: dict = field(default_factory=dict)
    forms: dict = field(default_factory=dict)   # name -> {var: sympy Expr}
    maps: dict = field(default_factory=dict)    # name -> {var: sympy Expr}

    def form(self, name):
        return dict(self.forms[name])

    def let(self, name):
        return self.lets[name]


def parse_formula_text(text):
    out = FormulaFile()
    scope = {n: sp.Symbol(n) for n in VAR_ORDER}
    for lineno, raw in enumerate(_continued_lines(text), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "param":
            for n in rest.split():
                out.params.append(n)
                scope[n] = sp.Symbol(n)
            continue
        if head not in ("let", "form", "map"):
            raise DataFileError(f"line {lineno}: unknown directive {head!r}")
        lhs, eq, expr_text = rest.partition("=")
        if not eq:
            raise DataFileError(f"line {lineno}: missing '='")
        try:
            expr = parse_expr(expr_text.strip(), local_dict=dict(scope),
                              transformations=_TRANSFORMS, evaluate=True)
        except Exception as exc:
            raise DataFileError(f"line {lineno}: {exc}") from exc
        if head == "let":
            name = lhs.strip()
            out.lets[name] = expr
            scope[name] = expr
        else:
            fields = lhs.split()
            if len(fields) != 2:
                raise DataFileError(f"line {lineno}: expected '{head} NAME VAR ='")
            name, var = fields
            var = var[1:] if head == "form" and var.startswith("d") else var
            target = out.forms if head == "form" else out.maps
            target.setdefault(name, {})[var] = expr
    return out


def _continued_lines(text):
    """Backslash-free continuation: indented lines continue the previous one."""
    current = None
    for raw in text.splitlines():
        if raw[:1] in (" ", "\t") and current is not None and raw.strip():
            current += " " + raw.strip()
            continue
        if current is not None:
            yield current
        current = raw
    if current is not None:
        yield current


def load(name):
    """Load a data file shipped under modfol/data, e.g. 'formulas/quotient.abc'."""
    pkg = resources.files("modfol").joinpath("data", *name.split("/"))
    return parse_formula_text(pkg.read_text())


def read_data_text(name):
    return resources.files("modfol").joinpath("data", *name.split("/")).read_text()
