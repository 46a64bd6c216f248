"""Multivariate rational functions over Q and exterior calculus on them.

The arithmetic backend is sympy's sparse polynomial/fraction-field machinery
(``sympy.polys.fields``), which keeps every element gcd-reduced; equality of
rational functions is therefore structural equality.  A fixed global variable
order x < y < z < s < t < X < Z < u < v makes printed output deterministic.

``RatFun`` is a rational function in a named variable context; ``OneForm`` and
``TwoForm`` carry their components as RatFuns.  ``ThreeForm`` exists only so
that integrability products like theta ^ d(theta) can be formed directly.
"""

from __future__ import annotations

from fractions import Fraction

import sympy as sp
from sympy import QQ
from sympy.parsing.sympy_parser import (
    parse_expr, standard_transformations, convert_xor)
from sympy.polys.fields import field as _field

VAR_ORDER = ("x", "y", "z", "s", "t", "X", "Z", "u", "v")
_RANK = {v: i for i, v in enumerate(VAR_ORDER)}


class ExprError(ArithmeticError):
    pass


def _sorted_vars(names):
    names = set(names)
    unknown = names - set(VAR_ORDER)
    if unknown:
        raise ExprError(f"variables outside the fixed alphabet: {sorted(unknown)}")
    return tuple(sorted(names, key=_RANK.__getitem__))


class Context:
    """A fraction field Q(vars) with vars in canonical order.  Cached."""

    _cache: dict = {}

    def __new__(cls, names):
        names = _sorted_vars(names)
        if names in cls._cache:
            return cls._cache[names]
        self = object.__new__(cls)
        self.names = names
        if names:
            fld = _field(", ".join(names), QQ)
            self.field, self.gens = fld[0], dict(zip(names, fld[1:]))
        else:
            fld = _field("x", QQ)   # degenerate: constants context
            self.field, self.gens = fld[0], {}
        cls._cache[names] = self
        return self

    def __repr__(self):
        return f"Context{self.names}"


def _merge(ctx_a, ctx_b):
    if ctx_a is ctx_b:
        return ctx_a
    return Context(set(ctx_a.names) | set(ctx_b.names))


def _convert(elem, src, dst):
    """Move a FracElement between contexts (dst must contain src's variables)."""
    if src is dst:
        return elem
    smap = {sp.Symbol(n): sp.Symbol(n) for n in src.names}
    return dst.field.from_expr(elem.as_expr())


class RatFun:
    __slots__ = ("ctx", "f")

    def __init__(self, ctx, f):
        self.ctx = ctx
        self.f = f

    # -- constructors ------------------------------------------------------
    @classmethod
    def const(cls, value, ctx=None):
        ctx = ctx or Context(())
        value = Fraction(value) if not isinstance(value, Fraction) else value
        one = ctx.field.one
        return cls(ctx, one * QQ(value.numerator, value.denominator))

    @classmethod
    def var(cls, name):
        ctx = Context((name,))
        return cls(ctx, ctx.gens[name])

    @classmethod
    def from_string(cls, text):
        return parse_ratfun(text)

    # -- plumbing ----------------------------------------------------------
    def in_ctx(self, ctx):
        return RatFun(ctx, _convert(self.f, self.ctx, ctx))

    def _pair(self, other):
        if not isinstance(other, RatFun):
            if not isinstance(other, (int, Fraction)):
                return None
            other = RatFun.const(other)
        ctx = _merge(self.ctx, other.ctx)
        return self.in_ctx(ctx), other.in_ctx(ctx), ctx

    # -- ring ops ----------------------------------------------------------
    def __add__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a, b, ctx = p
        return RatFun(ctx, a.f + b.f)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(self.ctx, -self.f)

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a, b, ctx = p
        return RatFun(ctx, a.f - b.f)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a, b, ctx = p
        return RatFun(ctx, a.f * b.f)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a, b, ctx = p
        if not b.f:
            raise ExprError("division by the zero rational function")
        return RatFun(ctx, a.f / b.f)

    def __rtruediv__(self, other):
        return RatFun.const(other) / self

    def __pow__(self, n):
        return RatFun(self.ctx, self.f ** n)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFun.const(other)
        if not isinstance(other, RatFun):
            return NotImplemented
        a, b, _ = self._pair(other)
        return a.f == b.f

    def __hash__(self):
        return hash(str(self))

    def __bool__(self):
        return bool(self.f)

    def is_zero(self):
        return not self.f

    def eq_cross(self, other):
        """Equality by cross-multiplication of the stored numer/denom pairs.
        Same verdict as ==; cheaper when the operands are not yet reduced."""
        a, b, _ = self._pair(other)
        return a.f.numer * b.f.denom == b.f.numer * a.f.denom

    # -- calculus ----------------------------------------------------------
    def diff(self, name):
        if name not in self.ctx.names:
            return RatFun(self.ctx, self.ctx.field.zero)
        return RatFun(self.ctx, self.f.diff(self.ctx.gens[name]))

    def subs(self, binding):
        """Simultaneous substitution variable -> RatFun (or rational)."""
        binding = {k: (v if isinstance(v, RatFun) else RatFun.const(v))
                   for k, v in binding.items()}
        tgt = Context(set().union(
            *(v.ctx.names for v in binding.values()),
            set(self.ctx.names) - set(binding)) if binding else self.ctx.names)
        vals = {}
        for n in self.ctx.names:
            vals[n] = binding[n].in_ctx(tgt).f if n in binding \
                else tgt.gens[n]
        num = _poly_eval(self.f.numer, self.ctx, vals, tgt)
        den = _poly_eval(self.f.denom, self.ctx, vals, tgt)
        if not den:
            raise ExprError("substitution lands on a pole (denominator vanishes identically)")
        return RatFun(tgt, num / den)

    def eval_rational(self, point):
        """Exact evaluation at rational coordinates; raises on poles."""
        out = self.subs({k: Fraction(v) for k, v in point.items()})
        if out.ctx.names and any(n in out.ctx.names and _uses(out.f, out.ctx, n)
                                 for n in out.ctx.names):
            missing = [n for n in out.ctx.names if _uses(out.f, out.ctx, n)]
            if missing:
                raise ExprError(f"point does not bind variables {missing}")
        num, den = out.f.numer, out.f.denom
        cn = num.coeff(1) if num.is_ground else None
        cd = den.coeff(1) if den.is_ground else None
        if cn is None or cd is None:
            raise ExprError("evaluation did not produce a constant")
        return Fraction(cn.numerator, cn.denominator) / Fraction(cd.numerator, cd.denominator)

    # -- inspection ----------------------------------------------------------
    @property
    def numer(self):
        return self.f.numer

    @property
    def denom(self):
        return self.f.denom

    def variables(self):
        return tuple(n for n in self.ctx.names if _uses(self.f, self.ctx, n))

    def __repr__(self):
        return f"RatFun({self})"

    def __str__(self):
        return format_ratfun(self)


def _uses(frac, ctx, name):
    g = ctx.gens[name]
    i = ctx.field.gens.index(g)
    return any(m[i] for m in frac.numer.monoms()) or any(m[i] for m in frac.denom.monoms())


def _poly_eval(poly, ctx, vals, tgt):
    """Evaluate a PolyElement with values given as FracElements of tgt."""
    gens = [vals[n] for n in ctx.names]
    out = tgt.field.zero
    for mon, coeff in poly.terms():
        term = tgt.field.one * coeff
        for g, e in zip(gens, mon):
            if e:
                term *= g ** e
        out += term
    return out


def normalize(f):
    """Identity on this representation (elements are kept reduced); exists so
    callers can state intent and so the denominator-zero error has one home."""
    if not isinstance(f, RatFun):
        raise ExprError("normalize expects a RatFun")
    return f


def differentiate(f, name):
    return f.diff(name)


def substitute(f, binding):
    return f.subs(binding)


# ---------------------------------------------------------------------------
# forms

def _as_ratfun(v):
    return v if isinstance(v, RatFun) else RatFun.const(v)


class OneForm:
    """sum_v f_v dv, components keyed by variable name."""

    __slots__ = ("ctx", "comp")

    def __init__(self, comp):
        comp = {k: _as_ratfun(v) for k, v in comp.items()}
        ctx = Context(set().union(set(), *(c.ctx.names for c in comp.values()),
                                  comp.keys()))
        self.ctx = ctx
        self.comp = {k: v.in_ctx(ctx) for k, v in comp.items() if v}

    def component(self, name):
        return self.comp.get(name, RatFun.const(0, self.ctx))

    def __add__(self, other):
        keys = set(self.comp) | set(other.comp)
        return OneForm({k: self.component(k) + other.component(k) for k in keys})

    def __sub__(self, other):
        keys = set(self.comp) | set(other.comp)
        return OneForm({k: self.component(k) - other.component(k) for k in keys})

    def __neg__(self):
        return OneForm({k: -v for k, v in self.comp.items()})

    def __rmul__(self, scalar):
        return OneForm({k: _as_ratfun(scalar) * v for k, v in self.comp.items()})

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, OneForm):
            return NotImplemented
        keys = set(self.comp) | set(other.comp)
        return all(self.component(k) == other.component(k) for k in keys)

    def __hash__(self):
        return hash(str(self))

    def is_zero(self):
        return not self.comp

    def variables(self):
        return _sorted_vars(set().union(set(), *(
            set(v.variables()) for v in self.comp.values()), self.comp.keys()))

    def __repr__(self):
        if not self.comp:
            return "OneForm(0)"
        return "OneForm(" + " + ".join(
            f"({v}) d{k}" for k, v in sorted(self.comp.items(),
                                             key=lambda kv: _RANK[kv[0]])) + ")"


class TwoForm:
    """Components on ordered pairs (v, w) with v < w in the global order."""

    __slots__ = ("comp",)

    def __init__(self, comp):
        out = {}
        for (a, b), val in comp.items():
            val = _as_ratfun(val)
            if _RANK[a] > _RANK[b]:
                a, b, val = b, a, -val
            elif a == b:
                continue
            if (a, b) in out:
                val = out[(a, b)] + val
            out[(a, b)] = val
        self.comp = {k: v for k, v in out.items() if v}

    def component(self, a, b):
        sign = 1
        if _RANK[a] > _RANK[b]:
            a, b, sign = b, a, -1
        got = self.comp.get((a, b))
        if got is None:
            return RatFun.const(0)
        return sign * got

    def __add__(self, other):
        keys = set(self.comp) | set(other.comp)
        return TwoForm({k: self.component(*k) + other.component(*k) for k in keys})

    def __sub__(self, other):
        keys = set(self.comp) | set(other.comp)
        return TwoForm({k: self.component(*k) - other.component(*k) for k in keys})

    def __neg__(self):
        return TwoForm({k: -v for k, v in self.comp.items()})

    def __rmul__(self, scalar):
        return TwoForm({k: _as_ratfun(scalar) * v for k, v in self.comp.items()})

    __mul__ = __rmul__

    def __eq__(self, other):
        if not isinstance(other, TwoForm):
            return NotImplemented
        keys = set(self.comp) | set(other.comp)
        return all(self.component(*k) == other.component(*k) for k in keys)

    def __hash__(self):
        return hash(frozenset(self.comp))

    def is_zero(self):
        return not self.comp

    def __repr__(self):
        if not self.comp:
            return "TwoForm(0)"
        return "TwoForm(" + " + ".join(
            f"({v}) d{a}^d{b}" for (a, b), v in sorted(self.comp.items())) + ")"


class ThreeForm:
    __slots__ = ("comp",)

    def __init__(self, comp):
        out = {}
        for key, val in comp.items():
            val = _as_ratfun(val)
            names = list(key)
            if len(set(names)) < 3:
                continue
            sign = 1
            # bubble sort tracking parity
            for i in range(2):
                for j in range(2 - i):
                    if _RANK[names[j]] > _RANK[names[j + 1]]:
                        names[j], names[j + 1] = names[j + 1], names[j]
                        sign = -sign
            k = tuple(names)
            val = sign * val
            out[k] = out[k] + val if k in out else val
        self.comp = {k: v for k, v in out.items() if v}

    def is_zero(self):
        return not self.comp

    def __eq__(self, other):
        if not isinstance(other, ThreeForm):
            return NotImplemented
        return (self - other).is_zero()

    def __sub__(self, other):
        keys = set(self.comp) | set(other.comp)
        z = RatFun.const(0)
        return ThreeForm({k: self.comp.get(k, z) - other.comp.get(k, z) for k in keys})

    def __repr__(self):
        if not self.comp:
            return "ThreeForm(0)"
        return "ThreeForm(" + " + ".join(
            f"({v}) d{a}^d{b}^d{c}" for (a, b, c), v in sorted(self.comp.items())) + ")"


def wedge(eta, omega):
    """Wedge of a OneForm with a OneForm (-> TwoForm) or TwoForm (-> ThreeForm)."""
    if isinstance(eta, OneForm) and isinstance(omega, OneForm):
        out = {}
        for a, fa in eta.comp.items():
            for b, gb in omega.comp.items():
                if a == b:
                    continue
                key = (a, b)
                term = fa * gb
                out[key] = out[key] + term if key in out else term
        return TwoForm(out)
    if isinstance(eta, OneForm) and isinstance(omega, TwoForm):
        out = {}
        for a, fa in eta.comp.items():
            for (b, c), g in omega.comp.items():
                if a in (b, c):
                    continue
                key = (a, b, c)
                term = fa * g
                out[key] = out[key] + term if key in out else term
        return ThreeForm(out)
    if isinstance(eta, TwoForm) and isinstance(omega, OneForm):
        return wedge(omega, eta)
    raise ExprError("unsupported wedge degree")


def exterior_derivative(omega):
    """d of a OneForm (TwoForm output) or of a RatFun (OneForm output)."""
    if isinstance(omega, RatFun):
        return OneForm({v: omega.diff(v) for v in omega.variables()})
    if isinstance(omega, OneForm):
        out = {}
        for v, f in omega.comp.items():
            for w in f.variables():
                if w == v:
                    continue
                key = (w, v)
                term = f.diff(w)
                out[key] = out[key] + term if key in out else term
        return TwoForm(out)
    raise ExprError("unsupported exterior-derivative degree")


def pullback_oneform(omega, mapping):
    """Pull back sum f_v dv along v = mapping[v]; dv -> sum d(mapping[v])."""
    if not isinstance(omega, OneForm):
        raise ExprError("pullback expects a OneForm")
    out = None
    for v, f in omega.comp.items():
        if v not in mapping:
            raise ExprError(f"pullback map does not bind d{v}")
        g = _as_ratfun(mapping[v])
        coeff = f.subs(mapping)
        piece = OneForm({w: coeff * g.diff(w) for w in g.variables()})
        out = piece if out is None else out + piece
    return out if out is not None else OneForm({})


def ratfun_from_sympy(e, bindings=None):
    """Evaluate a sympy expression into a RatFun.

    ``bindings`` maps symbol names to RatFun/Fraction values; unbound symbols
    must be variables of the fixed alphabet and become RatFun variables.
    """
    bindings = bindings or {}

    def walk(node):
        if node.is_Symbol:
            n = str(node)
            if n in bindings:
                return _as_ratfun(bindings[n])
            return RatFun.var(n)
        if node.is_Rational:
            return RatFun.const(Fraction(node.p, node.q))
        if node.is_Add:
            out = walk(node.args[0])
            for a in node.args[1:]:
                out = out + walk(a)
            return out
        if node.is_Mul:
            out = walk(node.args[0])
            for a in node.args[1:]:
                out = out * walk(a)
            return out
        if node.is_Pow:
            base, expo = node.args
            if not (expo.is_Integer):
                raise ExprError(f"non-integer power {node}")
            k = int(expo)
            b = walk(base)
            return b ** k if k >= 0 else RatFun.const(1) / (b ** (-k))
        raise ExprError(f"unsupported node {type(node).__name__}: {node}")

    return walk(sp.sympify(e))


# ---------------------------------------------------------------------------
# text grammar: infix with ^ for powers, rational constants, fixed variables

_TRANSFORMS = standard_transformations + (convert_xor,)
_LOCALS = {n: sp.Symbol(n) for n in VAR_ORDER}


def parse_ratfun(text):
    text = " ".join(line.split("#", 1)[0] for line in text.splitlines())
    try:
        e = parse_expr(text, local_dict=dict(_LOCALS), transformations=_TRANSFORMS,
                       evaluate=True)
    except Exception as exc:  # sympy raises many kinds
        raise ExprError(f"cannot parse expression: {exc}") from exc
    syms = {str(s) for s in e.free_symbols}
    ctx = Context(syms)
    try:
        f = ctx.field.from_expr(e)
    except Exception as exc:
        raise ExprError(f"not a rational function over Q: {exc}") from exc
    return RatFun(ctx, f)


def _poly_text(poly, names):
    terms = sorted(poly.terms(), reverse=True)
    if not terms:
        return "0"
    pieces = []
    for mon, coeff in terms:
        factors = []
        c = Fraction(coeff.numerator, coeff.denominator)
        for n, e in zip(names, mon):
            if e == 1:
                factors.append(n)
            elif e:
                factors.append(f"{n}^{e}")
        if not factors or abs(c) != 1:
            factors.insert(0, str(abs(c)))
        body = "*".join(factors)
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append(("- " if c < 0 else "+ ") + body)
    return " ".join(pieces)


def format_ratfun(f):
    num = _poly_text(f.f.numer, f.ctx.names)
    den = _poly_text(f.f.denom, f.ctx.names)
    if den == "1":
        return f"({num})"
    return f"({num})/({den})"
