"""Exact sparse multivariate polynomials over the rationals.

Polynomials carry an ordered tuple of variable names.  Arithmetic between
polynomials over different variable tuples embeds both by name, so ``x`` in
one operand is the same variable as ``x`` in the other.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

Monomial = tuple[int, ...]


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariableError(ValueError):
    pass


class SizeGuardError(ValueError):
    """Input exceeds a hard size limit of an exponential algorithm."""


def _rational(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, str):
        return Fraction(c.strip())
    return Fraction(c)


class Polynomial:
    """Immutable polynomial with exact rational coefficients.

    ``terms`` maps exponent tuples (one entry per variable in ``vars``) to
    nonzero :class:`Fraction` coefficients.  Equality ignores variables that
    do not occur, so ``x`` over ``(x,)`` equals ``x`` over ``(x, y)``.
    """

    __slots__ = ("vars", "terms", "_key")

    def __init__(self, vars: Sequence[str], terms: Mapping[Monomial, object] | None = None):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise ValueError(f"duplicate variable names in {vars}")
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != len(vars):
                raise ValueError("monomial length does not match variable count")
            if any(e < 0 for e in mono):
                raise ValueError("negative exponent")
            c = _rational(c)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self.vars = vars
        self.terms = clean
        self._key = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c, vars: Sequence[str] = ()) -> "Polynomial":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, name: str, vars: Sequence[str] | None = None) -> "Polynomial":
        vars = tuple(vars) if vars is not None else (name,)
        if name not in vars:
            raise UnknownVariableError(name)
        mono = tuple(1 if v == name else 0 for v in vars)
        return cls(vars, {mono: 1})

    @classmethod
    def zero(cls, vars: Sequence[str] = ()) -> "Polynomial":
        return cls(vars, {})

    # -- basic queries ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> float | int:
        """Total degree; ``-inf`` for the zero polynomial."""
        if not self.terms:
            return float("-inf")
        return max(sum(m) for m in self.terms)

    def degree_in(self, name: str) -> float | int:
        if not self.terms:
            return float("-inf")
        if name not in self.vars:
            return 0
        i = self.vars.index(name)
        return max(m[i] for m in self.terms)

    def occurring_vars(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vars) if any(m[i] for m in self.terms))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.vars), Fraction(0))

    def coefficient(self, powers: Mapping[str, int]) -> Fraction:
        for name in powers:
            if name not in self.vars and powers[name]:
                return Fraction(0)
        mono = tuple(powers.get(v, 0) for v in self.vars)
        return self.terms.get(mono, Fraction(0))

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def is_multi_affine(self) -> bool:
        return all(e <= 1 for m in self.terms for e in m)

    def coefficients(self) -> list[Fraction]:
        return list(self.terms.values())

    def named_terms(self) -> dict[frozenset, Fraction]:
        """Terms keyed by ``frozenset((name, exponent))`` over occurring variables."""
        out = {}
        for mono, c in self.terms.items():
            out[frozenset((v, e) for v, e in zip(self.vars, mono) if e)] = c
        return out

    # -- variable handling ------------------------------------------------

    def with_vars(self, vars: Sequence[str]) -> "Polynomial":
        """Re-express over ``vars``; every occurring variable must be kept."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        index = {v: i for i, v in enumerate(vars)}
        for v in self.occurring_vars():
            if v not in index:
                raise UnknownVariableError(f"variable {v} would be dropped")
        terms = {}
        for mono, c in self.terms.items():
            new = [0] * len(vars)
            for v, e in zip(self.vars, mono):
                if e:
                    new[index[v]] = e
            terms[tuple(new)] = c
        return Polynomial(vars, terms)

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        return Polynomial(tuple(mapping.get(v, v) for v in self.vars), self.terms)

    def _common(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if self.vars == other.vars:
            return self, other
        merged = self.vars + tuple(v for v in other.vars if v not in self.vars)
        return self.with_vars(merged), other.with_vars(merged)

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.vars)
        return NotImplemented

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._common(other)
        terms = dict(a.terms)
        for m, c in b.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Polynomial(a.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.vars, {m: c * other for m, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self._common(other)
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return Polynomial(a.vars, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and other != 0:
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- equality / hashing ----------------------------------------------

    def _canonical_key(self):
        if self._key is None:
            self._key = frozenset(self.named_terms().items())
        return self._key

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._canonical_key() == other._canonical_key()

    def __hash__(self):
        return hash(self._canonical_key())

    # -- printing ---------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        # graded lex in declared variable order, lowest degree first
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-e for e in t[0])))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, vars={self.vars})"

    # -- evaluation and substitution -------------------------------------

    def __call__(self, *point):
        return evaluate(self, point)

    def subs(self, values: Mapping[str, object]) -> "Polynomial":
        """Substitute rational constants for some variables; they are dropped."""
        values = {k: _rational(v) for k, v in values.items() if k in self.vars}
        keep = [i for i, v in enumerate(self.vars) if v not in values]
        fixed = [(i, values[v]) for i, v in enumerate(self.vars) if v in values]
        terms: dict[Monomial, Fraction] = {}
        for mono, c in self.terms.items():
            for i, val in fixed:
                if mono[i]:
                    c = c * val ** mono[i]
                    if not c:
                        break
            if not c:
                continue
            m = tuple(mono[i] for i in keep)
            terms[m] = terms.get(m, 0) + c
        return Polynomial(tuple(self.vars[i] for i in keep), terms)

    def compose(self, images: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Replace each variable named in ``images`` by a polynomial."""
        result = Polynomial.zero()
        powers: dict[tuple[str, int], Polynomial] = {}
        for mono, c in self.terms.items():
            term = Polynomial.constant(c)
            for v, e in zip(self.vars, mono):
                if not e:
                    continue
                if v in images:
                    key = (v, e)
                    if key not in powers:
                        powers[key] = images[v] ** e
                    term = term * powers[key]
                else:
                    term = term * Polynomial((v,), {(e,): 1})
            result = result + term
        return result


# ---------------------------------------------------------------------------
# parsing and formatting

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), start))
        elif m.group(3) is not None:
            if m.group(3) not in "+-*/^":
                raise PolynomialSyntaxError(f"unexpected character {m.group(3)!r}", start)
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def parse(text: str, vars: Sequence[str] | None = None) -> Polynomial:
    """Parse ``text`` into a Polynomial.

    With ``vars`` given, unknown identifiers raise :class:`UnknownVariableError`;
    otherwise the variables found are declared in natural order (x2 < x10).
    """
    tokens = _tokenize(text)
    pos = 0
    declared = list(vars) if vars is not None else []
    fixed = vars is not None
    raw_terms: list[tuple[Fraction, dict[str, int]]] = []

    def peek():
        return tokens[pos]

    def take(kind=None, value=None):
        nonlocal pos
        tok = tokens[pos]
        if kind and tok[0] != kind or value is not None and tok[1] != value:
            want = value if value is not None else kind
            raise PolynomialSyntaxError(f"expected {want}, found {tok[1]!r}", tok[2])
        pos += 1
        return tok

    def factor(powers):
        tok = take("ident")
        name = tok[1]
        if name not in declared:
            if fixed:
                raise UnknownVariableError(f"unknown variable {name!r} at position {tok[2]}")
            declared.append(name)
        exp = 1
        if peek()[:2] == ("op", "^"):
            take()
            etok = take("int")
            if etok[1] <= 0:
                raise PolynomialSyntaxError("exponent must be positive", etok[2])
            exp = etok[1]
        powers[name] = powers.get(name, 0) + exp

    def term(sign):
        coeff = Fraction(sign)
        powers: dict[str, int] = {}
        tok = peek()
        if tok[0] == "int":
            take()
            num = tok[1]
            if peek()[:2] == ("op", "/"):
                take()
                den = take("int")
                if den[1] == 0:
                    raise PolynomialSyntaxError("zero denominator", den[2])
                coeff *= Fraction(num, den[1])
            else:
                coeff *= num
        elif tok[0] == "ident":
            factor(powers)
        else:
            raise PolynomialSyntaxError(f"expected term, found {tok[1]!r}", tok[2])
        while peek()[:2] == ("op", "*"):
            take()
            factor(powers)
        raw_terms.append((coeff, powers))

    sign = 1
    if peek()[:2] == ("op", "-"):
        take()
        sign = -1
    term(sign)
    while peek()[0] == "op" and peek()[1] in "+-":
        sign = 1 if take()[1] == "+" else -1
        term(sign)
    if peek()[0] != "end":
        tok = peek()
        raise PolynomialSyntaxError(f"unexpected token {tok[1]!r}", tok[2])

    if not fixed:
        declared.sort(key=natural_key)
    terms: dict[Monomial, Fraction] = {}
    for coeff, powers in raw_terms:
        mono = tuple(powers.get(v, 0) for v in declared)
        terms[mono] = terms.get(mono, 0) + coeff
    return Polynomial(declared, terms)


def natural_key(name: str):
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for mono, c in p.sorted_terms():
        factors = []
        for v, e in zip(p.vars, mono):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        mag = abs(c)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _format_coeff(mag) + "*" + "*".join(factors)
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


def to_json(p: Polynomial) -> dict:
    return {
        "vars": list(p.vars),
        "terms": [{"c": _format_coeff(c), "e": list(m)} for m, c in p.sorted_terms()],
    }


def from_json(obj) -> Polynomial:
    """Accept the JSON object form or a polynomial string."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError:
            return parse(obj)
        if isinstance(obj, str):
            return parse(obj)
    vars = obj["vars"]
    return Polynomial(vars, {tuple(t["e"]): Fraction(str(t["c"])) for t in obj["terms"]})


# ---------------------------------------------------------------------------
# structural operations


def evaluate(p: Polynomial, point: Sequence) -> Fraction:
    if len(point) != len(p.vars):
        raise ValueError(f"point has length {len(point)}, expected {len(p.vars)}")
    point = [_rational(v) for v in point]
    total = Fraction(0)
    for mono, c in p.terms.items():
        for v, e in zip(point, mono):
            if e:
                c = c * v ** e
        total += c
    return total


class UPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_rational(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> float | int:
        return len(self.coeffs) - 1 if self.coeffs else float("-inf")

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, t) -> Fraction:
        t = _rational(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self) -> "UPoly":
        return UPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "UPoly") -> "UPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return UPoly(x + y for x, y in zip(a, b))

    def __neg__(self):
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UPoly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __repr__(self):
        return f"UPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        return format_poly(Polynomial(("t",), {(i,): c for i, c in enumerate(self.coeffs)}))


def restrict_line(p: Polynomial, a: Sequence, b: Sequence | None = None) -> UPoly:
    """The univariate polynomial ``t -> p(t*a + b)``; ``b`` defaults to 0."""
    n = len(p.vars)
    if len(a) != n or (b is not None and len(b) != n):
        raise ValueError("direction/offset length must equal the variable count")
    a = [_rational(v) for v in a]
    b = [Fraction(0)] * n if b is None else [_rational(v) for v in b]
    lin = [UPoly([bi, ai]) for ai, bi in zip(a, b)]
    cache: dict[tuple[int, int], UPoly] = {}

    def power(i, e):
        key = (i, e)
        if key not in cache:
            cache[key] = lin[i] if e == 1 else power(i, e - 1) * lin[i]
        return cache[key]

    total = UPoly()
    for mono, c in p.terms.items():
        term = UPoly([c])
        for i, e in enumerate(mono):
            if e:
                term = term * power(i, e)
        total = total + term
    return total


def shift(p: Polynomial, a: Sequence) -> Polynomial:
    """``p(x + a)`` expanded exactly."""
    if len(a) != len(p.vars):
        raise ValueError("shift vector length must equal the variable count")
    images = {}
    for v, ai in zip(p.vars, a):
        ai = _rational(ai)
        if ai:
            images[v] = Polynomial(p.vars, {tuple(int(w == v) for w in p.vars): 1}) + Polynomial.constant(ai, p.vars)
    if not images:
        return p
    return p.compose(images).with_vars(p.vars)


def homogenize(p: Polynomial, d: int, newvar: str) -> Polynomial:
    """``newvar^d * p(x / newvar)``; requires ``d >= deg p``."""
    if newvar in p.vars:
        raise ValueError(f"{newvar} already a variable")
    if not p.is_zero() and d < p.degree():
        raise ValueError(f"degree {d} is below deg p = {p.degree()}")
    vars = (newvar,) + p.vars
    return Polynomial(vars, {(d - sum(m),) + m: c for m, c in p.terms.items()})


def partial_derivative(p: Polynomial, var: str, order: int = 1) -> Polynomial:
    if var not in p.vars:
        raise UnknownVariableError(var)
    i = p.vars.index(var)
    terms = {}
    for mono, c in p.terms.items():
        e = mono[i]
        if e < order:
            continue
        c = c * (factorial(e) // factorial(e - order))
        terms[mono[:i] + (e - order,) + mono[i + 1:]] = c
    return Polynomial(p.vars, terms)


def multi_affine_part(p: Polynomial) -> Polynomial:
    return Polynomial(p.vars, {m: c for m, c in p.terms.items() if all(e <= 1 for e in m)})


def support(p: Polynomial) -> set[frozenset[str]]:
    if not p.is_multi_affine():
        raise ValueError("support is defined for multi-affine polynomials only")
    return {frozenset(v for v, e in zip(p.vars, m) if e) for m in p.terms}


def elementary_symmetric(vars: Sequence[str], k: int) -> Polynomial:
    vars = tuple(vars)
    if k > len(vars) or k < 0:
        raise ValueError(f"e_{k} undefined in {len(vars)} variables")
    terms = {}
    for idx in combinations(range(len(vars)), k):
        mono = [0] * len(vars)
        for i in idx:
            mono[i] = 1
        terms[tuple(mono)] = 1
    p = Polynomial(vars, terms)
    assert len(p.terms) == comb(len(vars), k)
    return p


def homogeneous_component(p: Polynomial, k: int) -> Polynomial:
    return Polynomial(p.vars, {m: c for m, c in p.terms.items() if sum(m) == k})


def variables(names: str | Sequence[str]) -> tuple[Polynomial, ...]:
    """Convenience: ``x, y = variables("x y")``."""
    if isinstance(names, str):
        names = names.split()
    names = tuple(names)
    return tuple(Polynomial.variable(n, names) for n in names)
