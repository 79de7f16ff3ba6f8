"""Exact rational multivariate polynomials and complex-float univariate polynomials.

``MultiPoly`` is exact (``fractions.Fraction`` coefficients) and houses the
universal polynomials and their gradients.  ``CPoly`` carries complex double
coefficients in ascending degree and houses the exponent polynomial and the
reduction quotients.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "BigRational",
    "MultiPoly",
    "CPoly",
    "NormalizedP0",
    "UsageError",
    "mp_add",
    "mp_mul",
    "mp_scale",
    "mp_partial",
    "cp_divmod",
    "cp_derivative",
    "cp_eval",
    "parse_complex",
    "complex_to_json",
]

# Fraction already keeps numerator/denominator reduced with a positive
# denominator; zero is 0/1.
BigRational = Fraction

Scalar = Union[int, Fraction]


class UsageError(ValueError):
    """Raised for malformed arguments (mismatched arity, bad indices, ...)."""


def _as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise UsageError(f"not an exact rational: {x!r}")


class MultiPoly:
    """Polynomial over Q in ``num_vars`` variables X0..X_{d-1}.

    Terms live in a dict mapping exponent tuples to non-zero Fractions.
    Instances are treated as immutable.
    """

    __slots__ = ("num_vars", "_terms")

    def __init__(self, num_vars: int, terms: Mapping[Sequence[int], Scalar] | None = None):
        if num_vars < 0:
            raise UsageError("num_vars must be non-negative")
        self.num_vars = num_vars
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != num_vars or any(e < 0 for e in exp):
                raise UsageError(f"bad exponent vector {exp} for {num_vars} variables")
            c = _as_rational(coef)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self._terms = clean

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, num_vars: int) -> "MultiPoly":
        return cls(num_vars)

    @classmethod
    def constant(cls, num_vars: int, value: Scalar) -> "MultiPoly":
        return cls(num_vars, {(0,) * num_vars: value})

    @classmethod
    def variable(cls, num_vars: int, index: int, coef: Scalar = 1) -> "MultiPoly":
        if not 0 <= index < num_vars:
            raise UsageError(f"variable index {index} out of range for {num_vars} variables")
        exp = [0] * num_vars
        exp[index] = 1
        return cls(num_vars, {tuple(exp): coef})

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e in self._terms), default=-1)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.num_vars, Fraction(0))

    def variables_used(self) -> set[int]:
        return {i for e in self._terms for i, k in enumerate(e) if k}

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in graded-lex order (total degree descending, then lex descending)."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def homogeneous_components(self) -> dict[int, "MultiPoly"]:
        parts: dict[int, dict] = {}
        for e, c in self._terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {g: MultiPoly(self.num_vars, t) for g, t in parts.items()}

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self._terms)

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "MultiPoly") -> None:
        if other.num_vars != self.num_vars:
            raise UsageError(f"mismatched num_vars: {self.num_vars} vs {other.num_vars}")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.num_vars, _as_rational(other))

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly(self.num_vars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.num_vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = _as_rational(other)
            return MultiPoly(self.num_vars, {e: v * c for e, v in self._terms.items()})
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.num_vars, out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "MultiPoly":
        c = _as_rational(other)
        if not c:
            raise ZeroDivisionError("division of MultiPoly by zero")
        return self * (1 / c)

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int) or n < 0:
            raise UsageError("exponent must be a non-negative int")
        out = MultiPoly.constant(self.num_vars, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.num_vars == other.num_vars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self.num_vars, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num_vars, frozenset(self._terms.items())))

    def partial(self, index: int) -> "MultiPoly":
        return mp_partial(self, index)

    def __call__(self, *values):
        """Evaluate at numeric values (Fractions stay exact, complex works too)."""
        if len(values) == 1 and isinstance(values[0], (list, tuple)):
            values = tuple(values[0])
        if len(values) != self.num_vars:
            raise UsageError(f"expected {self.num_vars} values, got {len(values)}")
        total = 0
        for e, c in self._terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term = term * v**k
            total = total + term
        return total

    # -- presentation -------------------------------------------------------
    def __repr__(self) -> str:
        return f"MultiPoly({self.num_vars}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"X{i}" if k == 1 else f"X{i}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_latex(self) -> str:
        if not self._terms:
            return "0"
        out = ""
        for i, (e, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "".join(
                f"X_{{{j}}}" if k == 1 else f"X_{{{j}}}^{{{k}}}" for j, k in enumerate(e) if k
            )
            if a.denominator != 1:
                coef = f"\\frac{{{a.numerator}}}{{{a.denominator}}}"
            elif a != 1 or not mono:
                coef = str(a.numerator)
            else:
                coef = ""
            if i == 0:
                out += ("-" if c < 0 else "") + coef + mono
            else:
                out += f" {sign} {coef}{mono}"
        return out

    def to_json(self) -> list[dict]:
        return [
            {"exp": list(e), "coef": f"{c.numerator}/{c.denominator}"}
            for e, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data: Iterable[Mapping], num_vars: int | None = None) -> "MultiPoly":
        data = list(data)
        if num_vars is None:
            if not data:
                raise UsageError("num_vars required to parse an empty MultiPoly")
            num_vars = len(data[0]["exp"])
        return cls(num_vars, {tuple(t["exp"]): Fraction(t["coef"]) for t in data})


def mp_add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p + q


def mp_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    return p * q


def mp_scale(p: MultiPoly, c: Scalar) -> MultiPoly:
    return p * _as_rational(c)


def mp_partial(p: MultiPoly, index: int) -> MultiPoly:
    """Exact partial derivative with respect to X_index."""
    if not 0 <= index < p.num_vars:
        raise UsageError(f"variable index {index} out of range for {p.num_vars} variables")
    out = {}
    for e, c in p._terms.items():
        k = e[index]
        if k:
            ne = list(e)
            ne[index] = k - 1
            out[tuple(ne)] = c * k
    return MultiPoly(p.num_vars, out)


# ---------------------------------------------------------------------------
# complex univariate polynomials


def parse_complex(x) -> complex:
    """Accept ``[re, im]``, a number, or a complex; reject non-finite values."""
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise UsageError(f"complex must be [re, im], got {x!r}")
        z = complex(float(x[0]), float(x[1]))
    elif isinstance(x, (int, float, complex, Fraction)):
        z = complex(x)
    else:
        raise UsageError(f"cannot read complex value from {x!r}")
    if not cmath.isfinite(z):
        raise UsageError(f"non-finite complex value {x!r}")
    return z


def complex_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


class CPoly:
    """Univariate polynomial with complex coefficients, ascending degree.

    Trailing zero coefficients are stripped, so the zero polynomial is ``()``
    and ``degree`` is ``len(coeffs) - 1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [parse_complex(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[complex, ...] = tuple(cs)

    @classmethod
    def monomial(cls, k: int, coef: complex = 1.0) -> "CPoly":
        return cls([0.0] * k + [coef])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coef(self, k: int) -> complex:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0j

    def norm(self) -> float:
        """Max-abs coefficient norm."""
        return max((abs(c) for c in self.coeffs), default=0.0)

    def __add__(self, other) -> "CPoly":
        other = _cpoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return CPoly([self.coef(i) + other.coef(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "CPoly":
        return CPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "CPoly":
        return self + (-_cpoly(other))

    def __rsub__(self, other) -> "CPoly":
        return _cpoly(other) - self

    def __mul__(self, other) -> "CPoly":
        if isinstance(other, (int, float, complex)):
            return CPoly([c * other for c in self.coeffs])
        other = _cpoly(other)
        if self.is_zero() or other.is_zero():
            return CPoly()
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return CPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, CPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, float, complex)):
            return self == CPoly([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, z):
        return cp_eval(self, z)

    def derivative(self) -> "CPoly":
        return cp_derivative(self)

    def allclose(self, other: "CPoly", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        other = _cpoly(other)
        scale = max(self.norm(), other.norm(), 1e-300)
        n = max(len(self.coeffs), len(other.coeffs))
        return all(abs(self.coef(i) - other.coef(i)) <= atol + rtol * scale for i in range(n))

    def __repr__(self) -> str:
        return f"CPoly({list(self.coeffs)!r})"

    def to_json(self) -> list[list[float]]:
        return [complex_to_json(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "CPoly":
        if isinstance(data, dict):
            data = data.get("coeffs", data.get("q"))
        return cls(parse_complex(c) for c in data)


def _cpoly(x) -> CPoly:
    if isinstance(x, CPoly):
        return x
    if isinstance(x, (int, float, complex, Fraction)):
        return CPoly([x])
    return CPoly(x)


def cp_derivative(p: CPoly) -> CPoly:
    return CPoly([k * c for k, c in enumerate(p.coeffs)][1:])


def cp_eval(p: CPoly, z):
    """Horner evaluation; works elementwise on numpy arrays too."""
    acc = 0j
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


def cp_divmod(num: CPoly, den: CPoly) -> tuple[CPoly, CPoly]:
    """Euclidean division ``num = q*den + r`` with ``deg r < deg den``.

    Divides straight by the leading coefficient of ``den`` (no pivoting).
    """
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(num.coeffs)
    n_den = den.degree
    lead = den.coeffs[-1]
    if len(rem) - 1 < n_den:
        return CPoly(), CPoly(rem)
    quot = [0j] * (len(rem) - n_den)
    for k in range(len(rem) - 1, n_den - 1, -1):
        q = rem[k] / lead
        quot[k - n_den] = q
        if q:
            for j, c in enumerate(den.coeffs):
                rem[k - n_den + j] -= q * c
        rem[k] = 0j
    return CPoly(quot), CPoly(rem[:n_den])


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalizedP0:
    """-(1/d) z^d + a_{d-1} z^{d-1} + ... + a_0, given by d and (a_0..a_{d-1})."""

    d: int
    a: tuple[complex, ...]

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise UsageError(f"degree must be an integer >= 1, got {self.d!r}")
        a = tuple(parse_complex(x) for x in self.a)
        if len(a) != self.d:
            raise UsageError(f"expected {self.d} coefficients a_0..a_{self.d - 1}, got {len(a)}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "a", a)

    @classmethod
    def zero(cls, d: int) -> "NormalizedP0":
        return cls(d, (0j,) * d)

    def poly(self) -> CPoly:
        return CPoly(list(self.a) + [-1.0 / self.d])

    def derivative(self) -> CPoly:
        """P0' with leading coefficient exactly -1."""
        return CPoly([k * self.a[k] for k in range(1, self.d)] + [-1.0])

    def exact_form_coefficients(self) -> list[complex]:
        """(a_1, 2a_2, ..., (d-1)a_{d-1}, -1): the coefficients of P0' in 1, z, ..., z^{d-1}."""
        return [k * self.a[k] for k in range(1, self.d)] + [-1.0 + 0j]

    def __call__(self, z):
        return cp_eval(self.poly(), z)

    def to_json(self) -> dict:
        return {"d": self.d, "a": [complex_to_json(x) for x in self.a]}

    @classmethod
    def from_json(cls, data) -> "NormalizedP0":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(int(data["d"]), tuple(parse_complex(x) for x in data["a"]))
        except (KeyError, TypeError) as exc:
            raise UsageError(f'p0 must look like {{"d": n, "a": [[re, im], ...]}}: {exc}') from None
