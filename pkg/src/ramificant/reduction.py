"""Reduction of primitives of Q(z) e^{P0(z)} to the canonical space.

Every primitive vanishing at 0 decomposes uniquely as

    A0(z) e^{P0(z)} + c + b_0 F_0(z) + ... + b_{d-1} F_{d-1}(z),   A0(0) = 0,

with F_k(z) = int_0^z t^k e^{P0(t)} dt.  The exact remainder table A_{n,k}
(z^n modulo z P0') used by the universal polynomials lives here as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact_algebra import CPoly, MultiPoly, NormalizedP0, UsageError, cp_divmod

__all__ = [
    "ReductionResult",
    "RemainderTable",
    "reduce_primitive",
    "remainder_table",
    "identity_residual",
    "identity_rel_error",
]


@dataclass(frozen=True)
class ReductionResult:
    a0_poly: CPoly
    const_term: complex
    basis_coeffs: tuple[complex, ...]

    def to_json(self) -> dict:
        return {
            "a0_poly": self.a0_poly.to_json(),
            "const_term": [self.const_term.real, self.const_term.imag],
            "basis_coeffs": [[b.real, b.imag] for b in self.basis_coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ReductionResult":
        return cls(
            CPoly.from_json(data["a0_poly"]),
            complex(*data["const_term"]),
            tuple(complex(*b) for b in data["basis_coeffs"]),
        )


def reduce_primitive(p0: NormalizedP0, q: CPoly) -> ReductionResult:
    """Decompose int_0^z q(t) e^{P0(t)} dt.

    Repeated Euclidean division q = A P0' + B followed by integration by
    parts; A(z)e^{P0} - A(0)e^{a0} is split into (A - A(0)) e^{P0} plus
    A(0) times the F-combination of e^{P0} - e^{a0}, which keeps A0(0) = 0.
    The constant part therefore always comes out as zero.
    """
    d = p0.d
    dp0 = p0.derivative()
    exact_form = p0.exact_form_coefficients()
    a0_poly = CPoly()
    b = [0j] * d
    rest = q
    # deg(B - A') < deg(rest), so this loop runs at most deg(q) - d + 2 times.
    while rest.degree >= d:
        quot, rem = cp_divmod(rest, dp0)
        shift = quot.coef(0)
        a0_poly = a0_poly + (quot - shift)
        if shift:
            for k in range(d):
                b[k] += shift * exact_form[k]
        rest = rem - quot.derivative()
    for k, c in enumerate(rest.coeffs):
        b[k] += c
    return ReductionResult(a0_poly, 0j, tuple(b))


def identity_residual(p0: NormalizedP0, q: CPoly, res: ReductionResult) -> CPoly:
    """A0' + A0 P0' + sum_k b_k z^k - q, which must vanish identically."""
    lhs = res.a0_poly.derivative() + res.a0_poly * p0.derivative() + CPoly(res.basis_coeffs)
    return lhs - q


def identity_rel_error(p0: NormalizedP0, q: CPoly, res: ReductionResult) -> float:
    """Residual norm relative to the largest term of the identity.

    A0 can be far larger than q (factorial growth from repeated A'), so the
    scale is max(|q|, |A0'|, |A0 P0'|, |b|), not |q| alone.
    """
    scale = max(
        q.norm(),
        res.a0_poly.derivative().norm(),
        (res.a0_poly * p0.derivative()).norm(),
        max((abs(b) for b in res.basis_coeffs), default=0.0),
    )
    if scale == 0:
        return 0.0
    return identity_residual(p0, q, res).norm() / scale


@dataclass
class RemainderTable:
    """A_{n,k} with z^n = sum_k A_{n,k} z^k  (mod z P0'), exact in X_0..X_{d-1}."""

    d: int
    rows: dict[int, list[MultiPoly]] = field(default_factory=dict)

    def __getitem__(self, nk: tuple[int, int]) -> MultiPoly:
        n, k = nk
        return self.rows[n][k]

    @property
    def n_max(self) -> int:
        return max(self.rows)


def remainder_table(d: int, n_max: int) -> RemainderTable:
    """Rows 0..n_max of the remainder table, built by the linear recurrence

        A_{n+1,k} = sum_{j=1}^{d-1} j X_j A_{n-d+1+j,k}

    from the base rows A_{n,k} = delta_{nk} (n < d) and A_{d,k} = k X_k.
    """
    if d < 1:
        raise UsageError("degree must be >= 1")
    if n_max < 0:
        raise UsageError("n_max must be >= 0")
    table = RemainderTable(d)
    for n in range(min(n_max, d - 1) + 1):
        table.rows[n] = [MultiPoly.constant(d, 1 if k == n else 0) for k in range(d)]
    if n_max < d:
        return table
    x = [MultiPoly.variable(d, j, j) for j in range(d)]  # j X_j
    table.rows[d] = [x[k] for k in range(d)]
    for n in range(d, n_max):
        row = []
        for k in range(d):
            acc = MultiPoly.zero(d)
            for j in range(1, d):
                acc = acc + x[j] * table.rows[n - d + 1 + j][k]
            row.append(acc)
        table.rows[n + 1] = row
    return table
