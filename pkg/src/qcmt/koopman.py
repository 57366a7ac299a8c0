"""Phase-space polynomials, Poisson brackets, and Koopman operator pairs.

Two operator families act on functions over a 2n-dimensional phase space:
multiplication operators (one per symbol u, acting f -> u*f) and Poisson
derivations (acting f -> {u, f}).  Multiplication operators commute among
themselves; the commutator of a derivation with a multiplication operator
is the multiplication operator of the bracket, and derivations close under
the bracket.  Exponentiating derivations gives canonical flows, while
exponentiating multiplication operators rescales pointwise, a
non-canonical transformation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algebra import Index
from .gaussian import GaussianKernel

MULTIPLICATION = "multiplication"
LIOUVILLE = "liouville"

DEFAULT_FLOW_STEP = 1e-3


class PhaseSpacePolynomial:
    """Complex-coefficient polynomial in canonical coordinates q_1..q_n, p_1..p_n.

    Terms map exponent tuples ``(a_1..a_n, b_1..b_n)`` for ``q^a p^b`` to
    coefficients.  Only exact zeros are pruned, so integer-coefficient
    arithmetic cancels exactly and residual checks can demand literal zero.
    """

    __slots__ = ("dimension", "terms")

    def __init__(self, dimension: int, terms=None):
        if dimension < 1:
            raise ValueError("phase space needs at least one degree of freedom")
        self.dimension = int(dimension)
        width = 2 * self.dimension
        clean = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != width:
                    raise ValueError(f"exponent tuple {exps} does not have length {width}")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                c = complex(c)
                if c != 0:
                    clean[exps] = clean.get(exps, 0j) + c
                    if clean[exps] == 0:
                        del clean[exps]
        self.terms = clean

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, dimension: int) -> "PhaseSpacePolynomial":
        return cls(dimension)

    @classmethod
    def constant(cls, dimension: int, value: complex) -> "PhaseSpacePolynomial":
        return cls(dimension, {(0,) * (2 * dimension): value})

    @classmethod
    def coordinate(cls, dimension: int, kind: str, axis: int = 0) -> "PhaseSpacePolynomial":
        """The coordinate function q_axis or p_axis."""
        if kind not in ("q", "p"):
            raise ValueError("kind must be 'q' or 'p'")
        if not 0 <= axis < dimension:
            raise ValueError(f"axis {axis} out of range for dimension {dimension}")
        pos = axis if kind == "q" else dimension + axis
        exps = tuple(1 if s == pos else 0 for s in range(2 * dimension))
        return cls(dimension, {exps: 1.0})

    # ring structure -------------------------------------------------------
    def _check_dimension(self, other):
        if self.dimension != other.dimension:
            raise ValueError(
                f"dimension mismatch: {self.dimension} vs {other.dimension}"
            )

    def __add__(self, other):
        if not isinstance(other, PhaseSpacePolynomial):
            return NotImplemented
        self._check_dimension(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, 0j) + c
        return PhaseSpacePolynomial(self.dimension, out)

    def __sub__(self, other):
        if not isinstance(other, PhaseSpacePolynomial):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return PhaseSpacePolynomial(self.dimension, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, PhaseSpacePolynomial):
            self._check_dimension(other)
            out = {}
            for ea, ca in self.terms.items():
                for eb, cb in other.terms.items():
                    exps = tuple(x + y for x, y in zip(ea, eb))
                    out[exps] = out.get(exps, 0j) + ca * cb
            return PhaseSpacePolynomial(self.dimension, out)
        if isinstance(other, (int, float, complex)):
            return PhaseSpacePolynomial(
                self.dimension, {e: c * other for e, c in self.terms.items()}
            )
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    # calculus -------------------------------------------------------------
    def diff(self, var: int) -> "PhaseSpacePolynomial":
        """Partial derivative along flat coordinate ``var`` in 0..2n-1."""
        if not 0 <= var < 2 * self.dimension:
            raise ValueError(f"variable {var} out of range")
        out = {}
        for exps, c in self.terms.items():
            e = exps[var]
            if e == 0:
                continue
            lowered = tuple(x - 1 if s == var else x for s, x in enumerate(exps))
            out[lowered] = out.get(lowered, 0j) + e * c
        return PhaseSpacePolynomial(self.dimension, out)

    def __call__(self, point) -> complex:
        """Evaluate at a flat point (q_1..q_n, p_1..p_n)."""
        point = tuple(point)
        if len(point) != 2 * self.dimension:
            raise ValueError(f"point has length {len(point)}, expected {2 * self.dimension}")
        total = 0j
        for exps, c in self.terms.items():
            value = c
            for x, e in zip(point, exps):
                if e:
                    value *= x**e
            total += value
        return total

    # inspection -------------------------------------------------------------
    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def max_abs_coeff(self) -> float:
        if not self.terms:
            return 0.0
        return max(abs(c) for c in self.terms.values())

    def max_imag_coeff(self) -> float:
        if not self.terms:
            return 0.0
        return max(abs(c.imag) for c in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, PhaseSpacePolynomial):
            return NotImplemented
        return self.dimension == other.dimension and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        names = [f"q{s}" for s in range(self.dimension)] + [
            f"p{s}" for s in range(self.dimension)
        ]

        def monomial(exps):
            factors = [
                f"{names[s]}" + (f"^{e}" if e > 1 else "")
                for s, e in enumerate(exps)
                if e
            ]
            return "*".join(factors) if factors else "1"

        return " + ".join(f"({c:g})*{monomial(e)}" for e, c in self.terms.items())


def poisson(u: PhaseSpacePolynomial, v: PhaseSpacePolynomial) -> PhaseSpacePolynomial:
    """Canonical Poisson bracket {u, v} = sum_i du/dq_i dv/dp_i - du/dp_i dv/dq_i."""
    u._check_dimension(v)
    n = u.dimension
    out = PhaseSpacePolynomial.zero(n)
    for i in range(n):
        out = out + u.diff(i) * v.diff(n + i) - u.diff(n + i) * v.diff(i)
    return out


class KoopmanOperator:
    """Multiplication operator or Poisson derivation with a polynomial symbol."""

    __slots__ = ("kind", "symbol")

    def __init__(self, kind: str, symbol: PhaseSpacePolynomial):
        if kind not in (MULTIPLICATION, LIOUVILLE):
            raise ValueError(f"unknown operator kind {kind!r}")
        self.kind = kind
        self.symbol = symbol

    @classmethod
    def multiplication(cls, symbol: PhaseSpacePolynomial) -> "KoopmanOperator":
        """Operator acting by pointwise multiplication with the symbol."""
        return cls(MULTIPLICATION, symbol)

    @classmethod
    def liouville(cls, symbol: PhaseSpacePolynomial) -> "KoopmanOperator":
        """Derivation f -> {u, f} generated by the symbol u."""
        return cls(LIOUVILLE, symbol)

    def apply(self, f: PhaseSpacePolynomial) -> PhaseSpacePolynomial:
        self.symbol._check_dimension(f)
        if self.kind == MULTIPLICATION:
            return self.symbol * f
        return poisson(self.symbol, f)

    def __repr__(self):
        return f"KoopmanOperator({self.kind!r}, {self.symbol!r})"


def bracket_residuals(u, v, f):
    """Residual polynomials of the three commutation relations, applied to f.

    Returns ([Mul_u, Mul_v] f,
             ([Der_u, Mul_v] - Mul_{u,v}) f,
             ([Der_u, Der_v] - Der_{u,v}) f);
    all three must vanish identically.
    """
    u._check_dimension(v)
    u._check_dimension(f)
    yu = KoopmanOperator.multiplication(u)
    yv = KoopmanOperator.multiplication(v)
    zu = KoopmanOperator.liouville(u)
    zv = KoopmanOperator.liouville(v)
    uv = poisson(u, v)
    r1 = yu.apply(yv.apply(f)) - yv.apply(yu.apply(f))
    r2 = zu.apply(yv.apply(f)) - yv.apply(zu.apply(f)) - uv * f
    r3 = zu.apply(zv.apply(f)) - zv.apply(zu.apply(f)) - poisson(uv, f)
    return r1, r2, r3


@dataclass(frozen=True)
class FlowSpec:
    """One-parameter flow generated by a Koopman operator for a given time."""

    generator: KoopmanOperator
    time: float


def _require_real_symbol(symbol: PhaseSpacePolynomial):
    scale = max(1.0, symbol.max_abs_coeff())
    if symbol.max_imag_coeff() > 1e-12 * scale:
        raise ValueError("flow generators must have real-valued symbols")


def flow_sample(spec: FlowSpec, points, steps: int | None = None):
    """Sample the exponentiated operator on phase-space points.

    Derivation flows integrate Hamilton's equations of the symbol
    (dq/dt = du/dp, dp/dt = -du/dq) with fixed-step RK4 and return the
    mapped points; for quadratic symbols this reproduces the exact linear
    symplectic map to integrator accuracy.  Multiplication flows return the
    pointwise multipliers exp(t*u).
    """
    op = spec.generator
    _require_real_symbol(op.symbol)
    n = op.symbol.dimension

    if op.kind == MULTIPLICATION:
        return [_bounded_exp(spec.time * op.symbol(point).real) for point in points]

    dq = [op.symbol.diff(n + i) for i in range(n)]  # du/dp_i
    dp = [op.symbol.diff(i) for i in range(n)]  # du/dq_i

    def velocity(x):
        return [d(x).real for d in dq] + [-d(x).real for d in dp]

    t = float(spec.time)
    if steps is None:
        steps = max(1, math.ceil(abs(t) / DEFAULT_FLOW_STEP))
    if steps < 1:
        raise ValueError("steps must be positive")
    h = t / steps

    mapped = []
    for point in points:
        x = [float(c) for c in point]
        if len(x) != 2 * n:
            raise ValueError(f"point has length {len(x)}, expected {2 * n}")
        for _ in range(steps):
            try:
                k1 = velocity(x)
                k2 = velocity([a + 0.5 * h * b for a, b in zip(x, k1)])
                k3 = velocity([a + 0.5 * h * b for a, b in zip(x, k2)])
                k4 = velocity([a + h * b for a, b in zip(x, k3)])
                x = [
                    a + h * (b1 + 2 * b2 + 2 * b3 + b4) / 6
                    for a, b1, b2, b3, b4 in zip(x, k1, k2, k3, k4)
                ]
            except OverflowError as exc:
                raise ValueError("flow integration produced non-finite values") from exc
            if not all(math.isfinite(c) for c in x):
                raise ValueError("flow integration produced non-finite values")
        mapped.append(tuple(x))
    return mapped


def _bounded_exp(x: float) -> float:
    if x > 700.0:
        raise ValueError("multiplication flow overflows the exponential")
    return math.exp(x)


def gibbs_oscillator_kernel(mass: float, frequency: float, temperature: float) -> GaussianKernel:
    """Gaussian kernel of the classical Gibbs state of a harmonic oscillator.

    For H = p^2/2m + m w^2 q^2 / 2 at temperature kT the equilibrium
    covariances are (q,q) = kT/(m w^2), (p,p) = m kT, (q,p) = 0.
    """
    if mass <= 0 or frequency <= 0 or temperature <= 0:
        raise ValueError("mass, frequency, and temperature must be positive")
    q = Index("q")
    p = Index("p")
    entries = {
        (q, q): temperature / (mass * frequency**2),
        (p, p): mass * temperature,
        (q, p): 0.0,
        (p, q): 0.0,
    }
    return GaussianKernel(entries, indices=(q, p))
