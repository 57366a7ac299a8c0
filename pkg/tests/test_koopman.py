import math

import numpy as np
import pytest
from scipy import integrate

from oracles import exact_quadratic_flow, sympy_poisson
from qcmt.gaussian import GaussianState, commutator_factor, wick_expect
from qcmt.koopman import (
    FlowSpec,
    KoopmanOperator,
    PhaseSpacePolynomial,
    bracket_residuals,
    flow_sample,
    gibbs_oscillator_kernel,
    poisson,
)


def coords(n=1):
    q = [PhaseSpacePolynomial.coordinate(n, "q", i) for i in range(n)]
    p = [PhaseSpacePolynomial.coordinate(n, "p", i) for i in range(n)]
    return q, p


def random_polynomial(rng, dimension, degree=3):
    terms = {}
    for _ in range(int(rng.integers(1, 5))):
        while True:
            exps = tuple(int(e) for e in rng.integers(0, degree + 1, size=2 * dimension))
            if sum(exps) <= degree:
                break
        terms[exps] = terms.get(exps, 0) + int(rng.integers(-3, 4))
    return PhaseSpacePolynomial(dimension, terms)


# ------------------------------------------------------------- polynomials


def test_polynomial_validation():
    with pytest.raises(ValueError):
        PhaseSpacePolynomial(1, {(1,): 1.0})
    with pytest.raises(ValueError):
        PhaseSpacePolynomial(1, {(-1, 0): 1.0})
    with pytest.raises(ValueError):
        PhaseSpacePolynomial(0)


def test_polynomial_arithmetic_and_evaluation():
    (q,), (p,) = coords()
    u = q * q + 2 * p - PhaseSpacePolynomial.constant(1, 1.0)
    assert u((3.0, 0.5)) == 9.0 + 1.0 - 1.0
    assert (u - u).is_zero()
    assert u.degree() == 2


def test_dimension_mismatch_rejected():
    (q1,), _ = coords(1)
    q2 = PhaseSpacePolynomial.coordinate(2, "q", 0)
    with pytest.raises(ValueError, match="dimension"):
        poisson(q1, q2)


# ------------------------------------------------------------- poisson bracket


def test_poisson_canonical_pair():
    (q,), (p,) = coords()
    assert poisson(q, p) == PhaseSpacePolynomial.constant(1, 1.0)


def test_poisson_squares():
    (q,), (p,) = coords()
    assert poisson(q * q, p * p) == 4 * (q * p)


def test_poisson_antisymmetry():
    (q,), (p,) = coords()
    u = q * q * p + 2 * q
    assert poisson(u, u).is_zero()


def test_poisson_matches_sympy(rng):
    for _ in range(25):
        n = int(rng.integers(1, 3))
        u = random_polynomial(rng, n)
        v = random_polynomial(rng, n)
        ours = poisson(u, v)
        reference = sympy_poisson(u, v)
        assert ours.terms == pytest.approx(reference)


def test_jacobi_identity_exact(rng):
    for _ in range(40):
        n = int(rng.integers(1, 3))
        u, v, w = (random_polynomial(rng, n) for _ in range(3))
        total = (
            poisson(u, poisson(v, w))
            + poisson(v, poisson(w, u))
            + poisson(w, poisson(u, v))
        )
        assert total.is_zero()


def test_leibniz_rule_exact(rng):
    for _ in range(40):
        n = int(rng.integers(1, 3))
        u, v, w = (random_polynomial(rng, n) for _ in range(3))
        assert (poisson(u, v * w) - (poisson(u, v) * w + v * poisson(u, w))).is_zero()


# ------------------------------------------------------------- operators


def test_multiplication_operator():
    (q,), (p,) = coords()
    assert KoopmanOperator.multiplication(q).apply(p) == q * p


def test_derivation_operator():
    (q,), (p,) = coords()
    assert KoopmanOperator.liouville(q).apply(q * p) == q


def test_derivation_kills_constants():
    (q,), _ = coords()
    one = PhaseSpacePolynomial.constant(1, 1.0)
    assert KoopmanOperator.liouville(q * q).apply(one).is_zero()


def test_bracket_residuals_canonical():
    (q,), (p,) = coords()
    for residual in bracket_residuals(q, p, q * p):
        assert residual.is_zero()


def test_bracket_residuals_equal_symbols():
    (q,), (p,) = coords()
    u = q * q + p
    for residual in bracket_residuals(u, u, q * p):
        assert residual.is_zero()


def test_bracket_residuals_randomized(rng):
    for _ in range(50):
        n = int(rng.integers(1, 3))
        u, v, f = (random_polynomial(rng, n) for _ in range(3))
        for residual in bracket_residuals(u, v, f):
            assert residual.is_zero()


# ------------------------------------------------------------- flows


def test_translation_flow():
    (q,), (p,) = coords()
    spec = FlowSpec(KoopmanOperator.liouville(p), 1.0)
    (moved,) = flow_sample(spec, [(0.0, 0.0)])
    assert np.allclose(moved, (1.0, 0.0), atol=1e-10)


def test_harmonic_flow_period():
    (q,), (p,) = coords()
    energy = 0.5 * (q * q + p * p)
    spec = FlowSpec(KoopmanOperator.liouville(energy), 2 * math.pi)
    (moved,) = flow_sample(spec, [(1.0, 0.0)])
    assert np.allclose(moved, (1.0, 0.0), atol=1e-8)


def test_multiplication_flow_is_pointwise_exponential():
    (q,), _ = coords()
    spec = FlowSpec(KoopmanOperator.multiplication(q), 1.0)
    values = flow_sample(spec, [(2.0, 0.0)])
    assert np.isclose(values[0], math.exp(2.0))


def test_quadratic_flow_matches_matrix_exponential(rng):
    for _ in range(10):
        n = int(rng.integers(1, 3))
        u = random_polynomial(rng, n, degree=2)
        t = float(rng.uniform(-1.5, 1.5))
        point = tuple(float(c) for c in rng.uniform(-1, 1, size=2 * n))
        spec = FlowSpec(KoopmanOperator.liouville(u), t)
        (moved,) = flow_sample(spec, [point])
        exact = exact_quadratic_flow(u, t, point)
        assert np.allclose(moved, exact, atol=1e-8)


def test_quadratic_flow_preserves_bracket():
    # pullback of {Q, P} through the flow of a quadratic symbol stays 1
    (q,), (p,) = coords()
    u = 0.5 * (p * p) + 0.8 * (q * q) + 0.3 * (q * p)
    spec = FlowSpec(KoopmanOperator.liouville(u), 1.0)
    eps = 1e-6
    base = np.array([0.4, -0.7])

    def flow(point):
        return np.array(flow_sample(spec, [tuple(point)])[0])

    jac = np.zeros((2, 2))
    for col, delta in enumerate(np.eye(2) * eps):
        jac[:, col] = (flow(base + delta) - flow(base - delta)) / (2 * eps)
    assert abs(np.linalg.det(jac) - 1.0) <= 1e-8


def test_flow_preserves_symplectic_form():
    # numeric Jacobian of the time-1 flow of a quartic symbol
    (q,), (p,) = coords()
    u = 0.25 * (q * q * q * q) + 0.5 * (p * p) + q * p
    spec = FlowSpec(KoopmanOperator.liouville(u), 1.0)
    eps = 1e-5
    base = (0.3, -0.2)

    def flow(point):
        return np.array(flow_sample(spec, [point])[0])

    jac = np.zeros((2, 2))
    for col, delta in enumerate(np.eye(2) * eps):
        jac[:, col] = (flow(base + delta) - flow(base - delta)) / (2 * eps)
    # det J - 1 is the 2-form error; FD noise dominates the integrator here
    assert abs(np.linalg.det(jac) - 1.0) <= 1e-8 + 1e-5


def test_blowup_raises():
    (q,), (p,) = coords()
    u = q * q * p  # dq/dt = q^2 escapes in finite time
    spec = FlowSpec(KoopmanOperator.liouville(u), 5.0)
    with pytest.raises(ValueError, match="non-finite|overflow"):
        flow_sample(spec, [(3.0, 1.0)])


def test_complex_symbol_rejected():
    (q,), _ = coords()
    spec = FlowSpec(KoopmanOperator.liouville(1j * q), 1.0)
    with pytest.raises(ValueError, match="real"):
        flow_sample(spec, [(0.0, 0.0)])


def test_flow_sample_steps_argument():
    (q,), (p,) = coords()
    spec = FlowSpec(KoopmanOperator.liouville(p), 1.0)
    (moved,) = flow_sample(spec, [(0.0, 0.0)], steps=7)
    assert np.allclose(moved, (1.0, 0.0), atol=1e-12)
    with pytest.raises(ValueError):
        flow_sample(spec, [(0.0, 0.0)], steps=0)


# ------------------------------------------------------------- gibbs kernel


def gibbs_covariance_by_quadrature(mass, frequency, temperature, power_q, power_p):
    def hamiltonian(qv, pv):
        return pv * pv / (2 * mass) + mass * frequency**2 * qv * qv / 2

    def weighted(qv, pv):
        return qv**power_q * pv**power_p * math.exp(-hamiltonian(qv, pv) / temperature)

    span_q = 12 * math.sqrt(temperature / mass) / frequency + 12
    span_p = 12 * math.sqrt(mass * temperature) + 12
    moment, _ = integrate.dblquad(weighted, -span_p, span_p, -span_q, span_q)
    norm, _ = integrate.dblquad(
        lambda qv, pv: math.exp(-hamiltonian(qv, pv) / temperature),
        -span_p,
        span_p,
        -span_q,
        span_q,
    )
    return moment / norm


@pytest.mark.parametrize("mass,frequency,temperature", [(1.0, 1.0, 1.0), (2.0, 0.7, 1.3)])
def test_gibbs_kernel_matches_quadrature(mass, frequency, temperature):
    kernel = gibbs_oscillator_kernel(mass, frequency, temperature)
    q, p = kernel.indices
    assert np.isclose(
        kernel.pairing(q, q),
        gibbs_covariance_by_quadrature(mass, frequency, temperature, 2, 0),
        rtol=1e-8,
    )
    assert np.isclose(
        kernel.pairing(p, p),
        gibbs_covariance_by_quadrature(mass, frequency, temperature, 0, 2),
        rtol=1e-8,
    )
    assert kernel.pairing(q, p) == 0


def test_gibbs_kernel_scales_linearly_in_temperature():
    base = gibbs_oscillator_kernel(1.0, 1.0, 1.0)
    hot = gibbs_oscillator_kernel(1.0, 1.0, 2.0)
    q, p = base.indices
    assert np.isclose(hot.pairing(q, q), 2 * base.pairing(q, q))
    assert np.isclose(hot.pairing(p, p), 2 * base.pairing(p, p))


def test_gibbs_kernel_is_classical():
    kernel = gibbs_oscillator_kernel(1.0, 1.0, 1.0)
    q, p = kernel.indices
    assert kernel.min_eigenvalue() >= -1e-12
    assert commutator_factor(kernel, q, p) == 0
    assert np.isclose(wick_expect(kernel, (q, q, q, q)), 3 * kernel.pairing(q, q) ** 2)


def test_gibbs_kernel_rejects_bad_parameters():
    with pytest.raises(ValueError):
        gibbs_oscillator_kernel(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        gibbs_oscillator_kernel(1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        gibbs_oscillator_kernel(1.0, 1.0, 0.0)
