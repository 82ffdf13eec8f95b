import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entprod.errors import DomainError, NumericalInstability, TracelessOperator
from entprod.linalg import INF, evolve_operator, kron_all, schatten_norm
from entprod.measure import (
    entanglement_probability,
    entanglement_production,
    evolutional_measure,
    nonentangling_counterpart,
    normalize_log_base,
    richardson_even,
    short_time_mu,
    thermal_measure_direct,
    thermal_measure_partition,
)
from entprod.models import (
    Ising2Params,
    ising2_hamiltonian,
    ising_chain_hamiltonian,
    random_operator,
)
from entprod.space import OperatorOnSpace, SpaceStructure, StateVector, product_state

from oracles import counterpart_brute, epsilon_brute, random_complex, random_unitary

SZ = np.diag([0.5, -0.5])
# 1/2 ln(2.5/2.25): both cosines equal sqrt(2)/2 at h = J = 1, t = pi/4
EPS_PI_4 = 0.052680257828913175


def ising(h, j):
    return ising2_hamiltonian(Ising2Params(h, j))


def product_operator(rng, dims):
    factors = [random_complex(rng, (d, d)) + 3 * np.eye(d) for d in dims]
    return OperatorOnSpace(kron_all(factors), SpaceStructure(dims))


def test_normalize_log_base():
    assert normalize_log_base("e") == "e"
    assert normalize_log_base(math.e) == "e"
    assert normalize_log_base(2) == "2"
    assert normalize_log_base("10") == "10"
    with pytest.raises(DomainError):
        normalize_log_base(3)


class TestCounterpart:
    @pytest.mark.parametrize("dims", [(2, 2), (2, 3), (2, 2, 2)])
    def test_product_is_fixed_point(self, rng, dims):
        op = product_operator(rng, dims)
        out = nonentangling_counterpart(op)
        np.testing.assert_allclose(out.matrix, op.matrix, atol=1e-12 * np.abs(op.matrix).max())

    @pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 2), (2, 2, 2)])
    def test_matches_brute_force(self, rng, dims):
        op = random_operator(dims, "generic", int(rng.integers(2**31)))
        np.testing.assert_allclose(
            nonentangling_counterpart(op).matrix, counterpart_brute(op.matrix, dims), atol=1e-11
        )

    @pytest.mark.parametrize("seed", range(10))
    def test_trace_preserved(self, seed):
        op = random_operator((2, 2), "generic", seed)
        tr = np.trace(op.matrix)
        assert abs(np.trace(nonentangling_counterpart(op).matrix) - tr) < 1e-10 * abs(tr)

    def test_traceless_raises(self):
        op = OperatorOnSpace(np.kron(SZ, np.eye(2)), SpaceStructure((2, 2)))
        with pytest.raises(TracelessOperator, match="traceless"):
            nonentangling_counterpart(op)

    def test_single_site_returns_operator(self, rng):
        a = random_complex(rng, (3, 3)) + 3 * np.eye(3)
        op = OperatorOnSpace(a, SpaceStructure((3,)))
        np.testing.assert_allclose(nonentangling_counterpart(op).matrix, a, atol=1e-14)


class TestEntanglementProduction:
    def test_product_operator_is_zero(self, rng):
        r = entanglement_production(product_operator(rng, (2, 3)))
        assert abs(r.epsilon) < 1e-10

    def test_ising_at_time_zero(self):
        u = ising(1, 1).with_matrix(evolve_operator(ising(1, 1).matrix, 0.0))
        assert entanglement_production(u).epsilon == pytest.approx(0.0, abs=1e-15)

    def test_ising_quarter_period(self):
        h = ising(1, 1)
        r = entanglement_production(h.with_matrix(evolve_operator(h.matrix, math.pi / 4)))
        assert r.epsilon == pytest.approx(EPS_PI_4, abs=1e-12)
        assert r.p == 2 and r.log_base == "e"
        assert r.norm_numerator == pytest.approx(2.0)

    @pytest.mark.parametrize("kind", ["hermitian_exponential", "generic", "unitary"])
    def test_against_brute_force(self, kind):
        for seed in range(5):
            op = random_operator((2, 3), kind, seed)
            assert entanglement_production(op).epsilon == pytest.approx(
                epsilon_brute(op.matrix, (2, 3)), abs=1e-12
            )

    def test_result_consistency(self):
        op = random_operator((2, 2), "hermitian_exponential", 7)
        for base, ln in (("e", 1.0), (2, math.log(2)), (10, math.log(10))):
            r = entanglement_production(op, log_base=base)
            assert r.norm_denominator > 0
            assert r.epsilon == pytest.approx(math.log(r.norm_numerator / r.norm_denominator) / ln, abs=1e-12)

    def test_log_base_conversion(self):
        op = random_operator((2, 2), "thermal_state", 3)
        e = entanglement_production(op, log_base="e").epsilon
        assert entanglement_production(op, log_base=2).epsilon == pytest.approx(e / math.log(2), rel=1e-12)

    @pytest.mark.parametrize("p", [1, 3, INF])
    def test_other_schatten_indices(self, p):
        op = random_operator((2, 2), "hermitian_exponential", 11)
        r = entanglement_production(op, p=p)
        den = schatten_norm(counterpart_brute(op.matrix, (2, 2)), p)
        assert r.norm_denominator == pytest.approx(den, rel=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(["generic", "hermitian_exponential"]))
    def test_local_conjugation_invariance(self, seed, kind):
        rng = np.random.default_rng(seed)
        op = random_operator((2, 3), kind, seed)
        v = np.kron(random_unitary(rng, 2), random_unitary(rng, 3))
        rotated = op.with_matrix(v @ op.matrix @ v.conj().T)
        assert entanglement_production(rotated).epsilon == pytest.approx(
            entanglement_production(op).epsilon, abs=1e-9
        )

    def test_additive_over_copies(self):
        # A (x) A on (d1, d2, d1, d2) regrouped as two copies of the same bipartition
        op = random_operator((2, 2), "hermitian_exponential", 5)
        doubled = OperatorOnSpace(np.kron(op.matrix, op.matrix), SpaceStructure((2, 2, 2, 2)))
        single = entanglement_production(op).epsilon
        assert entanglement_production(doubled).epsilon == pytest.approx(2 * single, abs=1e-10)


class TestSemiPositivity:
    """The measure is non-negative for positive operators but not in general."""

    @pytest.mark.parametrize("dims", [(2, 2), (2, 3), (2, 2, 2)])
    @pytest.mark.parametrize("kind", ["hermitian_exponential", "thermal_state"])
    def test_positive_operators(self, dims, kind):
        for seed in range(200):
            op = random_operator(dims, kind, seed)
            r = entanglement_production(op)
            assert r.epsilon >= -1e-10
            assert r.norm_denominator <= r.norm_numerator * (1 + 1e-10)

    def test_ising_evolution_is_non_negative(self):
        h = ising(0.7, 1.3)
        for t in np.linspace(0.05, 20, 200):
            assert evolutional_measure(h, t).epsilon >= -1e-12

    def test_negative_for_near_traceless_operator(self):
        # Tr A = 4 delta while both reductions stay O(1): the counterpart blows up
        delta = 0.05
        a = np.kron(SZ, SZ) + np.kron(SZ, np.eye(2)) + np.kron(np.eye(2), SZ) + delta * np.eye(4)
        op = OperatorOnSpace(a, SpaceStructure((2, 2)))
        assert entanglement_production(op).epsilon < -1.0

    def test_negative_for_some_unitaries(self):
        values = [entanglement_production(random_operator((2, 2), "unitary", s)) for s in range(50)]
        worst = min(values, key=lambda r: r.epsilon)
        assert worst.epsilon < 0
        assert worst.norm_denominator > worst.norm_numerator

    def test_negative_for_anticorrelated_thermal_state(self):
        # populations (1/2, 1/4, 1/4, ~0): each marginal has purity 0.625 and
        # 0.625**2 exceeds the joint purity 0.375
        beta, j = 20.0, 1.0
        h = j + math.log(2) / beta
        r = thermal_measure_direct(ising(h, j), beta)
        assert r.epsilon < -0.01
        assert r.epsilon == pytest.approx(0.5 * math.log(0.375 / 0.625**2), abs=1e-6)


class TestEvolutionalMeasure:
    def test_time_zero(self):
        assert evolutional_measure(ising(0.3, 2.0), 0.0).epsilon == pytest.approx(0.0, abs=1e-15)

    def test_no_coupling(self):
        h = ising(1.7, 0.0)
        for t in np.linspace(0, 10, 41):
            assert abs(evolutional_measure(h, t).epsilon) < 1e-10

    def test_period_pi(self):
        h = ising(1, 1)
        for t in np.linspace(0, math.pi, 50, endpoint=False):
            try:
                a = evolutional_measure(h, t).epsilon
            except TracelessOperator:
                continue
            assert evolutional_measure(h, t + math.pi).epsilon == pytest.approx(a, abs=1e-10)

    @pytest.mark.parametrize("kind", ["random", "ising"])
    def test_agrees_with_generic_route(self, kind):
        h = ising(0.8, 1.1) if kind == "ising" else random_operator((2, 3), "hermitian", 2)
        for t in (0.1, 0.9, 2.5, 7.0):
            u = h.with_matrix(evolve_operator(h.matrix, t))
            fast = evolutional_measure(h, t)
            slow = entanglement_production(u)
            assert abs(fast.epsilon - slow.epsilon) < 1e-11
            assert fast.norm_numerator == pytest.approx(slow.norm_numerator, rel=1e-12)

    def test_unitary_norms_for_other_p(self):
        h = random_operator((2, 2), "hermitian", 4)
        assert evolutional_measure(h, 0.5, p=1).norm_numerator == pytest.approx(4.0)
        assert evolutional_measure(h, 0.5, p=INF).norm_numerator == 1.0

    def test_traceless_point_reports_time(self):
        # h/J = 8: Tr U vanishes at Jt = pi
        with pytest.raises(TracelessOperator) as info:
            evolutional_measure(ising(8, 1), math.pi)
        assert info.value.t == math.pi
        assert "t=3.14159" in str(info.value)

    def test_even_in_time(self):
        h = ising(0.6, 1.4)
        for t in (0.2, 1.3, 4.4):
            assert evolutional_measure(h, t).epsilon == pytest.approx(evolutional_measure(h, -t).epsilon, abs=1e-10)

    def test_sign_inversion(self):
        for t in (0.2, 1.3, 4.4):
            a = evolutional_measure(ising(0.6, 1.4), t).epsilon
            b = evolutional_measure(ising(-0.6, -1.4), t).epsilon
            assert a == pytest.approx(b, abs=1e-10)


class TestShortTime:
    def test_richardson_exact_for_even_quartic(self):
        f = lambda t: 1.5 - 2.0 * t**2 + 7.0 * t**4
        est, _ = richardson_even([f(0.4), f(0.2), f(0.1)])
        assert est == pytest.approx(1.5, abs=1e-13)

    def test_ising_unit(self):
        assert short_time_mu(ising(1, 1)) == pytest.approx(0.25, rel=1e-6)

    def test_ising_field_free(self):
        assert short_time_mu(ising(0, 2)) == pytest.approx(1.0, rel=1e-6)

    def test_no_coupling(self):
        assert abs(short_time_mu(ising(1, 0))) < 1e-9

    def test_random_hamiltonian_matches_norm_expansion(self):
        # mu = lim 2 eps / t^2 agrees with finite differences at smaller t
        h = random_operator((2, 2), "hermitian", 9)
        mu = short_time_mu(h)
        t = 1e-3
        assert 2 * evolutional_measure(h, t).epsilon / t**2 == pytest.approx(mu, rel=1e-4)

    def test_non_convergent(self):
        with pytest.raises(NumericalInstability):
            short_time_mu(ising(300, 1))


class TestEntanglementProbability:
    def test_identity_same_state(self):
        s = SpaceStructure((2, 2))
        phi = product_state([[0.6, 0.8], [1, 0]])
        assert entanglement_probability(OperatorOnSpace(np.eye(4), s), phi, phi) == pytest.approx(1.0)

    def test_identity_orthogonal(self):
        s = SpaceStructure((2, 2))
        up = product_state([[1, 0], [1, 0]])
        down = product_state([[0, 1], [0, 1]])
        assert entanglement_probability(OperatorOnSpace(np.eye(4), s), up, down) == 0.0

    def test_ising_to_bell_state(self):
        # |uu> picks up the phase exp(-i E_uu t) with E_uu = -h + J/2 = 0, so the
        # overlap with (|uu> + |dd>)/sqrt(2) is 1/sqrt(2)
        h = ising(1, 2)
        u = h.with_matrix(evolve_operator(h.matrix, math.pi / 2))
        bell = StateVector(np.array([1, 0, 0, 1]) / math.sqrt(2), SpaceStructure((2, 2)))
        up = product_state([[1, 0], [1, 0]])
        assert entanglement_probability(u, up, bell) == pytest.approx(0.5, abs=1e-12)

    def test_bounded(self, rng):
        s = SpaceStructure((2, 3))
        for seed in range(20):
            a = random_operator(s, "generic", seed)
            dis = product_state([random_complex(rng, 2), random_complex(rng, 3)])
            ent = StateVector(random_complex(rng, 6), s)
            assert 0.0 <= entanglement_probability(a, dis, ent) <= 1.0

    def test_zero_norm(self):
        s = SpaceStructure((2, 2))
        zero = StateVector(np.zeros(4), s)
        up = product_state([[1, 0], [1, 0]])
        with pytest.raises(DomainError):
            entanglement_probability(OperatorOnSpace(np.eye(4), s), up, zero)
        with pytest.raises(DomainError):
            entanglement_probability(OperatorOnSpace(np.zeros((4, 4)), s), up, up)


class TestThermal:
    def test_infinite_temperature(self):
        for route in (thermal_measure_direct, thermal_measure_partition):
            r = route(ising_chain_hamiltonian(3, 1.0, 1.0), 0.0)
            assert r.epsilon == pytest.approx(0.0, abs=1e-12)
            assert r.partition_function == pytest.approx(8.0)

    def test_separable_hamiltonian(self):
        for beta in (0.1, 1.0, 10.0):
            for route in (thermal_measure_direct, thermal_measure_partition):
                assert abs(route(ising(1.3, 0.0), beta).epsilon) < 1e-10

    def test_ising_closed_value(self):
        # energies (1/2, -1/2, -1/2, 1/2): both marginals are I/2, so
        # eps = 1/2 ln(2 (a^2 + b^2) / (a + b)^2) with a = e^{-1/2}, b = e^{1/2}
        r = thermal_measure_direct(ising(0, 1), 1.0)
        assert r.epsilon == pytest.approx(0.09677590828323625, abs=1e-13)
        assert r.partition_function == pytest.approx(4.510503860825523, rel=1e-13)
        assert r.route == "direct"

    @pytest.mark.parametrize("beta", [0.1, 1.0, 10.0])
    def test_route_equivalence_random(self, beta):
        for seed in range(10):
            h = random_operator((2, 2), "hermitian", seed)
            d = thermal_measure_direct(h, beta)
            p = thermal_measure_partition(h, beta)
            assert abs(d.epsilon - p.epsilon) < 1e-10
            assert p.partition_function == pytest.approx(d.partition_function, rel=1e-12)
            assert p.route == "partition_formula"

    def test_route_equivalence_three_sites(self):
        h = ising_chain_hamiltonian(3, 1.0, 1.0)
        assert abs(thermal_measure_direct(h, 1.0).epsilon - thermal_measure_partition(h, 1.0).epsilon) < 1e-10

    def test_route_equivalence_mixed_dims(self):
        h = random_operator((2, 3), "hermitian", 1)
        assert abs(thermal_measure_direct(h, 2.0).epsilon - thermal_measure_partition(h, 2.0).epsilon) < 1e-10

    def test_matches_generic_measure(self):
        h = random_operator((2, 2), "hermitian", 8)
        rho = random_operator((2, 2), "thermal_state", 8)
        assert thermal_measure_direct(h, 1.0).epsilon == pytest.approx(entanglement_production(rho).epsilon, abs=1e-12)

    def test_log_base(self):
        h = ising(0.3, 1.0)
        e = thermal_measure_partition(h, 1.0).epsilon
        assert thermal_measure_partition(h, 1.0, log_base=10).epsilon == pytest.approx(e / math.log(10))

    def test_rejects_negative_beta(self):
        with pytest.raises(DomainError):
            thermal_measure_direct(ising(1, 1), -1.0)
        with pytest.raises(DomainError):
            thermal_measure_partition(ising(1, 1), -1.0)
