"""Exact one-shot entropies, von Neumann quantities, and AEP formulas."""

import math

import numpy as np
import pytest

from qredist.entropies import (
    EntropyResult,
    Partition,
    aep_bounds,
    aep_delta,
    aep_h,
    dmax,
    hmax_cond,
    hmin_cond,
    imax,
    vn_cond_mutual,
    vn_conditional,
    vn_entropy,
    von_neumann_suite,
)
from qredist.registers import (
    LayoutError,
    QuantumState,
    SystemLayout,
    basis_state,
    max_entangled,
    maximally_mixed,
    partial_trace,
    random_pure_state,
    tensor_product,
)

from oracles import dmax_oracle, hmin_oracle_qubit_cond, imax_oracle_qubit_cond


def random_density(rng, layout, rank=None):
    layout = layout if isinstance(layout, SystemLayout) else SystemLayout(tuple(layout))
    r = rank or layout.dim
    g = rng.standard_normal((layout.dim, r)) + 1j * rng.standard_normal((layout.dim, r))
    m = g @ g.conj().T
    return QuantumState(layout, m / np.trace(m))


class TestPartition:
    def test_parse(self):
        p = Partition.parse("A|B")
        assert p.first == ("A",) and p.second == ("B",)
        p = Partition.parse("A,C:B")
        assert p.first == ("A", "C") and p.second == ("B",)

    def test_disjoint(self):
        with pytest.raises(ValueError):
            Partition(("A",), ("A",))


class TestDmax:
    def test_self_is_zero(self):
        rng = np.random.default_rng(0)
        s = random_density(rng, [("A", 3)])
        assert abs(dmax(s, s).value) < 1e-9

    def test_mixed_vs_mixed(self):
        pi = maximally_mixed("A", 4)
        assert abs(dmax(pi, pi).value) < 1e-12

    def test_basis_vs_mixed_one_bit(self):
        zero = basis_state(SystemLayout.of(("A", 2)), 0)
        pi = maximally_mixed("A", 2)
        assert abs(dmax(zero, pi).value - 1.0) < 1e-12

    def test_support_violation_infinite(self):
        zero = basis_state(SystemLayout.of(("A", 2)), 0)
        one = basis_state(SystemLayout.of(("A", 2)), 1)
        assert dmax(one, zero).value == math.inf

    def test_matches_oracle_on_random_pairs(self):
        rng = np.random.default_rng(1)
        for trial in range(10):
            a = random_density(rng, [("A", 4)])
            b = random_density(rng, [("A", 4)])
            got = dmax(a, b).value
            want = dmax_oracle(a.matrix, b.matrix)
            assert abs(got - want) < 1e-9

    def test_layout_mismatch(self):
        with pytest.raises(LayoutError):
            dmax(maximally_mixed("A", 2), maximally_mixed("B", 2))


class TestHminCond:
    def test_uniform_target_product(self):
        rng = np.random.default_rng(2)
        s = tensor_product(maximally_mixed("A", 2), random_density(rng, [("B", 2)]))
        res = hmin_cond(s, Partition(("A",), ("B",)))
        assert abs(res.value - 1.0) < 1e-6
        assert res.gap < 1e-6

    def test_max_entangled_minus_one(self):
        phi = max_entangled("A", "B", 2)
        res = hmin_cond(phi, Partition(("A",), ("B",)))
        assert abs(res.value - (-1.0)) < 1e-6
        # independent grid/refine oracle over sigma at d = 2
        want = hmin_oracle_qubit_cond(phi.matrix, 2)
        assert abs(res.value - want) < 1e-4

    def test_pure_product_zero(self):
        a = basis_state(SystemLayout.of(("A", 2)), 0)
        b = basis_state(SystemLayout.of(("B", 2)), 1)
        res = hmin_cond(tensor_product(a, b), Partition(("A",), ("B",)))
        assert abs(res.value) < 1e-6

    def test_optimal_sigma_normalized(self):
        rng = np.random.default_rng(3)
        s = random_density(rng, [("A", 2), ("B", 2)])
        res = hmin_cond(s, Partition(("A",), ("B",)))
        assert abs(res.optimal_sigma.trace - 1.0) < 1e-9

    def test_range_invariant(self):
        rng = np.random.default_rng(4)
        for trial in range(5):
            s = random_density(rng, [("A", 2), ("B", 2)])
            v = hmin_cond(s, Partition(("A",), ("B",))).value
            assert -1.0 - 1e-6 <= v <= 1.0 + 1e-6

    def test_extra_labels_traced_out(self):
        rng = np.random.default_rng(5)
        s = random_density(rng, [("A", 2), ("B", 2), ("C", 2)])
        direct = hmin_cond(s, Partition(("A",), ("B",)))
        reduced = hmin_cond(partial_trace(s, ["C"]), Partition(("A",), ("B",)))
        assert abs(direct.value - reduced.value) < 1e-7


class TestHmaxCond:
    def test_pure_product_zero(self):
        a = basis_state(SystemLayout.of(("A", 2)), 0)
        b = basis_state(SystemLayout.of(("B", 2)), 0)
        res = hmax_cond(tensor_product(a, b), Partition(("A",), ("B",)))
        assert abs(res.value) < 1e-6

    def test_max_entangled_minus_one(self):
        phi = max_entangled("A", "B", 2)
        res = hmax_cond(phi, Partition(("A",), ("B",)))
        assert abs(res.value - (-1.0)) < 1e-6

    def test_uniform_product_one_bit(self):
        rng = np.random.default_rng(6)
        s = tensor_product(maximally_mixed("A", 2), random_density(rng, [("B", 3)]))
        res = hmax_cond(s, Partition(("A",), ("B",)))
        assert abs(res.value - 1.0) < 1e-6

    def test_duality_on_random_purifications(self):
        # H_max(A|B) = -H_min(A|R) across random tripartite pure states
        for seed in range(20):
            psi = random_pure_state(seed, [("A", 2), ("B", 2), ("R", 2)])
            rho = psi.to_density()
            hmax_ab = hmax_cond(rho, Partition(("A",), ("B",))).value
            hmin_ar = hmin_cond(rho, Partition(("A",), ("R",))).value
            assert abs(hmax_ab + hmin_ar) < 1e-6


class TestImax:
    def test_product_zero(self):
        rng = np.random.default_rng(7)
        s = tensor_product(random_density(rng, [("A", 2)]),
                           random_density(rng, [("B", 2)]))
        assert abs(imax(s, Partition(("A",), ("B",))).value) < 1e-6

    def test_max_entangled_two_bits(self):
        phi = max_entangled("A", "B", 2)
        res = imax(phi, Partition(("A",), ("B",)))
        assert abs(res.value - 2.0) < 1e-6

    def test_classically_correlated_one_bit(self):
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0] = 0.5
        m[3, 3] = 0.5
        s = QuantumState(SystemLayout.of(("A", 2), ("B", 2)), m)
        res = imax(s, Partition(("A",), ("B",)))
        assert abs(res.value - 1.0) < 1e-6
        want = imax_oracle_qubit_cond(s.matrix, partial_trace(s, ["B"]).matrix)
        assert abs(res.value - want) < 1e-4

    def test_rank_deficient_marginal(self):
        # first marginal supported on a strict subspace still solves cleanly
        rng = np.random.default_rng(8)
        psi = random_pure_state(11, [("A", 3), ("B", 2)])
        res = imax(psi.to_density(), Partition(("A",), ("B",)))
        assert np.isfinite(res.value)
        assert res.gap < 1e-6


class TestVonNeumann:
    def test_mixed_entropy(self):
        assert abs(vn_entropy(maximally_mixed("A", 8)) - 3.0) < 1e-12

    def test_product_cmi_zero(self):
        rng = np.random.default_rng(9)
        s = tensor_product(tensor_product(random_density(rng, [("A", 2)]),
                                          random_density(rng, [("B", 2)])),
                           random_density(rng, [("C", 2)]))
        assert abs(vn_cond_mutual(s, ["A"], ["B"], ["C"])) < 1e-10

    def test_cmi_symmetry_on_purifications(self):
        # I(C:R|B) = I(C:R|A) for pure states on ABCR
        for seed in range(10):
            psi = random_pure_state(100 + seed,
                                    [("A", 2), ("B", 2), ("C", 2), ("R", 2)])
            rho = psi.to_density()
            lhs = vn_cond_mutual(rho, ["C"], ["R"], ["B"])
            rhs = vn_cond_mutual(rho, ["C"], ["R"], ["A"])
            assert abs(lhs - rhs) < 1e-9

    def test_suite_keys(self):
        rho = max_entangled("A", "B", 2)
        out = von_neumann_suite(rho, ["A"], ["B"])
        assert abs(out["H_A"] - 1.0) < 1e-12
        assert abs(out["H_A_given_B"] - (-1.0)) < 1e-12
        assert abs(out["I_A_B"] - 2.0) < 1e-12


class TestAep:
    def test_delta_direct_arithmetic(self):
        # delta(1, 2) = 4 * log2(2) * sqrt(log2(2/1)) = 4
        assert abs(aep_delta(1.0, 2.0) - 4.0) < 1e-12

    def test_h_collapse_at_zero(self):
        eps_p = 0.3
        want = math.log2(1.0 / (1.0 - eps_p ** 2))
        assert abs(aep_h(0.0, eps_p) - want) < 1e-12

    def test_v_for_pure_product(self):
        # both conditional max-entropies vanish, so v = 3
        a = basis_state(SystemLayout.of(("A", 2)), 0)
        b = basis_state(SystemLayout.of(("B", 2)), 0)
        out = aep_bounds(tensor_product(a, b), Partition(("A",), ("B",)),
                         n=2, eps=0.1, eps_prime=0.1)
        assert abs(out["v"] - 3.0) < 1e-5
        assert out["lower"] <= out["h_cond"] <= out["upper"]

    def test_parameter_validation(self):
        s = max_entangled("A", "B", 2)
        with pytest.raises(ValueError):
            aep_bounds(s, Partition(("A",), ("B",)), n=1, eps=0.0, eps_prime=0.1)
        with pytest.raises(ValueError):
            aep_bounds(s, Partition(("A",), ("B",)), n=1, eps=0.5, eps_prime=0.6)


class TestOracleSweep:
    """SDP values against the independent grid+refine optimizer at |B| = 2."""

    def test_hmin_random_sweep(self):
        rng = np.random.default_rng(10)
        for trial in range(6):
            s = random_density(rng, [("A", 2), ("B", 2)])
            got = hmin_cond(s, Partition(("A",), ("B",))).value
            want = hmin_oracle_qubit_cond(s.matrix, 2)
            assert abs(got - want) < 1e-4

    def test_imax_random_sweep(self):
        rng = np.random.default_rng(11)
        for trial in range(6):
            s = random_density(rng, [("A", 2), ("B", 2)])
            got = imax(s, Partition(("A",), ("B",))).value
            want = imax_oracle_qubit_cond(s.matrix, partial_trace(s, ["B"]).matrix)
            assert abs(got - want) < 1e-4

    def test_hmin_larger_first_side(self):
        rng = np.random.default_rng(12)
        s = random_density(rng, [("A", 4), ("B", 2)])
        got = hmin_cond(s, Partition(("A",), ("B",))).value
        want = hmin_oracle_qubit_cond(s.matrix, 4)
        assert abs(got - want) < 1e-4


class TestResultSerialization:
    def test_json_dict(self):
        phi = max_entangled("A", "B", 2)
        res = hmin_cond(phi, Partition(("A",), ("B",)))
        d = res.to_json_dict()
        assert d["quantity"] == "hmin"
        assert abs(d["value_bits"] - (-1.0)) < 1e-6
        assert "gap" in d
