"""Decoupling defects, admissibility bounds, Monte Carlo, two-state search."""

import itertools
import json
import math

import numpy as np
import pytest

from qredist.decoupling import (
    DecouplingSearchError,
    Split,
    bidecoupling_search,
    decoupling_defect,
    decoupling_dim_bound,
    sample_decoupling,
)
from qredist.entropies import Partition, hmin_cond
from qredist.registers import (
    QuantumState,
    SystemLayout,
    apply_isometry,
    haar_unitary,
    max_entangled,
    maximally_mixed,
    partial_trace,
    random_pure_state,
    tensor_product,
)


def random_density(rng, layout, rank=None):
    layout = layout if isinstance(layout, SystemLayout) else SystemLayout(tuple(layout))
    r = rank or layout.dim
    g = rng.standard_normal((layout.dim, r)) + 1j * rng.standard_normal((layout.dim, r))
    m = g @ g.conj().T
    return QuantumState(layout, m / np.trace(m))


def defect_oracle(rho, u_mat, dims, keep_dim, ref_dim):
    """Index-contraction recomputation of the defect for a single split A -> A1 A2."""
    d_a = dims
    big = np.kron(u_mat, np.eye(ref_dim))
    rot = big @ rho @ big.conj().T
    d2 = d_a // keep_dim
    t = rot.reshape(keep_dim, d2, ref_dim, keep_dim, d2, ref_dim)
    red = np.zeros((keep_dim * ref_dim, keep_dim * ref_dim), dtype=complex)
    for a1, r1, b1, s1 in itertools.product(range(keep_dim), range(ref_dim),
                                            range(keep_dim), range(ref_dim)):
        acc = sum(t[a1, k, r1, b1, k, s1] for k in range(d2))
        red[a1 * ref_dim + r1, b1 * ref_dim + s1] = acc
    rho_r = np.zeros((ref_dim, ref_dim), dtype=complex)
    t0 = rho.reshape(d_a, ref_dim, d_a, ref_dim)
    for r1, s1 in itertools.product(range(ref_dim), repeat=2):
        rho_r[r1, s1] = sum(t0[k, r1, k, s1] for k in range(d_a))
    target = np.kron(np.eye(keep_dim) / keep_dim, rho_r)
    return np.sum(np.abs(np.linalg.eigvalsh(red - target)))


SPLIT_A = Split("A", (("A1", 2), ("A2", 2)))


class TestDefect:
    def test_mixed_parent_zero_for_every_unitary(self):
        rng = np.random.default_rng(0)
        rho = tensor_product(maximally_mixed("A", 4), random_density(rng, [("R", 2)]))
        for seed in range(3):
            u = haar_unitary(seed, 4)
            assert decoupling_defect(rho, u, SPLIT_A) < 1e-10

    def test_trivial_kept_register_zero(self):
        rng = np.random.default_rng(1)
        rho = random_density(rng, [("A", 4), ("R", 2)])
        split = Split("A", (("A1", 1), ("A2", 4)))
        for seed in range(3):
            u = haar_unitary(seed, 4)
            assert decoupling_defect(rho, u, split, keep=0) < 1e-10

    def test_matches_index_contraction_oracle(self):
        rng = np.random.default_rng(2)
        rho = random_density(rng, [("A", 4), ("R", 2)])
        u = haar_unitary(7, 4)
        got = decoupling_defect(rho, u, SPLIT_A)
        want = defect_oracle(rho.matrix, u.matrix, 4, 2, 2)
        assert abs(got - want) < 1e-10

    def test_invariant_under_reference_unitaries(self):
        rng = np.random.default_rng(3)
        rho = random_density(rng, [("A", 4), ("R", 2)])
        u = haar_unitary(11, 4)
        base = decoupling_defect(rho, u, SPLIT_A)
        w = haar_unitary(5, 2).with_layouts([("R", 2)], [("R", 2)])
        rotated = apply_isometry(w, rho)
        assert abs(decoupling_defect(rotated, u, SPLIT_A) - base) < 1e-10

    def test_defect_bounded_by_diameter(self):
        rng = np.random.default_rng(4)
        for seed in range(5):
            rho = random_density(rng, [("A", 4), ("R", 2)])
            u = haar_unitary(seed, 4)
            assert decoupling_defect(rho, u, SPLIT_A) <= 2.0 + 1e-12


class TestDimBound:
    def test_product_with_mixed_parent(self):
        rng = np.random.default_rng(5)
        rho = tensor_product(maximally_mixed("A", 4), random_density(rng, [("R", 2)]))
        # H_min(A|R) = 2, so the bound is 2 - log(1/eps)
        for eps in (0.25, 0.5, 1.0):
            got = decoupling_dim_bound(rho, eps)
            assert abs(got - (2.0 - math.log2(1.0 / eps))) < 1e-5

    def test_max_entangled_negative(self):
        rho = max_entangled("A", "R", 2)
        # H_min(A|R) = -1 => bound = -log(1/eps) < 0 for eps < 1
        got = decoupling_dim_bound(rho, 0.5)
        assert abs(got - (-1.0)) < 1e-5
        assert decoupling_dim_bound(rho, 0.99) < 0

    def test_eps_one_drops_log_term(self):
        rng = np.random.default_rng(6)
        rho = random_density(rng, [("A", 4), ("R", 2)])
        hmin = hmin_cond(rho, Partition(("A",), ("R",))).value
        got = decoupling_dim_bound(rho, 1.0)
        assert abs(got - (1.0 + 0.5 * hmin)) < 1e-6


class TestSampling:
    def test_admissible_split_meets_bound(self):
        rng = np.random.default_rng(7)
        rho = tensor_product(maximally_mixed("A", 4), random_density(rng, [("R", 2)]))
        rep = sample_decoupling(rho, SPLIT_A, n_samples=60, seed=3)
        assert rep.bound_satisfied
        assert rep.mean_defect <= rep.eps_admissible + 3 * rep.stderr

    def test_product_state_zero_mean(self):
        rng = np.random.default_rng(8)
        rho = tensor_product(maximally_mixed("A", 4), random_density(rng, [("R", 2)]))
        rep = sample_decoupling(rho, SPLIT_A, n_samples=10, seed=4)
        assert rep.mean_defect < 1e-10

    def test_seed_reproducibility_and_agreement(self):
        rng = np.random.default_rng(9)
        rho = random_density(rng, [("A", 4), ("R", 2)])
        a = sample_decoupling(rho, SPLIT_A, n_samples=40, seed=5)
        b = sample_decoupling(rho, SPLIT_A, n_samples=40, seed=5)
        assert a.defects == b.defects
        c = sample_decoupling(rho, SPLIT_A, n_samples=40, seed=6)
        # two independent seeds agree within 4 combined standard errors
        spread = 4.0 * math.sqrt(a.stderr**2 + c.stderr**2)
        assert abs(a.mean_defect - c.mean_defect) <= spread

    def test_report_serialization(self):
        rng = np.random.default_rng(10)
        rho = random_density(rng, [("A", 4), ("R", 2)])
        rep = sample_decoupling(rho, SPLIT_A, n_samples=5, seed=7)
        data = json.loads(rep.to_json())
        assert len(data["samples"]) == 5
        csv = rep.to_csv()
        assert csv.splitlines()[0] == "sample_seed,defect"
        assert len(csv.strip().splitlines()) == 6


SPLIT_C = Split("C", (("C1", 2), ("C2", 1), ("C3", 2)))


class TestBidecoupling:
    def test_product_states_first_sample(self):
        rng = np.random.default_rng(11)
        rho1 = tensor_product(maximally_mixed("C", 4), random_density(rng, [("R1", 2)]))
        rho2 = tensor_product(maximally_mixed("C", 4), random_density(rng, [("R2", 2)]))
        u = bidecoupling_search(rho1, rho2, SPLIT_C, eps3=0.9, eps4=0.9,
                                max_tries=4, seed=1)
        assert decoupling_defect(rho1, u, SPLIT_C, keep=0) < 1e-10
        assert decoupling_defect(rho2, u, SPLIT_C, keep=1) < 1e-10

    def test_returned_unitary_reverifies(self):
        rng = np.random.default_rng(12)
        noise1 = tensor_product(maximally_mixed("C", 4),
                                random_density(rng, [("R1", 2)]))
        draw1 = random_density(rng, [("C", 4), ("R1", 2)])
        rho1 = QuantumState(draw1.layout, 0.4 * draw1.matrix + 0.6 * noise1.matrix)
        rho2 = random_density(rng, [("C", 4), ("R2", 2)])
        eps = 0.75
        u = bidecoupling_search(rho1, rho2, SPLIT_C, eps3=eps, eps4=eps,
                                max_tries=32, seed=2)
        assert decoupling_defect(rho1, u, SPLIT_C, keep=0) <= 3 * eps
        assert decoupling_defect(rho2, u, SPLIT_C, keep=1) <= 3 * eps
        assert u.output_layout.labels == ("C1", "C2", "C3")

    def test_oversized_child_rejected(self):
        rho1 = max_entangled("C", "R1", 4)  # H_min(C|R1) = -2
        rng = np.random.default_rng(13)
        rho2 = random_density(rng, [("C", 4), ("R2", 2)])
        with pytest.raises(ValueError, match="dimension condition"):
            bidecoupling_search(rho1, rho2, SPLIT_C, eps3=0.5, eps4=0.5,
                                max_tries=4, seed=3)

    def test_exhaustion_reports_best(self):
        # thresholds low enough that no unitary can reach them
        rng = np.random.default_rng(14)
        rho1 = random_density(rng, [("C", 4), ("R1", 2)])
        rho2 = random_density(rng, [("C", 4), ("R2", 2)])
        split = Split("C", (("C1", 4), ("C2", 1), ("C3", 1)))
        with pytest.raises((DecouplingSearchError, ValueError)):
            bidecoupling_search(rho1, rho2, split, eps3=0.01, eps4=0.5,
                                max_tries=3, seed=4)

    def test_success_frequency_at_least_one_third(self):
        # per-sample success probability of the two-sided event is >= 1/3
        rng = np.random.default_rng(15)
        rho1 = tensor_product(maximally_mixed("C", 4),
                              random_density(rng, [("R1", 2)], rank=1))
        rho2 = random_density(rng, [("C", 4), ("R2", 2)])
        eps = 0.7
        n = 120
        wins = 0
        for k in range(n):
            u = haar_unitary(10_000 + k, 4)
            d1 = decoupling_defect(rho1, u, SPLIT_C, keep=0)
            d2 = decoupling_defect(rho2, u, SPLIT_C, keep=1)
            wins += (d1 <= 3 * eps) and (d2 <= 3 * eps)
        freq = wins / n
        sigma = math.sqrt(max(freq * (1 - freq), 1e-6) / n)
        assert freq >= 1.0 / 3.0 - 3.0 * sigma
