import numpy as np
import pytest

from cartancost import metric as mt
from cartancost import pauli
from cartancost.errors import PreconditionError
from cartancost.linalg import expm


@pytest.fixture(scope="module")
def single_x():
    return pauli.builtin_split(1, "single_x")


@pytest.fixture(scope="module")
def two_local():
    return pauli.builtin_split(2, "two_local")


def random_base(split, rng, norms=(0.8, 0.8, 0.8)):
    return (
        pauli.random_hamiltonian(split.n, split.l_basis, rng, norm=norms[0]),
        pauli.random_hamiltonian(split.n, split.z_basis, rng, norm=norms[1]),
        pauli.random_hamiltonian(split.n, split.l_basis, rng, norm=norms[2]),
    )


class TestHamiltonianCost:
    def test_free_direction(self, single_x):
        m = mt.PenaltyMetric(single_x, 0.01)
        h = pauli.Hamiltonian(1, {"X": 1.0})
        assert abs(mt.hamiltonian_cost(h, m) - np.sqrt(0.01) * h.norm()) < 1e-14

    def test_expensive_direction(self, single_x):
        m = mt.PenaltyMetric(single_x, 0.01)
        h = pauli.Hamiltonian(1, {"Z": 0.7})
        assert abs(mt.hamiltonian_cost(h, m) - h.norm()) < 1e-14

    def test_mixed_arithmetic(self, single_x):
        m = mt.PenaltyMetric(single_x, 0.01)
        h = pauli.Hamiltonian(1, {"X": 1.0, "Z": 1.0})
        assert abs(mt.hamiltonian_cost(h, m) - np.sqrt(0.01 * 2 + 2)) < 1e-14

    def test_homogeneous(self, single_x):
        m = mt.PenaltyMetric(single_x, 0.3)
        rng = np.random.default_rng(0)
        h = pauli.random_hamiltonian(1, pauli.pauli_strings(1), rng)
        assert abs(mt.hamiltonian_cost(2.5 * h, m) - 2.5 * mt.hamiltonian_cost(h, m)) < 1e-12

    def test_epsilon_validated(self, single_x):
        with pytest.raises(PreconditionError):
            mt.PenaltyMetric(single_x, 0.0)


class TestBchOperator:
    def test_zero_exponent(self):
        p = pauli.Hamiltonian(1, {"Y": 0.8})
        assert (mt.bch_operator(pauli.Hamiltonian(1), p) - p).norm() == 0.0

    def test_commuting_collapse(self):
        l = pauli.Hamiltonian(1, {"X": 0.5})
        p = pauli.Hamiltonian(1, {"X": -1.2})
        assert (mt.bch_operator(l, p) - p).norm() < 1e-14

    def test_defect_is_second_order(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            l = pauli.random_hamiltonian(1, pauli.pauli_strings(1), rng, norm=rng.uniform(0.3, 1.5))
            p = pauli.random_hamiltonian(1, pauli.pauli_strings(1), rng, norm=rng.uniform(0.3, 1.5))
            b = mt.bch_operator(l, p, terms=20)

            def defect(delta):
                lhs = expm(1j * (l + delta * p).to_matrix())
                rhs = expm(1j * delta * b.to_matrix()) @ expm(1j * l.to_matrix())
                return np.linalg.norm(lhs - rhs)

            slope = np.log2(defect(1e-2) / defect(5e-3))
            assert abs(slope - 2.0) < 0.1

    def test_series_guard(self):
        l = pauli.Hamiltonian(1, {"X": 3.0})
        with pytest.raises(PreconditionError):
            mt.bch_operator(l, pauli.Hamiltonian(1, {"Z": 1.0}))


class TestPullbackGram:
    def test_zero_base_structure(self, single_x):
        # at the origin the diagonal is (eps, 1, eps); the corner block is
        # eps exactly (the two free legs are redundant there), so it passes
        # the 1e-5 vanishing check only in the small-eps regime
        eps = 1e-6
        metric = mt.PenaltyMetric(single_x, eps)
        zero = (pauli.Hamiltonian(1), pauli.Hamiltonian(1), pauli.Hamiltonian(1))
        gram = mt.pullback_gram(zero, metric)
        want = np.diag([eps, 1.0, eps])
        assert np.max(np.abs(gram.gram - want)) < 1e-5
        assert np.max(np.abs(gram.block(1, 1) - eps)) < 1e-9

    def test_center_block_identity(self, two_local):
        metric = mt.PenaltyMetric(two_local, 1e-5)
        gram = mt.pullback_gram(random_base(two_local, np.random.default_rng(2)), metric)
        eye = np.eye(len(two_local.z_basis))
        assert np.max(np.abs(gram.block(2, 2) - eye)) < 1e-5

    def test_exact_zero_off_blocks(self, single_x):
        # the (1,2) and (2,3) blocks vanish identically, not just as eps -> 0
        metric = mt.PenaltyMetric(single_x, 0.05)
        gram = mt.pullback_gram(random_base(single_x, np.random.default_rng(3)), metric)
        assert np.max(np.abs(gram.block(1, 2))) < 1e-8
        assert np.max(np.abs(gram.block(2, 3))) < 1e-8

    def test_corner_block_scales_with_eps(self, single_x):
        base = random_base(single_x, np.random.default_rng(4))
        g_big = mt.pullback_gram(base, mt.PenaltyMetric(single_x, 2e-4))
        g_small = mt.pullback_gram(base, mt.PenaltyMetric(single_x, 1e-4))
        ratio = g_big.block(1, 3) / g_small.block(1, 3)
        assert np.allclose(ratio, 2.0, rtol=1e-3)

    def test_gram_symmetry(self, two_local):
        metric = mt.PenaltyMetric(two_local, 1e-4)
        gram = mt.pullback_gram(random_base(two_local, np.random.default_rng(5)), metric)
        assert gram.sym_residual < 1e-8
        assert not gram.step_degenerate

    def test_first_block_eps_linearity(self, single_x):
        base = random_base(single_x, np.random.default_rng(6))
        g1 = mt.pullback_gram(base, mt.PenaltyMetric(single_x, 2e-5))
        g2 = mt.pullback_gram(base, mt.PenaltyMetric(single_x, 1e-5))
        assert np.allclose(g1.block(1, 1), 2.0 * g2.block(1, 1), rtol=1e-4)

    def test_step_validation(self, single_x):
        metric = mt.PenaltyMetric(single_x, 1e-4)
        zero = (pauli.Hamiltonian(1), pauli.Hamiltonian(1), pauli.Hamiltonian(1))
        with pytest.raises(PreconditionError):
            mt.pullback_gram(zero, metric, fd_step=1e-2)


class TestGramStructure:
    @pytest.mark.parametrize("kind,n,samples", [("single_x", 1, 6), ("two_local", 2, 3)])
    def test_random_bases_pass(self, kind, n, samples):
        split = pauli.builtin_split(n, kind)
        metric = mt.PenaltyMetric(split, 1e-5)
        rng = np.random.default_rng(7)
        for _ in range(samples):
            norms = rng.uniform(0.2, 1.0, 3)
            gram = mt.pullback_gram(random_base(split, rng, norms), metric)
            report = mt.verify_gram_structure(gram, metric)
            assert report.all_ok, report

    def test_first_block_matches_bch_prediction(self, two_local):
        metric = mt.PenaltyMetric(two_local, 1e-4)
        rng = np.random.default_rng(8)
        base = random_base(two_local, rng, norms=(1.0, 0.6, 0.6))
        gram = mt.pullback_gram(base, metric)
        bch = mt.bch_matrix(base[0], two_local)
        predicted = metric.epsilon * bch.T @ bch
        rel = np.linalg.norm(gram.block(1, 1) - predicted) / np.linalg.norm(predicted)
        assert rel < 1e-4

    def test_zero_z_base_checks_eps_identity(self, single_x):
        metric = mt.PenaltyMetric(single_x, 1e-5)
        rng = np.random.default_rng(9)
        base = (
            pauli.random_hamiltonian(1, single_x.l_basis, rng, norm=0.6),
            pauli.Hamiltonian(1),
            pauli.random_hamiltonian(1, single_x.l_basis, rng, norm=0.6),
        )
        gram = mt.pullback_gram(base, metric)
        report = mt.verify_gram_structure(gram, metric)
        assert report.last_block_zero_base_dev is not None
        assert report.all_ok
