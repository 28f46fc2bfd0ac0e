import json

import numpy as np
import pytest

from rca.errors import DefectiveMatrixError
from rca.reservoir import (Network, eig_decompose, get_eig, input_weights,
                           network_from_json, network_to_json, randomize_links,
                           ring_network, run_reservoir, spectral_radius)


class TestRingNetwork:
    def test_single_node(self):
        net = ring_network(1, 0.9)
        np.testing.assert_allclose(net.w, [[0.9]])

    def test_three_node_spectrum(self):
        net = ring_network(3, 0.5)
        eigs = np.sort_complex(np.linalg.eigvals(net.w))
        expected = np.sort_complex(0.5 * np.exp(2j * np.pi * np.arange(3) / 3))
        np.testing.assert_allclose(eigs, expected, atol=1e-12)

    def test_paper_scale_network(self):
        net = ring_network(20, 0.9)
        assert net.n == 20
        assert abs(spectral_radius(net.w) - 0.9) < 1e-12
        assert np.count_nonzero(net.w) == 20
        assert set(np.unique(net.w)) == {0.0, 0.9}

    def test_zero_radius_degenerate_ring(self):
        net = ring_network(4, 0.0)
        assert np.all(net.w == 0.0)

    @pytest.mark.parametrize("lam", [-0.1, 1.0, 1.5])
    def test_radius_domain(self, lam):
        with pytest.raises(ValueError):
            ring_network(5, lam)


class TestInputWeights:
    def test_single_entry(self):
        w = input_weights(1, seed=0)
        assert w[0] in (0.1, -0.1)

    def test_sign_balance(self):
        w = input_weights(10_000, seed=1)
        assert set(np.unique(w)) == {-0.1, 0.1}
        assert abs(np.mean(w > 0) - 0.5) < 0.02

    def test_deterministic_and_scaled(self):
        a = input_weights(50, seed=9, scale=0.3)
        b = input_weights(50, seed=9, scale=0.3)
        np.testing.assert_array_equal(a, b)
        assert set(np.abs(a)) == {0.3}


class TestRandomizeLinks:
    def test_zero_links_is_identity(self):
        net = ring_network(10, 0.8)
        out = randomize_links(net, 0, seed=1)
        np.testing.assert_array_equal(out.w, net.w)
        np.testing.assert_array_equal(out.w_in, net.w_in)

    def test_rescale_preserves_radius(self):
        net = ring_network(100, 0.9)
        out = randomize_links(net, 5_000, seed=2, rescale=True)
        assert abs(spectral_radius(out.w) - 0.9) < 1e-10
        assert out.ell == 5_000

    def test_without_rescale_records_actual_radius(self):
        net = ring_network(30, 0.5)
        out = randomize_links(net, 200, seed=3, rescale=False)
        assert abs(spectral_radius(out.w) - out.spectral_radius) < 1e-12

    def test_deterministic(self):
        net = ring_network(12, 0.7)
        a = randomize_links(net, 30, seed=4)
        b = randomize_links(net, 30, seed=4)
        np.testing.assert_array_equal(a.w, b.w)

    def test_changes_requested_count(self):
        net = ring_network(12, 0.7)
        out = randomize_links(net, 30, seed=4, rescale=False)
        assert np.count_nonzero(out.w != net.w) <= 30
        assert np.count_nonzero(out.w != net.w) >= 25  # few draws may hit ring links

    def test_ell_bounds(self):
        net = ring_network(5, 0.5)
        with pytest.raises(ValueError):
            randomize_links(net, 26, seed=1)
        with pytest.raises(ValueError):
            randomize_links(net, -1, seed=1)

    def test_cache_not_shared(self):
        net = eig_decompose(ring_network(6, 0.6))
        out = randomize_links(net, 3, seed=5)
        assert out._eig is None


class TestRunReservoir:
    def test_single_step_no_recurrence(self):
        net = Network(w=np.zeros((2, 2)), w_in=np.array([1.0, 0.0]),
                      spectral_radius=0.0)
        traj = run_reservoir(net, np.array([5.0]), washout=0)
        np.testing.assert_allclose(traj.states[:, 0], [5.0, 0.0])

    def test_geometric_decay(self):
        net = Network(w=np.array([[0.5]]), w_in=np.array([1.0]),
                      spectral_radius=0.5)
        traj = run_reservoir(net, np.array([1.0, 0.0, 0.0]), washout=0)
        np.testing.assert_allclose(traj.states[0], [1.0, 0.5, 0.25])

    def test_recursion_recomputation(self):
        net = randomize_links(ring_network(7, 0.8), 10, seed=6)
        u = np.sin(np.arange(50) * 0.3)
        traj = run_reservoir(net, u, washout=0)
        x = np.zeros(7)
        for t in range(50):
            x = net.w @ x + net.w_in * u[t]
            np.testing.assert_array_equal(traj.states[:, t], x)

    def test_washout_discards_leading_columns(self):
        net = ring_network(4, 0.5)
        u = np.arange(10.0)
        full = run_reservoir(net, u, washout=0)
        cut = run_reservoir(net, u, washout=6)
        np.testing.assert_array_equal(cut.states, full.states[:, 6:])
        assert cut.washout == 6

    def test_linearity_and_superposition(self):
        net = ring_network(5, 0.9, input_seed=2)
        u = np.cos(np.arange(40.0))
        v = np.sin(np.arange(40.0) * 0.7)
        t_u = run_reservoir(net, u, 0).states
        t_v = run_reservoir(net, v, 0).states
        t_scaled = run_reservoir(net, 3.0 * u, 0).states
        t_sum = run_reservoir(net, u + v, 0).states
        np.testing.assert_allclose(t_scaled, 3.0 * t_u, atol=1e-12)
        np.testing.assert_allclose(t_sum, t_u + t_v, atol=1e-12)

    def test_washout_bound(self):
        net = ring_network(3, 0.5)
        with pytest.raises(ValueError):
            run_reservoir(net, np.arange(5.0), washout=5)


class TestSpectralRadius:
    def test_identity(self):
        assert spectral_radius(np.eye(3)) == pytest.approx(1.0)

    def test_ring_construction_contract(self):
        assert spectral_radius(ring_network(5, 0.7).w) == pytest.approx(0.7)

    def test_zero_matrix(self):
        assert spectral_radius(np.zeros((4, 4))) == 0.0

    def test_requires_square(self):
        with pytest.raises(ValueError):
            spectral_radius(np.ones((2, 3)))


class TestEigDecompose:
    def test_ring_circulant_spectrum(self):
        net = eig_decompose(ring_network(4, 0.9))
        d = np.sort_complex(net._eig.d)
        expected = np.sort_complex(0.9 * np.exp(2j * np.pi * np.arange(4) / 4))
        np.testing.assert_allclose(d, expected, atol=1e-12)

    def test_diagonal_matrix(self):
        net = Network(w=np.diag([0.1, 0.4, 0.7]), w_in=np.ones(3),
                      spectral_radius=0.7)
        eig = get_eig(net)
        np.testing.assert_allclose(np.sort(eig.d.real), [0.1, 0.4, 0.7])

    def test_reconstruction_error(self):
        net = randomize_links(ring_network(15, 0.85), 40, seed=8)
        eig = get_eig(net)
        recon = eig.u @ np.diag(eig.d) @ eig.u_inv
        assert np.max(np.abs(recon - net.w)) < 1e-8

    def test_defective_matrix_rejected(self):
        jordan = Network(w=np.array([[0.5, 1.0], [0.0, 0.5]]),
                         w_in=np.ones(2), spectral_radius=0.5)
        with pytest.raises(DefectiveMatrixError, match="sum-based|condition|truncated"):
            eig_decompose(jordan)

    def test_cache_reused(self):
        net = ring_network(6, 0.6)
        first = get_eig(net)
        assert get_eig(net) is first


class TestSerialization:
    def test_roundtrip(self, tmp_path):
        net = randomize_links(ring_network(8, 0.75, input_seed=4), 12, seed=9)
        path = tmp_path / "net.json"
        network_to_json(net, path)
        back = network_from_json(path)
        np.testing.assert_array_equal(back.w, net.w)
        np.testing.assert_array_equal(back.w_in, net.w_in)
        assert back.spectral_radius == net.spectral_radius
        assert back.seed == 9 and back.ell == 12

    def test_document_fields(self):
        net = ring_network(3, 0.5)
        doc = json.loads(network_to_json(net))
        assert set(doc) == {"n", "lambda", "seed", "ell", "w", "w_in"}
        assert len(doc["w"]) == 9
