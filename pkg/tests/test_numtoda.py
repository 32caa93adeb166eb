import math

import numpy as np
import pytest
from scipy.linalg import expm

from todalab import numtoda
from todalab.errors import DegenerateSpectrumError, GridUnstableError, ValidationError
from todalab.rootdata import LieType


def a1_negative_data():
    s1, c1 = math.sinh(1.0), math.cosh(1.0)
    return [-1.0 / s1 ** 2], [-c1 / s1]  # blow-up at t = 1 on the curve I = 1


class TestLaxMatrix:
    def test_structure(self):
        L = numtoda.lax_matrix([1.0, -1.0], [-1.0, -1.0])
        assert np.allclose(L, [[1, 1, 0], [-1, -2, 1], [0, -1, 1]])
        assert abs(np.trace(L)) < 1e-14

    def test_roundtrip(self):
        b, a = [0.3, -0.7, 0.2], [1.0, 2.0, 0.5]
        L = numtoda.lax_matrix(b, a)
        b2, a2 = numtoda.lax_data(L)
        assert np.allclose(b, b2) and np.allclose(a, a2)

    def test_validation(self):
        with pytest.raises(ValidationError):
            numtoda.lax_matrix([1.0], [1.0, 2.0])
        bad = numtoda.lax_matrix([0.5], [1.0])
        bad[0, 0] += 0.5  # break tracelessness
        with pytest.raises(ValidationError):
            numtoda.TauMinors(bad)


class TestTauMinors:
    def test_cosh_case(self):
        m = numtoda.TauMinors(np.array([[0.0, 1.0], [1.0, 0.0]]))
        for t in (-2.0, -0.5, 0.0, 1.3, 4.0):
            assert abs(m.value(1, t) - math.cosh(t)) < 1e-12

    def test_sinh_type_case(self):
        m = numtoda.TauMinors(np.array([[2.0, 1.0], [-3.0, -2.0]]))
        for t in (-1.0, 0.3, 2.0):
            assert abs(m.value(1, t) - (math.cosh(t) + 2 * math.sinh(t))) < 1e-12

    def test_functional_wrapper(self):
        L = numtoda.example_a2_all_negative()
        assert np.allclose(numtoda.tau_minors(L, 0.0), 1.0)
        assert np.allclose(numtoda.tau_minors(L, 0.4),
                           numtoda.TauMinors(L).values(0.4))

    def test_tau_at_zero_is_one(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            b = rng.normal(size=3)
            a = rng.uniform(0.3, 2.0, size=3)  # positive a: real simple spectrum
            m = numtoda.TauMinors(numtoda.lax_matrix(b, a))
            assert np.allclose(m.values(0.0), 1.0, atol=1e-11)

    def test_degenerate_spectrum_rejected(self):
        with pytest.raises(DegenerateSpectrumError):
            numtoda.TauMinors(numtoda.lax_matrix([0.0], [-1.0]))  # eigenvalues +-i

    def test_near_degenerate_uses_expm(self):
        m = numtoda.TauMinors(numtoda.lax_matrix([0.0], [1e-14]))
        assert m.method == "expm"
        assert abs(m.value(1, 1.0) - 1.0) < 1e-6

    def test_multi_time_matches_expm(self):
        L = numtoda.lax_matrix([0.4, -0.2], [1.0, 0.7])
        m = numtoda.TauMinors(L)
        for t1, t2 in ((0.3, 0.1), (-0.5, 0.2)):
            g = expm(t1 * L + t2 * (L @ L))
            want = [np.linalg.det(g[:j, :j]) for j in (1, 2)]
            got = m.values(t1, higher_times=[t2])
            assert np.allclose(got, want, rtol=1e-9, atol=1e-12)

    def test_log_derivative_matches_finite_difference(self):
        m = numtoda.TauMinors(numtoda.example_a2_all_negative())
        h = 1e-6
        for t in (-0.7, 0.2, 1.1):
            for j in (1, 2):
                fd = (math.log(abs(m.value(j, t + h)))
                      - math.log(abs(m.value(j, t - h)))) / (2 * h)
                assert abs(m.log_derivative(j, t) - fd) < 1e-5


class TestCrossings:
    def test_a1_positive_none(self):
        assert numtoda.count_zero_crossings(
            numtoda.lax_matrix([0.0], [1.0]), 1, window=(-6, 6)) == 0

    def test_a1_negative_one(self):
        a0, b0 = a1_negative_data()
        l0 = numtoda.lax_matrix(b0, a0)
        assert numtoda.count_zero_crossings(l0, 1, window=(-6, 6)) == 1
        roots = numtoda.zero_crossings(numtoda.TauMinors(l0), 1, window=(-6, 6))
        assert abs(roots[0] - 1.0) < 1e-8

    def test_a2_total_two(self):
        L = numtoda.example_a2_all_negative()
        total = sum(numtoda.count_zero_crossings(L, j, window=(-12, 12)) for j in (1, 2))
        assert total == 2

    def test_grid_instability_reported(self, monkeypatch):
        calls = {}

        def fake(minors, j, window, grid):
            calls[grid] = True
            return [0.0] * (1 if grid < 100 else 2)

        monkeypatch.setattr(numtoda, "zero_crossings", fake)
        with pytest.raises(GridUnstableError) as info:
            numtoda.count_zero_crossings(
                numtoda.TauMinors(numtoda.lax_matrix([0.0], [1.0])), 1, grid=51)
        assert (info.value.count_coarse, info.value.count_fine) == (1, 2)


class TestOde:
    def test_positive_matches_closed_form(self):
        traj = numtoda.ode_integrate(LieType("A", 1), [1.0], [0.0], (0.0, 5.0))
        assert traj.status == "complete"
        assert traj.tau is not None
        assert np.max(np.abs(traj.tau[:, 0] - np.cosh(traj.t))) < 1e-9
        assert np.max(np.abs(traj.a[:, 0] - 1 / np.cosh(traj.t) ** 2)) < 1e-6
        assert np.max(np.abs(traj.b[:, 0] - np.tanh(traj.t))) < 1e-6
        assert traj.invariant_drift() < 1e-8

    def test_negative_blows_up_once(self):
        a0, b0 = a1_negative_data()
        traj = numtoda.ode_integrate(LieType("A", 1), a0, b0, (0.0, 4.0))
        assert traj.status == "blow-up"
        assert len(traj.events) == 1
        assert traj.events[0].tau_index == 1
        assert abs(traj.events[0].time - 1.0) < 0.01
        assert traj.invariant_drift(a_bound=100.0) < 1e-7
        # the event bracket straddles the tau sign change
        minors = numtoda.TauMinors(numtoda.lax_matrix(b0, a0))
        lo, hi = traj.events[0].bracket
        assert minors.value(1, lo) * minors.value(1, hi) < 0

    def test_a2_positive_sorts_spectrum(self):
        b0, a0 = [1.0, -1.0], [1.0, 1.0]
        L0 = numtoda.lax_matrix(b0, a0)
        eigs = np.sort(np.linalg.eigvals(L0).real)
        fwd = numtoda.ode_integrate(LieType("A", 2), a0, b0, (0.0, 40.0))
        bwd = numtoda.ode_integrate(LieType("A", 2), a0, b0, (0.0, -40.0))
        assert np.max(np.abs(fwd.a[-1])) < 1e-8 and np.max(np.abs(bwd.a[-1])) < 1e-8
        diag_fwd = np.diag(numtoda.lax_matrix(fwd.b[-1], fwd.a[-1]))
        diag_bwd = np.diag(numtoda.lax_matrix(bwd.b[-1], bwd.a[-1]))
        assert np.allclose(diag_fwd, eigs[::-1], atol=1e-6)  # descending at +inf
        assert np.allclose(diag_bwd, eigs, atol=1e-6)        # ascending at -inf

    def test_generic_types_conserve_energy(self):
        for name, a0, b0 in (("B2", [0.5, 0.5], [0.1, -0.2]),
                             ("C3", [0.3, 0.4, 0.5], [0.0, 0.0, 0.0]),
                             ("D4", [0.2, 0.3, 0.2, 0.4], [0.0] * 4)):
            traj = numtoda.ode_integrate(LieType.parse(name), a0, b0, (0.0, 5.0))
            assert traj.status == "complete"
            assert traj.invariant_drift() < 1e-8

    def test_g2_negative_stops_at_blowup(self):
        traj = numtoda.ode_integrate(LieType("G", 2), [-0.5, 0.4], [0.1, -0.2], (0.0, 8.0))
        assert traj.status == "blow-up"
        assert len(traj.events) == 1

    def test_validates_shapes(self):
        with pytest.raises(ValidationError):
            numtoda.ode_integrate(LieType("A", 2), [1.0], [0.0], (0.0, 1.0))


class TestTauOdeConsistency:
    def test_b_is_log_derivative_of_tau(self):
        L = numtoda.example_a2_all_negative()
        minors = numtoda.TauMinors(L)
        b0, a0 = numtoda.lax_data(L)
        traj = numtoda.ode_integrate(LieType("A", 2), a0, b0, (0.0, 0.5))
        for i in range(0, len(traj.t), 50):
            for j in (1, 2):
                assert abs(minors.log_derivative(j, traj.t[i]) - traj.b[i, j - 1]) < 1e-6


class TestSignsVsEta:
    def test_all_negative_a2(self, group):
        rep = numtoda.signs_vs_eta_report(numtoda.example_a2_all_negative(),
                                          group=group("A2"))
        assert rep.eps == (-1, -1)
        assert rep.crossings_per_tau == (1, 1)
        assert rep.total_crossings == rep.eta_longest == 2
        assert rep.matches

    def test_all_positive_a2(self, group):
        rep = numtoda.signs_vs_eta_report(numtoda.lax_matrix([1.0, -1.0], [1.0, 1.0]),
                                          group=group("A2"))
        assert rep.total_crossings == rep.eta_longest == 0
        assert rep.matches

    def test_a1_negative(self, group):
        a0, b0 = a1_negative_data()
        rep = numtoda.signs_vs_eta_report(numtoda.lax_matrix(b0, a0), group=group("A1"))
        assert rep.total_crossings == rep.eta_longest == 1

    def test_mixed_sign_a2(self, group):
        # a = (-1, +1), spectrum approx (-2.58, -0.71, 3.29): two blow-ups
        rep = numtoda.signs_vs_eta_report(
            numtoda.lax_matrix([-3.0, -3.0], [-1.0, 1.0]), group=group("A2"))
        assert rep.eps == (-1, 1)
        assert rep.total_crossings == rep.eta_longest == 2
        assert rep.matches

    def test_all_negative_a3(self, group):
        # b = (-3, -3, 0), a = (-1, -1, -1): four blow-ups, eta(w*) = 4
        rep = numtoda.signs_vs_eta_report(
            numtoda.lax_matrix([-3.0, -3.0, 0.0], [-1.0, -1.0, -1.0]),
            window=(-16.0, 16.0), group=group("A3"))
        assert rep.eps == (-1, -1, -1)
        assert rep.crossings_per_tau == (2, 0, 2)
        assert rep.total_crossings == rep.eta_longest == 4
        assert rep.matches

    def test_zero_a_rejected(self):
        with pytest.raises(ValidationError):
            numtoda.signs_vs_eta_report(numtoda.lax_matrix([0.5], [0.0]))
