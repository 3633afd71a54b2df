import itertools

import numpy as np
import pytest

from logicalnoise import channels as C
from logicalnoise import codes as K
from logicalnoise import logical as Lg
from logicalnoise.logical import NoiseModel
from logicalnoise.pauli import PauliOperator, commutes

REP3 = K.repetition(3)


def enumerate_pauli_noise(code, probs):
    """Brute-force oracle for i.i.d. Pauli noise: sum over all error strings.

    ``probs`` are the (I, X, Y, Z) probabilities of each qubit. A Pauli error E
    maps the code space to syndrome s(E) and acts on logical L with sign
    +1 if E commutes with L, else -1.
    """
    r = code.num_generators
    lops = code.logical_operators
    maps = np.zeros((1 << r, len(lops), len(lops)))
    for letters in itertools.product("IXYZ", repeat=code.n):
        w = np.prod([probs["IXYZ".index(c)] for c in letters])
        if w == 0:
            continue
        e = PauliOperator.from_string("".join(letters))
        s = K.syndrome_index(K.syndrome_of(code, e))
        maps[s] += w * np.diag([1.0 if commutes(e, lop) else -1.0 for lop in lops])
    return maps


class TestBitFlipEnumeration:
    @pytest.mark.parametrize("p", [0.01, 0.1, 0.3])
    def test_syndrome_probabilities(self, p):
        chans = Lg.syndrome_distribution(REP3, NoiseModel.iid(C.bit_flip(p), 3))
        probs = {sc.syndrome: sc.probability for sc in chans}
        single = p * (1 - p) ** 2 + p**2 * (1 - p)
        assert probs[(0, 0)] == pytest.approx((1 - p) ** 3 + p**3, abs=1e-14)
        for s in [(1, 0), (0, 1), (1, 1)]:
            assert probs[s] == pytest.approx(single, abs=1e-14)

    @pytest.mark.parametrize("p", [0.01, 0.1, 0.3])
    def test_trivial_syndrome_channel(self, p):
        sc = Lg.logical_channel_factorized(REP3, NoiseModel.iid(C.bit_flip(p), 3), (0, 0))
        c = ((1 - p) ** 3 - p**3) / ((1 - p) ** 3 + p**3)
        np.testing.assert_allclose(sc.ptm, np.diag([1, 1, c, c]), atol=1e-14)

    @pytest.mark.parametrize("p", [0.05, 0.2])
    def test_recovered_single_flip_syndrome(self, p):
        sc = Lg.logical_channel_factorized(REP3, NoiseModel.iid(C.bit_flip(p), 3), (1, 0))
        fixed = Lg.apply_recovery(sc, REP3, PauliOperator.from_string("XII"))
        c = 1 - 2 * p**2 * (1 - p) / sc.probability
        np.testing.assert_allclose(fixed.ptm, np.diag([1, 1, c, c]), atol=1e-14)
        assert fixed.probability == sc.probability

    @pytest.mark.parametrize(
        "code, probs",
        [
            (REP3, (0.9, 0.1, 0.0, 0.0)),
            (REP3, (0.7, 0.1, 0.15, 0.05)),
            (K.repetition(5), (0.85, 0.05, 0.04, 0.06)),
            (K.five_qubit(), (0.8, 0.07, 0.05, 0.08)),
        ],
        ids=["rep3-flip", "rep3-pauli", "rep5-pauli", "five-pauli"],
    )
    def test_general_pauli_enumeration(self, code, probs):
        noise = NoiseModel.iid(C.pauli_channel(*probs[1:]), code.n)
        np.testing.assert_allclose(Lg.unnormalized_maps(code, noise), enumerate_pauli_noise(code, probs), atol=1e-14)


class TestBasicProperties:
    @pytest.mark.parametrize("code", [REP3, K.five_qubit(), K.steane()], ids=lambda c: c.name)
    def test_identity_noise(self, code):
        chans = Lg.syndrome_distribution(code, NoiseModel.iid(np.eye(4), code.n))
        assert chans[0].probability == 1.0
        np.testing.assert_allclose(chans[0].ptm, np.eye(4), atol=1e-15)
        for sc in chans[1:]:
            assert sc.degenerate and sc.probability == 0
        np.testing.assert_allclose(Lg.average_logical_channel(chans), np.eye(4), atol=1e-15)

    def test_single_syndrome_matches_batch(self):
        rng = np.random.default_rng(3)
        code = K.five_qubit()
        noise = NoiseModel.local([C.random_ptm(rng) for _ in range(5)])
        chans = Lg.syndrome_distribution(code, noise)
        for s in [(0, 0, 0, 0), (1, 0, 1, 1), (0, 1, 1, 0)]:
            single = Lg.logical_channel_factorized(code, noise, s)
            batch = chans[K.syndrome_index(s)]
            assert single.probability == pytest.approx(batch.probability, abs=1e-14)
            np.testing.assert_allclose(single.ptm, batch.ptm, atol=1e-12)

    @pytest.mark.parametrize("code", [REP3, K.repetition(5), K.five_qubit(), K.steane()], ids=lambda c: c.name)
    def test_normalization_and_trace_preservation(self, code):
        rng = np.random.default_rng(17)
        for _ in range(5):
            noise = NoiseModel.local([C.random_ptm(rng) for _ in range(code.n)])
            chans = Lg.syndrome_distribution(code, noise)
            probs = np.array([sc.probability for sc in chans])
            assert probs.min() >= -1e-12
            assert probs.sum() == pytest.approx(1.0, abs=1e-10)
            for sc in chans:
                if not sc.degenerate:
                    assert sc.ptm[0, 0] == pytest.approx(1.0, abs=1e-12)
            avg = Lg.average_logical_channel(chans)
            np.testing.assert_allclose(avg[0], [1, 0, 0, 0], atol=1e-12)

    def test_wrong_syndrome_length(self):
        with pytest.raises(K.CodeError):
            Lg.logical_channel_factorized(REP3, NoiseModel.iid(np.eye(4), 3), (0,))

    def test_noise_size_mismatch(self):
        with pytest.raises(Lg.NoiseModelError):
            Lg.syndrome_distribution(REP3, NoiseModel.iid(np.eye(4), 4))

    def test_degenerate_flag(self):
        # Z rotations never trigger a repetition-code syndrome
        chans = Lg.syndrome_distribution(REP3, NoiseModel.iid(C.rotation("Z", 0.4), 3))
        assert chans[0].probability == pytest.approx(1.0)
        for sc in chans[1:]:
            assert sc.degenerate and sc.probability == 0.0
            assert np.abs(sc.ptm).max() < 1e-14


class TestNoiseModel:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(Lg.NoiseModelError):
            NoiseModel.correlated([0.5, 0.4], [[np.eye(4)], [np.eye(4)]])

    def test_factor_must_be_cptp(self):
        with pytest.raises(Lg.NoiseModelError):
            NoiseModel.local([np.diag([1.0, 0.5, 1.0, 1.0])])

    def test_length_mismatch(self):
        with pytest.raises(Lg.NoiseModelError):
            NoiseModel.correlated([0.5, 0.5], [[np.eye(4)], [np.eye(4), np.eye(4)]])

    def test_r_prime_and_infidelity(self):
        noise = NoiseModel.local([C.depolarizing(0.1), C.rotation("X", 0.2)])
        assert noise.infidelity() == pytest.approx(0.05)
        assert noise.r_prime() == pytest.approx(0.0, abs=1e-15)  # X row of an X rotation is exact
        assert NoiseModel.iid(C.depolarizing(0.1), 2).r_prime() == pytest.approx(0.1)

    def test_is_pauli(self):
        assert NoiseModel.iid(C.pauli_channel(0.1, 0.1, 0.1), 3).is_pauli()
        assert not NoiseModel.iid(C.rotation("X", 0.1), 3).is_pauli()
        assert NoiseModel.iid(C.rotation("X", 0.1), 3).twirled().is_pauli()


class TestLinearity:
    def test_mixture_is_weighted_sum(self):
        rng = np.random.default_rng(8)
        code = K.five_qubit()
        fa = [C.random_ptm(rng) for _ in range(5)]
        fb = [C.random_ptm(rng) for _ in range(5)]
        mix = Lg.unnormalized_maps(code, NoiseModel.correlated([0.3, 0.7], [fa, fb]))
        parts = 0.3 * Lg.unnormalized_maps(code, NoiseModel.local(fa)) + 0.7 * Lg.unnormalized_maps(
            code, NoiseModel.local(fb)
        )
        np.testing.assert_allclose(mix, parts, atol=1e-12)
        chans = Lg.syndrome_distribution(code, NoiseModel.correlated([0.3, 0.7], [fa, fb]))
        for sc, m in zip(chans, parts):
            np.testing.assert_allclose(sc.ptm, m / m[0, 0], atol=1e-12)


class TestPauliDiagonality:
    @pytest.mark.parametrize("code", [REP3, K.five_qubit(), K.steane()], ids=lambda c: c.name)
    def test_random_local_pauli(self, code):
        rng = np.random.default_rng(21)
        for _ in range(5):
            noise = NoiseModel.local([C.random_pauli_ptm(rng) for _ in range(code.n)])
            for sc in Lg.recover_all(code, Lg.syndrome_distribution(code, noise)):
                off = sc.ptm - np.diag(np.diag(sc.ptm))
                assert np.abs(off).max() <= 1e-12


class TestCompletePositivity:
    @pytest.mark.parametrize("code", [REP3, K.five_qubit(), K.steane()], ids=lambda c: c.name)
    def test_choi_psd(self, code):
        rng = np.random.default_rng(31)
        for _ in range(3):
            noise = NoiseModel.local([C.random_ptm(rng) for _ in range(code.n)])
            chans = Lg.syndrome_distribution(code, noise)
            avg = Lg.average_logical_channel(chans)
            assert np.linalg.eigvalsh(C.choi_of(avg)).min() >= -1e-9
            for sc in chans:
                assert np.linalg.eigvalsh(C.choi_of(sc.unnormalized)).min() >= -1e-9


class TestRecovery:
    def test_identity_recovery(self):
        sc = Lg.logical_channel_factorized(REP3, NoiseModel.iid(C.rotation("X", 0.2), 3), (0, 0))
        same = Lg.apply_recovery(sc, REP3, PauliOperator.identity(3))
        np.testing.assert_array_equal(same.ptm, sc.ptm)

    def test_mismatch_rejected(self):
        sc = Lg.logical_channel_factorized(REP3, NoiseModel.iid(C.rotation("X", 0.2), 3), (1, 0))
        with pytest.raises(K.CodeError):
            Lg.apply_recovery(sc, REP3, PauliOperator.from_string("IIX"))

    def test_recovery_signs(self):
        np.testing.assert_array_equal(Lg.recovery_signs(REP3, PauliOperator.from_string("XII")), [1, 1, -1, -1])
        np.testing.assert_array_equal(Lg.recovery_signs(REP3, PauliOperator.from_string("ZII")), [1, -1, -1, 1])

    def test_incomplete_average_rejected(self):
        chans = Lg.syndrome_distribution(REP3, NoiseModel.iid(C.rotation("X", 0.2), 3))
        with pytest.raises(K.CodeError):
            Lg.average_logical_channel(chans[:3])
        with pytest.raises(K.CodeError):
            Lg.average_logical_channel([])

    def test_unrecovered_x_rotation_average_is_diagonal(self):
        # summing over syndromes removes the projector; the X row of each factor is exact
        for n in (3, 5):
            code = K.repetition(n)
            avg = Lg.average_logical_channel(Lg.syndrome_distribution(code, NoiseModel.iid(C.rotation("X", 0.1), n)))
            assert np.abs(avg - np.diag(np.diag(avg))).max() < 1e-15


class TestTwirlDiscrepancy:
    @pytest.mark.parametrize("axis", ["Z", [2**-0.5, 0.0, 2**-0.5]])
    def test_coherent_differs_from_twirled(self, axis):
        noise = NoiseModel.iid(C.rotation(axis, 0.3), 3)
        coherent = Lg.average_logical_channel(Lg.recover_all(REP3, Lg.syndrome_distribution(REP3, noise)))
        twirled = Lg.average_logical_channel(Lg.recover_all(REP3, Lg.syndrome_distribution(REP3, noise.twirled())))
        assert np.abs(np.diag(coherent) - np.diag(twirled)).max() > 0.05

    def test_z_rotation_adds_coherently(self):
        # every Z_j acts as the logical Z, so the logical channel is a rotation by 3 theta
        th = 0.3
        avg = Lg.average_logical_channel(Lg.syndrome_distribution(REP3, NoiseModel.iid(C.rotation("Z", th), 3)))
        np.testing.assert_allclose(avg, C.rotation("Z", 3 * th), atol=1e-14)


class TestMetrics:
    def test_identity(self):
        m = Lg.coherence_metrics(np.eye(4))
        assert m.logical_infidelity == 0 and m.max_offdiag == 0 and m.diag_ratio == 0

    def test_depolarizing(self):
        m = Lg.coherence_metrics(C.depolarizing(0.1))
        assert m.logical_infidelity == pytest.approx(0.05)
        assert m.max_offdiag == 0

    def test_trivial_code_z_rotation(self):
        th = 0.25
        code = K.trivial(1)
        chans = Lg.syndrome_distribution(code, NoiseModel.local([C.rotation("Z", th)]))
        m = Lg.coherence_metrics(Lg.average_logical_channel(chans))
        assert m.max_offdiag == pytest.approx(np.sin(th), abs=1e-15)
        assert m.offdiag_frobenius == pytest.approx(np.sqrt(2) * np.sin(th), abs=1e-15)

    def test_two_qubit_infidelity(self):
        # (m^2 - tr)/(m^2 + m) with m = 4
        ptm = np.kron(C.depolarizing(0.1), np.eye(4))
        assert Lg.logical_infidelity(ptm) == pytest.approx((16 - np.trace(ptm)) / 20)

    def test_error_matrix(self):
        e = Lg.logical_error_matrix(C.rotation("Z", 0.3))
        assert np.all(e >= 0)
        np.testing.assert_allclose(e[0], 0, atol=1e-15)


class TestRounds:
    def test_single_round(self):
        err = np.eye(4) - C.compose([C.rotation("X", 0.1), C.depolarizing(0.01)])
        rep = Lg.rounds_accumulation(err, 1)
        np.testing.assert_allclose(rep.exact, np.eye(4) - err)
        np.testing.assert_array_equal(rep.second_order, 0)

    def test_diagonal_error_has_no_coherent_term(self):
        err = np.eye(4) - C.depolarizing(0.02)
        rep = Lg.rounds_accumulation(err, 50)
        np.testing.assert_array_equal(rep.coherent_coherent, 0)
        assert rep.h_coherent == np.inf and rep.h_crit == np.inf
        assert rep.h_pauli == pytest.approx(1 + 2 / 0.02)

    def test_exact_power_and_binomial_split(self):
        err = np.abs(np.eye(4) - C.rotation("X", 0.05))
        rep = Lg.rounds_accumulation(err, 7)
        np.testing.assert_allclose(rep.exact, np.linalg.matrix_power(np.eye(4) - err, 7))
        np.testing.assert_allclose(rep.pauli_pauli + rep.coherent_coherent, np.diag(rep.second_order), atol=1e-15)

    def test_invalid_h(self):
        with pytest.raises(ValueError):
            Lg.rounds_accumulation(np.zeros((4, 4)), 0)

    def test_crossover_scan_is_minimal(self):
        th = 0.1
        err = np.abs(np.eye(4) - C.rotation("X", th))
        h = int(Lg.coherent_crossover_scan(err))
        diag = np.diag(err)

        def coherent(hh):
            a = np.linalg.matrix_power(np.eye(4) - err, hh)
            b = np.linalg.matrix_power(np.eye(4) - np.diag(diag), hh)
            return np.abs(np.diag(a - b))

        live = [s for s in range(1, 4) if diag[s] > Lg.ROUNDOFF_FLOOR]
        assert any(coherent(h)[s] > h * diag[s] for s in live)
        assert not any(coherent(h - 1)[s] > (h - 1) * diag[s] for s in live)

    def test_h_crit_tracks_inverse_infidelity_rep3(self):
        r = 1e-2
        theta = np.arccos(1 - 3 * r)
        chans = Lg.recover_all(REP3, Lg.syndrome_distribution(REP3, NoiseModel.iid(C.rotation("X", theta), 3)))
        err = Lg.logical_error_matrix(Lg.average_logical_channel(chans))
        h = Lg.rounds_accumulation(err, 1).h_crit
        assert 1 / (5 * r) <= h <= 5 / r
