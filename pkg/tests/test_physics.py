import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qpskrx.physics import (ChannelModel, DetectorModel, QpskAlphabet,
                            off_probability, off_probability_visibility,
                            sample_click, symbol_amplitude)


class TestSymbolAmplitude:
    def test_zero_magnitude(self):
        assert symbol_amplitude(QpskAlphabet(0.0), 2, 5) == 0

    def test_unit_magnitude_first_symbol(self):
        g = symbol_amplitude(QpskAlphabet(1.0), 0, 1)
        assert g.real == pytest.approx(math.cos(math.pi / 4), abs=1e-12)
        assert g.imag == pytest.approx(math.sin(math.pi / 4), abs=1e-12)

    def test_four_photon_split_four_ways(self):
        g = symbol_amplitude(QpskAlphabet.from_mean_photons(4.0), 1, 4)
        assert abs(g) == pytest.approx(1.0, abs=1e-12)
        assert math.atan2(g.imag, g.real) == pytest.approx(3 * math.pi / 4, abs=1e-12)

    def test_per_bin_energy(self):
        g = symbol_amplitude(QpskAlphabet.from_mean_photons(3.7), 3, 7)
        assert abs(g) ** 2 == pytest.approx(3.7 / 7, rel=1e-12)

    def test_invalid_symbol_index(self):
        with pytest.raises(ValueError):
            symbol_amplitude(QpskAlphabet(1.0), 4, 3)

    def test_pairwise_distances_depend_only_on_index_difference(self):
        alph = QpskAlphabet(1.3)
        dist = {}
        for m in range(4):
            for n in range(4):
                d = abs(alph.symbol(m) - alph.symbol(n)) ** 2
                dist.setdefault((m - n) % 4, []).append(d)
        for group in dist.values():
            assert max(group) - min(group) < 1e-12


class TestOffProbability:
    def test_perfectly_nulled(self):
        det = DetectorModel(eta=0.7)
        assert off_probability(0.3 + 0.4j, 0.3 + 0.4j, det) == 1.0

    def test_unit_distance(self):
        assert off_probability(1.0 + 0j, 0j, DetectorModel(1.0)) == pytest.approx(
            math.exp(-1), rel=1e-12)

    def test_dark_counts_only(self):
        # nu = 9.1e-3 per state over 10 bins
        p = off_probability(0.5j, 0.5j, DetectorModel(1.0), nu_per_bin=9.1e-4)
        assert p == pytest.approx(math.exp(-9.1e-4), rel=1e-12)
        assert p == pytest.approx(0.99909, abs=5e-6)


class TestOffProbabilityVisibility:
    def test_perfect_nulling(self):
        assert off_probability_visibility(0.0, 0.8, ChannelModel(0.9, 1.0)) == 1.0

    def test_opposite_phase(self):
        p = off_probability_visibility(math.pi, 0.5, ChannelModel(1.0, 1.0))
        assert p == pytest.approx(math.exp(-2), rel=1e-12)

    def test_quadrature_phase_kills_visibility_term(self):
        p = off_probability_visibility(math.pi / 2, 0.4, ChannelModel(0.65, 0.996))
        assert p == pytest.approx(math.exp(-0.52), rel=1e-12)

    @given(theta=st.floats(0, 2 * math.pi), gamma_sq=st.floats(0, 10.0),
           eta=st.floats(0, 1))
    def test_agrees_with_general_formula_at_unit_visibility(self, theta, gamma_sq, eta):
        gamma = math.sqrt(gamma_sq)
        beta = gamma * complex(math.cos(theta), math.sin(theta))
        p_gen = off_probability(gamma + 0j, beta, DetectorModel(eta))
        p_vis = off_probability_visibility(theta, gamma_sq, ChannelModel(eta, 1.0))
        assert p_vis == pytest.approx(p_gen, abs=1e-12)

    @given(theta=st.floats(0, 2 * math.pi), gamma_sq=st.floats(0, 10.0),
           xi=st.floats(0, 1), eta=st.floats(0, 1), nu=st.floats(0, 0.1))
    def test_probability_range(self, theta, gamma_sq, xi, eta, nu):
        p = off_probability_visibility(theta, gamma_sq, ChannelModel(eta, xi), nu)
        assert 0.0 < p <= 1.0


class TestMonotonicity:
    def test_decreasing_in_distance(self):
        det = DetectorModel(0.8)
        probs = [off_probability(complex(d, 0), 0j, det) for d in np.linspace(0, 3, 20)]
        assert all(a >= b for a, b in zip(probs, probs[1:]))

    def test_decreasing_in_eta_and_nu(self):
        by_eta = [off_probability(1 + 0j, 0j, DetectorModel(e)) for e in np.linspace(0, 1, 11)]
        assert all(a >= b for a, b in zip(by_eta, by_eta[1:]))
        by_nu = [off_probability(1 + 0j, 0j, DetectorModel(0.5), nu)
                 for nu in np.linspace(0, 1, 11)]
        assert all(a >= b for a, b in zip(by_nu, by_nu[1:]))


class TestSampleClick:
    def test_certain_off(self):
        assert sample_click(1.0, 0.999999) == 0

    def test_certain_on(self):
        assert sample_click(0.0, 0.0) == 1

    def test_threshold_rule(self):
        assert sample_click(0.5, 0.75) == 1
        assert sample_click(0.5, 0.25) == 0


class TestValidation:
    def test_detector_ranges(self):
        with pytest.raises(ValueError):
            DetectorModel(eta=1.2)
        with pytest.raises(ValueError):
            DetectorModel(eta=0.5, nu_per_state=-1e-3)

    def test_channel_ranges(self):
        with pytest.raises(ValueError):
            ChannelModel(eta_total=-0.1)
        with pytest.raises(ValueError):
            ChannelModel(eta_total=0.5, xi=1.01)

    def test_alphabet_magnitude(self):
        with pytest.raises(ValueError):
            QpskAlphabet(-1.0)
        with pytest.raises(ValueError):
            QpskAlphabet(float("nan"))
