"""Tests for the Rayleigh-fading PER model and reliability bounds."""

import math

import pytest

from linkopt.errors import OutOfRegimeError
from linkopt.per import (
    EULER_GAMMA,
    BerForm,
    CircuitClass,
    ModulationScheme,
    QosSpec,
    awgn_per,
    ber,
    default_modulations,
    papr_mqam_bounded,
    papr_mqam_growing,
    payload_max,
    per_rayleigh,
    per_rayleigh_bound_numeric,
    per_rayleigh_exact,
    required_per,
    snr_min,
    waterfall_from_coded_constants,
    waterfall_threshold,
    waterfall_threshold_numeric,
)

BPSK = ModulationScheme("BPSK", 1, BerForm.GAUSSIAN_Q, 1.0, 2.0, 1.0,
                        CircuitClass.MQAM)
NCFSK = ModulationScheme("NCFSK", 1, BerForm.EXPONENTIAL, 0.5, 0.5, 1.0,
                         CircuitClass.MFSK)
# Unit exponential BER law: the waterfall integral is exactly 1 for N=1.
UNIT_EXP = ModulationScheme("UNIT", 1, BerForm.EXPONENTIAL, 1.0, 1.0, 1.0,
                            CircuitClass.MFSK)
QAM16 = ModulationScheme("16QAM", 4, BerForm.GAUSSIAN_Q, 0.75, 0.8, 1.8,
                         CircuitClass.MQAM)

QOS = QosSpec(target_per=0.001, max_retransmissions=3)


class TestModulationScheme:
    """Constructor invariants and the fitted exponential constants."""

    def test_gaussian_q_effective_constants(self):
        """Q-form laws map onto the fitted exponential constants."""
        assert BPSK.c_eff == pytest.approx(0.2114)
        assert BPSK.k_eff == pytest.approx(1.1196)

    def test_exponential_constants_pass_through(self):
        assert NCFSK.c_eff == 0.5
        assert NCFSK.k_eff == 0.5

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(c_m=0.0), dict(c_m=1.5), dict(k_m=0.0),
            dict(papr=0.5), dict(bits_per_symbol=0),
        ],
    )
    def test_invalid_fields_rejected(self, kwargs):
        base = dict(
            name="X", bits_per_symbol=1, ber_form=BerForm.GAUSSIAN_Q,
            c_m=1.0, k_m=2.0, papr=1.0,
            circuit_power_class=CircuitClass.MQAM,
        )
        base.update(kwargs)
        with pytest.raises(ValueError):
            ModulationScheme(**base)

    def test_default_table_names_and_paprs(self):
        mods = {m.name: m for m in default_modulations()}
        assert set(mods) == {"NCFSK", "BPSK", "OQPSK", "4QAM", "16QAM", "64QAM"}
        assert mods["OQPSK"].papr == pytest.approx(2.138)
        assert mods["4QAM"].papr == pytest.approx(papr_mqam_growing(4))
        bounded = {m.name: m for m in default_modulations("bounded")}
        assert bounded["4QAM"].papr == pytest.approx(1.0)
        assert bounded["64QAM"].papr == pytest.approx(papr_mqam_bounded(64))

    def test_mqam_ber_constants(self):
        mods = {m.name: m for m in default_modulations()}
        assert mods["16QAM"].c_m == pytest.approx(0.75)
        assert mods["16QAM"].k_m == pytest.approx(0.8)
        assert mods["64QAM"].c_m == pytest.approx(4 * (1 - 1 / 8) / 6)
        assert mods["64QAM"].k_m == pytest.approx(18 / 63)

    def test_unknown_papr_formula(self):
        with pytest.raises(ValueError, match="PAPR"):
            default_modulations("other")


class TestQosSpec:
    def test_per_attempt_bound_cached(self):
        assert QOS.per_attempt_bound == pytest.approx(0.1778279410038923, rel=1e-12)

    def test_bound_between_target_and_one(self):
        assert QOS.target_per < QOS.per_attempt_bound < 1.0

    def test_bound_increases_with_retransmissions(self):
        bounds = [
            QosSpec(0.001, tau).per_attempt_bound for tau in range(5)
        ]
        assert bounds == sorted(bounds)
        assert bounds[0] == pytest.approx(0.001)

    def test_invalid_target(self):
        with pytest.raises(ValueError):
            QosSpec(0.0, 3)
        with pytest.raises(ValueError):
            QosSpec(1.0, 3)
        with pytest.raises(ValueError):
            QosSpec(0.001, -1)


class TestBer:
    def test_bpsk_at_zero_snr_is_half(self):
        """Q(0) = 1/2."""
        assert ber(BPSK, 0.0) == pytest.approx(0.5)

    def test_ncfsk_at_zero_snr_is_half(self):
        assert ber(NCFSK, 0.0) == pytest.approx(0.5)

    def test_bpsk_at_10(self):
        """Q(sqrt(20)), frozen from a direct complementary-error evaluation."""
        assert ber(BPSK, 10.0) == pytest.approx(3.87210821552205e-06, rel=1e-9)

    def test_negative_snr_rejected(self):
        with pytest.raises(ValueError):
            ber(BPSK, -0.1)

    def test_clamped_to_unit_interval(self):
        assert 0.0 <= ber(NCFSK, 0.0) <= 1.0
        assert ber(BPSK, 1e9) >= 0.0


class TestAwgnPer:
    def test_single_bit_packet_equals_ber(self):
        for g in (0.0, 1.0, 5.0, 20.0):
            assert awgn_per(BPSK, 1, g) == pytest.approx(ber(BPSK, g), rel=1e-12)

    def test_high_snr_limit_is_zero(self):
        assert awgn_per(QAM16, 1024, 1e9) == pytest.approx(0.0, abs=1e-12)

    def test_bpsk_kilobit_at_10(self):
        assert awgn_per(BPSK, 1000, 10.0) == pytest.approx(
            0.0038646287387014834, rel=1e-9
        )

    def test_monotone_in_packet_size(self):
        values = [awgn_per(BPSK, n, 8.0) for n in (10, 100, 1000, 10000)]
        assert values == sorted(values)

    def test_zero_bits_rejected(self):
        with pytest.raises(ValueError):
            awgn_per(BPSK, 0, 1.0)


class TestWaterfallThreshold:
    def test_log_cancellation_point(self):
        """At N c_eff = exp(1 - euler_gamma) the threshold is exactly 1/k_eff."""
        n_bits = 1000
        tuned = ModulationScheme(
            "X", 1, BerForm.EXPONENTIAL, math.exp(1.0 - EULER_GAMMA) / n_bits,
            1.7, 1.0, CircuitClass.MFSK,
        )
        assert waterfall_threshold(tuned, n_bits) == pytest.approx(
            1.0 / tuned.k_eff, rel=1e-12
        )

    def test_bpsk_kilobit_value(self):
        assert waterfall_threshold(BPSK, 1000) == pytest.approx(
            5.297398837386273, rel=1e-12
        )

    def test_strictly_increasing_in_packet_size(self):
        values = [waterfall_threshold(BPSK, n) for n in (100, 500, 2000, 9000)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_out_of_regime_guard(self):
        with pytest.raises(OutOfRegimeError):
            waterfall_threshold(BPSK, 4)  # 4 * 0.2114 < 1

    def test_numeric_integral_of_unit_exponential_is_one(self):
        """For a single bit with unit exponential BER the integral is exact."""
        assert waterfall_threshold_numeric(UNIT_EXP, 1) == pytest.approx(
            1.0, rel=1e-9
        )

    def test_non_decaying_integrand_raises(self):
        """A BER law that never decays cannot reach the cutoff floor."""
        from linkopt.errors import QuadratureError

        stuck = ModulationScheme(
            "STUCK", 1, BerForm.EXPONENTIAL, 0.5, 1e-15, 1.0,
            CircuitClass.MFSK,
        )
        with pytest.raises(QuadratureError, match="does not decay"):
            waterfall_threshold_numeric(stuck, 1000)

    def test_numeric_value_16qam_small_packet(self):
        assert waterfall_threshold_numeric(QAM16, 120) == pytest.approx(
            7.857082729931548, rel=1e-8
        )

    @pytest.mark.parametrize("scheme", default_modulations())
    @pytest.mark.parametrize("n_bits", [120, 1024])
    def test_closed_form_tracks_numeric(self, scheme, n_bits):
        numeric = waterfall_threshold_numeric(scheme, n_bits)
        closed = waterfall_threshold(scheme, n_bits)
        assert abs(closed - numeric) / numeric <= 0.03


class TestPerRayleigh:
    def test_vanishes_at_high_snr(self):
        assert per_rayleigh(BPSK, 1000, 1e12) == pytest.approx(0.0, abs=1e-9)

    def test_equals_one_minus_inv_e_at_threshold(self):
        w0 = waterfall_threshold(BPSK, 1000)
        assert per_rayleigh(BPSK, 1000, w0) == pytest.approx(
            1.0 - math.exp(-1.0), rel=1e-12
        )

    def test_matches_numeric_threshold_route(self):
        g = 10.0 ** 2.5
        approx = per_rayleigh(QAM16, 1024, g)
        bound = per_rayleigh_bound_numeric(QAM16, 1024, g)
        assert abs(approx - bound) / bound <= 0.03

    def test_strictly_decreasing_in_snr(self):
        snrs = [10.0 ** (db / 10.0) for db in range(5, 40, 3)]
        values = [per_rayleigh(QAM16, 512, g) for g in snrs]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_strictly_increasing_in_packet_size(self):
        values = [per_rayleigh(QAM16, n, 200.0) for n in (64, 256, 1024, 4096)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_non_positive_snr_rejected(self):
        with pytest.raises(ValueError):
            per_rayleigh(BPSK, 1000, 0.0)

    def test_explicit_packet_size_factorization(self):
        """Equals 1 - N^(-1/(k g)) exp(-(ln c + euler)/(k g)) identically."""
        for n, g in ((120, 12.0), (1024, 300.0), (10048, 4500.0)):
            k_g = QAM16.k_eff * g
            explicit = 1.0 - n ** (-1.0 / k_g) * math.exp(
                -(math.log(QAM16.c_eff) + EULER_GAMMA) / k_g
            )
            assert per_rayleigh(QAM16, n, g) == pytest.approx(
                explicit, rel=1e-12
            )


class TestPerRayleighExact:
    def test_single_bit_exponential_closed_form(self):
        """One exponential-law bit integrates to c / (1 + k gamma_bar)."""
        for g in (0.5, 3.0, 40.0):
            assert per_rayleigh_exact(UNIT_EXP, 1, g) == pytest.approx(
                1.0 / (1.0 + g), rel=1e-8
            )

    def test_deep_fade_limit_is_one(self):
        assert per_rayleigh_exact(BPSK, 1000, 1e-4) == pytest.approx(1.0, rel=1e-6)
        assert per_rayleigh_exact(BPSK, 1000, 0.05) == pytest.approx(1.0, rel=1e-6)

    @pytest.mark.parametrize("n_bits", [120, 1024])
    @pytest.mark.parametrize("snr_db", [10, 20, 30])
    def test_upper_bound_property(self, n_bits, snr_db):
        """The numeric-threshold expression upper-bounds the exact average."""
        g = 10.0 ** (snr_db / 10.0)
        exact = per_rayleigh_exact(QAM16, n_bits, g)
        bound = per_rayleigh_bound_numeric(QAM16, n_bits, g)
        assert exact <= bound * (1.0 + 1e-9)

    def test_approximation_close_to_bound_at_20db(self):
        g = 10.0 ** 2.0
        exact = per_rayleigh_exact(QAM16, 1024, g)
        approx = per_rayleigh(QAM16, 1024, g)
        assert abs(approx - exact) / exact <= 0.05


class TestMonteCarloCrossCheck:
    """Fading-draw simulation backs up the quadrature oracle independently."""

    def test_exact_per_matches_simulated_average(self):
        import random

        rng = random.Random(90210)
        draws = 200_000
        for gamma_bar in (10.0, 100.0):
            total = 0.0
            for _ in range(draws):
                g = rng.expovariate(1.0 / gamma_bar)
                total += awgn_per(QAM16, 1024, g)
            simulated = total / draws
            integrated = per_rayleigh_exact(QAM16, 1024, gamma_bar)
            sigma = math.sqrt(integrated * (1.0 - integrated) / draws)
            assert abs(simulated - integrated) <= 5.0 * sigma + 1e-6


class TestRequiredPer:
    def test_table_case(self):
        assert required_per(QOS) == pytest.approx(0.1778279410038923, rel=1e-12)

    def test_no_retransmissions(self):
        assert required_per(QosSpec(0.004, 0)) == pytest.approx(0.004)

    def test_square_root_case(self):
        assert required_per(QosSpec(0.01, 1)) == pytest.approx(0.1)


class TestSnrMin:
    def test_roundtrip_through_per(self):
        """snr_min is the exact inverse of the PER curve at the bound."""
        for n_p in (100, 976, 4000):
            g = snr_min(QAM16, 48, n_p, QOS)
            assert per_rayleigh(QAM16, 48 + n_p, g) == pytest.approx(
                QOS.per_attempt_bound, rel=1e-9
            )

    def test_packet_doubling_shift(self):
        """Doubling the packet adds ln(2) / (-k_eff ln(1 - bound))."""
        g1 = snr_min(BPSK, 0, 1000, QOS)
        g2 = snr_min(BPSK, 0, 2000, QOS)
        shift = math.log(2.0) / (-BPSK.k_eff * math.log1p(-QOS.per_attempt_bound))
        assert g2 - g1 == pytest.approx(shift, rel=1e-12)


class TestPayloadMax:
    def test_roundtrip_within_one_bit(self):
        """per(payload_max) respects the bound; one more bit violates it."""
        for snr_db in (16, 19, 22):
            g = 10.0 ** (snr_db / 10.0)
            n_max = payload_max(QAM16, 48, g, QOS)
            assert 1 <= n_max < 10 ** 9
            assert per_rayleigh(QAM16, 48 + n_max, g) <= QOS.per_attempt_bound
            assert (
                per_rayleigh(QAM16, 48 + n_max + 1, g) > QOS.per_attempt_bound
            )

    def test_inverse_of_snr_min(self):
        n_p = 976
        g = snr_min(QAM16, 48, n_p, QOS)
        assert payload_max(QAM16, 48, g, QOS) == n_p

    def test_bisection_oracle(self):
        """Brute-force bisection over the packet size finds the same payload."""
        mods = {m.name: m for m in default_modulations()}
        scheme = mods["4QAM"]
        g = 40.0
        lo, hi = 1, 10 ** 7
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if per_rayleigh(scheme, 48 + mid, g) <= QOS.per_attempt_bound:
                lo = mid
            else:
                hi = mid - 1
        assert abs(payload_max(scheme, 48, g, QOS) - lo) <= 1

    def test_header_alone_can_exceed_the_bound(self):
        """Below the header's own SNR floor no payload can be carried."""
        g = 10.0 ** 1.4
        assert payload_max(QAM16, 48, g, QOS) == 0
        assert per_rayleigh(QAM16, 48, g) > QOS.per_attempt_bound

    def test_infeasible_payload_reports_zero(self):
        assert payload_max(QAM16, 48, 1e-6, QOS) == 0

    def test_saturation_for_enormous_snr(self):
        assert payload_max(QAM16, 48, 1e9, QOS) >= 10 ** 12


class TestCodedConstants:
    def test_matches_uncoded_parameterization(self):
        """k = 1/k_eff, b = (ln c_eff + euler)/k_eff reproduces the threshold."""
        k_cap = 1.0 / QAM16.k_eff
        b_cap = (math.log(QAM16.c_eff) + EULER_GAMMA) / QAM16.k_eff
        for n in (120, 1024, 10048):
            assert waterfall_from_coded_constants(k_cap, b_cap, n) == pytest.approx(
                waterfall_threshold(QAM16, n), rel=1e-12
            )

    def test_single_bit_gives_offset(self):
        assert waterfall_from_coded_constants(2.0, 3.5, 1) == pytest.approx(3.5)

    def test_doubling_adds_k_ln2(self):
        a = waterfall_from_coded_constants(2.0, 3.5, 500)
        b = waterfall_from_coded_constants(2.0, 3.5, 1000)
        assert b - a == pytest.approx(2.0 * math.log(2.0), rel=1e-12)

    def test_negative_threshold_rejected(self):
        with pytest.raises(OutOfRegimeError):
            waterfall_from_coded_constants(1.0, -10.0, 2)


class TestQFitSanity:
    def test_fit_tracks_q_function_at_moderate_snr(self):
        """The exponential fit stays within 10% of Q(sqrt(2 g)) at g = 5."""
        g = 5.0
        fitted = 0.2114 * math.exp(-0.5598 * 2.0 * g)
        exact = ber(BPSK, g)
        assert abs(fitted - exact) / exact <= 0.10
