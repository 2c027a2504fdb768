#include <doctest.h>

#include <cmath>

#include "shc/frontend.hpp"
#include "shc/metrics.hpp"

using namespace shc;

TEST_CASE("count_ber and combine_ber") {
    const Bits a{0, 1, 1, 0, 1, 0, 0, 1};
    Bits b = a;
    b[2] ^= 1;
    b[7] ^= 1;
    const auto r = count_ber(a, b);
    CHECK(r.bits_compared == 8);
    CHECK(r.bit_errors == 2);
    CHECK(r.ber == doctest::Approx(0.25));
    CHECK(r.low_confidence);
    const std::vector<BerReport> parts{r, count_ber(a, a)};
    const auto all = combine_ber(parts);
    CHECK(all.bits_compared == 16);
    CHECK(all.bit_errors == 2);
    CHECK(all.per_subcarrier.size() == 2);
    CHECK_THROWS_AS(count_ber(a, Bits(3)), InputLengthError);
}

TEST_CASE("theory BER for Gray QAM") {
    // QPSK: Q(sqrt(Es/N0)) per bit.
    const double snr = std::pow(10.0, 1.0);
    CHECK(theory_ber_qam(4, 10.0) == doctest::Approx(0.5 * std::erfc(std::sqrt(snr / 2.0))).epsilon(1e-9));
    // 16QAM: (3Q(a) + 2Q(3a) - Q(5a)) / 4 with a = sqrt(Es/5N0).
    CHECK(theory_ber_qam(16, 15.0) == doctest::Approx(4.4654e-3).epsilon(1e-4));
    CHECK(theory_ber_qam(16, 20.0) == doctest::Approx(2.9041e-6).epsilon(1e-4));
    // Monotone, and ordering by constellation size.
    CHECK(theory_ber_qam(16, 18) < theory_ber_qam(16, 17));
    CHECK(theory_ber_qam(32, 18) > theory_ber_qam(16, 18));
    CHECK(theory_ber_qam(64, 18) > theory_ber_qam(32, 18));
    CHECK_THROWS_AS(theory_ber_qam(8, 10), ParameterError);
}

TEST_CASE("Q factor conversions") {
    CHECK(q_factor_db(1e-3) == doctest::Approx(9.7998).epsilon(1e-4));
    CHECK(q_factor_db(3.8e-3) == doctest::Approx(8.5277).epsilon(1e-4));
    for (double b : {1e-6, 1e-3, 0.1, 0.3}) CHECK(ber_from_q_factor_db(q_factor_db(b)) == doctest::Approx(b));
    CHECK_THROWS_AS(q_factor_db(0.0), DomainError);
    CHECK_THROWS_AS(q_factor_db(0.5), DomainError);
    CHECK(q_factor_from_evm_db(-17.0, 16) == doctest::Approx(q_factor_db(theory_ber_qam(16, 17.0))));
    CHECK(std::isinf(q_factor_from_evm_db(-80.0, 16)));
}

TEST_CASE("EVM") {
    const ComplexVec ref{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    ComplexVec rx = ref;
    CHECK(evm_db(rx, ref) == -100.0);
    for (auto& z : rx) z *= 1.1;
    CHECK(evm_db(rx, ref) == doctest::Approx(-20.0));
    CHECK_THROWS_AS(evm_db(ComplexVec(2), ref), InputLengthError);
}

TEST_CASE("OSNR to SNR") {
    CHECK(osnr_to_snr_db(20.0, 12.5e9) == doctest::Approx(20.0));
    CHECK(osnr_to_snr_db(20.0, 50e9) == doctest::Approx(20.0 - 6.0206).epsilon(1e-4));
}

TEST_CASE("receiver noise and detection") {
    const ComplexWaveform w(ComplexVec(100000, Complex{1, 0}), 1.0);
    CHECK(add_receiver_noise(w, std::nullopt, 1).samples() == w.samples());
    const auto n = add_receiver_noise(w, 10.0, 1);
    double e = 0;
    for (std::size_t i = 0; i < w.size(); ++i) e += std::norm(n[i] - w[i]);
    CHECK(10 * std::log10(w.size() / e) == doctest::Approx(10.0).epsilon(0.01));

    const DualPolWaveform sig(ComplexWaveform(ComplexVec{{1, 0}, {0, 1}}, 1.0),
                              ComplexWaveform(ComplexVec{{2, 0}, {0, 2}}, 1.0));
    LoState lo;
    lo.phase = {0.0, kPi / 2};
    const auto d = coherent_detect(sig, lo);
    CHECK(std::abs(d[0] - Complex{1, 0}) < 1e-15);
    CHECK(std::abs(d[1] - Complex{-1, 0}) < 1e-15);
    lo.jones = {Complex{0, 0}, Complex{1, 0}};
    CHECK(std::abs(coherent_detect(sig, lo)[0] - Complex{2, 0}) < 1e-15);
    lo.jones = {Complex{1, 0}, Complex{1, 0}};
    CHECK_THROWS_AS(coherent_detect(sig, lo), ParameterError);
}
