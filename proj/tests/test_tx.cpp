#include <doctest.h>

#include <cmath>

#include "shc/fft.hpp"
#include "shc/tx.hpp"

using namespace shc;

TEST_CASE("prbs is deterministic and balanced") {
    const auto a = prbs(100000, 42);
    CHECK(a == prbs(100000, 42));
    CHECK(a != prbs(100000, 43));
    std::size_t ones = 0;
    for (auto b : a) ones += b;
    CHECK(std::abs(static_cast<double>(ones) / a.size() - 0.5) < 0.01);
    // Seed 0 must still give a non-degenerate register.
    const auto z = prbs(64, 0);
    std::size_t zo = 0;
    for (auto b : z) zo += b;
    CHECK(zo > 0);
}

TEST_CASE("alamouti encoding follows the block rule") {
    const ComplexVec s{{1, 2}, {3, -1}, {-2, 0.5}, {0, -3}};
    const auto f = alamouti_encode(s);
    REQUIRE(f.ex.size() == 4);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(f.ex[2 * k] == s[2 * k]);
        CHECK(f.ex[2 * k + 1] == -std::conj(s[2 * k + 1]));
        CHECK(f.ey[2 * k] == s[2 * k + 1]);
        CHECK(f.ey[2 * k + 1] == std::conj(s[2 * k]));
    }
    CHECK_THROWS_AS(alamouti_encode(ComplexVec(3)), InputLengthError);
}

TEST_CASE("alamouti block is orthogonal across polarizations") {
    // Each block matrix [ex; ey] has orthogonal rows.
    const ComplexVec s{{0.3, -0.7}, {1.1, 0.2}};
    const auto f = alamouti_encode(s);
    const Complex cross = f.ex[0] * std::conj(f.ey[0]) + f.ex[1] * std::conj(f.ey[1]);
    CHECK(std::abs(cross) < 1e-15);
}

TEST_CASE("subcarrier plan is contiguous and centred") {
    const auto p = SubcarrierPlan::make(4, 50e9, 0.1);
    REQUIRE(p.centers.size() == 4);
    CHECK(p.centers[0] == doctest::Approx(-20.625e9));
    CHECK(p.centers[1] == doctest::Approx(-6.875e9));
    CHECK(p.centers[2] == doctest::Approx(6.875e9));
    CHECK(p.centers[3] == doctest::Approx(20.625e9));
    CHECK(p.sc_baud() == doctest::Approx(12.5e9));
    CHECK(p.occupied_bandwidth() == doctest::Approx(55e9));
    const auto one = SubcarrierPlan::make(1, 50e9, 0.1);
    CHECK(one.centers.at(0) == 0.0);
    CHECK_THROWS_AS(SubcarrierPlan::make(0, 50e9, 0.1), ParameterError);
}

TEST_CASE("frame lengths respect the DFT-bin multiple") {
    const auto p = SubcarrierPlan::make(4, 50e9, 0.1);
    const auto m = frame_symbol_multiple(p);
    CHECK(m > 0);
    const auto d = frame_data_symbols(p, 1000, 512);
    CHECK(d >= 1000);
    CHECK((d + 512) % m == 0);
}

TEST_CASE("dscm transmitter: unit power, spectra in place") {
    const auto c = Constellation::qam(16);
    const auto p = SubcarrierPlan::make(4, 50e9, 0.1);
    const std::size_t data = frame_data_symbols(p, 2048, 512);
    const auto bits = prbs(4 * data * 4, 7);
    const auto tx = build_dscm_tx(bits, c, p, 2);
    CHECK(tx.waveform.sample_rate() == doctest::Approx(100e9));
    CHECK(tx.waveform.size() == (data + 512) * 2 * 4);
    CHECK(tx.waveform.x.mean_power() == doctest::Approx(1.0));
    CHECK(tx.waveform.y.mean_power() == doctest::Approx(1.0));
    REQUIRE(tx.sc_bits.size() == 4);
    CHECK(tx.sc_bits[0].size() == data * 4);
    CHECK(tx.sc_symbols[0].size() == data + 512);

    // Occupied band is +-27.5 GHz.
    const auto spec = fft::forward(tx.waveform.x.samples());
    double in = 0, out = 0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double f = std::abs(fft::bin_frequency(k, spec.size(), 100e9));
        (f > 27.6e9 ? out : in) += std::norm(spec[k]);
    }
    // Only truncated-RRC sidelobes leak out: below -60 dB.
    CHECK(out < 1e-6 * in);
}

TEST_CASE("single-pol coding leaves Y dark") {
    const auto c = Constellation::qam(16);
    const auto p = SubcarrierPlan::make(1, 50e9, 0.1);
    const std::size_t data = frame_data_symbols(p, 1024, 512);
    TxOptions o;
    o.coding = TxCoding::SinglePol;
    const auto tx = build_dscm_tx(prbs(4 * data, 1), c, p, 2, o);
    CHECK(tx.waveform.y.energy() == 0.0);
    CHECK(tx.waveform.x.mean_power() == doctest::Approx(1.0));
}
