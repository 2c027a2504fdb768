#include <doctest.h>

#include <cmath>
#include <random>

#include "shc/channel.hpp"
#include "shc/experiments.hpp"
#include "shc/frontend.hpp"
#include "shc/metrics.hpp"
#include "shc/rx.hpp"
#include "shc/tx.hpp"

using namespace shc;

namespace {

DscmTx make_tx(int n_sc, std::size_t want, int m = 16, std::uint64_t seed = 3) {
    const auto c = Constellation::qam(m);
    const auto p = SubcarrierPlan::make(n_sc, 50e9, 0.1);
    const std::size_t data = frame_data_symbols(p, want, 512);
    return build_dscm_tx(prbs(data * n_sc * c.bits_per_symbol(), seed), c, p, 2);
}

}  // namespace

TEST_CASE("gsop removes quadrature skew") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    ComplexVec v(20000);
    for (auto& z : v) {
        const double i = g(rng), q = g(rng);
        // 10 degree skew and 2 dB amplitude imbalance on Q.
        z = {i, 1.26 * (q * std::cos(0.1745) + i * std::sin(0.1745))};
    }
    const auto o = gsop(ComplexWaveform(v, 1.0));
    double pi = 0, pq = 0, c = 0;
    for (const auto& z : o.samples()) {
        pi += z.real() * z.real();
        pq += z.imag() * z.imag();
        c += z.real() * z.imag();
    }
    CHECK(std::abs(c / std::sqrt(pi * pq)) < 1e-12);
    CHECK(pq / pi == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t n = 0; n < v.size(); n += 997) CHECK(o[n].real() == v[n].real());
    CHECK_THROWS_AS(gsop(ComplexWaveform(ComplexVec(8, Complex{0, 1}), 1.0)), ParameterError);
}

TEST_CASE("demux puts each subcarrier's energy on its own output") {
    const auto tx = make_tx(4, 2048);
    const auto subs = subcarrier_demux(tx.waveform.x, tx.plan, 2);
    REQUIRE(subs.size() == 4);
    const auto mf = rrc_taps(0.1, 2, 64);
    for (std::size_t s = 0; s < 4; ++s) {
        CHECK(subs[s].sample_rate() == doctest::Approx(25e9));
        const auto y = circular_filter(subs[s].samples(), mf);
        // Compare against the subcarrier's own X stream up to one common gain.
        const auto enc = alamouti_encode(tx.sc_symbols[s]);
        Complex num{}, den{};
        for (std::size_t k = 0; k < enc.ex.size(); ++k) {
            num += y[2 * k] * std::conj(enc.ex[k]);
            den += std::norm(enc.ex[k]);
        }
        const Complex gain = num / den;
        ComplexVec r(enc.ex.size());
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = y[2 * k] / gain;
        CHECK(evm_db(r, enc.ex) < -40.0);
    }
}

TEST_CASE("fd_cdc undoes fibre dispersion") {
    const auto tx = make_tx(1, 4096);
    const auto d = apply_cd(tx.waveform.x, 80, 17, 1550);
    CdcConfig cfg;
    cfg.fiber_km = 80;
    cfg.fft_size = 1024;
    cfg.overlap = 2 * cdc_overlap_for(80, 17, 1550, 0, 55e9, 100e9);
    const auto r = fd_cdc(d, cfg);
    REQUIRE(r.size() == d.size());
    CHECK(evm_db(r.samples(), tx.waveform.x.samples()) < -30.0);
    CHECK(evm_db(d.samples(), tx.waveform.x.samples()) > -5.0);
}

TEST_CASE("fd_cdc on one demultiplexed subcarrier") {
    const auto tx = make_tx(4, 4096);
    const auto d = apply_cd(tx.waveform.x, 80, 17, 1550);
    const auto ref = subcarrier_demux(tx.waveform.x, tx.plan, 2);
    const auto got = subcarrier_demux(d, tx.plan, 2);
    for (std::size_t s = 0; s < 4; ++s) {
        CdcConfig cfg;
        cfg.fiber_km = 80;
        cfg.fft_size = 256;
        cfg.center_hz = tx.plan.centers[s];
        cfg.overlap = 2 * cdc_overlap_for(80, 17, 1550, cfg.center_hz, 13.75e9, 25e9);
        CHECK(evm_db(fd_cdc(got[s], cfg).samples(), ref[s].samples()) < -30.0);
    }
}

TEST_CASE("cdc overlap follows the group delay spread") {
    // 80 km, 55 GHz at 100 GSa/s: 1.09e-20 s/Hz * 27.5 GHz * 1e11 = 30 samples
    CHECK(cdc_overlap_for(80, 17, 1550, 0, 55e9, 100e9) == 30);
    CHECK(cdc_overlap_for(0, 17, 1550, 0, 55e9, 100e9) == 0);
    CdcConfig bad;
    bad.fft_size = 100;
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
    bad.fft_size = 64;
    bad.overlap = 32;
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
}

TEST_CASE("synchronize finds a circular shift") {
    const auto tx = make_tx(1, 4096);
    const auto subs = subcarrier_demux(tx.waveform.x, tx.plan, 2);
    const auto& w = subs[0].samples();
    const std::size_t shift = 1234;
    ComplexVec rolled(w.size());
    for (std::size_t n = 0; n < w.size(); ++n) rolled[(n + shift) % w.size()] = w[n];
    const auto mf = rrc_taps(0.1, 2, 64);
    const ComplexWaveform in(circular_filter(rolled, mf), subs[0].sample_rate());
    const auto r = synchronize(in, tx.preambles[0].ex, tx.preambles[0].ey, 2);
    CHECK(r.offset == shift);
    CHECK(r.peak > 3 * r.median_sidelobe);
    CHECK(std::abs(r.aligned[0] - in[shift]) == 0.0);

    const ComplexWaveform dark(ComplexVec(w.size()), 25e9);
    CHECK_THROWS_AS(synchronize(dark, tx.preambles[0].ex, tx.preambles[0].ey, 2), SyncError);
}

TEST_CASE("equalizer update with zero error is a bit-stable fixed point") {
    EqualizerConfig cfg;
    cfg.n_taps = 7;
    auto st = EqualizerState::initial(7);
    CHECK(st.w11[3] == Complex{1, 0});
    CHECK(st.w12[3] == Complex{0, 0});
    CHECK(st.p == Complex{1, 0});
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    for (auto* w : {&st.w11, &st.w12, &st.w21, &st.w22})
        for (auto& t : *w) t = {g(rng), g(rng)};
    st.p1 = {0.8, 0.3};
    st.p2 = {0.7, -0.2};
    st.p = (st.p1 + st.p2) / 2.0;
    ComplexVec uo(7), ue(7);
    for (auto& z : uo) z = {g(rng), g(rng)};
    for (auto& z : ue) z = {g(rng), g(rng)};
    for (auto mode : {PhaseUpdate::Verbatim, PhaseUpdate::Symmetric}) {
        cfg.phase_update = mode;
        auto next = st;
        for (int i = 0; i < 100; ++i) next.update(uo, ue, Complex{}, Complex{}, cfg);
        CHECK(next.w11 == st.w11);
        CHECK(next.w12 == st.w12);
        CHECK(next.w21 == st.w21);
        CHECK(next.w22 == st.w22);
        CHECK(next.p1 == st.p1);
        CHECK(next.p2 == st.p2);
        CHECK(next.p == st.p);
    }
}

TEST_CASE("equalizer config validation") {
    EqualizerConfig c;
    c.n_taps = 4;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = {};
    c.mu = 0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = {};
    c.mu_p = 1.5;
    CHECK_THROWS_AS(c.validate(), ParameterError);
}

TEST_CASE("alamouti round trip over a noiseless identity channel") {
    ExperimentConfig cfg;
    cfg.symbols_per_point = 1u << 15;
    cfg.channel.linewidth_hz = 0;
    cfg.channel.osnr_db.reset();
    const auto r = run_point(cfg, 1);
    REQUIRE_FALSE(r.error);
    CHECK(r.sync_failures == 0);
    CHECK(r.ber.bits_compared > 100000);
    CHECK(r.ber.bit_errors == 0);
    CHECK(r.evm_db < -30.0);
}

TEST_CASE("alamouti recovers any polarization state without noise") {
    ExperimentConfig cfg;
    cfg.symbols_per_point = 1u << 15;
    cfg.channel.linewidth_hz = 100e3;
    cfg.channel.osnr_db.reset();
    for (auto [a, e] : {std::pair{90.0, 0.0}, {45.0, 30.0}, {-60.0, -90.0}}) {
        cfg.channel.azimuth_deg = a;
        cfg.channel.elevation_deg = e;
        const auto r = run_point(cfg, 2);
        CHECK(r.ber.bit_errors == 0);
    }
}

TEST_CASE("uncoded single-pol receiver fades at azimuth 90") {
    ExperimentConfig cfg;
    cfg.coding = TxCoding::SinglePol;
    cfg.symbols_per_point = 1u << 14;
    cfg.eq.n_train = 2000;
    cfg.channel.osnr_db = 26.0;
    cfg.channel.azimuth_deg = 0;
    CHECK(run_point(cfg, 3).ber.ber < 1e-2);
    cfg.channel.azimuth_deg = 90;
    CHECK(run_point(cfg, 3).ber.ber > 0.4);
}

TEST_CASE("equalizer input checks") {
    const auto c = Constellation::qam(16);
    EqualizerConfig cfg;
    const ComplexVec rx(101), ref(200);
    CHECK_THROWS_AS(alamouti_equalize(rx, 3, cfg, ref, c), ParameterError);
    CHECK_THROWS_AS(alamouti_equalize(ComplexVec(102), 1, cfg, ComplexVec(10), c), InputLengthError);
}
