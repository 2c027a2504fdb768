// Acceptance checks. Usage: shc_acceptance [criterion ...]; no argument runs 1-5.
// Prints one "criterion N: PASS|FAIL ..." line per criterion; exit status is
// the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "shc/channel.hpp"
#include "shc/complexity.hpp"
#include "shc/config.hpp"
#include "shc/experiments.hpp"
#include "shc/metrics.hpp"
#include "shc/rx.hpp"

using namespace shc;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [fail]");
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

ExperimentConfig load(const std::string& name, const ConfigMap& extra = {}) {
    auto m = load_config_file(std::string(SHC_CONFIG_DIR) + "/" + name);
    for (const auto& [k, v] : extra) m[k] = v;
    return build_config(m);
}

void note(const std::string& s) { std::printf("  %s\n", s.c_str()); std::fflush(stdout); }

std::optional<double> crossing(const ExperimentConfig& cfg, const std::string& label) {
    const auto rows = osnr_sweep_rows(cfg);
    std::vector<double> o, b;
    for (const auto& r : rows) {
        o.push_back(*r.osnr_db);
        b.push_back(r.ber.ber);
        note(label + " osnr " + fmt("%.1f", *r.osnr_db) + " ber " + fmt("%.3e", r.ber.ber));
    }
    return threshold_crossing(o, b, kHdFecThreshold);
}

std::optional<double> theory_crossing(int m, double baud) {
    std::vector<double> o, b;
    for (double x = 5.0; x <= 45.0; x += 0.01) {
        o.push_back(x);
        b.push_back(theory_ber_qam(m, osnr_to_snr_db(x, baud)));
    }
    return threshold_crossing(o, b, kHdFecThreshold);
}

std::string opt_str(const std::optional<double>& v) { return v ? fmt("%.2f", *v) : std::string("none"); }

// 1. Polarization insensitivity and the uncoded fading contrast.
Verdict criterion1() {
    Verdict v;
    const auto cfg = load("pol_sweep.conf");
    PolSweepSummary s;
    run_pol_sweep(cfg, &s);
    v.check(s.points == 169, std::to_string(s.points) + " grid points");
    v.check(s.failed_points == 0, std::to_string(s.failed_points) + " failed points");
    v.check(s.q2_spread < 0.5, "Q2 spread " + fmt("%.3f", s.q2_spread) + " dB (" + fmt("%.2f", s.q2_min) +
                                   ".." + fmt("%.2f", s.q2_max) + ")");

    auto base = cfg;
    base.coding = TxCoding::SinglePol;
    base.channel.azimuth_deg = 90.0;
    base.channel.elevation_deg = 0.0;
    const auto r = run_point(base, base.seed);
    v.check(r.ber.ber > 0.4, "single-pol BER at azimuth 90 " + fmt("%.3f", r.ber.ber));
    return v;
}

// 2. Back-to-back OSNR curves.
Verdict criterion2() {
    Verdict v;
    const auto c16 = load("osnr_16qam.conf");
    const auto x16 = crossing(c16, "16qam-dscm");
    const auto x16_sc = crossing(load("osnr_16qam.conf", {{"n_sc", "1"}}), "16qam-single");
    const auto x32 = crossing(load("osnr_32qam.conf"), "32qam-dscm");
    const auto th16 = theory_crossing(16, c16.total_baud);
    const auto th32 = theory_crossing(32, c16.total_baud);
    note("theory crossings: 16QAM " + opt_str(th16) + " dB, 32QAM " + opt_str(th32) + " dB");

    v.check(x16 && th16 && std::abs(*x16 - *th16) <= 1.0,
            "16QAM crossing " + opt_str(x16) + " vs theory " + opt_str(th16));
    v.check(x16 && x32 && std::abs(*x32 - *x16 - 9.0) <= 1.5,
            "32QAM-16QAM gap " + (x16 && x32 ? fmt("%.2f", *x32 - *x16) : std::string("none")) +
                " dB (target 9 +- 1.5)");
    v.check(x16 && x16_sc && std::abs(*x16 - *x16_sc) <= 0.3,
            "DSCM vs single-carrier " + opt_str(x16) + " / " + opt_str(x16_sc));
    return v;
}

const TapCurve& curve(const std::vector<TapCurve>& cs, const std::string& label) {
    for (const auto& c : cs)
        if (c.label == label) return c;
    throw ConfigurationError("missing curve " + label);
}

// 3. Dispersion absorbed by the equalizer.
Verdict criterion3() {
    Verdict v;
    for (const char* name : {"taps_16qam.conf", "taps_32qam.conf"}) {
        const auto cfg = load(name);
        const auto cs = tap_sweep_curves(cfg);
        for (const auto& c : cs) {
            std::string line = c.label + " knee " + (c.knee ? std::to_string(*c.knee) : "none") + " ber:";
            for (std::size_t i = 0; i < c.taps.size(); ++i)
                line += " " + std::to_string(c.taps[i]) + "=" + fmt("%.2e", c.ber[i]);
            note(std::to_string(cfg.modulation) + "QAM " + line);
        }
        const auto& on = curve(cs, "dscm-fdcdc");
        const auto& off = curve(cs, "dscm-nocdc");
        const std::string m = std::to_string(cfg.modulation) + "QAM";
        if (on.knee && off.knee) {
            const int d = *off.knee - *on.knee;
            v.check(std::abs(d - 4) <= 2, m + " knee difference " + std::to_string(d) + " (" +
                                              std::to_string(*off.knee) + " - " + std::to_string(*on.knee) + ")");
        } else {
            v.check(false, m + " knee missing");
        }
        const auto& sc_on = curve(cs, "single-carrier-fdcdc");
        const auto& sc_off = curve(cs, "single-carrier-nocdc");
        double best_off = 1.0;
        for (double b : sc_off.ber) best_off = std::min(best_off, b);
        v.check(best_off > 10.0 * sc_on.floor,
                m + " single-carrier no-CDC best " + fmt("%.2e", best_off) + " vs 10x FD-CDC floor " +
                    fmt("%.2e", 10.0 * sc_on.floor) + " (taps to " + std::to_string(sc_off.taps.back()) + ")");
    }

    // FD-CDC block size must not matter.
    auto cfg = load("taps_16qam.conf");
    cfg.cdc_enabled = true;
    cfg.eq.n_taps = 9;
    const auto tx = make_transmitter(cfg, cfg.seed);
    std::vector<std::size_t> errs;
    std::size_t bits = 0;
    std::string line = "FD-CDC errors by N:";
    for (std::size_t n : {64u, 128u, 256u}) {
        cfg.cdc_fft_size = n;
        const auto r = run_point(cfg, tx, cfg.channel, point_seed(cfg.seed, 7));
        errs.push_back(r.ber.bit_errors);
        bits = r.ber.bits_compared;
        line += " " + std::to_string(n) + "=" + std::to_string(r.ber.bit_errors);
    }
    bool same = true;
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double a = static_cast<double>(errs[0]), b = static_cast<double>(errs[i]);
        // Two-sample Poisson bound at 3 sigma.
        same = same && std::abs(a - b) <= 3.0 * std::sqrt(std::max(a + b, 1.0));
    }
    v.check(same, line + " of " + std::to_string(bits));
    return v;
}

// 4. Complexity table.
Verdict criterion4() {
    Verdict v;
    const auto cfg = load("complexity.conf");
    const double m512 = fdcdc_complexity(1, 512, 106).per_symbol_mults;
    const double m64 = fdcdc_complexity(1, 64, 8).per_symbol_mults;
    v.check(std::abs(m512 - 512.0 * 10 / 300) < 1e-12 && std::abs(m512 - 17.07) < 0.005,
            "N=512 N_OL=106 " + fmt("%.4f", m512));
    v.check(std::abs(m64 - 64.0 * 7 / 48) < 1e-12 && std::abs(m64 - 9.33) < 0.005, "N=64 N_OL=8 " + fmt("%.4f", m64));
    const auto p = proposed_complexity(1e6);
    v.check(p.multiplications == 8e6 && p.per_symbol_mults == 8.0, "proposed 8M multiplications");

    const auto rows = complexity_table(cfg.cdc_fft_sizes, cfg.cdc_schemes);
    bool order = true;
    std::size_t compared = 0;
    for (std::size_t n : cfg.cdc_fft_sizes) {
        std::optional<double> sc, ds;
        for (const auto& r : rows) {
            if (r.fft_size != n) continue;
            (r.scheme == CdcScheme::SingleCarrierFdcdc ? sc : ds) = r.per_symbol_mults;
        }
        if (ds) order = order && 8.0 < *ds;
        if (sc && ds) {
            order = order && *ds < *sc;
            ++compared;
        }
    }
    v.check(order, "ordering proposed < DSCM < single-carrier at " + std::to_string(compared) + " shared N");
    return v;
}

// 5. Unit and property spot checks (the full suite runs as its own test).
Verdict criterion5() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();

    ExperimentConfig id;
    id.symbols_per_point = 1u << 15;
    id.channel.linewidth_hz = 0;
    id.channel.osnr_db.reset();
    const auto rt = run_point(id, 1);
    v.check(rt.ber.bit_errors == 0 && rt.ber.bits_compared > 0,
            "Alamouti round trip errors " + std::to_string(rt.ber.bit_errors));

    const auto tx = make_transmitter(id, 2);
    const auto d = apply_cd(tx.waveform.x, 80, 17, 1550);
    CdcConfig cdc;
    cdc.fiber_km = 80;
    cdc.fft_size = 1024;
    cdc.overlap = 2 * cdc_overlap_for(80, 17, 1550, 0, tx.plan.occupied_bandwidth(), tx.waveform.sample_rate());
    const double evm = evm_db(fd_cdc(d, cdc).samples(), tx.waveform.x.samples());
    v.check(evm < -30.0, "CD+FD-CDC residual EVM " + fmt("%.1f", evm) + " dB");

    double worst = 0;
    for (double a = -90; a <= 90; a += 5)
        for (double e = -90; e <= 90; e += 5) {
            const auto r = rotation_matrix(a, e);
            const auto u = r * r.adjoint();
            worst = std::max({worst, std::abs(u.xx - 1.0), std::abs(u.yy - 1.0), std::abs(u.xy), std::abs(u.yx)});
        }
    v.check(worst < 1e-12, "rotation unitarity error " + fmt("%.1e", worst));

    EqualizerConfig ec;
    auto st = EqualizerState::initial(ec.n_taps);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (auto* w : {&st.w11, &st.w12, &st.w21, &st.w22})
        for (auto& t : *w) t = {g(rng), g(rng)};
    st.p1 = {0.9, 0.2};
    st.p2 = {0.6, -0.1};
    st.p = (st.p1 + st.p2) / 2.0;
    ComplexVec uo(ec.n_taps), ue(ec.n_taps);
    for (auto& z : uo) z = {g(rng), g(rng)};
    for (auto& z : ue) z = {g(rng), g(rng)};
    auto next = st;
    for (int i = 0; i < 1000; ++i) next.update(uo, ue, Complex{}, Complex{}, ec);
    const bool fixed = next.w11 == st.w11 && next.w12 == st.w12 && next.w21 == st.w21 && next.w22 == st.w22 &&
                       next.p1 == st.p1 && next.p2 == st.p2 && next.p == st.p;
    v.check(fixed, "zero-error update is bit-stable");

    double osnr_err = 0;
    for (double o = 15; o <= 40; o += 1)
        osnr_err = std::max(osnr_err, std::abs(measure_osnr_db(tx.waveform, load_osnr(tx.waveform, o, 10 + static_cast<std::uint64_t>(o))) - o));
    v.check(osnr_err < 0.2, "OSNR calibration error " + fmt("%.3f", osnr_err) + " dB over 15-40");

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.check(secs < 300, "elapsed " + fmt("%.1f", secs) + " s");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Verdict()>> all{criterion1, criterion2, criterion3, criterion4, criterion5};
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    if (which.empty()) which = {1, 2, 3, 4, 5};

    int failed = 0;
    for (int n : which) {
        if (n < 1 || n > static_cast<int>(all.size())) {
            std::fprintf(stderr, "unknown criterion %d\n", n);
            return 64;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = all[static_cast<std::size_t>(n - 1)]();
        } catch (const std::exception& e) {
            v.check(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %d: %s (%s) [%.0f s]\n", n, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !v.pass;
    }
    return failed;
}
