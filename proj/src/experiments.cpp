#include "shc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "shc/frontend.hpp"

namespace shc {

// ---------------------------------------------------------------------------
// Shared plumbing

void ExperimentConfig::validate() const {
    static const char* kKnown[] = {"pol-sweep", "osnr-sweep", "tap-sweep", "cdc-complexity", "loopback"};
    if (std::find(std::begin(kKnown), std::end(kKnown), experiment) == std::end(kKnown))
        throw ParameterError("unknown experiment '" + experiment + "'");
    if (experiment == "cdc-complexity") return;
    (void)Constellation::qam(modulation);
    SubcarrierPlan::make(n_sc, total_baud, beta);
    channel.validate();
    eq.validate();
    if (cdc_enabled) {
        CdcConfig c;
        c.fft_size = cdc_fft_size;
        c.overlap = cdc_overlap;
        c.validate();
    }
    if (symbols_per_point < 2 * eq.n_train + 2)
        throw ConfigurationError("symbols_per_point must exceed the training length");
    if (experiment == "pol-sweep") {
        const double cells = 180.0 / pol_step_deg;
        if (!(pol_step_deg > 0.0) || std::abs(cells - std::round(cells)) > 1e-9)
            throw ConfigurationError("pol step must divide 180 degrees");
    }
    if (experiment == "osnr-sweep") {
        if (osnr_list.empty() && !osnr_include_noiseless)
            throw ConfigurationError("osnr-sweep needs a non-empty OSNR list");
        if (!std::is_sorted(osnr_list.begin(), osnr_list.end()))
            throw ConfigurationError("OSNR list must be ascending");
    }
    if (experiment == "tap-sweep") {
        if (tap_list.empty()) throw ConfigurationError("tap-sweep needs a non-empty tap list");
        if (!std::is_sorted(tap_list.begin(), tap_list.end()))
            throw ConfigurationError("tap list must be ascending");
        for (int t : tap_list)
            if (t < 1 || t % 2 == 0) throw ConfigurationError("tap list entries must be odd");
    }
}

std::uint64_t point_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t x = base * 0x9e3779b97f4a7c15ull + index + 0x632be59bd9b4e019ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

unsigned worker_count() {
    if (const char* env = std::getenv("SHC_SIM_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& job) {
    workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(failure_mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string fmt_ber(double v) { return fmt("%.6e", v); }

RxOptions rx_options(const ExperimentConfig& cfg, const ChannelConfig& ch, bool cdc,
                     std::size_t fft_size) {
    RxOptions opt;
    opt.eq = cfg.eq;
    opt.rrc_span = cfg.rrc_span;
    opt.coding = cfg.coding;
    if (cdc) {
        CdcConfig c;
        c.fft_size = fft_size;
        c.overlap = cfg.cdc_overlap;
        c.fiber_km = ch.fiber_km;
        c.dispersion_ps_nm_km = ch.dispersion_ps_nm_km;
        c.wavelength_nm = ch.wavelength_nm;
        opt.cdc = c;
    }
    return opt;
}

ComplexWaveform detect(const ExperimentConfig& cfg, const DscmTx& tx, const ChannelConfig& ch,
                       std::uint64_t seed) {
    const double fs = tx.waveform.sample_rate();
    ComplexWaveform carrier(ComplexVec(tx.waveform.size(), Complex{1.0, 0.0}), fs);
    auto out = apply_channel(tx.waveform, carrier, ch, seed);
    auto det = coherent_detect(out.signal, out.lo);
    return add_receiver_noise(det, cfg.rx_snr_db, point_seed(seed, 0xe1ec));
}

PointResult summarize(const ExperimentConfig& cfg, const std::vector<SubcarrierResult>& subs) {
    PointResult pr;
    std::vector<BerReport> parts;
    double err = 0.0, ref = 0.0;
    for (const auto& s : subs) {
        parts.push_back(count_ber(s.tx_bits, s.rx_bits));
        pr.evm_db_per_sc.push_back(evm_db(s.rx_symbols, s.ref_symbols));
        for (std::size_t i = 0; i < s.rx_symbols.size(); ++i) {
            err += std::norm(s.rx_symbols[i] - s.ref_symbols[i]);
            ref += std::norm(s.ref_symbols[i]);
        }
        if (!s.sync_ok) ++pr.sync_failures;
    }
    pr.ber = combine_ber(parts);
    pr.evm_db = err > 0.0 ? std::max(-100.0, 10.0 * std::log10(err / ref)) : -100.0;
    if (cfg.q2_estimator == Q2Estimator::Evm) {
        const double q = q_factor_from_evm_db(pr.evm_db, cfg.modulation);
        if (std::isfinite(q)) pr.q2_db = q;
    } else if (pr.ber.ber > 0.0 && pr.ber.ber < 0.5) {
        pr.q2_db = q_factor_db(pr.ber.ber);
    }
    return pr;
}

PointResult failed_point(const std::string& what) {
    PointResult pr;
    pr.error = what;
    return pr;
}

}  // namespace

DscmTx make_transmitter(const ExperimentConfig& cfg, std::uint64_t seed) {
    const auto plan = SubcarrierPlan::make(cfg.n_sc, cfg.total_baud, cfg.beta);
    const auto c = Constellation::qam(cfg.modulation);
    const std::size_t data = frame_data_symbols(plan, cfg.symbols_per_point, cfg.preamble_symbols);
    const auto k = static_cast<std::size_t>(c.bits_per_symbol());
    Bits bits;
    bits.reserve(data * k * static_cast<std::size_t>(cfg.n_sc));
    for (int s = 0; s < cfg.n_sc; ++s) {
        auto b = prbs(data * k, point_seed(seed, 1000u + static_cast<unsigned>(s)));
        bits.insert(bits.end(), b.begin(), b.end());
    }
    TxOptions opt;
    opt.preamble_symbols = cfg.preamble_symbols;
    opt.rrc_span = cfg.rrc_span;
    opt.coding = cfg.coding;
    return build_dscm_tx(bits, c, plan, cfg.sps_out, opt);
}

PointResult run_point(const ExperimentConfig& cfg, const DscmTx& tx, const ChannelConfig& ch,
                      std::uint64_t seed) {
    const auto c = Constellation::qam(cfg.modulation);
    try {
        const auto det = detect(cfg, tx, ch, seed);
        const auto subs = rx_pipeline(det, tx, c, rx_options(cfg, ch, cfg.cdc_enabled, cfg.cdc_fft_size));
        return summarize(cfg, subs);
    } catch (const DivergenceError& e) {
        return failed_point(e.what());
    }
}

PointResult run_point(const ExperimentConfig& cfg, std::uint64_t seed) {
    const auto tx = make_transmitter(cfg, seed);
    return run_point(cfg, tx, cfg.channel, seed);
}

// ---------------------------------------------------------------------------
// Polarization sweep

std::string run_pol_sweep(const ExperimentConfig& cfg, PolSweepSummary* summary) {
    cfg.validate();
    const auto cells = static_cast<std::size_t>(std::lround(180.0 / cfg.pol_step_deg));
    std::vector<double> angles;
    for (std::size_t i = 0; i <= cells; ++i) angles.push_back(-90.0 + cfg.pol_step_deg * static_cast<double>(i));
    const std::size_t n = angles.size() * angles.size();

    // One transmitter and one channel seed for the whole grid: only the LO
    // polarization differs between points.
    const auto tx = make_transmitter(cfg, cfg.seed);
    const std::uint64_t ch_seed = point_seed(cfg.seed, 1);
    std::vector<PointResult> results(n);
    parallel_for(n, worker_count(), [&](std::size_t i) {
        ChannelConfig ch = cfg.channel;
        ch.azimuth_deg = angles[i / angles.size()];
        ch.elevation_deg = angles[i % angles.size()];
        results[i] = run_point(cfg, tx, ch, ch_seed);
    });

    std::string csv = "azimuth_deg,elevation_deg,ber,q2_db,evm_db,bit_errors,bits_compared,status\n";
    PolSweepSummary sum;
    sum.q2_min = std::numeric_limits<double>::infinity();
    sum.q2_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = results[i];
        const double az = angles[i / angles.size()];
        const double el = angles[i % angles.size()];
        std::string status = "ok";
        if (r.error) status = "diverged";
        else if (r.sync_failures) status = "sync-failure";
        csv += fmt("%.2f", az) + "," + fmt("%.2f", el) + "," + fmt_ber(r.ber.ber) + "," +
               (r.q2_db ? fmt("%.4f", *r.q2_db) : std::string("nan")) + "," + fmt("%.4f", r.evm_db) +
               "," + std::to_string(r.ber.bit_errors) + "," + std::to_string(r.ber.bits_compared) + "," +
               status + "\n";
        ++sum.points;
        if (status != "ok" || !r.q2_db) {
            ++sum.failed_points;
            continue;
        }
        sum.q2_min = std::min(sum.q2_min, *r.q2_db);
        sum.q2_max = std::max(sum.q2_max, *r.q2_db);
    }
    sum.q2_spread = sum.q2_max - sum.q2_min;
    csv += "summary,q2_spread_db," + fmt("%.4f", sum.q2_spread) + ",q2_min_db," + fmt("%.4f", sum.q2_min) +
           ",q2_max_db," + fmt("%.4f", sum.q2_max) + ",failed_points," + std::to_string(sum.failed_points) +
           "\n";
    if (summary) *summary = sum;
    return csv;
}

// ---------------------------------------------------------------------------
// OSNR sweep

std::vector<OsnrRow> osnr_sweep_rows(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<std::optional<double>> points(cfg.osnr_list.begin(), cfg.osnr_list.end());
    if (cfg.osnr_include_noiseless) points.emplace_back(std::nullopt);

    const auto tx = make_transmitter(cfg, cfg.seed);
    std::vector<OsnrRow> rows(points.size());
    parallel_for(points.size(), worker_count(), [&](std::size_t i) {
        ChannelConfig ch = cfg.channel;
        ch.osnr_db = points[i];
        const auto r = run_point(cfg, tx, ch, point_seed(cfg.seed, 100 + i));
        if (r.error) throw DivergenceError(*r.error);
        rows[i].osnr_db = points[i];
        rows[i].ber = r.ber;
        rows[i].theory_ber =
            points[i] ? theory_ber_qam(cfg.modulation, osnr_to_snr_db(*points[i], cfg.total_baud)) : 0.0;
    });
    return rows;
}

std::string osnr_sweep_csv(const ExperimentConfig& cfg, const std::vector<OsnrRow>& rows) {
    std::string csv = "osnr_db,ber_avg";
    for (int s = 1; s <= cfg.n_sc; ++s) csv += ",ber_sc" + std::to_string(s);
    csv += ",theory_ber,bit_errors,bits_compared,low_confidence\n";
    for (const auto& r : rows) {
        csv += r.osnr_db ? fmt("%.2f", *r.osnr_db) : std::string("inf");
        csv += "," + fmt_ber(r.ber.ber);
        for (const auto& s : r.ber.per_subcarrier) csv += "," + fmt_ber(s.ber);
        csv += "," + fmt_ber(r.theory_ber) + "," + std::to_string(r.ber.bit_errors) + "," +
               std::to_string(r.ber.bits_compared) + "," + (r.ber.low_confidence ? "1" : "0") + "\n";
    }
    return csv;
}

std::string run_osnr_sweep(const ExperimentConfig& cfg) { return osnr_sweep_csv(cfg, osnr_sweep_rows(cfg)); }

std::optional<double> threshold_crossing(const std::vector<double>& osnr_db, const std::vector<double>& ber,
                                         double threshold) {
    for (std::size_t i = 0; i + 1 < ber.size(); ++i) {
        if (ber[i] >= threshold && ber[i + 1] < threshold) {
            const double l0 = std::log10(ber[i]);
            const double l1 = std::log10(std::max(ber[i + 1], 1e-300));
            const double lt = std::log10(threshold);
            return osnr_db[i] + (osnr_db[i + 1] - osnr_db[i]) * (l0 - lt) / (l0 - l1);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Tap sweep

std::optional<int> tap_knee(const std::vector<int>& taps, const std::vector<double>& ber) {
    if (ber.empty()) return std::nullopt;
    const double floor = *std::min_element(ber.begin(), ber.end());
    for (std::size_t i = 0; i < ber.size(); ++i)
        if (ber[i] <= 1.1 * floor) return taps[i];
    return std::nullopt;
}

std::vector<TapCurve> tap_sweep_curves(const ExperimentConfig& cfg) {
    cfg.validate();
    struct Spec {
        const char* label;
        int n_sc;
        bool cdc;
    };
    const Spec specs[] = {{"dscm-fdcdc", cfg.n_sc, true},
                          {"dscm-nocdc", cfg.n_sc, false},
                          {"single-carrier-fdcdc", 1, true},
                          {"single-carrier-nocdc", 1, false}};
    const auto c = Constellation::qam(cfg.modulation);

    std::vector<TapCurve> curves;
    for (const auto& sp : specs) {
        TapCurve tc;
        tc.label = sp.label;
        tc.n_sc = sp.n_sc;
        tc.cdc = sp.cdc;
        tc.taps = cfg.tap_list;
        curves.push_back(tc);
    }

    // The received waveform depends only on the subcarrier count; the tap
    // count is a receiver parameter, so each curve reuses one channel draw.
    for (auto& tc : curves) {
        ExperimentConfig sub = cfg;
        sub.n_sc = tc.n_sc;
        const auto tx = make_transmitter(sub, cfg.seed);
        const auto det = detect(sub, tx, cfg.channel, point_seed(cfg.seed, 7));
        const auto front = rx_front(det, tx, rx_options(sub, cfg.channel, tc.cdc, cfg.cdc_fft_size));

        tc.ber.assign(tc.taps.size(), 0.5);
        tc.errors.assign(tc.taps.size(), 0);
        parallel_for(tc.taps.size(), worker_count(), [&](std::size_t i) {
            auto opt = rx_options(sub, cfg.channel, tc.cdc, cfg.cdc_fft_size);
            opt.eq.n_taps = tc.taps[i];
            std::vector<BerReport> parts;
            try {
                for (std::size_t s = 0; s < front.size(); ++s) {
                    const auto r = rx_back(front[s], tx, s, c, opt);
                    parts.push_back(count_ber(r.tx_bits, r.rx_bits));
                }
            } catch (const DivergenceError&) {
                return;  // recorded as a BER plateau of 0.5
            }
            const auto total = combine_ber(parts);
            tc.ber[i] = total.ber;
            tc.errors[i] = total.bit_errors;
        });
        tc.floor = *std::min_element(tc.ber.begin(), tc.ber.end());
        tc.knee = tap_knee(tc.taps, tc.ber);
    }
    return curves;
}

std::string tap_sweep_csv(const std::vector<TapCurve>& curves) {
    std::string csv = "curve,n_taps,ber,bit_errors,is_knee\n";
    for (const auto& tc : curves) {
        for (std::size_t i = 0; i < tc.taps.size(); ++i) {
            const bool knee = tc.knee && *tc.knee == tc.taps[i];
            csv += tc.label + "," + std::to_string(tc.taps[i]) + "," + fmt_ber(tc.ber[i]) + "," +
                   std::to_string(tc.errors[i]) + "," + (knee ? "1" : "0") + "\n";
        }
    }
    return csv;
}

std::string run_tap_sweep(const ExperimentConfig& cfg) { return tap_sweep_csv(tap_sweep_curves(cfg)); }

// ---------------------------------------------------------------------------
// Complexity table and loopback

std::string run_cdc_complexity(const ExperimentConfig& cfg) {
    cfg.validate();
    ComplexityTableOptions opt;
    if (cfg.overlap_preset == "channel") {
        const double fiber = cfg.channel.fiber_km;
        const double d = cfg.channel.dispersion_ps_nm_km;
        const double wl = cfg.channel.wavelength_nm;
        // Both schemes run the equalizer input at 2 samples per symbol.
        const double sc_bw = (1.0 + cfg.beta) * cfg.total_baud;
        opt.single_carrier_overlap = overlap_from_channel(fiber, d, wl, sc_bw, 2.0 * cfg.total_baud);
        const double sub_baud = cfg.total_baud / cfg.n_sc;
        opt.dscm_overlap = overlap_from_channel(fiber, d, wl, (1.0 + cfg.beta) * sub_baud, 2.0 * sub_baud);
    } else if (cfg.overlap_preset != "fixed") {
        throw ParameterError("overlap preset must be 'fixed' or 'channel'");
    }
    return complexity_csv(complexity_table(cfg.cdc_fft_sizes, cfg.cdc_schemes, opt));
}

std::string run_loopback(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto r = run_point(cfg, cfg.seed);
    if (r.error) throw DivergenceError(*r.error);
    std::string csv = "subcarrier,ber,bit_errors,bits_compared,evm_db\n";
    for (std::size_t s = 0; s < r.ber.per_subcarrier.size(); ++s) {
        const auto& b = r.ber.per_subcarrier[s];
        csv += "sc" + std::to_string(s + 1) + "," + fmt_ber(b.ber) + "," + std::to_string(b.bit_errors) + "," +
               std::to_string(b.bits_compared) + "," + fmt("%.4f", r.evm_db_per_sc[s]) + "\n";
    }
    csv += "all," + fmt_ber(r.ber.ber) + "," + std::to_string(r.ber.bit_errors) + "," +
           std::to_string(r.ber.bits_compared) + "," + fmt("%.4f", r.evm_db) + "\n";
    return csv;
}

std::string run_experiment(const ExperimentConfig& cfg) {
    if (cfg.experiment == "pol-sweep") return run_pol_sweep(cfg);
    if (cfg.experiment == "osnr-sweep") return run_osnr_sweep(cfg);
    if (cfg.experiment == "tap-sweep") return run_tap_sweep(cfg);
    if (cfg.experiment == "cdc-complexity") return run_cdc_complexity(cfg);
    if (cfg.experiment == "loopback") return run_loopback(cfg);
    throw ParameterError("unknown experiment '" + cfg.experiment + "'");
}

}  // namespace shc
