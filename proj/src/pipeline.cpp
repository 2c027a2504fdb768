#include <algorithm>
#include <cmath>

#include "shc/rx.hpp"

namespace shc {

namespace {

constexpr int kSps = 2;

ComplexWaveform normalize_power(const ComplexWaveform& w) {
    const double p = w.mean_power();
    if (!(p > 0.0)) return w;
    ComplexVec v = w.samples();
    const double g = 1.0 / std::sqrt(p);
    for (auto& s : v) s *= g;
    return ComplexWaveform(std::move(v), w.sample_rate());
}

}  // namespace

std::vector<PreparedSubcarrier> rx_front(const ComplexWaveform& detected, const DscmTx& tx,
                                         const RxOptions& opt) {
    const auto& plan = tx.plan;
    const auto orth = gsop(detected);
    auto subcarriers = subcarrier_demux(orth, plan, kSps);
    const auto mf = rrc_taps(plan.beta, kSps, opt.rrc_span);

    std::vector<PreparedSubcarrier> out(subcarriers.size());
    for (std::size_t s = 0; s < subcarriers.size(); ++s) {
        ComplexWaveform w(circular_filter(subcarriers[s].samples(), mf), subcarriers[s].sample_rate());
        if (opt.cdc) {
            CdcConfig cdc = *opt.cdc;
            cdc.center_hz = plan.centers[s];
            if (cdc.overlap == 0) {
                // The truncated chirp rings past its group-delay edge; twice the
                // edge keeps block-boundary aliasing under the noise floor.
                cdc.overlap = 2 * cdc_overlap_for(cdc.fiber_km, cdc.dispersion_ps_nm_km, cdc.wavelength_nm,
                                              cdc.center_hz, (1.0 + plan.beta) * plan.sc_baud(),
                                              w.sample_rate());
            }
            w = fd_cdc(w, cdc);
        }
        w = normalize_power(w);

        const auto& pre = tx.preambles[s];
        try {
            auto sync = synchronize(w, pre.ex, pre.ey, kSps);
            out[s].sync_offset = sync.offset;
            out[s].aligned = std::move(sync.aligned);
        } catch (const SyncError&) {
            out[s].sync_ok = false;
            out[s].aligned = std::move(w);
        }
    }
    return out;
}

SubcarrierResult rx_back(const PreparedSubcarrier& prepared, const DscmTx& tx, std::size_t sc,
                         const Constellation& c, const RxOptions& opt) {
    SubcarrierResult res;
    res.sync_ok = prepared.sync_ok;
    res.sync_offset = prepared.sync_offset;

    const auto& ref = tx.sc_symbols[sc];
    const auto& rx = prepared.aligned.samples();
    const EqualizerResult eq = opt.coding == TxCoding::Alamouti
                                   ? alamouti_equalize(rx, kSps, opt.eq, ref, c)
                                   : single_pol_equalize(rx, kSps, opt.eq, ref, c);
    res.error_trace = eq.error_trace;

    const auto k = static_cast<std::size_t>(c.bits_per_symbol());
    const std::size_t n_sym = ref.size();
    const auto pre_len = static_cast<std::size_t>(tx.preamble_symbols);
    const std::size_t start = std::max(pre_len, 2 * opt.eq.n_train);
    if (start >= n_sym)
        throw ConfigurationError("training covers the whole frame; no symbols left for BER");

    const auto off = static_cast<std::ptrdiff_t>(start);
    res.rx_symbols.assign(eq.symbols.begin() + off, eq.symbols.end());
    res.ref_symbols.assign(ref.begin() + off, ref.end());
    res.rx_bits = qam_demap(res.rx_symbols, c);
    const auto& bits = tx.sc_bits[sc];
    res.tx_bits.assign(bits.begin() + static_cast<std::ptrdiff_t>((start - pre_len) * k), bits.end());
    return res;
}

std::vector<SubcarrierResult> rx_pipeline(const ComplexWaveform& detected, const DscmTx& tx,
                                          const Constellation& c, const RxOptions& opt) {
    const auto prepared = rx_front(detected, tx, opt);
    std::vector<SubcarrierResult> out;
    out.reserve(prepared.size());
    for (std::size_t s = 0; s < prepared.size(); ++s) out.push_back(rx_back(prepared[s], tx, s, c, opt));
    return out;
}

}  // namespace shc
