#include "shc/complexity.hpp"

#include <cmath>
#include <cstdio>

#include "shc/channel.hpp"
#include "shc/types.hpp"

namespace shc {

std::string to_string(CdcScheme s) {
    switch (s) {
        case CdcScheme::SingleCarrierFdcdc:
            return "single-carrier-fdcdc";
        case CdcScheme::DscmFdcdc:
            return "dscm-fdcdc";
        case CdcScheme::Proposed:
            return "proposed";
    }
    return "?";
}

CdcScheme parse_cdc_scheme(const std::string& s) {
    if (s == "single-carrier-fdcdc") return CdcScheme::SingleCarrierFdcdc;
    if (s == "dscm-fdcdc") return CdcScheme::DscmFdcdc;
    if (s == "proposed") return CdcScheme::Proposed;
    throw ParameterError("unknown complexity scheme '" + s + "'");
}

ComplexityReport fdcdc_complexity(double m, std::size_t fft_size, std::size_t overlap) {
    if (!(m > 0.0)) throw ParameterError("data length M must be positive");
    if (fft_size <= 2 * overlap)
        throw ConfigurationError("FFT size must exceed 2*N_OL for the block to advance");
    const double n = static_cast<double>(fft_size);
    const double useful = n - 2.0 * static_cast<double>(overlap);
    const double lg = std::log2(n);
    ComplexityReport r;
    r.multiplications = m * n * (1.0 + lg) / useful;
    r.additions = 2.0 * m * n * lg / useful;
    r.per_symbol_mults = r.multiplications / m;
    r.per_symbol_adds = r.additions / m;
    return r;
}

ComplexityReport proposed_complexity(double m) {
    if (!(m > 0.0)) throw ParameterError("data length M must be positive");
    ComplexityReport r;
    r.multiplications = 8.0 * m;
    r.additions = 8.0 * m;
    r.per_symbol_mults = r.multiplications / m;
    r.per_symbol_adds = r.additions / m;
    return r;
}

std::size_t overlap_from_channel(double fiber_km, double d_ps_nm_km, double wavelength_nm,
                                 double bandwidth_hz, double sample_rate) {
    const double spread =
        std::abs(dispersion_delay_per_hz(fiber_km, d_ps_nm_km, wavelength_nm)) * bandwidth_hz;
    return static_cast<std::size_t>(std::ceil(spread * sample_rate - 1e-9));
}

std::vector<ComplexityRow> complexity_table(const std::vector<std::size_t>& fft_sizes,
                                            const std::vector<CdcScheme>& schemes,
                                            const ComplexityTableOptions& opt) {
    // Per-symbol values are independent of M; any positive length works.
    constexpr double kM = 1.0;
    std::vector<ComplexityRow> rows;
    for (CdcScheme s : schemes) {
        if (s == CdcScheme::Proposed) {
            const auto r = proposed_complexity(kM);
            rows.push_back({s, 0, 0, r.per_symbol_mults, r.per_symbol_adds});
            continue;
        }
        const std::size_t ol =
            s == CdcScheme::SingleCarrierFdcdc ? opt.single_carrier_overlap : opt.dscm_overlap;
        for (std::size_t n : fft_sizes) {
            if (n <= 2 * ol) continue;  // block cannot advance
            const auto r = fdcdc_complexity(kM, n, ol);
            rows.push_back({s, n, ol, r.per_symbol_mults, r.per_symbol_adds});
        }
    }
    return rows;
}

std::size_t best_fft_size(std::size_t overlap, std::size_t max_size) {
    std::size_t best = 0;
    double best_m = INFINITY;
    for (std::size_t n = 2; n <= max_size; n *= 2) {
        if (n <= 2 * overlap) continue;
        const double m = fdcdc_complexity(1.0, n, overlap).per_symbol_mults;
        if (m < best_m) {
            best_m = m;
            best = n;
        }
    }
    if (best == 0) throw ConfigurationError("no FFT size in range exceeds 2*N_OL");
    return best;
}

std::string complexity_csv(const std::vector<ComplexityRow>& rows) {
    std::string out = "scheme,fft_size,overlap,per_symbol_mults,per_symbol_adds\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.6f,%.6f\n", to_string(r.scheme).c_str(),
                      r.fft_size, r.overlap, r.per_symbol_mults, r.per_symbol_adds);
        out += buf;
    }
    return out;
}

}  // namespace shc
