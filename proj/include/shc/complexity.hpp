#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace shc {

enum class CdcScheme { SingleCarrierFdcdc, DscmFdcdc, Proposed };

std::string to_string(CdcScheme s);
CdcScheme parse_cdc_scheme(const std::string& s);

/// Complex multiplication/addition counts for dispersion handling over M
/// symbols.
struct ComplexityReport {
    double multiplications = 0.0;
    double additions = 0.0;
    double per_symbol_mults = 0.0;
    double per_symbol_adds = 0.0;
};

/// Overlap-save FD-CDC: M N (1 + log2 N) / (N - 2 N_OL) multiplications and
/// 2 M N log2 N / (N - 2 N_OL) additions.
ComplexityReport fdcdc_complexity(double m, std::size_t fft_size, std::size_t overlap);

/// Equalizer-absorbed dispersion: four extra taps on each of the four FIRs,
/// run over the odd/even half-rate streams, i.e. 8M multiplications and 8M
/// additions.
ComplexityReport proposed_complexity(double m);

/// Per-edge overlap presets for the 80 km link.
inline constexpr std::size_t kSingleCarrierOverlap = 106;
inline constexpr std::size_t kDscmOverlap = 8;

/// ceil(delay spread in samples) for a band of `bandwidth_hz` at `sample_rate`.
std::size_t overlap_from_channel(double fiber_km, double d_ps_nm_km, double wavelength_nm,
                                 double bandwidth_hz, double sample_rate);

struct ComplexityRow {
    CdcScheme scheme;
    std::size_t fft_size = 0;  // 0 for the N-independent proposed scheme
    std::size_t overlap = 0;
    double per_symbol_mults = 0.0;
    double per_symbol_adds = 0.0;
};

struct ComplexityTableOptions {
    std::size_t single_carrier_overlap = kSingleCarrierOverlap;
    std::size_t dscm_overlap = kDscmOverlap;
};

/// One row per (FD-CDC scheme, N) pair plus a single proposed row. Pairs with
/// N <= 2*N_OL are skipped.
std::vector<ComplexityRow> complexity_table(const std::vector<std::size_t>& fft_sizes,
                                            const std::vector<CdcScheme>& schemes,
                                            const ComplexityTableOptions& opt = {});

/// FFT size minimizing per-symbol multiplications over a grid of powers of
/// two in (2*overlap, max_size].
std::size_t best_fft_size(std::size_t overlap, std::size_t max_size);

/// CSV with header scheme,fft_size,overlap,per_symbol_mults,per_symbol_adds.
std::string complexity_csv(const std::vector<ComplexityRow>& rows);

}  // namespace shc
