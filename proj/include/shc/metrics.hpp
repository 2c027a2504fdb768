#pragma once

#include <span>

#include "shc/signal.hpp"

namespace shc {

/// Results with fewer errors than this are flagged low-confidence.
inline constexpr std::size_t kLowConfidenceErrors = 100;

/// Pre-FEC BER threshold of hard-decision FEC.
inline constexpr double kHdFecThreshold = 3.8e-3;

struct BerCount {
    std::size_t bits_compared = 0;
    std::size_t bit_errors = 0;
    double ber = 0.0;
    bool low_confidence = true;
};

struct BerReport : BerCount {
    std::vector<BerCount> per_subcarrier;
};

BerReport count_ber(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits);

/// Pools per-subcarrier counts into one report that keeps the breakdown.
BerReport combine_ber(std::span<const BerReport> parts);

/// Gray-coded M-QAM bit error ratio at the given symbol SNR (Es/N0, dB).
/// Square orders use the exact per-axis expression; 32QAM uses the
/// nearest-neighbour union bound over the library's cross labeling.
double theory_ber_qam(int order, double snr_per_symbol_db);

/// Q^2 = 20 log10(sqrt(2) erfcinv(2 ber)); ber must lie in (0, 0.5).
double q_factor_db(double ber);
/// Inverse of q_factor_db.
double ber_from_q_factor_db(double q_db);

/// 10 log10(mean|rx - ref|^2 / mean|ref|^2), floored at -100 dB.
double evm_db(std::span<const Complex> rx, std::span<const Complex> ref);

/// Q^2 implied by a data-aided EVM: SNR = 1/EVM^2 fed through theory_ber_qam.
/// Returns +inf when the implied BER underflows.
double q_factor_from_evm_db(double evm, int order);

/// OSNR implied by a clean/noisy pair: signal power over the noise power
/// rescaled to the 12.5 GHz reference band.
double measure_osnr_db(const DualPolWaveform& clean, const DualPolWaveform& noisy);

/// SNR per symbol of one detected stream: OSNR + 10 log10(12.5 GHz / symbol_rate).
double osnr_to_snr_db(double osnr_db, double symbol_rate);

}  // namespace shc
