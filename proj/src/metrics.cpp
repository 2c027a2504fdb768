#include "shc/metrics.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>

#include "shc/channel.hpp"

namespace shc {

namespace {

BerCount make_count(std::size_t bits, std::size_t errors) {
    BerCount c;
    c.bits_compared = bits;
    c.bit_errors = errors;
    c.ber = bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0;
    c.low_confidence = errors < kLowConfidenceErrors;
    return c;
}

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double square_qam_ber(int order, double snr) {
    // Cho & Yoon closed form for Gray-coded square QAM.
    const double root = std::sqrt(static_cast<double>(order));
    const int half_bits = static_cast<int>(std::lround(std::log2(root)));
    const double a = std::sqrt(3.0 * snr / (2.0 * (order - 1)));
    double total = 0.0;
    for (int k = 1; k <= half_bits; ++k) {
        const double pk = std::pow(2.0, k - 1);
        const int i_max = static_cast<int>(std::lround((1.0 - std::pow(2.0, -k)) * root)) - 1;
        double sum = 0.0;
        for (int i = 0; i <= i_max; ++i) {
            const double fl = std::floor(i * pk / root);
            const double sign = static_cast<long long>(fl) % 2 == 0 ? 1.0 : -1.0;
            const double weight = pk - std::floor(i * pk / root + 0.5);
            sum += sign * weight * std::erfc((2.0 * i + 1.0) * a);
        }
        total += sum / root;
    }
    return total / half_bits;
}

double cross_qam_ber(int order, double snr) {
    static const Constellation c = Constellation::qam(32);
    const double dmin = c.min_distance();
    const double sigma = std::sqrt(1.0 / (2.0 * snr));
    const double q = qfunc(dmin / (2.0 * sigma));
    const auto& pts = c.points();
    const auto& labels = c.labels();
    double weight = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (i != j && std::abs(std::abs(pts[i] - pts[j]) - dmin) < 1e-9)
                weight += std::popcount(labels[i] ^ labels[j]);
    return weight * q / (order * static_cast<double>(c.bits_per_symbol()));
}

}  // namespace

BerReport count_ber(std::span<const std::uint8_t> tx_bits, std::span<const std::uint8_t> rx_bits) {
    if (tx_bits.size() != rx_bits.size()) throw InputLengthError("BER inputs differ in length");
    std::size_t errors = 0;
    for (std::size_t i = 0; i < tx_bits.size(); ++i) errors += (tx_bits[i] ^ rx_bits[i]) & 1u;
    BerReport r;
    static_cast<BerCount&>(r) = make_count(tx_bits.size(), errors);
    return r;
}

BerReport combine_ber(std::span<const BerReport> parts) {
    std::size_t bits = 0, errors = 0;
    BerReport r;
    for (const auto& p : parts) {
        bits += p.bits_compared;
        errors += p.bit_errors;
        r.per_subcarrier.push_back(p);
    }
    static_cast<BerCount&>(r) = make_count(bits, errors);
    return r;
}

double theory_ber_qam(int order, double snr_per_symbol_db) {
    const double snr = std::pow(10.0, snr_per_symbol_db / 10.0);
    switch (order) {
        case 4:
        case 16:
        case 64:
            return square_qam_ber(order, snr);
        case 32:
            return cross_qam_ber(order, snr);
        default:
            throw ParameterError("theory BER: unsupported QAM order " + std::to_string(order));
    }
}

double q_factor_db(double ber) {
    if (!(ber > 0.0 && ber < 0.5)) throw DomainError("Q^2 needs 0 < ber < 0.5");
    return 20.0 * std::log10(std::sqrt(2.0) * boost::math::erfc_inv(2.0 * ber));
}

double ber_from_q_factor_db(double q_db) {
    return 0.5 * std::erfc(std::pow(10.0, q_db / 20.0) / std::sqrt(2.0));
}

double evm_db(std::span<const Complex> rx, std::span<const Complex> ref) {
    if (rx.size() != ref.size()) throw InputLengthError("EVM inputs differ in length");
    double err = 0.0, pw = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        err += std::norm(rx[i] - ref[i]);
        pw += std::norm(ref[i]);
    }
    if (!(pw > 0.0)) throw ParameterError("EVM reference has zero power");
    if (err == 0.0) return -100.0;
    return std::max(-100.0, 10.0 * std::log10(err / pw));
}

double q_factor_from_evm_db(double evm, int order) {
    const double ber = theory_ber_qam(order, -evm);
    if (!(ber > std::numeric_limits<double>::min())) return std::numeric_limits<double>::infinity();
    return q_factor_db(ber);
}

double measure_osnr_db(const DualPolWaveform& clean, const DualPolWaveform& noisy) {
    if (clean.size() != noisy.size()) throw InputLengthError("OSNR inputs differ in length");
    double p_sig = clean.x.mean_power() + clean.y.mean_power();
    double p_noise = 0.0;
    for (std::size_t n = 0; n < clean.size(); ++n) {
        p_noise += std::norm(noisy.x[n] - clean.x[n]) + std::norm(noisy.y[n] - clean.y[n]);
    }
    p_noise /= static_cast<double>(clean.size());
    const double in_ref = p_noise * kOsnrReferenceHz / clean.sample_rate();
    return 10.0 * std::log10(p_sig / in_ref);
}

double osnr_to_snr_db(double osnr_db, double symbol_rate) {
    return osnr_db + 10.0 * std::log10(kOsnrReferenceHz / symbol_rate);
}

}  // namespace shc
