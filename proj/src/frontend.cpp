#include "shc/frontend.hpp"

#include <cmath>
#include <random>

namespace shc {

void LoState::validate() const {
    const double n = std::norm(jones[0]) + std::norm(jones[1]);
    if (std::abs(n - 1.0) > 1e-12) throw ParameterError("LO Jones vector must have unit norm");
}

ComplexWaveform coherent_detect(const DualPolWaveform& sig, const LoState& lo) {
    lo.validate();
    if (lo.phase.size() != sig.size())
        throw InputLengthError("LO phase trajectory length differs from the signal");
    const Complex ux = std::conj(lo.jones[0]);
    const Complex uy = std::conj(lo.jones[1]);
    const auto& x = sig.x.samples();
    const auto& y = sig.y.samples();
    ComplexVec out(sig.size());
    for (std::size_t n = 0; n < out.size(); ++n)
        out[n] = (ux * x[n] + uy * y[n]) * std::polar(1.0, lo.phase[n]);
    return ComplexWaveform(std::move(out), sig.sample_rate());
}

ComplexWaveform add_receiver_noise(const ComplexWaveform& w, std::optional<double> snr_db,
                                   std::uint64_t seed) {
    if (!snr_db) return w;
    const double noise_power = w.mean_power() / std::pow(10.0, *snr_db / 10.0);
    const double sigma = std::sqrt(noise_power / 2.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, sigma);
    ComplexVec out = w.samples();
    for (auto& s : out) s += Complex(g(rng), g(rng));
    return ComplexWaveform(std::move(out), w.sample_rate());
}

}  // namespace shc
