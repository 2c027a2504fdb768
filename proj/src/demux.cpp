#include <cmath>

#include "shc/fft.hpp"
#include "shc/rx.hpp"

namespace shc {

namespace {

long long integer_or_throw(double v, const char* what) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-6)
        throw ConfigurationError(std::string(what) + " does not fall on an integer DFT bin");
    return static_cast<long long>(r);
}

}  // namespace

std::vector<ComplexWaveform> subcarrier_demux(const ComplexWaveform& w, const SubcarrierPlan& plan_in,
                                              int sps_out) {
    const SubcarrierPlan plan =
        plan_in.centers.empty() ? SubcarrierPlan::make(plan_in.n_sc, plan_in.total_baud, plan_in.beta)
                                : plan_in;
    if (sps_out < 1) throw ParameterError("sps_out must be >= 1");
    const double fs_in = w.sample_rate();
    const double fs_out = sps_out * plan.sc_baud();
    if (plan.occupied_bandwidth() > fs_in * (1.0 + 1e-9))
        throw ConfigurationError("plan occupies more than the waveform's sample rate");
    const std::size_t n_in = w.size();
    const auto n_out = static_cast<std::size_t>(
        integer_or_throw(static_cast<double>(n_in) * fs_out / fs_in, "output length"));

    const auto spec = fft::forward(w.samples());
    const double edge = 0.5 * (1.0 + plan.beta) * plan.sc_baud() * (1.0 + 1e-9);
    const double scale = static_cast<double>(n_out) / static_cast<double>(n_in);

    std::vector<ComplexWaveform> out;
    out.reserve(plan.centers.size());
    for (double fc : plan.centers) {
        const long long shift =
            integer_or_throw(fc * static_cast<double>(n_in) / fs_in, "subcarrier centre");
        ComplexVec bins(n_out);
        for (std::size_t j = 0; j < n_out; ++j) {
            const double f = fft::bin_frequency(j, n_out, fs_out);
            if (std::abs(f) > edge) continue;
            const long long signed_j = std::llround(f * static_cast<double>(n_out) / fs_out);
            long long src = (shift + signed_j) % static_cast<long long>(n_in);
            if (src < 0) src += static_cast<long long>(n_in);
            bins[j] = spec[static_cast<std::size_t>(src)] * scale;
        }
        fft::inverse_inplace(bins);
        out.emplace_back(std::move(bins), fs_out);
    }
    return out;
}

}  // namespace shc
