#include <algorithm>
#include <cmath>

#include "shc/fft.hpp"
#include "shc/rx.hpp"

namespace shc {

namespace {

// Circular cross-correlation c[k] = sum_m r[m + k] conj(t[m]) for a template
// carrying `ref` at symbol spacing.
ComplexVec correlate(const ComplexVec& r_spec, std::span<const Complex> ref, std::size_t len,
                     int sps) {
    ComplexVec t(len);
    for (std::size_t i = 0; i < ref.size(); ++i) t[i * static_cast<std::size_t>(sps)] = ref[i];
    fft::forward_inplace(t);
    for (std::size_t k = 0; k < len; ++k) t[k] = r_spec[k] * std::conj(t[k]);
    fft::inverse_inplace(t);
    return t;
}

}  // namespace

SyncResult synchronize(const ComplexWaveform& w, std::span<const Complex> ref_x,
                       std::span<const Complex> ref_y, int sps) {
    if (ref_x.size() < 256) throw ParameterError("sync reference must hold >= 256 symbols");
    if (sps < 1) throw ParameterError("sps must be >= 1");
    const std::size_t len = w.size();
    if (ref_x.size() * static_cast<std::size_t>(sps) > len)
        throw InputLengthError("sync reference is longer than the waveform");

    const auto r_spec = fft::forward(w.samples());
    const auto cx = correlate(r_spec, ref_x, len, sps);
    std::vector<double> metric(len);
    if (!ref_y.empty()) {
        const auto cy = correlate(r_spec, ref_y, len, sps);
        for (std::size_t k = 0; k < len; ++k) metric[k] = std::sqrt(std::norm(cx[k]) + std::norm(cy[k]));
    } else {
        for (std::size_t k = 0; k < len; ++k) metric[k] = std::abs(cx[k]);
    }

    const auto peak_it = std::max_element(metric.begin(), metric.end());
    SyncResult res;
    res.offset = static_cast<std::size_t>(peak_it - metric.begin());
    res.peak = *peak_it;
    std::vector<double> side;
    side.reserve(len);
    for (std::size_t k = 0; k < len; ++k)
        if (k != res.offset) side.push_back(metric[k]);
    auto mid = side.begin() + static_cast<std::ptrdiff_t>(side.size() / 2);
    std::nth_element(side.begin(), mid, side.end());
    res.median_sidelobe = side.empty() ? 0.0 : *mid;
    if (!(res.peak >= 3.0 * res.median_sidelobe) || res.peak == 0.0)
        throw SyncError("correlation peak " + std::to_string(res.peak) + " below 3x median sidelobe " +
                        std::to_string(res.median_sidelobe));

    const auto& x = w.samples();
    ComplexVec aligned(len);
    for (std::size_t m = 0; m < len; ++m) aligned[m] = x[(m + res.offset) % len];
    res.aligned = ComplexWaveform(std::move(aligned), w.sample_rate());
    return res;
}

}  // namespace shc
