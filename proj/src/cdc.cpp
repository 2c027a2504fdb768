#include <cmath>

#include "shc/channel.hpp"
#include "shc/fft.hpp"
#include "shc/rx.hpp"

namespace shc {

void CdcConfig::validate() const {
    if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0)
        throw ConfigurationError("CDC FFT size must be a power of two");
    if (fft_size <= 2 * overlap)
        throw ConfigurationError("CDC FFT size must exceed twice the overlap");
}

std::size_t cdc_overlap_for(double fiber_km, double d_ps_nm_km, double wavelength_nm,
                            double center_hz, double bandwidth_hz, double sample_rate) {
    const double k = dispersion_delay_per_hz(fiber_km, d_ps_nm_km, wavelength_nm);
    const double max_delay = std::abs(k) * (std::abs(center_hz) + 0.5 * bandwidth_hz);
    return static_cast<std::size_t>(std::ceil(max_delay * sample_rate - 1e-9));
}

ComplexWaveform fd_cdc(const ComplexWaveform& w, const CdcConfig& cfg) {
    cfg.validate();
    if (cfg.fiber_km == 0.0 || w.empty()) return w;

    const std::size_t n = cfg.fft_size;
    const std::size_t ol = cfg.overlap;
    const std::size_t step = n - 2 * ol;
    const std::size_t len = w.size();
    const double k = dispersion_delay_per_hz(cfg.fiber_km, cfg.dispersion_ps_nm_km, cfg.wavelength_nm);

    ComplexVec h(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = fft::bin_frequency(i, n, w.sample_rate()) + cfg.center_hz;
        h[i] = std::polar(1.0, -kPi * k * f * f);
    }

    const auto& x = w.samples();
    ComplexVec out(len);
    ComplexVec block(n);
    for (std::size_t start = 0; start < len; start += step) {
        // Block input spans [start - ol, start - ol + n), wrapped.
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t idx = (start + len * ((ol / len) + 1) + i - ol) % len;
            block[i] = x[idx];
        }
        fft::forward_inplace(block);
        for (std::size_t i = 0; i < n; ++i) block[i] *= h[i];
        fft::inverse_inplace(block);
        for (std::size_t i = 0; i < step && start + i < len; ++i) out[start + i] = block[ol + i];
    }
    return ComplexWaveform(std::move(out), w.sample_rate());
}

}  // namespace shc
