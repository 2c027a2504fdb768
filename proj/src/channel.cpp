#include "shc/channel.hpp"

#include <cmath>
#include <random>

#include "shc/fft.hpp"

namespace shc {

void ChannelConfig::validate() const {
    if (fiber_km < 0.0) throw ParameterError("fiber_km must be >= 0");
    if (linewidth_hz < 0.0) throw ParameterError("linewidth_hz must be >= 0");
    if (std::abs(azimuth_deg) > 90.0 || std::abs(elevation_deg) > 90.0)
        throw ParameterError("azimuth/elevation must lie in [-90, 90] degrees");
    if (!(wavelength_nm > 0.0)) throw ParameterError("wavelength_nm must be positive");
}

JonesMatrix JonesMatrix::operator*(const JonesMatrix& o) const {
    return {xx * o.xx + xy * o.yx, xx * o.xy + xy * o.yy,
            yx * o.xx + yy * o.yx, yx * o.xy + yy * o.yy};
}

JonesMatrix JonesMatrix::adjoint() const {
    return {std::conj(xx), std::conj(yx), std::conj(xy), std::conj(yy)};
}

double dispersion_delay_per_hz(double fiber_km, double d_ps_nm_km, double wavelength_nm) {
    // D [ps/(nm km)] -> s/m^2: 1e-12 / (1e-9 * 1e3) = 1e-6.
    const double d_si = d_ps_nm_km * 1e-6;
    const double lambda = wavelength_nm * 1e-9;
    return d_si * fiber_km * 1e3 * lambda * lambda / kSpeedOfLight;
}

ComplexWaveform apply_cd(const ComplexWaveform& w, double fiber_km, double d_ps_nm_km,
                         double wavelength_nm) {
    if (fiber_km == 0.0 || w.empty()) return w;
    const double k = dispersion_delay_per_hz(fiber_km, d_ps_nm_km, wavelength_nm);
    auto spec = fft::forward(w.samples());
    const std::size_t n = spec.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double f = fft::bin_frequency(i, n, w.sample_rate());
        spec[i] *= std::polar(1.0, kPi * k * f * f);
    }
    fft::inverse_inplace(spec);
    return ComplexWaveform(std::move(spec), w.sample_rate());
}

JonesMatrix rotation_matrix(double azimuth_deg, double elevation_deg) {
    const double a = azimuth_deg * kPi / 180.0;
    const double e = elevation_deg * kPi / 180.0;
    const double c = std::cos(a);
    const double s = std::sin(a);
    return {Complex(c, 0.0), s * std::polar(1.0, e), -s * std::polar(1.0, -e), Complex(c, 0.0)};
}

DualPolWaveform load_osnr(const DualPolWaveform& sig, double osnr_db, std::uint64_t seed) {
    const double p_sig = sig.x.mean_power() + sig.y.mean_power();
    const double osnr = std::pow(10.0, osnr_db / 10.0);
    // Noise power in the reference band summed over both polarizations is
    // p_sig / osnr; white noise spreads that over the full simulation band.
    const double noise_total = p_sig / osnr * sig.sample_rate() / kOsnrReferenceHz;
    const double sigma = std::sqrt(noise_total / 4.0);  // per polarization, per rail
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, sigma);
    ComplexVec x = sig.x.samples();
    ComplexVec y = sig.y.samples();
    for (auto& s : x) s += Complex(g(rng), g(rng));
    for (auto& s : y) s += Complex(g(rng), g(rng));
    return DualPolWaveform(ComplexWaveform(std::move(x), sig.sample_rate()),
                           ComplexWaveform(std::move(y), sig.sample_rate()));
}

std::vector<double> wiener_phase(std::size_t n, double linewidth_hz, double sample_rate,
                                 std::uint64_t seed) {
    std::vector<double> theta(n, 0.0);
    if (linewidth_hz <= 0.0 || n == 0) return theta;
    const double sigma = std::sqrt(2.0 * kPi * linewidth_hz / sample_rate);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, sigma);
    for (std::size_t i = 1; i < n; ++i) theta[i] = theta[i - 1] + g(rng);
    return theta;
}

ChannelOutput apply_channel(const DualPolWaveform& sig, const ComplexWaveform& lo_carrier,
                            const ChannelConfig& cfg, std::uint64_t rng_seed) {
    cfg.validate();
    if (lo_carrier.sample_rate() != sig.sample_rate())
        throw ParameterError("signal and LO carrier sample rates differ");
    if (lo_carrier.size() != sig.size())
        throw InputLengthError("signal and LO carrier lengths differ");

    DualPolWaveform out(
        apply_cd(sig.x, cfg.fiber_km, cfg.dispersion_ps_nm_km, cfg.wavelength_nm),
        apply_cd(sig.y, cfg.fiber_km, cfg.dispersion_ps_nm_km, cfg.wavelength_nm));
    // Independent streams: the signal noise and the LO walk never share draws.
    std::seed_seq seq{rng_seed, std::uint64_t{0x05a1}};
    std::uint64_t seeds[2];
    {
        std::uint32_t raw[4];
        seq.generate(raw, raw + 4);
        seeds[0] = (std::uint64_t{raw[0]} << 32) | raw[1];
        seeds[1] = (std::uint64_t{raw[2]} << 32) | raw[3];
    }
    if (cfg.osnr_db) out = load_osnr(out, *cfg.osnr_db, seeds[0]);

    LoState lo;
    const auto r = rotation_matrix(cfg.azimuth_deg, cfg.elevation_deg);
    lo.jones = {r.xx, r.yx};
    lo.phase = wiener_phase(sig.size(), cfg.linewidth_hz, sig.sample_rate(), seeds[1]);
    const auto& c = lo_carrier.samples();
    for (std::size_t n = 0; n < c.size(); ++n) lo.phase[n] += std::arg(c[n]);
    return {std::move(out), std::move(lo)};
}

}  // namespace shc
