#pragma once

#include <array>
#include <optional>

#include "shc/frontend.hpp"
#include "shc/signal.hpp"

namespace shc {

/// Reference bandwidth for OSNR: 0.1 nm at 1550 nm.
inline constexpr double kOsnrReferenceHz = 12.5e9;

struct ChannelConfig {
    double fiber_km = 0.0;
    double dispersion_ps_nm_km = 17.0;
    double wavelength_nm = 1550.0;
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;
    double linewidth_hz = 100e3;
    std::optional<double> osnr_db;  // nullopt: noise loading off

    void validate() const;
};

struct JonesMatrix {
    Complex xx, xy, yx, yy;

    JonesMatrix operator*(const JonesMatrix& o) const;
    JonesMatrix adjoint() const;
    Complex determinant() const { return xx * yy - xy * yx; }
    std::array<Complex, 2> apply(Complex x, Complex y) const {
        return {xx * x + xy * y, yx * x + yy * y};
    }
};

/// Frequency-domain all-pass dispersion: spectrum *= exp(+j pi D lambda^2 f^2 L / c).
/// Negative fiber_km applies the inverse operator.
ComplexWaveform apply_cd(const ComplexWaveform& w, double fiber_km, double d_ps_nm_km,
                         double wavelength_nm);

/// Group-delay slope of the fibre, seconds per Hz: D * L * lambda^2 / c.
double dispersion_delay_per_hz(double fiber_km, double d_ps_nm_km, double wavelength_nm);

/// R = [cos a, sin a e^{j e}; -sin a e^{-j e}, cos a], angles in degrees.
JonesMatrix rotation_matrix(double azimuth_deg, double elevation_deg);

/// Complex AWGN sized so that total signal power over noise power in
/// kOsnrReferenceHz (both polarizations) equals osnr_db.
DualPolWaveform load_osnr(const DualPolWaveform& sig, double osnr_db, std::uint64_t seed);

/// Wiener phase trajectory, theta[0] = 0, increments ~ N(0, 2 pi linewidth / fs).
std::vector<double> wiener_phase(std::size_t n, double linewidth_hz, double sample_rate,
                                 std::uint64_t seed);

struct ChannelOutput {
    DualPolWaveform signal;
    LoState lo;
};

/// Signal path: CD then OSNR loading. LO path: Jones state R*[1;0] plus the
/// carrier phase and a Wiener phase-noise walk.
ChannelOutput apply_channel(const DualPolWaveform& sig, const ComplexWaveform& lo_carrier,
                            const ChannelConfig& cfg, std::uint64_t rng_seed);

}  // namespace shc
