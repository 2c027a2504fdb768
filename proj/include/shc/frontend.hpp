#pragma once

#include <array>
#include <optional>

#include "shc/signal.hpp"

namespace shc {

/// Local-oscillator field seen by the single-hybrid receiver.
struct LoState {
    std::array<Complex, 2> jones{Complex{1.0, 0.0}, Complex{}};
    std::vector<double> phase;  // radians, one per sample
    double power_ratio_db = 20.0;  // informational; detection is normalized

    void validate() const;
};

/// Balanced-detection beat against one LO polarization:
/// out[n] = (conj(u_x) x[n] + conj(u_y) y[n]) e^{j theta[n]}.
ComplexWaveform coherent_detect(const DualPolWaveform& sig, const LoState& lo);

/// Adds complex AWGN at the given electrical SNR (relative to the measured
/// mean power). nullopt leaves the waveform untouched.
ComplexWaveform add_receiver_noise(const ComplexWaveform& w, std::optional<double> snr_db,
                                   std::uint64_t seed);

}  // namespace shc
