#pragma once

#include <span>
#include <string>

#include "shc/types.hpp"

namespace shc {

/// Uniformly sampled complex baseband signal.
///
/// Construction rejects non-positive rates and non-finite samples, so every
/// live waveform has finite energy.
class ComplexWaveform {
public:
    ComplexWaveform() = default;
    ComplexWaveform(ComplexVec samples, double sample_rate);

    const ComplexVec& samples() const noexcept { return samples_; }
    double sample_rate() const noexcept { return rate_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    const Complex& operator[](std::size_t i) const { return samples_[i]; }

    double energy() const;
    double mean_power() const;

    // Moves the samples out; the waveform is left empty.
    ComplexVec release() && { return std::move(samples_); }

private:
    ComplexVec samples_;
    double rate_ = 1.0;
};

/// Jones-vector field: X and Y polarization tributaries on a shared time grid.
struct DualPolWaveform {
    ComplexWaveform x;
    ComplexWaveform y;

    DualPolWaveform() = default;
    DualPolWaveform(ComplexWaveform x_pol, ComplexWaveform y_pol);

    double sample_rate() const noexcept { return x.sample_rate(); }
    std::size_t size() const noexcept { return x.size(); }
};

/// Unit-energy QAM alphabet with Gray (or quasi-Gray for 32QAM) bit labels.
///
/// Labels are stored MSB-first: bit i of a label occupies position
/// bits_per_symbol()-1-i of the group it decodes to.
class Constellation {
public:
    /// Supported orders: 4, 16, 64 (square, per-axis Gray) and 32 (cross).
    static Constellation qam(int order);

    int order() const noexcept { return static_cast<int>(points_.size()); }
    int bits_per_symbol() const noexcept { return bits_; }
    const ComplexVec& points() const noexcept { return points_; }
    const std::vector<unsigned>& labels() const noexcept { return labels_; }

    /// Index of the point carrying `label`.
    std::size_t index_of_label(unsigned label) const { return by_label_[label]; }

    /// Nearest point (Euclidean); ties go to the lowest point index.
    std::size_t nearest(Complex z) const;

    Complex decide(Complex z) const { return points_[nearest(z)]; }

    /// Smallest distance between two distinct points.
    double min_distance() const;

private:
    ComplexVec points_;
    std::vector<unsigned> labels_;
    std::vector<std::size_t> by_label_;
    int bits_ = 0;
    // Square constellations decide per axis; 32QAM uses exhaustive search.
    int side_ = 0;
    std::vector<double> levels_;
};

ComplexVec qam_map(std::span<const std::uint8_t> bits, const Constellation& c);
Bits qam_demap(std::span<const Complex> symbols, const Constellation& c);

/// Unit-energy root-raised-cosine taps, length span*sps + 1, centred.
std::vector<double> rrc_taps(double beta, int sps, int span);

/// Pulse-shapes `symbols` by zero-stuffing to `sps` and linear convolution
/// with rrc_taps(). Output length is (n-1)*sps + span*sps + 1; the peak for
/// symbol k sits at sample k*sps + span*sps/2 (the filter delay).
ComplexWaveform rrc_shape(std::span<const Complex> symbols, double beta, int sps,
                          int span, double symbol_rate = 1.0);

/// Periodic variant used for circular simulation frames: output length is
/// n*sps and symbol k peaks at sample k*sps (zero delay, wrap-around tails).
ComplexWaveform rrc_shape_circular(std::span<const Complex> symbols, double beta,
                                   int sps, int span, double symbol_rate = 1.0);

/// Circular filtering with a real, centred, odd-length FIR (taps[len/2] is
/// time zero). Used for matched filtering of periodic frames.
ComplexVec circular_filter(std::span<const Complex> x, std::span<const double> taps);

/// Band-limited rate conversion by DFT zero-padding / truncation over the
/// whole (periodic) record. Output length is round(n * new_rate / old_rate).
ComplexWaveform resample(const ComplexWaveform& w, double new_rate);

/// Multiplies by exp(j 2 pi f n / fs).
ComplexVec frequency_shift(std::span<const Complex> x, double freq_hz, double sample_rate);

}  // namespace shc
