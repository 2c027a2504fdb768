#include "shc/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shc/fft.hpp"

namespace shc {

ComplexWaveform::ComplexWaveform(ComplexVec samples, double sample_rate)
    : samples_(std::move(samples)), rate_(sample_rate) {
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
        throw ParameterError("sample_rate must be positive and finite");
    for (const auto& s : samples_) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw ParameterError("waveform samples must be finite");
    }
}

double ComplexWaveform::energy() const {
    double e = 0.0;
    for (const auto& s : samples_) e += std::norm(s);
    return e;
}

double ComplexWaveform::mean_power() const {
    return samples_.empty() ? 0.0 : energy() / static_cast<double>(samples_.size());
}

DualPolWaveform::DualPolWaveform(ComplexWaveform x_pol, ComplexWaveform y_pol)
    : x(std::move(x_pol)), y(std::move(y_pol)) {
    if (x.size() != y.size()) throw InputLengthError("X and Y polarizations differ in length");
    if (x.sample_rate() != y.sample_rate())
        throw ParameterError("X and Y polarizations differ in sample rate");
}

// ---------------------------------------------------------------------------
// Constellations

namespace {

unsigned gray(unsigned i) { return i ^ (i >> 1); }

int log2_exact(int m) {
    int b = 0;
    while ((1 << b) < m) ++b;
    return b;
}

}  // namespace

Constellation Constellation::qam(int order) {
    Constellation c;
    c.bits_ = log2_exact(order);
    if (order == 4 || order == 16 || order == 64) {
        // Rectangular per-axis Gray: high half of the label selects I, low half Q.
        const int side = static_cast<int>(std::lround(std::sqrt(order)));
        const int half_bits = c.bits_ / 2;
        c.side_ = side;
        for (int i = 0; i < side; ++i) c.levels_.push_back(2.0 * i - (side - 1));
        for (int i = 0; i < side; ++i) {
            for (int q = 0; q < side; ++q) {
                c.points_.emplace_back(c.levels_[i], c.levels_[q]);
                c.labels_.push_back((gray(i) << half_bits) | gray(q));
            }
        }
    } else if (order == 32) {
        // Cross 32QAM folded from an 8x4 Gray rectangle (I: 3 bits, Q: 2 bits).
        // The eight |I| = 7 points move onto the Q = +-5 arms:
        //   (+-7, q) -> (+-|q|, 5 * sgn(q)),  q in {+-1, +-3}
        // which keeps (7,1)/(-7,1) one bit apart across the arm's centre line.
        const double ilev[8] = {-7, -5, -3, -1, 1, 3, 5, 7};
        const double qlev[4] = {-3, -1, 1, 3};
        for (int i = 0; i < 8; ++i) {
            for (int q = 0; q < 4; ++q) {
                double re = ilev[i];
                double im = qlev[q];
                if (std::abs(re) == 7.0) {
                    const double s = re > 0 ? 1.0 : -1.0;
                    re = s * (std::abs(im) == 1.0 ? 1.0 : 3.0);
                    im = im > 0 ? 5.0 : -5.0;
                }
                c.points_.emplace_back(re, im);
                c.labels_.push_back((gray(i) << 2) | gray(q));
            }
        }
    } else {
        throw ParameterError("unsupported QAM order " + std::to_string(order));
    }

    double e = 0.0;
    for (const auto& p : c.points_) e += std::norm(p);
    const double scale = 1.0 / std::sqrt(e / static_cast<double>(c.points_.size()));
    for (auto& p : c.points_) p *= scale;
    for (auto& l : c.levels_) l *= scale;

    c.by_label_.assign(c.points_.size(), 0);
    for (std::size_t k = 0; k < c.labels_.size(); ++k) c.by_label_[c.labels_[k]] = k;
    return c;
}

std::size_t Constellation::nearest(Complex z) const {
    if (side_ > 0) {
        // Per-axis slicing is exact for square grids. A value exactly between
        // two levels resolves to the lower level, which is also the lower index.
        auto slice = [&](double v) {
            const double step = levels_[1] - levels_[0];
            double idx = std::ceil((v - levels_[0]) / step - 0.5);
            return static_cast<std::size_t>(std::clamp(idx, 0.0, double(side_ - 1)));
        };
        return slice(z.real()) * static_cast<std::size_t>(side_) + slice(z.imag());
    }
    std::size_t best = 0;
    double best_d = std::norm(z - points_[0]);
    for (std::size_t k = 1; k < points_.size(); ++k) {
        const double d = std::norm(z - points_[k]);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

double Constellation::min_distance() const {
    double best = INFINITY;
    for (std::size_t a = 0; a < points_.size(); ++a)
        for (std::size_t b = a + 1; b < points_.size(); ++b)
            best = std::min(best, std::abs(points_[a] - points_[b]));
    return best;
}

ComplexVec qam_map(std::span<const std::uint8_t> bits, const Constellation& c) {
    const auto k = static_cast<std::size_t>(c.bits_per_symbol());
    if (bits.size() % k != 0)
        throw InputLengthError("bit count " + std::to_string(bits.size()) +
                               " not divisible by " + std::to_string(k));
    ComplexVec out(bits.size() / k);
    for (std::size_t s = 0; s < out.size(); ++s) {
        unsigned label = 0;
        for (std::size_t b = 0; b < k; ++b) label = (label << 1) | (bits[s * k + b] & 1u);
        out[s] = c.points()[c.index_of_label(label)];
    }
    return out;
}

Bits qam_demap(std::span<const Complex> symbols, const Constellation& c) {
    const auto k = static_cast<std::size_t>(c.bits_per_symbol());
    Bits out(symbols.size() * k);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        const unsigned label = c.labels()[c.nearest(symbols[s])];
        for (std::size_t b = 0; b < k; ++b)
            out[s * k + b] = static_cast<std::uint8_t>((label >> (k - 1 - b)) & 1u);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pulse shaping

std::vector<double> rrc_taps(double beta, int sps, int span) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw ParameterError("RRC roll-off must be in [0, 1]");
    if (sps < 2) throw ParameterError("RRC needs at least 2 samples per symbol");
    if (span < 8 || span % 2 != 0) throw ParameterError("RRC span must be even and >= 8");

    const int n = span * sps + 1;
    const int mid = n / 2;
    std::vector<double> h(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i - mid) / sps;  // in symbol periods
        double v;
        if (i == mid) {
            v = 1.0 - beta + 4.0 * beta / kPi;
        } else if (beta > 0.0 && std::abs(std::abs(4.0 * beta * t) - 1.0) < 1e-12) {
            v = beta / std::sqrt(2.0) *
                ((1.0 + 2.0 / kPi) * std::sin(kPi / (4.0 * beta)) +
                 (1.0 - 2.0 / kPi) * std::cos(kPi / (4.0 * beta)));
        } else {
            const double num = std::sin(kPi * t * (1.0 - beta)) +
                               4.0 * beta * t * std::cos(kPi * t * (1.0 + beta));
            const double den = kPi * t * (1.0 - std::pow(4.0 * beta * t, 2));
            v = num / den;
        }
        h[static_cast<std::size_t>(i)] = v;
    }
    const double e = std::sqrt(std::inner_product(h.begin(), h.end(), h.begin(), 0.0));
    for (auto& v : h) v /= e;
    return h;
}

ComplexWaveform rrc_shape(std::span<const Complex> symbols, double beta, int sps, int span,
                          double symbol_rate) {
    const auto h = rrc_taps(beta, sps, span);
    const double rate = symbol_rate * sps;
    if (symbols.empty()) return ComplexWaveform({}, rate);
    const std::size_t n_out = (symbols.size() - 1) * sps + h.size();
    ComplexVec out(n_out);
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        const std::size_t base = k * static_cast<std::size_t>(sps);
        for (std::size_t i = 0; i < h.size(); ++i) out[base + i] += symbols[k] * h[i];
    }
    return ComplexWaveform(std::move(out), rate);
}

ComplexVec circular_filter(std::span<const Complex> x, std::span<const double> taps) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    // Fold the centred taps onto an n-point circular kernel, then convolve by FFT.
    ComplexVec kernel(n);
    const auto mid = static_cast<long long>(taps.size() / 2);
    for (std::size_t i = 0; i < taps.size(); ++i) {
        long long idx = (static_cast<long long>(i) - mid) % static_cast<long long>(n);
        if (idx < 0) idx += static_cast<long long>(n);
        kernel[static_cast<std::size_t>(idx)] += taps[i];
    }
    fft::forward_inplace(kernel);
    ComplexVec y(x.begin(), x.end());
    fft::forward_inplace(y);
    for (std::size_t k = 0; k < n; ++k) y[k] *= kernel[k];
    fft::inverse_inplace(y);
    return y;
}

ComplexWaveform rrc_shape_circular(std::span<const Complex> symbols, double beta, int sps,
                                   int span, double symbol_rate) {
    const auto h = rrc_taps(beta, sps, span);
    ComplexVec up(symbols.size() * static_cast<std::size_t>(sps));
    for (std::size_t k = 0; k < symbols.size(); ++k) up[k * sps] = symbols[k];
    return ComplexWaveform(circular_filter(up, h), symbol_rate * sps);
}

// ---------------------------------------------------------------------------
// Rate conversion

ComplexWaveform resample(const ComplexWaveform& w, double new_rate) {
    if (!(new_rate > 0.0)) throw ParameterError("new_rate must be positive");
    if (new_rate == w.sample_rate()) return w;
    const std::size_t n_in = w.size();
    const auto n_out = static_cast<std::size_t>(
        std::llround(static_cast<double>(n_in) * new_rate / w.sample_rate()));
    if (n_in == 0 || n_out == 0) return ComplexWaveform({}, new_rate);

    auto spec = fft::forward(w.samples());
    ComplexVec out(n_out);
    // Copy the common band; split the Nyquist bin when it is shared.
    const std::size_t n_min = std::min(n_in, n_out);
    const std::size_t pos = (n_min + 1) / 2;  // bins 0..pos-1 are non-negative
    const std::size_t neg = n_min / 2;        // bins -neg..-1
    for (std::size_t k = 0; k < pos; ++k) out[k] = spec[k];
    for (std::size_t k = 1; k <= neg; ++k) out[n_out - k] = spec[n_in - k];
    if (n_min % 2 == 0) {
        // Bin n_min/2 is the Nyquist bin of the shorter record.
        if (n_out > n_in) {
            // Split the input Nyquist component across +-fs/2.
            const Complex nyq = spec[n_in / 2];
            out[n_out - neg] = 0.5 * nyq;
            out[neg] = 0.5 * nyq;
        } else {
            // Fold the two input bins at +-fs_out/2 into the output Nyquist bin.
            out[n_out - neg] = spec[neg] + spec[n_in - neg];
        }
    }
    const double scale = static_cast<double>(n_out) / static_cast<double>(n_in);
    for (auto& v : out) v *= scale;
    fft::inverse_inplace(out);
    return ComplexWaveform(std::move(out), new_rate);
}

ComplexVec frequency_shift(std::span<const Complex> x, double freq_hz, double sample_rate) {
    ComplexVec out(x.size());
    const double w = 2.0 * kPi * freq_hz / sample_rate;
    for (std::size_t n = 0; n < x.size(); ++n)
        out[n] = x[n] * std::polar(1.0, w * static_cast<double>(n));
    return out;
}

}  // namespace shc
