#include <algorithm>
#include <cmath>
#include <string>

#include "shc/rx.hpp"

namespace shc {

void EqualizerConfig::validate() const {
    if (n_taps < 1 || n_taps % 2 == 0) throw ParameterError("n_taps must be odd and >= 1");
    if (!(mu > 0.0 && mu < 1.0)) throw ParameterError("mu must lie in (0, 1)");
    if (!(mu_p > 0.0 && mu_p < 1.0)) throw ParameterError("mu_p must lie in (0, 1)");
}

EqualizerState EqualizerState::initial(int n_taps) {
    EqualizerState s;
    const auto n = static_cast<std::size_t>(n_taps);
    s.w11.assign(n, Complex{});
    s.w12.assign(n, Complex{});
    s.w21.assign(n, Complex{});
    s.w22.assign(n, Complex{});
    s.w11[n / 2] = 1.0;
    return s;
}

namespace {

Complex dot(const ComplexVec& w, std::span<const Complex> u) {
    Complex acc{};
    for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * u[i];
    return acc;
}

void accumulate(ComplexVec& w, Complex g, std::span<const Complex> u) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += g * std::conj(u[i]);
}

// Unit-modulus rotation conj(p)/|p|; the tap update strips the phase factor's
// rotation from the gradient but not its gain.
Complex unit_conj(Complex p) {
    const double m = std::abs(p);
    return m > 0.0 ? std::conj(p) / m : Complex{1.0, 0.0};
}

}  // namespace

std::array<Complex, 2> EqualizerState::outputs(std::span<const Complex> uo,
                                               std::span<const Complex> ue) const {
    const Complex pc = std::conj(p);
    return {p * dot(w11, uo) + pc * dot(w12, ue), p * dot(w21, uo) + pc * dot(w22, ue)};
}

void EqualizerState::update(std::span<const Complex> uo, std::span<const Complex> ue, Complex e_o,
                            Complex e_e, const EqualizerConfig& cfg) {
    const bool odd = e_o != Complex{};
    const bool even = e_e != Complex{};
    if (!odd && !even) return;

    // Phase gradients use the pre-update tap outputs.
    const Complex a = dot(w11, uo);
    const Complex b = dot(w12, ue);
    const Complex d = dot(w22, ue);

    const Complex g_o = cfg.mu * unit_conj(p);             // mu |p| / p
    const Complex g_e = cfg.mu * std::conj(unit_conj(p));  // mu |p| / p*
    if (odd) {
        accumulate(w11, g_o * e_o, uo);
        accumulate(w12, g_e * e_o, ue);
    }
    if (even) {
        accumulate(w21, g_o * e_e, uo);
        accumulate(w22, g_e * e_e, ue);
    }

    if (odd) p1 += cfg.mu_p * e_o * std::conj(a);
    if (cfg.phase_update == PhaseUpdate::Verbatim) {
        // The even branch enters through p*, so its gradient carries conj(e).
        if (odd) p2 += cfg.mu_p * std::conj(e_o) * b;
    } else {
        if (even) p2 += cfg.mu_p * std::conj(e_e) * d;
    }
    p = (p1 + p2) * 0.5;
}

namespace {

// Gathers an n-tap window centred on sample `center`, wrapping around.
void gather(std::span<const Complex> x, std::size_t center, std::size_t taps, bool conjugate,
            ComplexVec& out) {
    const std::size_t len = x.size();
    const std::size_t half = taps / 2;
    std::size_t idx = (center + len - (half % len)) % len;
    for (std::size_t i = 0; i < taps; ++i) {
        out[i] = conjugate ? std::conj(x[idx]) : x[idx];
        if (++idx == len) idx = 0;
    }
}

class DivergenceMonitor {
public:
    explicit DivergenceMonitor(double mu) : mu_(mu) {}

    void push(double err) {
        if (!std::isfinite(err))
            throw DivergenceError("equalizer error is not finite (mu = " + std::to_string(mu_) + ")");
        sum_ += err;
        if (++count_ < kWindow) return;
        const double mean = sum_ / kWindow;
        if (reference_ < 0.0) {
            // Floor for streams that start out already equalized.
            reference_ = std::max(mean, 0.05);
        } else if (mean > 10.0 * reference_) {
            throw DivergenceError("equalizer diverged: mean |e| " + std::to_string(mean) +
                                  " exceeds 10x the initial " + std::to_string(reference_) +
                                  " (mu = " + std::to_string(mu_) + ")");
        }
        sum_ = 0.0;
        count_ = 0;
    }

private:
    static constexpr std::size_t kWindow = 1000;
    double mu_;
    double sum_ = 0.0;
    std::size_t count_ = 0;
    double reference_ = -1.0;
};

void check_stream(std::span<const Complex> received, int sps, std::span<const Complex> training) {
    if (sps != 1 && sps != 2) throw ParameterError("equalizer input must be at 1 or 2 sps");
    if (received.size() % static_cast<std::size_t>(2 * sps) != 0)
        throw InputLengthError("equalizer input must hold whole symbol pairs");
    if (training.size() < received.size() / static_cast<std::size_t>(sps))
        throw InputLengthError("training reference shorter than the received stream");
}

}  // namespace

EqualizerResult alamouti_equalize(std::span<const Complex> received, int sps,
                                  const EqualizerConfig& cfg, std::span<const Complex> training,
                                  const Constellation& c) {
    cfg.validate();
    check_stream(received, sps, training);
    const std::size_t n_sym = received.size() / static_cast<std::size_t>(sps);
    const std::size_t n_blocks = n_sym / 2;
    const auto taps = static_cast<std::size_t>(cfg.n_taps);
    const auto s = static_cast<std::size_t>(sps);

    EqualizerResult res;
    res.state = EqualizerState::initial(cfg.n_taps);
    res.symbols.resize(n_sym);
    res.error_trace.resize(n_blocks);
    ComplexVec uo(taps), ue(taps);
    DivergenceMonitor monitor(cfg.mu);

    for (std::size_t m = 0; m < n_blocks; ++m) {
        gather(received, 2 * m * s, taps, false, uo);
        gather(received, (2 * m + 1) * s, taps, true, ue);
        const auto [yo, ye] = res.state.outputs(uo, ue);
        const bool train = m < cfg.n_train;
        const Complex d_o = train ? training[2 * m] : c.decide(yo);
        const Complex d_e = train ? training[2 * m + 1] : c.decide(ye);
        const Complex e_o = d_o - yo;
        const Complex e_e = d_e - ye;
        res.state.update(uo, ue, e_o, e_e, cfg);
        res.symbols[2 * m] = yo;
        res.symbols[2 * m + 1] = ye;
        res.error_trace[m] = std::norm(e_o) + std::norm(e_e);
        monitor.push(0.5 * (std::abs(e_o) + std::abs(e_e)));
    }
    return res;
}

EqualizerResult single_pol_equalize(std::span<const Complex> received, int sps,
                                    const EqualizerConfig& cfg,
                                    std::span<const Complex> training, const Constellation& c) {
    cfg.validate();
    check_stream(received, sps, training);
    const std::size_t n_sym = received.size() / static_cast<std::size_t>(sps);
    const auto taps = static_cast<std::size_t>(cfg.n_taps);

    EqualizerResult res;
    res.state = EqualizerState::initial(cfg.n_taps);
    auto& st = res.state;
    res.symbols.resize(n_sym);
    res.error_trace.resize(n_sym);
    ComplexVec u(taps);
    DivergenceMonitor monitor(cfg.mu);

    for (std::size_t n = 0; n < n_sym; ++n) {
        gather(received, n * static_cast<std::size_t>(sps), taps, false, u);
        const Complex a = dot(st.w11, u);
        const Complex y = st.p * a;
        const Complex d = n < 2 * cfg.n_train ? training[n] : c.decide(y);
        const Complex e = d - y;
        accumulate(st.w11, cfg.mu * unit_conj(st.p) * e, u);
        st.p1 += cfg.mu_p * e * std::conj(a);
        st.p2 = st.p1;
        st.p = st.p1;
        res.symbols[n] = y;
        res.error_trace[n] = std::norm(e);
        monitor.push(std::abs(e));
    }
    return res;
}

}  // namespace shc
