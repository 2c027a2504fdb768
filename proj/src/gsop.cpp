#include <cmath>

#include "shc/rx.hpp"

namespace shc {

ComplexWaveform gsop(const ComplexWaveform& w) {
    double p_i = 0.0, p_q = 0.0, c_iq = 0.0;
    for (const auto& s : w.samples()) {
        p_i += s.real() * s.real();
        p_q += s.imag() * s.imag();
        c_iq += s.real() * s.imag();
    }
    if (!(p_i > 0.0)) throw ParameterError("GSOP needs non-zero in-phase power");
    const double rho = c_iq / p_i;
    // Residual Q power after removing the I projection.
    const double p_q_orth = p_q - rho * c_iq;
    if (!(p_q_orth > 1e-12 * p_i))
        throw ParameterError("GSOP: quadrature rail is degenerate (fully correlated with I)");
    const double scale = std::sqrt(p_i / p_q_orth);
    ComplexVec out(w.size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        const auto& s = w[n];
        out[n] = Complex(s.real(), (s.imag() - rho * s.real()) * scale);
    }
    return ComplexWaveform(std::move(out), w.sample_rate());
}

}  // namespace shc
