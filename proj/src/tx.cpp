#include "shc/tx.hpp"

#include <cmath>
#include <numeric>

namespace shc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

Bits prbs(std::size_t length, std::uint64_t seed) {
    std::uint32_t state = static_cast<std::uint32_t>(splitmix64(seed) & 0x7fffffffu);
    if (state == 0) state = 1;
    Bits out(length);
    for (auto& b : out) {
        const std::uint32_t fb = ((state >> 30) ^ (state >> 27)) & 1u;
        state = ((state << 1) | fb) & 0x7fffffffu;
        b = static_cast<std::uint8_t>(fb);
    }
    return out;
}

AlamoutiFrame alamouti_encode(std::span<const Complex> source) {
    if (source.size() % 2 != 0)
        throw InputLengthError("Alamouti encoding needs an even symbol count");
    AlamoutiFrame f;
    f.source.assign(source.begin(), source.end());
    f.ex.resize(source.size());
    f.ey.resize(source.size());
    for (std::size_t k = 0; k < source.size(); k += 2) {
        f.ex[k] = source[k];
        f.ex[k + 1] = -std::conj(source[k + 1]);
        f.ey[k] = source[k + 1];
        f.ey[k + 1] = std::conj(source[k]);
    }
    return f;
}

SubcarrierPlan SubcarrierPlan::make(int n_sc, double total_baud, double beta) {
    SubcarrierPlan p;
    p.n_sc = n_sc;
    p.total_baud = total_baud;
    p.beta = beta;
    p.validate();
    const double spacing = (1.0 + beta) * p.sc_baud();
    for (int k = 0; k < n_sc; ++k) p.centers.push_back((k - (n_sc - 1) / 2.0) * spacing);
    return p;
}

void SubcarrierPlan::validate() const {
    if (n_sc < 1) throw ParameterError("subcarrier count must be >= 1");
    if (!(total_baud > 0.0)) throw ParameterError("total_baud must be positive");
    if (!(beta >= 0.0 && beta <= 1.0)) throw ParameterError("roll-off must be in [0, 1]");
    if (!centers.empty() && static_cast<int>(centers.size()) != n_sc)
        throw ConfigurationError("centre list does not match subcarrier count");
}

std::size_t frame_symbol_multiple(const SubcarrierPlan& plan) {
    // A centre f_c stays periodic over n symbols when n * f_c / sc_baud is an
    // integer; the frame must also hold whole Alamouti blocks.
    for (std::size_t m = 2; m <= 100000; m += 2) {
        bool ok = true;
        for (double fc : plan.centers) {
            const double cycles = static_cast<double>(m) * fc / plan.sc_baud();
            if (std::abs(cycles - std::round(cycles)) > 1e-6) {
                ok = false;
                break;
            }
        }
        if (ok) return m;
    }
    throw ConfigurationError("subcarrier centres are not commensurate with the symbol rate");
}

std::size_t frame_data_symbols(const SubcarrierPlan& plan, std::size_t requested,
                               int preamble_symbols) {
    const std::size_t m = frame_symbol_multiple(plan);
    const std::size_t total = requested + static_cast<std::size_t>(preamble_symbols);
    const std::size_t rounded = (total + m - 1) / m * m;
    return rounded - static_cast<std::size_t>(preamble_symbols);
}

DscmTx build_dscm_tx(std::span<const std::uint8_t> bits, const Constellation& c,
                     const SubcarrierPlan& plan_in, int sps_out, const TxOptions& opt) {
    SubcarrierPlan plan = plan_in.centers.empty()
                              ? SubcarrierPlan::make(plan_in.n_sc, plan_in.total_baud, plan_in.beta)
                              : plan_in;
    plan.validate();
    if (sps_out < 1) throw ParameterError("sps_out must be >= 1");
    const double fs = sps_out * plan.total_baud;
    if (plan.occupied_bandwidth() > fs)
        throw ConfigurationError("occupied bandwidth exceeds the output Nyquist band");
    if (opt.preamble_symbols < 0 || opt.preamble_symbols % 2 != 0)
        throw ParameterError("preamble length must be even and non-negative");

    const auto n_sc = static_cast<std::size_t>(plan.n_sc);
    const auto k = static_cast<std::size_t>(c.bits_per_symbol());
    if (bits.size() % (n_sc * k) != 0)
        throw InputLengthError("bits do not split evenly into subcarrier symbols");
    const std::size_t bits_per_sc = bits.size() / n_sc;
    const std::size_t data_syms = bits_per_sc / k;
    const std::size_t frame_syms = data_syms + static_cast<std::size_t>(opt.preamble_symbols);
    if (frame_syms == 0 || frame_syms % frame_symbol_multiple(plan) != 0)
        throw ConfigurationError("frame of " + std::to_string(frame_syms) +
                                 " symbols is not periodic for this plan; use frame_data_symbols()");

    const int sps_sc = sps_out * plan.n_sc;
    const std::size_t n_samples = frame_syms * static_cast<std::size_t>(sps_sc);

    DscmTx tx;
    tx.preamble_symbols = opt.preamble_symbols;
    ComplexVec x(n_samples), y(n_samples);
    for (std::size_t s = 0; s < n_sc; ++s) {
        Bits pre_bits = prbs(static_cast<std::size_t>(opt.preamble_symbols) * k,
                             opt.preamble_seed + 7919u * s);
        ComplexVec symbols = qam_map(pre_bits, c);
        std::span<const std::uint8_t> sc_bits = bits.subspan(s * bits_per_sc, bits_per_sc);
        ComplexVec data = qam_map(sc_bits, c);
        symbols.insert(symbols.end(), data.begin(), data.end());

        AlamoutiFrame frame;
        if (opt.coding == TxCoding::Alamouti) {
            frame = alamouti_encode(symbols);
        } else {
            frame.source = symbols;
            frame.ex = symbols;
            frame.ey.assign(symbols.size(), Complex{});
        }

        const double fc = plan.centers[s];
        auto shape = [&](const ComplexVec& sym) {
            auto w = rrc_shape_circular(sym, plan.beta, sps_sc, opt.rrc_span, plan.sc_baud());
            return frequency_shift(w.samples(), fc, fs);
        };
        const auto sx = shape(frame.ex);
        const auto sy = shape(frame.ey);
        for (std::size_t n = 0; n < n_samples; ++n) {
            x[n] += sx[n];
            y[n] += sy[n];
        }

        AlamoutiFrame pre;
        const auto np = static_cast<std::ptrdiff_t>(opt.preamble_symbols);
        pre.source.assign(frame.source.begin(), frame.source.begin() + np);
        pre.ex.assign(frame.ex.begin(), frame.ex.begin() + np);
        pre.ey.assign(frame.ey.begin(), frame.ey.begin() + np);
        tx.preambles.push_back(std::move(pre));
        tx.sc_symbols.push_back(std::move(symbols));
        tx.sc_bits.emplace_back(sc_bits.begin(), sc_bits.end());
    }

    auto normalize = [](ComplexVec& v) {
        double p = 0.0;
        for (const auto& s : v) p += std::norm(s);
        p /= static_cast<double>(v.size());
        if (p > 0.0) {
            const double g = 1.0 / std::sqrt(p);
            for (auto& s : v) s *= g;
        }
    };
    normalize(x);
    normalize(y);
    tx.waveform = DualPolWaveform(ComplexWaveform(std::move(x), fs), ComplexWaveform(std::move(y), fs));
    tx.plan = plan;
    return tx;
}

}  // namespace shc
