#pragma once

#include <span>

#include "shc/signal.hpp"

namespace shc {

/// PRBS-31 (x^31 + x^28 + 1) bit stream. The seed is scrambled into a
/// non-zero 31-bit register state, so any 64-bit seed is valid.
Bits prbs(std::size_t length, std::uint64_t seed);

/// Alamouti polarization-time block code for one symbol stream.
///
/// Per block k: ex = {s[2k], -conj(s[2k+1])}, ey = {s[2k+1], conj(s[2k])}.
struct AlamoutiFrame {
    ComplexVec source;
    ComplexVec ex;
    ComplexVec ey;
};

AlamoutiFrame alamouti_encode(std::span<const Complex> source);

/// Contiguous, guard-free subcarrier layout. SC1 is the lowest frequency.
struct SubcarrierPlan {
    int n_sc = 4;
    double total_baud = 50e9;
    double beta = 0.1;
    std::vector<double> centers;  // Hz

    static SubcarrierPlan make(int n_sc, double total_baud, double beta);

    double sc_baud() const { return total_baud / n_sc; }
    /// Two-sided occupied bandwidth of the composite, (1+beta)*total_baud.
    double occupied_bandwidth() const { return (1.0 + beta) * total_baud; }
    void validate() const;
};

/// Transmit coding mode. SinglePol bypasses Alamouti and drives X only;
/// it exists as the polarization-fading baseline.
enum class TxCoding { Alamouti, SinglePol };

struct TxOptions {
    int preamble_symbols = 512;
    std::uint64_t preamble_seed = 0x5ecu;
    int rrc_span = 64;
    TxCoding coding = TxCoding::Alamouti;
};

struct DscmTx {
    DualPolWaveform waveform;
    SubcarrierPlan plan;
    int preamble_symbols = 0;
    /// Per subcarrier: preamble followed by data symbols (receiver reference).
    std::vector<ComplexVec> sc_symbols;
    /// Per subcarrier: the data bits (preamble excluded).
    std::vector<Bits> sc_bits;
    /// Per subcarrier: the transmitted X/Y streams of the preamble, used by sync.
    std::vector<AlamoutiFrame> preambles;
};

/// Smallest per-subcarrier frame length (symbols, preamble included) that is
/// a multiple of this value keeps every subcarrier centre on an integer DFT
/// bin, so the periodic frame stays continuous after frequency shifting.
std::size_t frame_symbol_multiple(const SubcarrierPlan& plan);

/// Smallest valid data-symbol count >= requested for this plan and preamble.
std::size_t frame_data_symbols(const SubcarrierPlan& plan, std::size_t requested,
                               int preamble_symbols);

/// Builds the dual-polarization DSCM waveform: per subcarrier map, encode,
/// shape (circularly), shift to centre; sum per polarization and normalize
/// each polarization to unit mean power. Output rate is sps_out * total_baud.
/// `bits` is split evenly across subcarriers.
DscmTx build_dscm_tx(std::span<const std::uint8_t> bits, const Constellation& c,
                     const SubcarrierPlan& plan, int sps_out, const TxOptions& opt = {});

}  // namespace shc
