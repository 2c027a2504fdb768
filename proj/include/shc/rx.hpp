#pragma once

#include <array>
#include <optional>
#include <span>

#include "shc/signal.hpp"
#include "shc/tx.hpp"

namespace shc {

// ---------------------------------------------------------------------------
// Front-end corrections and subcarrier separation

/// Gram-Schmidt orthogonalization of the I/Q rails. Q is made orthogonal to
/// I and both rails are rescaled to the original I power.
ComplexWaveform gsop(const ComplexWaveform& w);

/// Shifts each subcarrier to baseband, low-passes it to (1+beta)/2 * sc_baud
/// and resamples it to `sps_out` samples per subcarrier symbol.
std::vector<ComplexWaveform> subcarrier_demux(const ComplexWaveform& w,
                                              const SubcarrierPlan& plan, int sps_out = 2);

// ---------------------------------------------------------------------------
// Frequency-domain chromatic dispersion compensation

struct CdcConfig {
    std::size_t fft_size = 256;
    std::size_t overlap = 0;  // samples discarded per block edge
    double fiber_km = 0.0;
    double dispersion_ps_nm_km = 17.0;
    double wavelength_nm = 1550.0;
    /// Optical offset of the processed band's baseband (Hz); non-zero when a
    /// demultiplexed subcarrier is compensated on its own.
    double center_hz = 0.0;

    void validate() const;
};

/// Samples of group delay, relative to the optical carrier, spanned by a band
/// of two-sided width `bandwidth_hz` centred at `center_hz`; rounded up.
/// This is the per-edge overlap that keeps overlap-save alias-free.
std::size_t cdc_overlap_for(double fiber_km, double d_ps_nm_km, double wavelength_nm,
                            double center_hz, double bandwidth_hz, double sample_rate);

/// Overlap-save CD compensation: blocks of fft_size advance by
/// fft_size - 2*overlap; each block's spectrum is multiplied by the inverse
/// dispersion phase and the overlap samples at both block edges are dropped.
/// The record is treated as periodic.
ComplexWaveform fd_cdc(const ComplexWaveform& w, const CdcConfig& cfg);

// ---------------------------------------------------------------------------
// Synchronization

struct SyncResult {
    std::size_t offset = 0;  // samples
    double peak = 0.0;
    double median_sidelobe = 0.0;
    ComplexWaveform aligned;
};

/// Polarization-insensitive magnitude cross-correlation of `w` (at `sps`
/// samples/symbol) against known X/Y preamble streams. `ref_y` may be empty.
/// The result is rotated so sample 0 lines up with preamble symbol 0.
/// Throws SyncError when the peak is below 3x the median sidelobe.
SyncResult synchronize(const ComplexWaveform& w, std::span<const Complex> ref_x,
                       std::span<const Complex> ref_y, int sps = 2);

// ---------------------------------------------------------------------------
// Alamouti 2x2 LMS equalizer with one-tap phase factor

enum class PhaseUpdate {
    Verbatim,   // p1 and p2 both driven by the odd-branch error
    Symmetric,  // p2 driven by the even-branch error
};

struct EqualizerConfig {
    int n_taps = 9;
    double mu = 1e-3;
    double mu_p = 0.1;
    std::size_t n_train = 10000;  // blocks (symbol pairs)
    PhaseUpdate phase_update = PhaseUpdate::Verbatim;

    void validate() const;
};

struct EqualizerState {
    ComplexVec w11, w12, w21, w22;
    Complex p1{1.0, 0.0};
    Complex p2{1.0, 0.0};
    Complex p{1.0, 0.0};

    /// Centre spike on w11, zeros elsewhere, p1 = p2 = p = 1.
    static EqualizerState initial(int n_taps);

    /// Block outputs for the odd input window `uo` and the conjugated even
    /// window `ue`.
    std::array<Complex, 2> outputs(std::span<const Complex> uo, std::span<const Complex> ue) const;

    /// One LMS step with errors e_o, e_e. With both errors zero the state is
    /// left bit-identical.
    void update(std::span<const Complex> uo, std::span<const Complex> ue, Complex e_o,
                Complex e_e, const EqualizerConfig& cfg);
};

struct EqualizerResult {
    ComplexVec symbols;  // recovered stream in transmit order, one per symbol
    EqualizerState state;
    std::vector<double> error_trace;  // |e_o|^2 + |e_e|^2 per block
};

/// Runs the equalizer over a synchronized stream at `sps` (1 or 2) samples
/// per symbol. The first n_train blocks adapt on `training`; later blocks
/// adapt on hard decisions from `c`. Windows wrap around the record.
EqualizerResult alamouti_equalize(std::span<const Complex> received, int sps,
                                  const EqualizerConfig& cfg, std::span<const Complex> training,
                                  const Constellation& c);

/// Conventional single-polarization LMS (one FIR plus one-tap phase), used
/// for the uncoded fading baseline.
EqualizerResult single_pol_equalize(std::span<const Complex> received, int sps,
                                    const EqualizerConfig& cfg,
                                    std::span<const Complex> training, const Constellation& c);

// ---------------------------------------------------------------------------
// Full receiver chain

struct RxOptions {
    /// nullopt: no separate CDC; the equalizer absorbs the dispersion.
    std::optional<CdcConfig> cdc;
    EqualizerConfig eq;
    int rrc_span = 64;
    TxCoding coding = TxCoding::Alamouti;
};

struct SubcarrierResult {
    Bits tx_bits;  // reference data bits in the BER window
    Bits rx_bits;
    ComplexVec rx_symbols;
    ComplexVec ref_symbols;
    bool sync_ok = true;
    std::size_t sync_offset = 0;
    std::vector<double> error_trace;
};

/// Per-subcarrier stream after synchronization, ready for the equalizer.
struct PreparedSubcarrier {
    ComplexWaveform aligned;  // 2 sps, unit mean power
    bool sync_ok = true;
    std::size_t sync_offset = 0;
};

/// gsop -> demux -> matched RRC -> (fd_cdc) -> synchronize.
std::vector<PreparedSubcarrier> rx_front(const ComplexWaveform& detected, const DscmTx& tx,
                                         const RxOptions& opt);

/// equalize -> demap for one prepared subcarrier.
SubcarrierResult rx_back(const PreparedSubcarrier& prepared, const DscmTx& tx, std::size_t sc,
                         const Constellation& c, const RxOptions& opt);

/// rx_front followed by rx_back on every subcarrier. Training symbols (and the preamble) are excluded
/// from the returned bit windows. A sync failure is recorded in the result
/// and processing continues at zero offset.
std::vector<SubcarrierResult> rx_pipeline(const ComplexWaveform& detected, const DscmTx& tx,
                                          const Constellation& c, const RxOptions& opt);

}  // namespace shc
