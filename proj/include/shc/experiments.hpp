#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shc/channel.hpp"
#include "shc/complexity.hpp"
#include "shc/metrics.hpp"
#include "shc/rx.hpp"
#include "shc/tx.hpp"

namespace shc {

enum class Q2Estimator { Ber, Evm };

/// Flat experiment description. Every field maps to one key of the config
/// file (see config.hpp for the key list).
struct ExperimentConfig {
    std::string experiment = "loopback";
    int modulation = 16;
    int n_sc = 4;
    double total_baud = 50e9;
    double beta = 0.1;
    int sps_out = 2;
    int rrc_span = 64;
    int preamble_symbols = 512;
    TxCoding coding = TxCoding::Alamouti;

    ChannelConfig channel;
    std::optional<double> rx_snr_db;

    EqualizerConfig eq;
    bool cdc_enabled = false;
    std::size_t cdc_fft_size = 256;
    std::size_t cdc_overlap = 0;  // 0: derived from the channel

    std::size_t symbols_per_point = 1u << 16;
    std::uint64_t seed = 1;
    std::string output_path;

    // Sweep axes.
    double pol_step_deg = 15.0;
    std::vector<double> osnr_list;        // dB; empty entries are not allowed
    bool osnr_include_noiseless = false;  // appends an OSNR = inf row
    std::vector<int> tap_list;
    std::vector<std::size_t> cdc_fft_sizes{256, 512, 1024, 2048};
    std::vector<CdcScheme> cdc_schemes{CdcScheme::SingleCarrierFdcdc, CdcScheme::DscmFdcdc,
                                       CdcScheme::Proposed};
    std::string overlap_preset = "channel";  // channel | fixed (106 / 8)
    Q2Estimator q2_estimator = Q2Estimator::Evm;

    void validate() const;
};

struct PointResult {
    BerReport ber;
    double evm_db = 0.0;
    std::vector<double> evm_db_per_sc;
    /// Q^2 from the configured estimator; nullopt when undefined (e.g. BER 0
    /// with the BER estimator).
    std::optional<double> q2_db;
    std::size_t sync_failures = 0;
    std::optional<std::string> error;  // non-fatal failure (e.g. divergence)
};

/// Transmit side of one experiment point, reusable across channel settings.
DscmTx make_transmitter(const ExperimentConfig& cfg, std::uint64_t seed);

/// Runs channel + detection + receiver for one point.
PointResult run_point(const ExperimentConfig& cfg, const DscmTx& tx, const ChannelConfig& ch,
                      std::uint64_t seed);

/// Convenience: builds the transmitter and runs one point.
PointResult run_point(const ExperimentConfig& cfg, std::uint64_t seed);

/// Derived per-point seed; stable across runs and worker counts.
std::uint64_t point_seed(std::uint64_t base, std::uint64_t index);

/// Runs `n` independent jobs on up to `workers` threads. Each job writes only
/// its own slot, so results come back in index order.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& job);

/// Worker count from SHC_SIM_WORKERS, defaulting to the hardware concurrency.
unsigned worker_count();

// ---------------------------------------------------------------------------
// Experiments. Each returns the CSV text; the CLI writes it and a manifest.

struct PolSweepSummary {
    double q2_min = 0.0;
    double q2_max = 0.0;
    double q2_spread = 0.0;
    std::size_t points = 0;
    std::size_t failed_points = 0;
};

std::string run_pol_sweep(const ExperimentConfig& cfg, PolSweepSummary* summary = nullptr);

struct OsnrRow {
    std::optional<double> osnr_db;  // nullopt: noise off
    BerReport ber;
    double theory_ber = 0.0;
};

std::vector<OsnrRow> osnr_sweep_rows(const ExperimentConfig& cfg);
std::string osnr_sweep_csv(const ExperimentConfig& cfg, const std::vector<OsnrRow>& rows);
std::string run_osnr_sweep(const ExperimentConfig& cfg);

/// OSNR at which a BER curve first crosses `threshold`, interpolated
/// linearly in (OSNR, log10 BER). nullopt if it never crosses.
std::optional<double> threshold_crossing(const std::vector<double>& osnr_db,
                                         const std::vector<double>& ber, double threshold);

struct TapCurve {
    std::string label;  // e.g. "dscm-fdcdc"
    int n_sc = 4;
    bool cdc = false;
    std::vector<int> taps;
    std::vector<double> ber;
    std::vector<std::size_t> errors;
    std::optional<int> knee;
    double floor = 0.0;
};

/// Smallest tap count whose BER is within 10% of the curve's floor (minimum).
std::optional<int> tap_knee(const std::vector<int>& taps, const std::vector<double>& ber);

std::vector<TapCurve> tap_sweep_curves(const ExperimentConfig& cfg);
std::string tap_sweep_csv(const std::vector<TapCurve>& curves);
std::string run_tap_sweep(const ExperimentConfig& cfg);

std::string run_cdc_complexity(const ExperimentConfig& cfg);

/// Single OBTB-style run at the configured channel; one CSV row per subcarrier
/// plus the aggregate.
std::string run_loopback(const ExperimentConfig& cfg);

/// Dispatches on cfg.experiment.
std::string run_experiment(const ExperimentConfig& cfg);

}  // namespace shc
