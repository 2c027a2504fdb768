#pragma once

#include <map>
#include <string>
#include <vector>

#include "shc/experiments.hpp"

namespace shc {

/// Flat `key = value` text. `#` starts a comment; blank lines are ignored.
///
/// Keys:
///   experiment modulation n_sc total_baud beta sps_out rrc_span
///   preamble_symbols coding(alamouti|single-pol)
///   fiber_km dispersion_ps_nm_km wavelength_nm azimuth_deg elevation_deg
///   linewidth_hz osnr_db(<dB>|off) rx_snr_db(<dB>|off)
///   eq.n_taps eq.mu eq.mu_p eq.n_train eq.phase_update(verbatim|symmetric)
///   cdc(none|fdcdc) cdc.fft_size cdc.overlap(auto|<n>)
///   symbols_per_point seed output_path
///   pol.step_deg osnr.list osnr.include_noiseless taps.list
///   complexity.fft_sizes complexity.schemes complexity.overlap_preset(channel|fixed)
///   q2.estimator(evm|ber)
/// Lists are comma separated.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);

/// Applies one `key=value` override.
void apply_override(ConfigMap& map, const std::string& assignment);

/// Builds a validated config. Unknown keys are a ParameterError.
ExperimentConfig build_config(const ConfigMap& map);

/// Every key with its effective value, in key order.
ConfigMap effective_config(const ExperimentConfig& cfg);

/// JSON manifest: effective config, seed, version and the output path.
std::string manifest_json(const ExperimentConfig& cfg, const std::string& csv_path);

}  // namespace shc
