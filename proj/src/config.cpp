#include "shc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace shc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos == v.size() && std::isfinite(d)) return d;
    } catch (const std::exception&) {
    }
    throw ParameterError("key '" + key + "': '" + v + "' is not a number");
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long n = std::stoll(v, &pos, 0);
        if (pos == v.size()) return n;
    } catch (const std::exception&) {
    }
    throw ParameterError("key '" + key + "': '" + v + "' is not an integer");
}

std::size_t to_count(const std::string& key, const std::string& v) {
    const long long n = to_int(key, v);
    if (n < 0) throw ParameterError("key '" + key + "' must be non-negative");
    return static_cast<std::size_t>(n);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ParameterError("key '" + key + "': '" + v + "' is not a boolean");
}

std::optional<double> to_optional_db(const std::string& key, const std::string& v) {
    if (v == "off" || v == "none" || v == "inf") return std::nullopt;
    return to_double(key, v);
}

// Shortest text that parses back to the same double.
std::string num(double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + f(v[i]);
    return out;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap map;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ParameterError("config line " + std::to_string(lineno) + ": empty key");
        map[key] = trim(line.substr(eq + 1));
    }
    return map;
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(ConfigMap& map, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ParameterError("override '" + assignment + "' is not key=value");
    map[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

ExperimentConfig build_config(const ConfigMap& map) {
    ExperimentConfig c;
    for (const auto& [key, v] : map) {
        if (key == "experiment") c.experiment = v;
        else if (key == "modulation") c.modulation = static_cast<int>(to_int(key, v));
        else if (key == "n_sc") c.n_sc = static_cast<int>(to_int(key, v));
        else if (key == "total_baud") c.total_baud = to_double(key, v);
        else if (key == "beta") c.beta = to_double(key, v);
        else if (key == "sps_out") c.sps_out = static_cast<int>(to_int(key, v));
        else if (key == "rrc_span") c.rrc_span = static_cast<int>(to_int(key, v));
        else if (key == "preamble_symbols") c.preamble_symbols = static_cast<int>(to_int(key, v));
        else if (key == "coding") {
            if (v == "alamouti") c.coding = TxCoding::Alamouti;
            else if (v == "single-pol") c.coding = TxCoding::SinglePol;
            else throw ParameterError("coding must be alamouti or single-pol");
        }
        else if (key == "fiber_km") c.channel.fiber_km = to_double(key, v);
        else if (key == "dispersion_ps_nm_km") c.channel.dispersion_ps_nm_km = to_double(key, v);
        else if (key == "wavelength_nm") c.channel.wavelength_nm = to_double(key, v);
        else if (key == "azimuth_deg") c.channel.azimuth_deg = to_double(key, v);
        else if (key == "elevation_deg") c.channel.elevation_deg = to_double(key, v);
        else if (key == "linewidth_hz") c.channel.linewidth_hz = to_double(key, v);
        else if (key == "osnr_db") c.channel.osnr_db = to_optional_db(key, v);
        else if (key == "rx_snr_db") c.rx_snr_db = to_optional_db(key, v);
        else if (key == "eq.n_taps") c.eq.n_taps = static_cast<int>(to_int(key, v));
        else if (key == "eq.mu") c.eq.mu = to_double(key, v);
        else if (key == "eq.mu_p") c.eq.mu_p = to_double(key, v);
        else if (key == "eq.n_train") c.eq.n_train = to_count(key, v);
        else if (key == "eq.phase_update") {
            if (v == "verbatim") c.eq.phase_update = PhaseUpdate::Verbatim;
            else if (v == "symmetric") c.eq.phase_update = PhaseUpdate::Symmetric;
            else throw ParameterError("eq.phase_update must be verbatim or symmetric");
        }
        else if (key == "cdc") {
            if (v == "none") c.cdc_enabled = false;
            else if (v == "fdcdc") c.cdc_enabled = true;
            else throw ParameterError("cdc must be none or fdcdc");
        }
        else if (key == "cdc.fft_size") c.cdc_fft_size = to_count(key, v);
        else if (key == "cdc.overlap") c.cdc_overlap = v == "auto" ? 0 : to_count(key, v);
        else if (key == "symbols_per_point") c.symbols_per_point = to_count(key, v);
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, v));
        else if (key == "output_path") c.output_path = v;
        else if (key == "pol.step_deg") c.pol_step_deg = to_double(key, v);
        else if (key == "osnr.list") {
            c.osnr_list.clear();
            for (const auto& s : split_list(v)) c.osnr_list.push_back(to_double(key, s));
        }
        else if (key == "osnr.include_noiseless") c.osnr_include_noiseless = to_bool(key, v);
        else if (key == "taps.list") {
            c.tap_list.clear();
            for (const auto& s : split_list(v)) c.tap_list.push_back(static_cast<int>(to_int(key, s)));
        }
        else if (key == "complexity.fft_sizes") {
            c.cdc_fft_sizes.clear();
            for (const auto& s : split_list(v)) c.cdc_fft_sizes.push_back(to_count(key, s));
        }
        else if (key == "complexity.schemes") {
            c.cdc_schemes.clear();
            for (const auto& s : split_list(v)) c.cdc_schemes.push_back(parse_cdc_scheme(s));
        }
        else if (key == "complexity.overlap_preset") c.overlap_preset = v;
        else if (key == "q2.estimator") {
            if (v == "evm") c.q2_estimator = Q2Estimator::Evm;
            else if (v == "ber") c.q2_estimator = Q2Estimator::Ber;
            else throw ParameterError("q2.estimator must be evm or ber");
        }
        else throw ParameterError("unknown config key '" + key + "'");
    }
    c.validate();
    return c;
}

ConfigMap effective_config(const ExperimentConfig& c) {
    ConfigMap m;
    auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string("off"); };
    m["experiment"] = c.experiment;
    m["modulation"] = std::to_string(c.modulation);
    m["n_sc"] = std::to_string(c.n_sc);
    m["total_baud"] = num(c.total_baud);
    m["beta"] = num(c.beta);
    m["sps_out"] = std::to_string(c.sps_out);
    m["rrc_span"] = std::to_string(c.rrc_span);
    m["preamble_symbols"] = std::to_string(c.preamble_symbols);
    m["coding"] = c.coding == TxCoding::Alamouti ? "alamouti" : "single-pol";
    m["fiber_km"] = num(c.channel.fiber_km);
    m["dispersion_ps_nm_km"] = num(c.channel.dispersion_ps_nm_km);
    m["wavelength_nm"] = num(c.channel.wavelength_nm);
    m["azimuth_deg"] = num(c.channel.azimuth_deg);
    m["elevation_deg"] = num(c.channel.elevation_deg);
    m["linewidth_hz"] = num(c.channel.linewidth_hz);
    m["osnr_db"] = opt(c.channel.osnr_db);
    m["rx_snr_db"] = opt(c.rx_snr_db);
    m["eq.n_taps"] = std::to_string(c.eq.n_taps);
    m["eq.mu"] = num(c.eq.mu);
    m["eq.mu_p"] = num(c.eq.mu_p);
    m["eq.n_train"] = std::to_string(c.eq.n_train);
    m["eq.phase_update"] = c.eq.phase_update == PhaseUpdate::Verbatim ? "verbatim" : "symmetric";
    m["cdc"] = c.cdc_enabled ? "fdcdc" : "none";
    m["cdc.fft_size"] = std::to_string(c.cdc_fft_size);
    m["cdc.overlap"] = c.cdc_overlap == 0 ? "auto" : std::to_string(c.cdc_overlap);
    m["symbols_per_point"] = std::to_string(c.symbols_per_point);
    m["seed"] = std::to_string(c.seed);
    m["output_path"] = c.output_path;
    m["pol.step_deg"] = num(c.pol_step_deg);
    m["osnr.list"] = join(c.osnr_list, num);
    m["osnr.include_noiseless"] = c.osnr_include_noiseless ? "true" : "false";
    m["taps.list"] = join(c.tap_list, [](int t) { return std::to_string(t); });
    m["complexity.fft_sizes"] = join(c.cdc_fft_sizes, [](std::size_t n) { return std::to_string(n); });
    m["complexity.schemes"] = join(c.cdc_schemes, [](CdcScheme s) { return to_string(s); });
    m["complexity.overlap_preset"] = c.overlap_preset;
    m["q2.estimator"] = c.q2_estimator == Q2Estimator::Evm ? "evm" : "ber";
    return m;
}

std::string manifest_json(const ExperimentConfig& cfg, const std::string& csv_path) {
    nlohmann::json j;
    j["tool"] = "shc-sim";
    j["version"] = SHC_VERSION;
    j["experiment"] = cfg.experiment;
    j["seed"] = cfg.seed;
    j["output"] = csv_path;
    j["config"] = effective_config(cfg);
    return j.dump(2) + "\n";
}

}  // namespace shc
