// shc-sim <experiment> --config <path> [--set key=value ...] --out <csv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shc/config.hpp"

namespace {

std::string one_line(std::string s) {
    for (auto& ch : s)
        if (ch == '\n' || ch == '\r') ch = ' ';
    return s;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw shc::ParameterError("cannot write '" + path + "'");
    out << text;
    if (!out) throw shc::ParameterError("write to '" + path + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-homodyne Alamouti/DSCM link simulator"};
    app.set_version_flag("--version", std::string(SHC_VERSION));
    std::string experiment, config_path, out_path;
    std::vector<std::string> overrides;
    app.add_option("experiment", experiment, "pol-sweep | osnr-sweep | tap-sweep | cdc-complexity | loopback")
        ->required();
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--set", overrides, "override one key (repeatable)")->take_all();
    app.add_option("--out", out_path, "CSV output path (default: output_path key, else stdout)");
    CLI11_PARSE(app, argc, argv);

    try {
        shc::ConfigMap map;
        if (!config_path.empty()) map = shc::load_config_file(config_path);
        for (const auto& o : overrides) shc::apply_override(map, o);
        map["experiment"] = experiment;
        if (!out_path.empty()) map["output_path"] = out_path;

        const auto cfg = shc::build_config(map);
        const auto csv = shc::run_experiment(cfg);
        if (cfg.output_path.empty() || cfg.output_path == "-") {
            std::cout << csv;
        } else {
            write_file(cfg.output_path, csv);
            write_file(cfg.output_path + ".manifest.json", shc::manifest_json(cfg, cfg.output_path));
        }
        return 0;
    } catch (const shc::Error& e) {
        std::cerr << "error: kind=" << e.kind() << " message=" << one_line(e.what()) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: kind=internal message=" << one_line(e.what()) << "\n";
        return 3;
    }
}
