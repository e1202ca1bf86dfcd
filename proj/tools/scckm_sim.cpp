// Command-line BER sweep and codebook export.
//
//   scckm_sim --scheme scck4 --ntx 4 --nrx 8 --ebn0 0:1:10 --frames 1000 --out ber.csv
//   scckm_sim --config run.cfg --seed 7
//   scckm_sim codebook --bits 8 --out cck8.csv

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "scckm/cck_codebook.hpp"
#include "scckm/sim.hpp"

namespace {

int export_codebook(int bits, const std::string& out_path) {
    scckm::Codebook cb = [&] {
        switch (bits) {
            case 2: return scckm::cck2_codebook();
            case 4: return scckm::cck4_reference_codebook();
            case 8: return scckm::cck8_codebook();
            default: throw std::invalid_argument("--bits must be 2, 4 or 8");
        }
    }();
    if (out_path.empty() || out_path == "-") {
        scckm::write_codebook_csv(cb, std::cout);
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    scckm::write_codebook_csv(cb, out);
    if (!out.flush()) throw std::runtime_error("failed writing '" + out_path + "'");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo BER simulator for spatial CCK modulation and spatial modulation over MIMO-OFDM"};
    app.require_subcommand(0, 1);

    std::string config_file;
    std::string out_path;
    bool quiet = false;
    // Flag values are collected as key=value text so they go through the same
    // parser as the config file and override it.
    std::map<std::string, std::string> flags;
    struct FlagSpec {
        const char* name;
        const char* key;
        const char* help;
    };
    const FlagSpec specs[] = {
        {"--scheme", "scheme", "scck2 | scck4 | scck8 | sm-bpsk | sm-4qam"},
        {"--ntx", "ntx", "transmit antennas"},
        {"--nrx", "nrx", "receive antennas"},
        {"--ebn0", "ebn0", "Eb/N0 in dB: start:step:stop or a comma list (inf = noiseless)"},
        {"--frames", "frames", "frames per Eb/N0 point (default 1000)"},
        {"--symbols", "symbols", "OFDM symbols per frame (default 20)"},
        {"--seed", "seed", "64-bit master seed (default 1)"},
        {"--taps", "taps", "channel taps per antenna pair (default 2)"},
        {"--nsub", "nsub", "subcarriers (default 256)"},
        {"--cp", "cp", "cyclic prefix length (default 16)"},
        {"--max-errors", "max_bit_errors", "stop a point once this many bit errors are counted"},
        {"--threads", "threads", "worker threads (results do not depend on it)"},
    };
    std::map<std::string, std::string> raw;
    for (const auto& s : specs) app.add_option(s.name, raw[s.key], s.help);
    app.add_option("--config", config_file, "key=value file; command-line flags take precedence");
    app.add_option("--out", out_path, "CSV destination (default stdout)");
    app.add_flag("--quiet", quiet, "no progress on stderr");

    auto* codebook_cmd = app.add_subcommand("codebook", "export a CCK codebook as CSV");
    int codebook_bits = 8;
    std::string codebook_out;
    codebook_cmd->add_option("--bits", codebook_bits, "2, 4 or 8")->required();
    codebook_cmd->add_option("--out", codebook_out, "CSV destination (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*codebook_cmd) return export_codebook(codebook_bits, codebook_out);

        scckm::SimConfig config;
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in) throw std::runtime_error("cannot read config file '" + config_file + "'");
            scckm::apply_config_values(config, scckm::parse_key_value(in));
        }
        for (const auto& s : specs) {
            if (app.count(s.name) > 0) flags[s.key] = raw[s.key];
        }
        scckm::apply_config_values(config, flags);
        config.validate();

        scckm::BerCurve curve;
        curve.config = config.canonical();
        curve.seed = config.seed;
        std::vector<double> points = config.ebn0_db;
        std::sort(points.begin(), points.end());
        for (double e : points) {
            const auto r = scckm::run_point_detailed(config, e);
            if (!quiet) {
                std::cerr << scckm::scheme_name(config.scheme) << ' ' << config.n_tx << 'x' << config.n_rx
                          << " Eb/N0=" << e << " dB: " << r.point.bit_errors << '/' << r.point.bits_simulated
                          << " BER=" << r.point.ber << " (" << r.frames_run << " frames)\n";
            }
            curve.points.push_back(r.point);
        }

        if (out_path.empty() || out_path == "-") {
            scckm::emit_csv(curve, std::cout);
        } else {
            scckm::emit_csv(curve, std::filesystem::path(out_path));
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "scckm_sim: " << e.what() << '\n';
        return 2;
    }
}
