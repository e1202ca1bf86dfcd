#include "scckm/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "number_format.hpp"
#include "scckm/cck_codebook.hpp"
#include "scckm/mimo_channel.hpp"
#include "scckm/modem.hpp"
#include "scckm/rng.hpp"

namespace scckm {

namespace {

constexpr std::string_view kCsvHeader = "ebn0_db,bits_simulated,bit_errors,ber";

std::size_t scck_length(Scheme s) {
    switch (s) {
        case Scheme::scck2: return 2;
        case Scheme::scck4: return 4;
        case Scheme::scck8: return 8;
        default: return 0;
    }
}

Constellation sm_constellation(Scheme s) { return s == Scheme::sm_bpsk ? Constellation::bpsk : Constellation::qam4; }

Codebook make_codebook(Scheme s) {
    switch (s) {
        case Scheme::scck2: return cck2_codebook();
        case Scheme::scck4: return cck4_reference_codebook();
        case Scheme::scck8: return cck8_codebook();
        default: throw std::logic_error("no codebook for an SM scheme");
    }
}

// Immutable per-run state shared by all worker threads.
class Link {
public:
    explicit Link(const SimConfig& cfg)
        : cfg_(cfg), bits_per_sub_(scckm::bits_per_subcarrier(cfg.scheme, cfg.n_tx)) {
        if (is_scck(cfg.scheme)) {
            codebook_ = std::make_unique<Codebook>(make_codebook(cfg.scheme));
            detector_ = std::make_unique<ScckDetector>(*codebook_);
        }
    }

    int bits_per_subcarrier() const { return bits_per_sub_; }

    struct FrameTally {
        std::uint64_t errors = 0;
        std::size_t degenerate = 0;
    };

    FrameTally run_frame(std::size_t frame, double n0) const {
        FrameTally tally;
        for (std::size_t s = 0; s < cfg_.symbols_per_frame; ++s) run_symbol(frame, s, n0, tally);
        return tally;
    }

private:
    void run_symbol(std::size_t frame, std::size_t symbol, double n0, FrameTally& tally) const {
        Rng rng = make_substream(cfg_.seed, frame, symbol);
        const auto channel = generate_channel(cfg_.n_tx, cfg_.n_rx, cfg_.taps, rng);

        const auto n_sub = static_cast<Eigen::Index>(cfg_.ofdm.n_sub);
        BitMatrix bits(bits_per_sub_, n_sub);
        std::uint64_t word = 0;
        int left = 0;
        for (Eigen::Index c = 0; c < n_sub; ++c)
            for (Eigen::Index r = 0; r < bits.rows(); ++r) {
                if (left == 0) {
                    word = rng();
                    left = 64;
                }
                bits(r, c) = static_cast<std::uint8_t>(word & 1u);
                word >>= 1;
                --left;
            }

        const SymbolGrid grid = detector_ ? scck_map(bits, *codebook_)
                                          : sm_map(bits, cfg_.n_tx, sm_constellation(cfg_.scheme));
        const Eigen::MatrixXcd tx = ofdm_modulate_grid(grid, cfg_.ofdm);
        const Eigen::MatrixXcd rx = apply_channel(tx, channel, NoiseSpec{n0}, rng);
        const SymbolGrid received = ofdm_demodulate_grid(rx, cfg_.ofdm);
        const auto h = freq_response(channel, cfg_.ofdm);

        const auto result = detector_ ? detect_scck_grid(received, h, *detector_)
                                      : detect_sm_grid(received, h, cfg_.n_tx, sm_constellation(cfg_.scheme));
        tally.errors += count_bit_errors(bits, result.bits);
        tally.degenerate += result.degenerate_subcarriers;
    }

    const SimConfig& cfg_;
    int bits_per_sub_;
    std::unique_ptr<Codebook> codebook_;
    std::unique_ptr<ScckDetector> detector_;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view text) {
    const std::string t = trim(text);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
        throw std::invalid_argument("not a number: '" + t + "'");
    }
    return v;
}

std::uint64_t parse_uint(std::string_view text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
        throw std::invalid_argument("not a non-negative integer: '" + t + "'");
    }
    return v;
}

std::string format_ebn0(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return detail::format_double(v);
}

}  // namespace

std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::scck2: return "scck2";
        case Scheme::scck4: return "scck4";
        case Scheme::scck8: return "scck8";
        case Scheme::sm_bpsk: return "sm-bpsk";
        case Scheme::sm_4qam: return "sm-4qam";
    }
    return "?";
}

Scheme parse_scheme(std::string_view name) {
    for (auto s : {Scheme::scck2, Scheme::scck4, Scheme::scck8, Scheme::sm_bpsk, Scheme::sm_4qam}) {
        if (scheme_name(s) == name) return s;
    }
    throw std::invalid_argument("unknown scheme '" + std::string(name) +
                                "' (expected scck2, scck4, scck8, sm-bpsk or sm-4qam)");
}

bool is_scck(Scheme s) { return scck_length(s) != 0; }

int bits_per_subcarrier(Scheme s, std::size_t n_tx) {
    switch (s) {
        case Scheme::scck2: return 2;
        case Scheme::scck4: return 4;
        case Scheme::scck8: return 8;
        default: return sm_bits_per_subcarrier(n_tx, sm_constellation(s));
    }
}

void SimConfig::validate() const {
    if (is_scck(scheme) && n_tx != scck_length(scheme)) {
        throw std::invalid_argument(std::string(scheme_name(scheme)) + " requires ntx = " +
                                    std::to_string(scck_length(scheme)) + ", got " + std::to_string(n_tx));
    }
    if (!is_scck(scheme)) (void)bits_per_subcarrier(scheme, n_tx);  // power-of-two check
    if (n_rx < 1) throw std::invalid_argument("nrx must be >= 1");
    if (is_scck(scheme) && n_rx < n_tx) throw std::invalid_argument("nrx must be >= ntx for zero forcing");
    if (frames < 1) throw std::invalid_argument("frames must be >= 1");
    if (symbols_per_frame < 1) throw std::invalid_argument("symbols per frame must be >= 1");
    if (ebn0_db.empty()) throw std::invalid_argument("Eb/N0 list is empty");
    for (double v : ebn0_db) {
        if (std::isnan(v) || (std::isinf(v) && v < 0)) throw std::invalid_argument("invalid Eb/N0 value");
    }
    ofdm.validate();
    if (taps < 1) throw std::invalid_argument("taps must be >= 1");
    if (taps > ofdm.cp_len + 1) throw std::invalid_argument("taps must not exceed cp + 1");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (max_bit_errors && *max_bit_errors == 0) throw std::invalid_argument("max_bit_errors must be >= 1");
}

std::string SimConfig::canonical() const {
    std::ostringstream os;
    os << "scheme=" << scheme_name(scheme) << " ntx=" << n_tx << " nrx=" << n_rx << " ebn0=";
    std::vector<double> sorted = ebn0_db;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) os << (i ? "," : "") << format_ebn0(sorted[i]);
    os << " frames=" << frames << " symbols=" << symbols_per_frame << " nsub=" << ofdm.n_sub << " cp=" << ofdm.cp_len
       << " taps=" << taps << " max_bit_errors=" << (max_bit_errors ? std::to_string(*max_bit_errors) : "none")
       << " carrier_hz=" << detail::format_double(carrier_hz) << " bandwidth_hz=" << detail::format_double(bandwidth_hz)
       << " tx_power_w=" << detail::format_double(tx_power_w);
    return os.str();
}

PointResult run_point_detailed(const SimConfig& config, double ebn0_db) {
    config.validate();
    if (std::isnan(ebn0_db) || (std::isinf(ebn0_db) && ebn0_db < 0)) throw std::invalid_argument("invalid Eb/N0");
    const Link link(config);
    const double n0 = noise_n0(ebn0_db, link.bits_per_subcarrier());
    const std::uint64_t bits_per_frame =
        static_cast<std::uint64_t>(config.symbols_per_frame) * config.ofdm.n_sub * link.bits_per_subcarrier();

    const unsigned threads = config.threads;
    const std::size_t batch = threads == 1 ? 1 : static_cast<std::size_t>(threads) * 4;
    std::vector<Link::FrameTally> tallies(batch);

    PointResult result;
    result.point.ebn0_db = ebn0_db;
    std::size_t next = 0;
    bool stop = false;
    while (!stop && next < config.frames) {
        const std::size_t count = std::min(batch, config.frames - next);
        if (threads == 1) {
            tallies[0] = link.run_frame(next, n0);
        } else {
            std::exception_ptr error;
            std::mutex error_mutex;
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t) {
                pool.emplace_back([&, t] {
                    try {
                        for (std::size_t i = t; i < count; i += threads) tallies[i] = link.run_frame(next + i, n0);
                    } catch (...) {
                        const std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            if (error) std::rethrow_exception(error);
        }
        // Ordered reduction: the stopping frame is independent of the thread count.
        for (std::size_t i = 0; i < count; ++i) {
            result.point.bit_errors += tallies[i].errors;
            result.degenerate_subcarriers += tallies[i].degenerate;
            result.point.bits_simulated += bits_per_frame;
            ++result.frames_run;
            if (config.max_bit_errors && result.point.bit_errors >= *config.max_bit_errors) {
                stop = true;
                break;
            }
        }
        next += count;
    }
    result.point.ber = result.point.bits_simulated == 0
                           ? 0.0
                           : static_cast<double>(result.point.bit_errors) /
                                 static_cast<double>(result.point.bits_simulated);
    return result;
}

BerPoint run_point(const SimConfig& config, double ebn0_db) { return run_point_detailed(config, ebn0_db).point; }

BerCurve run_sweep(const SimConfig& config) {
    config.validate();
    BerCurve curve;
    curve.config = config.canonical();
    curve.seed = config.seed;
    std::vector<double> sorted = config.ebn0_db;
    std::sort(sorted.begin(), sorted.end());
    for (double e : sorted) curve.points.push_back(run_point(config, e));
    return curve;
}

void emit_csv(const BerCurve& curve, std::ostream& out) {
    out << "# config: " << curve.config << '\n';
    out << "# seed: " << curve.seed << '\n';
    out << kCsvHeader << '\n';
    for (const auto& p : curve.points) {
        out << format_ebn0(p.ebn0_db) << ',' << p.bits_simulated << ',' << p.bit_errors << ','
            << detail::format_double(p.ber) << '\n';
    }
}

void emit_csv(const BerCurve& curve, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    emit_csv(curve, out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

BerCurve parse_csv(std::istream& in) {
    BerCurve curve;
    std::string line;
    bool header = false;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("csv line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.rfind("# config: ", 0) == 0) {
            curve.config = line.substr(10);
        } else if (line.rfind("# seed: ", 0) == 0) {
            try {
                curve.seed = parse_uint(line.substr(8));
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        } else if (line.empty() || line[0] == '#') {
            continue;
        } else if (!header) {
            if (line != kCsvHeader) fail("unexpected header '" + line + "'");
            header = true;
        } else {
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            if (cells.size() != 4) fail("expected 4 columns");
            try {
                BerPoint p;
                p.ebn0_db = parse_double(cells[0]);
                p.bits_simulated = parse_uint(cells[1]);
                p.bit_errors = parse_uint(cells[2]);
                p.ber = parse_double(cells[3]);
                curve.points.push_back(p);
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        }
    }
    if (!header) throw std::runtime_error("csv: missing header line");
    return curve;
}

std::vector<double> parse_ebn0_list(std::string_view text) {
    const std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("empty Eb/N0 specification");
    std::vector<double> out;
    if (t.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(t);
        std::string part;
        while (std::getline(ss, part, ':')) parts.push_back(part);
        if (parts.size() != 3) throw std::invalid_argument("Eb/N0 range must be start:step:stop");
        const double start = parse_double(parts[0]);
        const double step = parse_double(parts[1]);
        const double stop = parse_double(parts[2]);
        if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) || step <= 0.0 || stop < start) {
            throw std::invalid_argument("Eb/N0 range needs finite start <= stop and step > 0");
        }
        const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (n > 100000) throw std::invalid_argument("Eb/N0 range has too many points");
        for (std::size_t i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
        return out;
    }
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
    return out;
}

std::map<std::string, std::string> parse_key_value(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        }
        out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return out;
}

void apply_config_values(SimConfig& config, const std::map<std::string, std::string>& values) {
    for (const auto& [key, value] : values) {
        if (key == "scheme") {
            config.scheme = parse_scheme(value);
        } else if (key == "ntx") {
            config.n_tx = parse_uint(value);
        } else if (key == "nrx") {
            config.n_rx = parse_uint(value);
        } else if (key == "ebn0") {
            config.ebn0_db = parse_ebn0_list(value);
        } else if (key == "frames") {
            config.frames = parse_uint(value);
        } else if (key == "symbols") {
            config.symbols_per_frame = parse_uint(value);
        } else if (key == "seed") {
            config.seed = parse_uint(value);
        } else if (key == "taps") {
            config.taps = parse_uint(value);
        } else if (key == "nsub") {
            config.ofdm.n_sub = parse_uint(value);
        } else if (key == "cp") {
            config.ofdm.cp_len = parse_uint(value);
        } else if (key == "max_bit_errors") {
            if (value == "none" || value == "0") {
                config.max_bit_errors.reset();
            } else {
                config.max_bit_errors = parse_uint(value);
            }
        } else if (key == "threads") {
            config.threads = static_cast<unsigned>(parse_uint(value));
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
}

}  // namespace scckm
