#ifndef SCCKM_SIM_HPP
#define SCCKM_SIM_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scckm/ofdm.hpp"

namespace scckm {

enum class Scheme { scck2, scck4, scck8, sm_bpsk, sm_4qam };

std::string_view scheme_name(Scheme s);
/// Accepts "scck2", "scck4", "scck8", "sm-bpsk", "sm-4qam". Throws std::invalid_argument otherwise.
Scheme parse_scheme(std::string_view name);
bool is_scck(Scheme s);

/// Information bits per subcarrier for the scheme at n_tx transmit antennas.
int bits_per_subcarrier(Scheme s, std::size_t n_tx);

struct SimConfig {
    Scheme scheme = Scheme::scck2;
    std::size_t n_tx = 2;
    std::size_t n_rx = 2;
    std::vector<double> ebn0_db;
    std::size_t frames = 1000;
    std::size_t symbols_per_frame = 20;
    OfdmParams ofdm{};
    std::size_t taps = 2;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> max_bit_errors;  // early stop, checked at frame boundaries
    unsigned threads = 1;                         // does not affect results

    // Recorded only; the baseband model does not depend on them.
    double carrier_hz = 2e9;
    double bandwidth_hz = 20e6;
    double tx_power_w = 1.0;

    /// Throws std::invalid_argument on any violated invariant.
    void validate() const;

    /// Stable one-line description of everything that affects results,
    /// except the seed.
    std::string canonical() const;
};

struct BerPoint {
    double ebn0_db = 0.0;
    std::uint64_t bits_simulated = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;

    bool operator==(const BerPoint&) const = default;
};

struct PointResult {
    BerPoint point;
    std::size_t frames_run = 0;
    std::size_t degenerate_subcarriers = 0;
};

struct BerCurve {
    std::string config;  // SimConfig::canonical()
    std::uint64_t seed = 0;
    std::vector<BerPoint> points;  // ascending ebn0_db

    bool operator==(const BerCurve&) const = default;
};

/// Monte Carlo BER at one Eb/N0. Use +infinity for a noiseless run.
///
/// Symbol s of frame f always draws channel, bits and noise from the
/// substream (seed, f, s), so results do not depend on config.threads.
PointResult run_point_detailed(const SimConfig& config, double ebn0_db);
BerPoint run_point(const SimConfig& config, double ebn0_db);

/// run_point for every Eb/N0 in config.ebn0_db, in ascending order.
BerCurve run_sweep(const SimConfig& config);

/// Header comments, then `ebn0_db,bits_simulated,bit_errors,ber` rows.
void emit_csv(const BerCurve& curve, std::ostream& out);
/// Throws std::runtime_error if the file cannot be written.
void emit_csv(const BerCurve& curve, const std::filesystem::path& path);

/// Inverse of emit_csv. Throws std::runtime_error on malformed input.
BerCurve parse_csv(std::istream& in);

/// "start:step:stop" (inclusive) or a comma list; "inf" is accepted as an entry.
std::vector<double> parse_ebn0_list(std::string_view text);

/// key=value lines; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_key_value(std::istream& in);

/// Applies recognised keys (scheme, ntx, nrx, ebn0, frames, symbols, seed,
/// taps, nsub, cp, max_bit_errors, threads) onto `config`.
/// Throws std::invalid_argument for unknown keys or bad values.
void apply_config_values(SimConfig& config, const std::map<std::string, std::string>& values);

}  // namespace scckm

#endif  // SCCKM_SIM_HPP
