#ifndef SCCKM_OFDM_HPP
#define SCCKM_OFDM_HPP

#include <Eigen/Dense>
#include <cstddef>

namespace scckm {

/// OFDM numerology. All subcarriers carry data.
struct OfdmParams {
    std::size_t n_sub = 256;
    std::size_t cp_len = 16;
    double sample_period = 50e-9;  // seconds

    std::size_t symbol_len() const { return n_sub + cp_len; }

    /// Throws std::invalid_argument unless n_sub is a power of two and cp_len < n_sub.
    void validate() const;
};

/// One frequency-domain OFDM symbol across the array: rows = antennas,
/// columns = subcarriers.
using SymbolGrid = Eigen::MatrixXcd;

/// Unitary IDFT of one grid row, prefixed with its last cp_len samples.
Eigen::VectorXcd ofdm_modulate(const Eigen::Ref<const Eigen::VectorXcd>& grid_row, const OfdmParams& params);

/// Drops the cyclic prefix and applies the unitary DFT.
Eigen::VectorXcd ofdm_demodulate(const Eigen::Ref<const Eigen::VectorXcd>& samples, const OfdmParams& params);

/// Row-wise ofdm_modulate over a whole grid (antennas x symbol_len).
Eigen::MatrixXcd ofdm_modulate_grid(const SymbolGrid& grid, const OfdmParams& params);

/// Row-wise ofdm_demodulate. Samples beyond symbol_len() in each row
/// (e.g. the channel's convolution tail) are ignored.
SymbolGrid ofdm_demodulate_grid(const Eigen::MatrixXcd& samples, const OfdmParams& params);

}  // namespace scckm

#endif  // SCCKM_OFDM_HPP
