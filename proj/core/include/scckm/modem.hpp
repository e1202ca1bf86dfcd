#ifndef SCCKM_MODEM_HPP
#define SCCKM_MODEM_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scckm/cck_codebook.hpp"
#include "scckm/ofdm.hpp"

namespace scckm {

/// Information bits for one OFDM symbol: rows = bits per subcarrier,
/// columns = subcarriers. Row 0 is the most significant bit of a column.
using BitMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Reads rows [row_begin, row_begin + count) of column `col` as an integer, MSB first.
std::uint32_t column_pattern(const BitMatrix& bits, Eigen::Index col, Eigen::Index row_begin, Eigen::Index count);

enum class Constellation { bpsk, qam4 };

int bits_per_symbol(Constellation c);

/// Unit-energy points in label order. BPSK: 0 -> +1, 1 -> -1.
/// 4QAM (Gray): label b0b1 -> ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2).
std::span<const std::complex<double>> constellation_points(Constellation c);

/// Bits carried per subcarrier by spatial modulation: log2(n_tx) + log2(|constellation|).
int sm_bits_per_subcarrier(std::size_t n_tx, Constellation c);

struct SmSymbol {
    std::size_t antenna_index = 0;
    std::size_t label = 0;
    std::complex<double> constellation_point;
};

/// Column i of the grid is the codeword for column i of `bits`, scaled by
/// 1/sqrt(N_t) so the total transmit energy per subcarrier is 1.
SymbolGrid scck_map(const BitMatrix& bits, const Codebook& codebook);

/// Leading log2(n_tx) bits pick the active antenna (natural binary), the
/// rest pick the constellation label. Inactive antennas send 0.
SymbolGrid sm_map(const BitMatrix& bits, std::size_t n_tx, Constellation c);

/// SM symbol for one bit pattern of sm_bits_per_subcarrier bits.
SmSymbol sm_symbol(std::uint32_t pattern, std::size_t n_tx, Constellation c);

struct ZfResult {
    Eigen::VectorXcd z;
    bool degenerate = false;  ///< smallest singular value < 1e-10 * largest
};

/// Zero-forcing estimate H^+ r. Square H is inverted, tall H uses the
/// least-squares (Moore-Penrose) solution. Near-singular H falls back to a
/// truncated SVD and is flagged; the estimate is still returned.
ZfResult zf_equalize(const Eigen::Ref<const Eigen::VectorXcd>& received, const Eigen::Ref<const Eigen::MatrixXcd>& h);

struct ScckDecision {
    std::size_t index = 0;      ///< codebook entry
    std::uint32_t bits = 0;     ///< its bit pattern
    double distance2 = 0.0;     ///< squared distance to the normalized entry
};

/// Minimum-distance search over a codebook, against codewords scaled by
/// 1/sqrt(N). Keeps the normalized entries so repeated calls do not rescale.
class ScckDetector {
public:
    explicit ScckDetector(const Codebook& codebook);

    ScckDecision detect(std::span<const std::complex<double>> equalized) const;
    const Codebook& codebook() const { return *codebook_; }

private:
    const Codebook* codebook_;
    std::size_t n_;
    std::vector<std::complex<double>> normalized_;  // entry-major
};

ScckDecision ml_detect_scck(const Eigen::Ref<const Eigen::VectorXcd>& equalized, const Codebook& codebook);

struct SmDecision {
    std::size_t antenna_index = 0;
    std::size_t label = 0;
    std::complex<double> point;
    std::uint32_t bits = 0;
    double distance2 = 0.0;
};

/// Joint ML over (antenna, symbol): argmin ||r - h_a s||^2.
/// Ties go to the lower antenna, then the lower label.
SmDecision ml_detect_sm(const Eigen::Ref<const Eigen::VectorXcd>& received, const Eigen::Ref<const Eigen::MatrixXcd>& h,
                        std::size_t n_tx, Constellation c);

/// Per-subcarrier detection output for one OFDM symbol.
struct DetectionResult {
    std::vector<std::size_t> codeword_index;  ///< SM: antenna * |constellation| + label
    BitMatrix bits;
    std::vector<double> min_distance2;
    std::size_t degenerate_subcarriers = 0;
};

/// ZF followed by ML on every subcarrier of a received grid (n_rx x n_sub).
DetectionResult detect_scck_grid(const SymbolGrid& received, std::span<const Eigen::MatrixXcd> h,
                                 const ScckDetector& detector);

/// Joint ML on every subcarrier of a received grid.
DetectionResult detect_sm_grid(const SymbolGrid& received, std::span<const Eigen::MatrixXcd> h, std::size_t n_tx,
                               Constellation c);

/// Bitwise Hamming distance between two equally-shaped bit matrices.
std::size_t count_bit_errors(const BitMatrix& a, const BitMatrix& b);

}  // namespace scckm

#endif  // SCCKM_MODEM_HPP
