#include "scckm/modem.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace scckm {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

const std::array<std::complex<double>, 2> kBpsk = {{{1.0, 0.0}, {-1.0, 0.0}}};
const std::array<std::complex<double>, 4> kQam4 = {{
    {kInvSqrt2, kInvSqrt2},
    {kInvSqrt2, -kInvSqrt2},
    {-kInvSqrt2, kInvSqrt2},
    {-kInvSqrt2, -kInvSqrt2},
}};

constexpr double kDegenerateRatio = 1e-10;
// Pivoted-QR diagonal ratio below which the SVD decides degeneracy.
constexpr double kQrSuspectRatio = 1e-6;

int log2_exact(std::size_t v) {
    if (v == 0 || !std::has_single_bit(v)) {
        throw std::invalid_argument("expected a power of two, got " + std::to_string(v));
    }
    return std::countr_zero(v);
}

void write_pattern(BitMatrix& bits, Eigen::Index col, std::uint32_t pattern) {
    const Eigen::Index m = bits.rows();
    for (Eigen::Index r = 0; r < m; ++r) bits(r, col) = static_cast<std::uint8_t>((pattern >> (m - 1 - r)) & 1u);
}

}  // namespace

std::uint32_t column_pattern(const BitMatrix& bits, Eigen::Index col, Eigen::Index row_begin, Eigen::Index count) {
    std::uint32_t v = 0;
    for (Eigen::Index r = row_begin; r < row_begin + count; ++r) v = (v << 1) | (bits(r, col) & 1u);
    return v;
}

int bits_per_symbol(Constellation c) { return c == Constellation::bpsk ? 1 : 2; }

std::span<const std::complex<double>> constellation_points(Constellation c) {
    if (c == Constellation::bpsk) return kBpsk;
    return kQam4;
}

int sm_bits_per_subcarrier(std::size_t n_tx, Constellation c) { return log2_exact(n_tx) + bits_per_symbol(c); }

SymbolGrid scck_map(const BitMatrix& bits, const Codebook& codebook) {
    if (bits.rows() != codebook.bits_per_codeword()) {
        throw std::invalid_argument("scck_map: " + std::to_string(bits.rows()) + " bit rows for a " +
                                    std::to_string(codebook.bits_per_codeword()) + "-bit codebook");
    }
    const auto n_t = static_cast<Eigen::Index>(codebook.length_n());
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_t));
    SymbolGrid grid(n_t, bits.cols());
    for (Eigen::Index col = 0; col < bits.cols(); ++col) {
        const auto& word = codebook.encode(column_pattern(bits, col, 0, bits.rows()));
        for (Eigen::Index a = 0; a < n_t; ++a) grid(a, col) = word[static_cast<std::size_t>(a)] * scale;
    }
    return grid;
}

SmSymbol sm_symbol(std::uint32_t pattern, std::size_t n_tx, Constellation c) {
    const int antenna_bits = log2_exact(n_tx);
    const int symbol_bits = bits_per_symbol(c);
    if (pattern >> (antenna_bits + symbol_bits)) throw std::invalid_argument("sm_symbol: pattern too wide");
    SmSymbol s;
    s.antenna_index = pattern >> symbol_bits;
    s.label = pattern & ((1u << symbol_bits) - 1u);
    s.constellation_point = constellation_points(c)[s.label];
    return s;
}

SymbolGrid sm_map(const BitMatrix& bits, std::size_t n_tx, Constellation c) {
    const int m = sm_bits_per_subcarrier(n_tx, c);
    if (bits.rows() != m) {
        throw std::invalid_argument("sm_map: expected " + std::to_string(m) + " bit rows, got " +
                                    std::to_string(bits.rows()));
    }
    SymbolGrid grid = SymbolGrid::Zero(static_cast<Eigen::Index>(n_tx), bits.cols());
    for (Eigen::Index col = 0; col < bits.cols(); ++col) {
        const auto s = sm_symbol(column_pattern(bits, col, 0, m), n_tx, c);
        grid(static_cast<Eigen::Index>(s.antenna_index), col) = s.constellation_point;
    }
    return grid;
}

ZfResult zf_equalize(const Eigen::Ref<const Eigen::VectorXcd>& received, const Eigen::Ref<const Eigen::MatrixXcd>& h) {
    if (h.rows() != received.size()) throw std::invalid_argument("zf_equalize: received length != channel rows");
    if (h.rows() < h.cols()) throw std::invalid_argument("zf_equalize: needs at least as many rx as tx antennas");

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(h);
    const auto diag = qr.matrixR().diagonal().cwiseAbs();
    const double largest = diag.maxCoeff();
    if (largest > 0.0 && diag.minCoeff() >= kQrSuspectRatio * largest) {
        return {qr.solve(received), false};
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const bool degenerate = sv.size() == 0 || sv(sv.size() - 1) < kDegenerateRatio * sv(0);
    svd.setThreshold(kDegenerateRatio);
    return {svd.solve(received), degenerate};
}

ScckDetector::ScckDetector(const Codebook& codebook)
    : codebook_(&codebook), n_(codebook.length_n()), normalized_(codebook.size() * codebook.length_n()) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (std::size_t e = 0; e < codebook.size(); ++e)
        for (std::size_t c = 0; c < n_; ++c) normalized_[e * n_ + c] = codebook.entry(e)[c] * scale;
}

ScckDecision ScckDetector::detect(std::span<const std::complex<double>> equalized) const {
    if (equalized.size() != n_) throw std::invalid_argument("ml_detect_scck: equalized length != codeword length");
    ScckDecision best;
    best.distance2 = std::numeric_limits<double>::infinity();
    const std::size_t entries = codebook_->size();
    for (std::size_t e = 0; e < entries; ++e) {
        const auto* w = &normalized_[e * n_];
        double d = 0.0;
        for (std::size_t c = 0; c < n_; ++c) d += std::norm(equalized[c] - w[c]);
        if (d < best.distance2) {
            best.distance2 = d;
            best.index = e;
        }
    }
    best.bits = codebook_->pattern_for_entry(best.index);
    return best;
}

ScckDecision ml_detect_scck(const Eigen::Ref<const Eigen::VectorXcd>& equalized, const Codebook& codebook) {
    const Eigen::VectorXcd z = equalized;
    return ScckDetector(codebook).detect({z.data(), static_cast<std::size_t>(z.size())});
}

SmDecision ml_detect_sm(const Eigen::Ref<const Eigen::VectorXcd>& received, const Eigen::Ref<const Eigen::MatrixXcd>& h,
                        std::size_t n_tx, Constellation c) {
    if (static_cast<std::size_t>(h.cols()) != n_tx || h.rows() != received.size()) {
        throw std::invalid_argument("ml_detect_sm: channel dimensions do not match");
    }
    const auto points = constellation_points(c);
    const int symbol_bits = bits_per_symbol(c);
    SmDecision best;
    best.distance2 = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n_tx; ++a) {
        const auto col = h.col(static_cast<Eigen::Index>(a));
        for (std::size_t l = 0; l < points.size(); ++l) {
            const double d = (received - col * points[l]).squaredNorm();
            if (d < best.distance2) {
                best.distance2 = d;
                best.antenna_index = a;
                best.label = l;
            }
        }
    }
    best.point = points[best.label];
    best.bits = static_cast<std::uint32_t>((best.antenna_index << symbol_bits) | best.label);
    return best;
}

DetectionResult detect_scck_grid(const SymbolGrid& received, std::span<const Eigen::MatrixXcd> h,
                                 const ScckDetector& detector) {
    const auto n_sub = static_cast<std::size_t>(received.cols());
    if (h.size() != n_sub) throw std::invalid_argument("detect_scck_grid: one channel matrix per subcarrier required");
    const int m = detector.codebook().bits_per_codeword();
    DetectionResult out;
    out.codeword_index.resize(n_sub);
    out.min_distance2.resize(n_sub);
    out.bits.resize(m, received.cols());
    for (std::size_t k = 0; k < n_sub; ++k) {
        const auto zf = zf_equalize(received.col(static_cast<Eigen::Index>(k)), h[k]);
        if (zf.degenerate) ++out.degenerate_subcarriers;
        const auto d = detector.detect({zf.z.data(), static_cast<std::size_t>(zf.z.size())});
        out.codeword_index[k] = d.index;
        out.min_distance2[k] = d.distance2;
        write_pattern(out.bits, static_cast<Eigen::Index>(k), d.bits);
    }
    return out;
}

DetectionResult detect_sm_grid(const SymbolGrid& received, std::span<const Eigen::MatrixXcd> h, std::size_t n_tx,
                               Constellation c) {
    const auto n_sub = static_cast<std::size_t>(received.cols());
    if (h.size() != n_sub) throw std::invalid_argument("detect_sm_grid: one channel matrix per subcarrier required");
    const int m = sm_bits_per_subcarrier(n_tx, c);
    const auto labels = constellation_points(c).size();
    DetectionResult out;
    out.codeword_index.resize(n_sub);
    out.min_distance2.resize(n_sub);
    out.bits.resize(m, received.cols());
    for (std::size_t k = 0; k < n_sub; ++k) {
        const auto d = ml_detect_sm(received.col(static_cast<Eigen::Index>(k)), h[k], n_tx, c);
        out.codeword_index[k] = d.antenna_index * labels + d.label;
        out.min_distance2[k] = d.distance2;
        write_pattern(out.bits, static_cast<Eigen::Index>(k), d.bits);
    }
    return out;
}

std::size_t count_bit_errors(const BitMatrix& a, const BitMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("count_bit_errors: shape mismatch");
    return static_cast<std::size_t>((a.array() != b.array()).count());
}

}  // namespace scckm
