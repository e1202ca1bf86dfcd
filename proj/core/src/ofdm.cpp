#include "scckm/ofdm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unsupported/Eigen/FFT>

namespace scckm {

namespace {

// kissfft plans are cached per object; one per thread keeps calls reentrant.
Eigen::FFT<double>& thread_fft() {
    thread_local Eigen::FFT<double> fft = [] {
        Eigen::FFT<double> f;
        f.SetFlag(Eigen::FFT<double>::Unscaled);
        return f;
    }();
    return fft;
}

}  // namespace

void OfdmParams::validate() const {
    if (n_sub == 0 || (n_sub & (n_sub - 1)) != 0) {
        throw std::invalid_argument("n_sub must be a power of two, got " + std::to_string(n_sub));
    }
    if (cp_len >= n_sub) throw std::invalid_argument("cp_len must be smaller than n_sub");
    if (!(sample_period > 0.0)) throw std::invalid_argument("sample_period must be positive");
}

Eigen::VectorXcd ofdm_modulate(const Eigen::Ref<const Eigen::VectorXcd>& grid_row, const OfdmParams& params) {
    params.validate();
    const auto n = static_cast<Eigen::Index>(params.n_sub);
    const auto cp = static_cast<Eigen::Index>(params.cp_len);
    if (grid_row.size() != n) {
        throw std::invalid_argument("ofdm_modulate: expected " + std::to_string(n) + " subcarriers, got " +
                                    std::to_string(grid_row.size()));
    }
    Eigen::VectorXcd in = grid_row;
    Eigen::VectorXcd time(n);
    thread_fft().inv(time, in);
    time /= std::sqrt(static_cast<double>(n));

    Eigen::VectorXcd out(n + cp);
    out.head(cp) = time.tail(cp);
    out.tail(n) = time;
    return out;
}

Eigen::VectorXcd ofdm_demodulate(const Eigen::Ref<const Eigen::VectorXcd>& samples, const OfdmParams& params) {
    params.validate();
    const auto n = static_cast<Eigen::Index>(params.n_sub);
    const auto cp = static_cast<Eigen::Index>(params.cp_len);
    if (samples.size() != n + cp) {
        throw std::invalid_argument("ofdm_demodulate: expected " + std::to_string(n + cp) + " samples, got " +
                                    std::to_string(samples.size()));
    }
    Eigen::VectorXcd body = samples.segment(cp, n);
    Eigen::VectorXcd freq(n);
    thread_fft().fwd(freq, body);
    freq /= std::sqrt(static_cast<double>(n));
    return freq;
}

Eigen::MatrixXcd ofdm_modulate_grid(const SymbolGrid& grid, const OfdmParams& params) {
    Eigen::MatrixXcd out(grid.rows(), static_cast<Eigen::Index>(params.symbol_len()));
    for (Eigen::Index r = 0; r < grid.rows(); ++r) out.row(r) = ofdm_modulate(grid.row(r).transpose(), params);
    return out;
}

SymbolGrid ofdm_demodulate_grid(const Eigen::MatrixXcd& samples, const OfdmParams& params) {
    const auto len = static_cast<Eigen::Index>(params.symbol_len());
    if (samples.cols() < len) throw std::invalid_argument("ofdm_demodulate_grid: rows shorter than one symbol");
    SymbolGrid out(samples.rows(), static_cast<Eigen::Index>(params.n_sub));
    for (Eigen::Index r = 0; r < samples.rows(); ++r) {
        out.row(r) = ofdm_demodulate(samples.row(r).head(len).transpose(), params);
    }
    return out;
}

}  // namespace scckm
