#include "scckm/mimo_channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scckm {

ChannelRealization::ChannelRealization(std::size_t n_rx, std::size_t n_tx, std::size_t p)
    : n_rx_(n_rx), n_tx_(n_tx), p_(p), taps_(n_rx * n_tx * p) {
    if (n_rx == 0 || n_tx == 0 || p == 0) throw std::invalid_argument("channel dimensions must be >= 1");
}

ChannelRealization generate_channel(std::size_t n_tx, std::size_t n_rx, std::size_t p, Rng& rng) {
    if (n_tx == 0 || n_rx == 0 || p == 0) throw std::invalid_argument("generate_channel: counts must be >= 1");
    ChannelRealization ch(n_rx, n_tx, p);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5 / static_cast<double>(p)));
    for (std::size_t m = 0; m < n_rx; ++m)
        for (std::size_t n = 0; n < n_tx; ++n)
            for (std::size_t i = 0; i < p; ++i) {
                const double re = g(rng);
                const double im = g(rng);
                ch.tap(m, n, i) = {re, im};
            }
    return ch;
}

Eigen::MatrixXcd apply_channel(const Eigen::MatrixXcd& tx_samples, const ChannelRealization& channel,
                               const NoiseSpec& noise, Rng& rng) {
    if (static_cast<std::size_t>(tx_samples.rows()) != channel.n_tx()) {
        throw std::invalid_argument("apply_channel: " + std::to_string(tx_samples.rows()) +
                                    " transmit streams for a channel with " + std::to_string(channel.n_tx()) +
                                    " transmit antennas");
    }
    if (noise.n0 < 0.0 || !std::isfinite(noise.n0)) throw std::invalid_argument("apply_channel: invalid noise level");

    const Eigen::Index t_len = tx_samples.cols();
    const auto p = static_cast<Eigen::Index>(channel.taps_per_pair());
    const auto n_rx = static_cast<Eigen::Index>(channel.n_rx());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n_rx, t_len + p - 1);

    for (Eigen::Index m = 0; m < n_rx; ++m) {
        for (Eigen::Index n = 0; n < tx_samples.rows(); ++n) {
            for (Eigen::Index i = 0; i < p; ++i) {
                const auto h = channel.tap(static_cast<std::size_t>(m), static_cast<std::size_t>(n),
                                           static_cast<std::size_t>(i));
                out.row(m).segment(i, t_len) += h * tx_samples.row(n);
            }
        }
    }

    if (noise.n0 > 0.0) {
        std::normal_distribution<double> g(0.0, std::sqrt(noise.variance_per_real_dim()));
        for (Eigen::Index m = 0; m < out.rows(); ++m)
            for (Eigen::Index t = 0; t < out.cols(); ++t) {
                const double re = g(rng);
                const double im = g(rng);
                out(m, t) += std::complex<double>(re, im);
            }
    }
    return out;
}

std::vector<Eigen::MatrixXcd> freq_response(const ChannelRealization& channel, const OfdmParams& params) {
    params.validate();
    const std::size_t p = channel.taps_per_pair();
    if (p > params.cp_len + 1) {
        throw std::domain_error("freq_response: " + std::to_string(p) + " taps exceed cyclic prefix " +
                                std::to_string(params.cp_len) + " + 1");
    }
    const std::size_t n = params.n_sub;
    const auto n_rx = static_cast<Eigen::Index>(channel.n_rx());
    const auto n_tx = static_cast<Eigen::Index>(channel.n_tx());

    std::vector<Eigen::MatrixXcd> out(n, Eigen::MatrixXcd::Zero(n_rx, n_tx));
    std::vector<std::complex<double>> twiddle(p);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < p; ++i) {
            // reduce k*i mod n before scaling so the angle stays exact for large k
            const double turns = static_cast<double>((k * i) % n) / static_cast<double>(n);
            twiddle[i] = std::polar(1.0, -2.0 * std::numbers::pi * turns);
        }
        auto& h = out[k];
        for (Eigen::Index m = 0; m < n_rx; ++m)
            for (Eigen::Index t = 0; t < n_tx; ++t) {
                std::complex<double> acc{};
                for (std::size_t i = 0; i < p; ++i)
                    acc += channel.tap(static_cast<std::size_t>(m), static_cast<std::size_t>(t), i) * twiddle[i];
                h(m, t) = acc;
            }
    }
    return out;
}

std::size_t taps_for_delay_spread(double delay_spread, double sample_period) {
    if (!(sample_period > 0.0) || delay_spread < 0.0) throw std::invalid_argument("invalid delay spread or period");
    return 1 + static_cast<std::size_t>(std::llround(delay_spread / sample_period));
}

double noise_n0(double ebn0_db, double bits_per_subcarrier, double es_total) {
    if (!(bits_per_subcarrier > 0.0)) throw std::invalid_argument("bits per subcarrier must be positive");
    if (std::isinf(ebn0_db) && ebn0_db > 0) return 0.0;
    if (std::isnan(ebn0_db)) throw std::invalid_argument("Eb/N0 is NaN");
    return es_total / (bits_per_subcarrier * std::pow(10.0, ebn0_db / 10.0));
}

}  // namespace scckm
