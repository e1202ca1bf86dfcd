#ifndef SCCKM_MIMO_CHANNEL_HPP
#define SCCKM_MIMO_CHANNEL_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "scckm/ofdm.hpp"
#include "scckm/rng.hpp"

namespace scckm {

/// Tap-domain MIMO channel: p complex taps per (rx, tx) pair.
class ChannelRealization {
public:
    ChannelRealization(std::size_t n_rx, std::size_t n_tx, std::size_t p);

    std::size_t n_rx() const { return n_rx_; }
    std::size_t n_tx() const { return n_tx_; }
    std::size_t taps_per_pair() const { return p_; }

    std::complex<double>& tap(std::size_t rx, std::size_t tx, std::size_t i) { return taps_[(rx * n_tx_ + tx) * p_ + i]; }
    const std::complex<double>& tap(std::size_t rx, std::size_t tx, std::size_t i) const {
        return taps_[(rx * n_tx_ + tx) * p_ + i];
    }

    /// Flat view in (rx, tx, tap) row-major order.
    const std::vector<std::complex<double>>& taps() const { return taps_; }

private:
    std::size_t n_rx_;
    std::size_t n_tx_;
    std::size_t p_;
    std::vector<std::complex<double>> taps_;
};

/// Complex AWGN with E|n|^2 = n0 per sample (n0 / 2 per real dimension).
struct NoiseSpec {
    double n0 = 0.0;

    double variance_per_real_dim() const { return n0 / 2.0; }
};

/// i.i.d. CN(0, 1/p) taps for every (rx, tx, tap).
/// Throws std::invalid_argument if any count is zero.
ChannelRealization generate_channel(std::size_t n_tx, std::size_t n_rx, std::size_t p, Rng& rng);

/// Linear convolution of each transmit stream with its tap vectors, summed
/// per receive antenna, plus AWGN. Input n_tx x T, output n_rx x (T + p - 1).
/// No noise is drawn when n0 == 0.
Eigen::MatrixXcd apply_channel(const Eigen::MatrixXcd& tx_samples, const ChannelRealization& channel,
                               const NoiseSpec& noise, Rng& rng);

/// Per-subcarrier response H(k)[rx, tx] = sum_i tap(rx, tx, i) e^{-j 2pi k i / n_sub}.
/// Throws std::domain_error when p > cp_len + 1 (the prefix cannot absorb the ISI).
std::vector<Eigen::MatrixXcd> freq_response(const ChannelRealization& channel, const OfdmParams& params);

/// One tap per sample-spaced path: 1 + round(delay_spread / sample_period).
std::size_t taps_for_delay_spread(double delay_spread, double sample_period);

/// N0 for a given Eb/N0 (dB), information bits per subcarrier and total
/// transmit energy per subcarrier. +inf dB gives 0.
double noise_n0(double ebn0_db, double bits_per_subcarrier, double es_total = 1.0);

}  // namespace scckm

#endif  // SCCKM_MIMO_CHANNEL_HPP
