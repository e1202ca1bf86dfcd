#include <benchmark/benchmark.h>

#include <limits>
#include <random>

#include "scckm/mimo_channel.hpp"
#include "scckm/modem.hpp"
#include "scckm/ofdm.hpp"
#include "scckm/sim.hpp"

using namespace scckm;

namespace {

Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd m(rows, cols);
    for (auto& v : m.reshaped()) v = cplx(g(rng), g(rng));
    return m;
}

Codebook codebook_for(int bits) {
    switch (bits) {
        case 2: return cck2_codebook();
        case 4: return cck4_reference_codebook();
        default: return cck8_codebook();
    }
}

void BM_MlDetectScck(benchmark::State& state) {
    const auto cb = codebook_for(static_cast<int>(state.range(0)));
    const ScckDetector det(cb);
    std::mt19937_64 rng(1);
    const Eigen::VectorXcd z = random_matrix(static_cast<Eigen::Index>(cb.length_n()), 1, rng);
    for (auto _ : state) benchmark::DoNotOptimize(det.detect({z.data(), static_cast<std::size_t>(z.size())}));
}
BENCHMARK(BM_MlDetectScck)->Arg(2)->Arg(4)->Arg(8);

void BM_MlDetectSm(benchmark::State& state) {
    const auto n_tx = static_cast<std::size_t>(state.range(0));
    std::mt19937_64 rng(2);
    const auto h = random_matrix(static_cast<Eigen::Index>(2 * n_tx), static_cast<Eigen::Index>(n_tx), rng);
    const Eigen::VectorXcd r = random_matrix(h.rows(), 1, rng);
    for (auto _ : state) benchmark::DoNotOptimize(ml_detect_sm(r, h, n_tx, Constellation::qam4));
}
BENCHMARK(BM_MlDetectSm)->Arg(2)->Arg(4)->Arg(8);

void BM_ZeroForcing(benchmark::State& state) {
    const auto n_tx = state.range(0);
    std::mt19937_64 rng(3);
    const auto h = random_matrix(2 * n_tx, n_tx, rng);
    const Eigen::VectorXcd r = random_matrix(2 * n_tx, 1, rng);
    for (auto _ : state) benchmark::DoNotOptimize(zf_equalize(r, h));
}
BENCHMARK(BM_ZeroForcing)->Arg(2)->Arg(4)->Arg(8);

void BM_OfdmModulate(benchmark::State& state) {
    const OfdmParams p{static_cast<std::size_t>(state.range(0)), 16};
    std::mt19937_64 rng(4);
    const Eigen::VectorXcd x = random_matrix(state.range(0), 1, rng);
    for (auto _ : state) benchmark::DoNotOptimize(ofdm_modulate(x, p));
}
BENCHMARK(BM_OfdmModulate)->Arg(64)->Arg(256)->Arg(1024);

// One 20-symbol frame per iteration, Eb/N0 10 dB, twice as many rx as tx antennas.
void BM_SimulateFrame(benchmark::State& state) {
    const auto n_tx = static_cast<std::size_t>(state.range(0));
    SimConfig c;
    c.scheme = n_tx == 2 ? Scheme::scck2 : n_tx == 4 ? Scheme::scck4 : Scheme::scck8;
    c.n_tx = n_tx;
    c.n_rx = 2 * n_tx;
    c.frames = 1;
    c.ebn0_db = {10.0};
    for (auto _ : state) benchmark::DoNotOptimize(run_point(c, 10.0));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.symbols_per_frame));
}
BENCHMARK(BM_SimulateFrame)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
