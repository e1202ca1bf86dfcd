// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fail.
//
//   scckm_acceptance            run everything
//   scckm_acceptance 3 8b       run a selection

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "reference_tables.hpp"
#include "scckm/cck_codebook.hpp"
#include "scckm/mimo_channel.hpp"
#include "scckm/modem.hpp"
#include "scckm/sim.hpp"

using namespace scckm;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<std::vector<cplx>> chips_of(const Codebook& cb) {
    std::vector<std::vector<cplx>> out;
    for (const auto& w : cb.entries()) out.push_back(w.chips);
    return out;
}

Outcome codebook_exactness() {
    bool ok = true;
    const auto cb2 = cck2_codebook();
    ok &= cb2.size() == 4;
    for (std::uint32_t p = 0; p < 4; ++p)
        for (int c = 0; c < 2; ++c) ok &= cb2.encode(p)[c] == cplx(reference::kCck2[p][c], 0.0);

    const auto w8 = cck8_codeword(std::string_view(reference::kCck8ExampleBits));
    bool ok8 = true;
    for (int c = 0; c < 8; ++c) ok8 &= w8[c] == reference::kCck8ExampleWord[c];

    const auto cb4 = cck4_reference_codebook();
    double worst = 0.0, worst_tabulated = 0.0;
    const auto corrected = reference::cck4_corrected();
    for (std::uint32_t r = 0; r < 16; ++r)
        for (int c = 0; c < 4; ++c) {
            worst = std::max(worst, std::abs(cb4.encode(r)[c] - corrected[r][c]));
            worst_tabulated = std::max(worst_tabulated, std::abs(cb4.encode(r)[c] - reference::kCck4Tabulated[r][c]));
        }
    const bool ok4 = worst <= 1e-3;
    return {ok && ok8 && ok4,
            fmt("2-bit table %s, 8-bit example %s, 4-bit matrix max chip error %.2e "
                "(%.3f against the tabulated -0.5+0.886i cell, which is off the unit circle)",
                ok ? "exact" : "MISMATCH", ok8 ? "exact" : "MISMATCH", worst, worst_tabulated)};
}

Outcome complementary() {
    bool ok = true;
    for (int k = 1; k <= 6; ++k) {
        const auto [a, b] = golay_pair(k);
        const auto ra = oracle::autocorrelation(a.elements);
        const auto rb = oracle::autocorrelation(b.elements);
        ok &= ra[0] + rb[0] == static_cast<long long>(2 * a.size());
        for (std::size_t s = 1; s < ra.size(); ++s) ok &= ra[s] + rb[s] == 0;
    }
    return {ok, "autocorrelation-sum sidelobes for k = 1..6"};
}

Outcome orthogonality() {
    const auto cb = cck8_codebook();
    const auto found = find_orthogonal_cck8_coset(cb, 64, 1e-9);
    std::size_t largest = 0;
    for (int q = 0; q < 4; ++q) {
        std::vector<Codeword> words;
        for (auto i : cck8_phi1_coset(q)) words.push_back(cb.entry(i));
        largest = std::max(largest, largest_orthogonal_subset(words, 1e-9).size());
    }
    return {found.has_value(),
            fmt("64 mutually orthogonal codewords %s; largest orthogonal set inside a fixed-phi1 coset has %zu "
                "(length-8 vectors span at most 8 orthogonal directions)",
                found ? "found" : "not found", largest)};
}

Outcome distance_oracle() {
    const double b2 = oracle::brute_min_distance(chips_of(cck2_codebook()));
    const double b8 = oracle::brute_min_distance(chips_of(cck8_codebook()));
    const double b4 = oracle::brute_min_distance(chips_of(cck4_reference_codebook()));
    const double c2 = dmin_closed_form(2, 2), c8 = dmin_closed_form(8, 4);
    const bool ok = std::abs(b2 - c2) <= 1e-9 && std::abs(b8 - c8) <= 1e-9 && std::abs(c2 - 2.0) <= 1e-9 &&
                    std::abs(c8 - 2.0 * std::numbers::sqrt2) <= 1e-9 && b8 > b2 && b8 > b4;
    return {ok, fmt("brute (2,2)=%.12f closed=%.12f; brute (8,4)=%.12f closed=%.12f; 4-bit codebook min %.6f", b2, c2,
                    b8, c8, b4)};
}

Outcome subset_bar() {
    const auto words = cck4_enumerate();
    const double bar = oracle::brute_min_distance(chips_of(cck4_reference_codebook()));
    std::mt19937_64 rng(1);
    const auto cb = select_cck4_subset(words, 10000, rng);
    const double got = oracle::brute_min_distance(chips_of(cb));
    return {got >= bar - 1e-12, fmt("10^4 subsets: selected min distance %.6f, reference bar %.6f", got, bar)};
}

SimConfig base_config(Scheme s, std::size_t n_tx, std::size_t n_rx) {
    SimConfig c;
    c.scheme = s;
    c.n_tx = n_tx;
    c.n_rx = n_rx;
    c.threads = std::max(1u, std::thread::hardware_concurrency());
    return c;
}

Scheme scck_for(std::size_t n_tx) { return n_tx == 2 ? Scheme::scck2 : n_tx == 4 ? Scheme::scck4 : Scheme::scck8; }

Outcome noiseless_loopback() {
    const std::pair<std::size_t, std::size_t> sizes[] = {{2, 2}, {2, 8}, {4, 4}, {4, 8}, {8, 16}};
    std::uint64_t errors = 0, bits = 0;
    int runs = 0;
    for (auto [tx, rx] : sizes) {
        for (auto s : {scck_for(tx), Scheme::sm_bpsk, Scheme::sm_4qam}) {
            auto c = base_config(s, tx, rx);
            c.frames = 100;
            c.ebn0_db = {std::numeric_limits<double>::infinity()};
            const auto p = run_point(c, c.ebn0_db[0]);
            errors += p.bit_errors;
            bits += p.bits_simulated;
            ++runs;
        }
    }
    return {errors == 0, fmt("%d scheme/size runs, 100 frames each: %llu errors in %llu bits", runs,
                             static_cast<unsigned long long>(errors), static_cast<unsigned long long>(bits))};
}

Outcome zf_correctness() {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    const std::pair<Eigen::Index, Eigen::Index> shapes[] = {{2, 2}, {4, 4}, {8, 8}, {4, 2}, {8, 4}, {16, 8}};
    double worst = 0.0;
    int channels = 0;
    while (channels < 10000) {
        const auto [rows, cols] = shapes[channels % 6];
        Eigen::MatrixXcd h(rows, cols);
        for (auto& v : h.reshaped()) v = cplx(g(rng), g(rng));
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) < sv(0) / 1e3) continue;
        Eigen::VectorXcd c(cols);
        for (auto& v : c) v = cplx(g(rng), g(rng));
        worst = std::max(worst, (zf_equalize(h * c, h).z - c).cwiseAbs().maxCoeff());
        ++channels;
    }
    return {worst <= 1e-9, fmt("%d channels (square and tall, condition < 1e3): max error %.2e", channels, worst)};
}

struct Measured {
    BerPoint p;
    double seconds = 0.0;
};

Measured measure(Scheme s, std::size_t tx, std::size_t rx, double ebn0) {
    auto c = base_config(s, tx, rx);
    c.ebn0_db = {ebn0};
    c.max_bit_errors = 500;
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = run_point(c, ebn0);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::fprintf(stderr, "  %s %zux%zu Eb/N0=%g dB: %llu/%llu BER=%.3e (%.1f s)\n", std::string(scheme_name(s)).c_str(),
                 tx, rx, ebn0, static_cast<unsigned long long>(p.bit_errors),
                 static_cast<unsigned long long>(p.bits_simulated), p.ber, secs);
    return {p, secs};
}

// Upper end of the BER a run can resolve: 3 / bits when no errors were seen.
double resolvable(const BerPoint& p) {
    return std::max(p.ber, 3.0 / static_cast<double>(p.bits_simulated));
}

bool within_factor_two(double value, double target) { return value >= target / 2.0 && value <= target * 2.0; }

Outcome trend_rx_gain() {
    const auto s22 = measure(Scheme::scck2, 2, 2, 10.0).p;
    const auto s24 = measure(Scheme::scck2, 2, 4, 10.0).p;
    const auto m22 = measure(Scheme::sm_bpsk, 2, 2, 10.0).p;
    const auto m24 = measure(Scheme::sm_bpsk, 2, 4, 10.0).p;
    const double rs = s24.ber > 0 ? s22.ber / s24.ber : std::numeric_limits<double>::infinity();
    const double rm = m24.ber > 0 ? m22.ber / m24.ber : std::numeric_limits<double>::infinity();
    return {within_factor_two(rs, 38.46) && within_factor_two(rm, 12.65),
            fmt("SCCKM-2 2x2 %.3e -> 2x4 %.3e: %.1fx (target 38.46x); SM-BPSK 2x2 %.3e -> 2x4 %.3e: %.1fx (target 12.65x)",
                s22.ber, s24.ber, rs, m22.ber, m24.ber, rm)};
}

Outcome trend_4x4() {
    const auto s = measure(Scheme::scck4, 4, 4, 10.0).p;
    const auto m = measure(Scheme::sm_4qam, 4, 4, 10.0).p;
    const double ratio = s.ber > 0 ? m.ber / s.ber : std::numeric_limits<double>::infinity();
    return {s.ber < m.ber && within_factor_two(ratio, 1.6),
            fmt("SCCKM-4 %.3e vs SM-4QAM %.3e: SM/SCCKM = %.3g (target 1.6, SCCKM lower)", s.ber, m.ber, ratio)};
}

Outcome trend_4x8() {
    const auto s = measure(Scheme::scck4, 4, 8, 9.0).p;
    const auto m = measure(Scheme::sm_4qam, 4, 8, 9.0).p;
    return {s.ber <= 2e-5 && m.ber >= 2e-4,
            fmt("SCCKM-4 %.3e (need <= 2e-5), SM-4QAM %.3e (need >= 2e-4)", s.ber, m.ber)};
}

Outcome trend_8x16() {
    const auto s = measure(Scheme::scck8, 8, 16, 8.0).p;
    const auto m = measure(Scheme::sm_bpsk, 8, 16, 8.0).p;
    const double s_hi = resolvable(s);
    return {s.ber < 1e-5 && m.ber >= 100.0 * s_hi,
            fmt("SCCKM-8 %.3e over %llu bits (resolvable %.1e, need < 1e-5), SM-BPSK %.3e (need >= 100x SCCKM = %.1e)",
                s.ber, static_cast<unsigned long long>(s.bits_simulated), s_hi, m.ber, 100.0 * s_hi)};
}

Outcome determinism() {
    auto c = base_config(Scheme::scck4, 4, 4);
    c.ebn0_db = {0, 2, 4, 6, 8, 10};
    c.frames = 20;
    c.max_bit_errors = 2000;
    std::string csv[2];
    const unsigned threads[2] = {1, 3};
    for (int i = 0; i < 2; ++i) {
        c.threads = threads[i];
        std::ostringstream os;
        emit_csv(run_sweep(c), os);
        csv[i] = os.str();
    }
    return {csv[0] == csv[1], fmt("6-point sweep, threads 1 vs 3: %zu-byte CSVs %s", csv[0].size(),
                                  csv[0] == csv[1] ? "identical" : "DIFFER")};
}

struct Criterion {
    const char* id;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {"1", "codebook exactness", codebook_exactness},
        {"2", "complementary property", complementary},
        {"3", "64 orthogonal 8-bit codewords", orthogonality},
        {"4", "distance oracle", distance_oracle},
        {"5", "subset-selection bar", subset_bar},
        {"6", "noiseless loopback", noiseless_loopback},
        {"7", "ZF correctness", zf_correctness},
        {"8a", "rx-diversity gain 2x2 -> 2x4 at 10 dB", trend_rx_gain},
        {"8b", "4x4 SCCKM-4 vs SM-4QAM at 10 dB", trend_4x4},
        {"8c", "4x8 at 9 dB", trend_4x8},
        {"8d", "8x16 at 8 dB", trend_8x16},
        {"9", "determinism across thread counts", determinism},
    };
    std::set<std::string> wanted(argv + 1, argv + argc);
    int failed = 0, ran = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %-3s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        ++ran;
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%d criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}
