#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "scckm/sim.hpp"

using namespace scckm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SimConfig small_config(Scheme s, std::size_t n_tx, std::size_t n_rx) {
    SimConfig c;
    c.scheme = s;
    c.n_tx = n_tx;
    c.n_rx = n_rx;
    c.ebn0_db = {4.0};
    c.frames = 6;
    c.symbols_per_frame = 2;
    c.ofdm = OfdmParams{64, 8};
    c.seed = 42;
    return c;
}

}  // namespace

TEST(Scheme, NamesRoundTrip) {
    for (auto s : {Scheme::scck2, Scheme::scck4, Scheme::scck8, Scheme::sm_bpsk, Scheme::sm_4qam})
        EXPECT_EQ(parse_scheme(scheme_name(s)), s);
    EXPECT_THROW(parse_scheme("qpsk"), std::invalid_argument);
}

TEST(Scheme, SpectralEfficiency) {
    EXPECT_EQ(bits_per_subcarrier(Scheme::scck2, 2), 2);
    EXPECT_EQ(bits_per_subcarrier(Scheme::scck4, 4), 4);
    EXPECT_EQ(bits_per_subcarrier(Scheme::scck8, 8), 8);
    EXPECT_EQ(bits_per_subcarrier(Scheme::sm_bpsk, 4), 3);
    EXPECT_EQ(bits_per_subcarrier(Scheme::sm_4qam, 4), 4);
}

TEST(SimConfig, Validation) {
    auto c = small_config(Scheme::scck4, 4, 4);
    EXPECT_NO_THROW(c.validate());
    c.n_tx = 2;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_config(Scheme::scck4, 4, 2);
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_config(Scheme::sm_bpsk, 3, 4);
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_config(Scheme::scck2, 2, 2);
    c.frames = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_config(Scheme::scck2, 2, 2);
    c.ebn0_db.clear();
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = small_config(Scheme::scck2, 2, 2);
    c.taps = 10;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    EXPECT_THROW(run_point(c, 3.0), std::invalid_argument);
}

TEST(RunPoint, NoiselessIsErrorFree) {
    const auto c = small_config(Scheme::scck4, 4, 4);
    const auto p = run_point(c, kInf);
    EXPECT_EQ(p.bit_errors, 0u);
    EXPECT_EQ(p.ber, 0.0);
    EXPECT_GT(p.bits_simulated, 0u);
}

TEST(RunPoint, DeterministicAcrossCallsAndThreads) {
    auto c = small_config(Scheme::scck2, 2, 2);
    const auto a = run_point(c, 6.0);
    const auto b = run_point(c, 6.0);
    EXPECT_EQ(a, b);
    c.threads = 3;
    EXPECT_EQ(run_point(c, 6.0), a);
    c.seed = 43;
    EXPECT_NE(run_point(c, 6.0).bit_errors, a.bit_errors);
}

TEST(RunPoint, Accounting) {
    for (auto [s, tx, rx] : {std::tuple{Scheme::scck2, 2u, 2u}, {Scheme::scck8, 8u, 8u}, {Scheme::sm_bpsk, 4u, 4u},
                             {Scheme::sm_4qam, 4u, 4u}}) {
        const auto c = small_config(s, tx, rx);
        const auto r = run_point_detailed(c, 5.0);
        EXPECT_EQ(r.frames_run, c.frames);
        EXPECT_EQ(r.point.bits_simulated,
                  c.frames * c.symbols_per_frame * c.ofdm.n_sub * static_cast<std::uint64_t>(bits_per_subcarrier(s, tx)));
        EXPECT_DOUBLE_EQ(r.point.ber, static_cast<double>(r.point.bit_errors) / r.point.bits_simulated);
        EXPECT_LE(r.point.ber, 1.0);
    }
}

TEST(RunPoint, EarlyStopIsFrameGranularAndThreadIndependent) {
    auto c = small_config(Scheme::scck2, 2, 2);
    c.frames = 40;
    c.max_bit_errors = 100;
    const auto r1 = run_point_detailed(c, 0.0);
    EXPECT_LT(r1.frames_run, c.frames);
    EXPECT_GE(r1.point.bit_errors, 100u);
    EXPECT_EQ(r1.point.bits_simulated, r1.frames_run * c.symbols_per_frame * c.ofdm.n_sub * 2);
    c.threads = 4;
    const auto r4 = run_point_detailed(c, 0.0);
    EXPECT_EQ(r4.frames_run, r1.frames_run);
    EXPECT_EQ(r4.point, r1.point);
    // the prefix up to the stopping frame is the unstopped run's prefix
    c.max_bit_errors.reset();
    c.frames = r1.frames_run;
    EXPECT_EQ(run_point(c, 0.0), r1.point);
}

TEST(RunSweep, SinglePointEqualsRunPoint) {
    const auto c = small_config(Scheme::sm_bpsk, 2, 2);
    const auto curve = run_sweep(c);
    ASSERT_EQ(curve.points.size(), 1u);
    EXPECT_EQ(curve.points[0], run_point(c, 4.0));
    EXPECT_EQ(curve.config, c.canonical());
    EXPECT_EQ(curve.seed, c.seed);
}

TEST(RunSweep, SortedAndMonotone) {
    auto c = small_config(Scheme::scck2, 2, 2);
    c.ebn0_db = {8.0, 0.0, 4.0, 12.0};
    c.ofdm = OfdmParams{256, 16};
    c.frames = 40;
    c.symbols_per_frame = 5;  // 102400 bits per point
    const auto curve = run_sweep(c);
    ASSERT_EQ(curve.points.size(), 4u);
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& lo = curve.points[i - 1];
        const auto& hi = curve.points[i];
        EXPECT_LT(lo.ebn0_db, hi.ebn0_db);
        EXPECT_GE(hi.bits_simulated, 100000u);
        const double sigma = std::sqrt(lo.ber * (1 - lo.ber) / lo.bits_simulated + hi.ber * (1 - hi.ber) / hi.bits_simulated);
        EXPECT_LE(hi.ber, lo.ber + 3 * sigma) << hi.ebn0_db;
    }
    EXPECT_GT(curve.points.front().ber, curve.points.back().ber);
}

TEST(Csv, RoundTrip) {
    auto c = small_config(Scheme::scck2, 2, 2);
    c.ebn0_db = {0.0, 2.5, kInf};
    const auto curve = run_sweep(c);
    std::stringstream ss;
    emit_csv(curve, ss);
    EXPECT_EQ(parse_csv(ss), curve);

    BerCurve odd;
    odd.config = "x";
    odd.seed = 18446744073709551615ull;
    odd.points = {{-1.25, 3, 1, 1.0 / 3.0}, {0.1, 7, 0, 0.0}};
    std::stringstream s2;
    emit_csv(odd, s2);
    EXPECT_EQ(parse_csv(s2), odd);
}

TEST(Csv, EmptyCurveLayout) {
    BerCurve curve;
    curve.config = "scheme=scck2";
    curve.seed = 9;
    std::ostringstream os;
    emit_csv(curve, os);
    EXPECT_EQ(os.str(), "# config: scheme=scck2\n# seed: 9\nebn0_db,bits_simulated,bit_errors,ber\n");
}

TEST(Csv, RowFormat) {
    BerCurve curve;
    curve.points = {{10.0, 1000, 3, 0.003}};
    std::ostringstream os;
    emit_csv(curve, os);
    EXPECT_NE(os.str().find("\n10,1000,3,0.003\n"), std::string::npos);
}

TEST(Csv, MalformedInputRejected) {
    std::istringstream no_header("# config: x\n1,2,3,4\n");
    EXPECT_THROW(parse_csv(no_header), std::runtime_error);
    std::istringstream bad_row("ebn0_db,bits_simulated,bit_errors,ber\n1,2,3\n");
    EXPECT_THROW(parse_csv(bad_row), std::runtime_error);
    std::istringstream bad_number("ebn0_db,bits_simulated,bit_errors,ber\n1,-2,3,0.5\n");
    EXPECT_THROW(parse_csv(bad_number), std::runtime_error);
}

TEST(Csv, UnwritablePathThrows) {
    const auto dir = std::filesystem::temp_directory_path() / "scckm_no_such_dir" / "nested" / "out.csv";
    EXPECT_THROW(emit_csv(BerCurve{}, dir), std::runtime_error);
}

TEST(Config, EbN0Lists) {
    EXPECT_EQ(parse_ebn0_list("0:2:10"), (std::vector<double>{0, 2, 4, 6, 8, 10}));
    EXPECT_EQ(parse_ebn0_list("0:0.1:0.3").size(), 4u);
    EXPECT_EQ(parse_ebn0_list("9"), (std::vector<double>{9}));
    EXPECT_EQ(parse_ebn0_list("1, 5,inf"), (std::vector<double>{1, 5, kInf}));
    EXPECT_THROW(parse_ebn0_list(""), std::invalid_argument);
    EXPECT_THROW(parse_ebn0_list("0:0:5"), std::invalid_argument);
    EXPECT_THROW(parse_ebn0_list("5:1:0"), std::invalid_argument);
    EXPECT_THROW(parse_ebn0_list("a,b"), std::invalid_argument);
}

TEST(Config, KeyValueFile) {
    std::istringstream in("# comment\nscheme = scck4\nntx=4\n\nnrx=8  # trailing\nebn0=0:1:3\nmax_bit_errors=500\n");
    SimConfig c;
    apply_config_values(c, parse_key_value(in));
    EXPECT_EQ(c.scheme, Scheme::scck4);
    EXPECT_EQ(c.n_tx, 4u);
    EXPECT_EQ(c.n_rx, 8u);
    EXPECT_EQ(c.ebn0_db.size(), 4u);
    EXPECT_EQ(c.max_bit_errors, 500u);
    EXPECT_NO_THROW(c.validate());

    std::istringstream bad("ntx\n");
    EXPECT_THROW(parse_key_value(bad), std::invalid_argument);
    EXPECT_THROW(apply_config_values(c, {{"colour", "red"}}), std::invalid_argument);
    EXPECT_THROW(apply_config_values(c, {{"frames", "-3"}}), std::invalid_argument);
}

TEST(Config, CanonicalExcludesSeedAndThreads) {
    auto a = small_config(Scheme::scck2, 2, 4);
    auto b = a;
    b.seed = 1234;
    b.threads = 8;
    EXPECT_EQ(a.canonical(), b.canonical());
    b.ebn0_db = {4.0, 1.0};
    a.ebn0_db = {1.0, 4.0};
    EXPECT_EQ(a.canonical(), b.canonical());
    b.n_rx = 8;
    EXPECT_NE(a.canonical(), b.canonical());
}

// Transmit, noiseless channel, demodulate, equalize and detect: no bit errors
// for any scheme at any of the array sizes.
TEST(EndToEnd, NoiselessIdentityAllSizes) {
    const std::pair<std::size_t, std::size_t> sizes[] = {{2, 2}, {2, 4}, {2, 8}, {4, 4}, {4, 8}, {8, 16}};
    for (auto [tx, rx] : sizes) {
        const Scheme scck = tx == 2 ? Scheme::scck2 : tx == 4 ? Scheme::scck4 : Scheme::scck8;
        for (auto s : {scck, Scheme::sm_bpsk, Scheme::sm_4qam}) {
            SimConfig c;
            c.scheme = s;
            c.n_tx = tx;
            c.n_rx = rx;
            c.ebn0_db = {kInf};
            c.frames = 1000;
            c.symbols_per_frame = 1;
            c.seed = 77;
            const auto r = run_point_detailed(c, kInf);
            EXPECT_EQ(r.point.bit_errors, 0u) << scheme_name(s) << ' ' << tx << 'x' << rx;
            EXPECT_EQ(r.degenerate_subcarriers, 0u);
        }
    }
}
