#include "scckm/cck_codebook.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "number_format.hpp"

namespace scckm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// e^{j 2 pi k / m}, exact for the alphabets used by CCK (m = 2, 3, 4).
cplx root_of_unity(long k, int m) {
    const long r = ((k % m) + m) % m;
    switch (m) {
        case 2:
            return r == 0 ? cplx{1.0, 0.0} : cplx{-1.0, 0.0};
        case 3: {
            const double s = std::sqrt(3.0) / 2.0;
            if (r == 0) return {1.0, 0.0};
            return r == 1 ? cplx{-0.5, s} : cplx{-0.5, -s};
        }
        case 4: {
            static constexpr double re[] = {1.0, 0.0, -1.0, 0.0};
            static constexpr double im[] = {0.0, 1.0, 0.0, -1.0};
            return {re[r], im[r]};
        }
        default:
            return std::polar(1.0, kTwoPi * static_cast<double>(r) / m);
    }
}

// Phase in radians -> multiple of 2pi/m. Throws if off the alphabet.
int phase_index(double theta, int m) {
    const double step = kTwoPi / m;
    const long k = std::lround(theta / step);
    if (std::abs(theta - static_cast<double>(k) * step) > 1e-9) {
        throw std::invalid_argument("phase " + std::to_string(theta) + " is not a multiple of 2pi/" +
                                    std::to_string(m));
    }
    return static_cast<int>(((k % m) + m) % m);
}

std::vector<int> phase_indices(const PhaseVector& pv, std::size_t count, int m) {
    if (pv.phases.size() != count) {
        throw std::invalid_argument("expected " + std::to_string(count) + " phases, got " +
                                    std::to_string(pv.phases.size()));
    }
    std::vector<int> out;
    out.reserve(count);
    for (double p : pv.phases) out.push_back(phase_index(p, m));
    return out;
}

// Chip i carries e^{j(sum of phases whose bit is set in masks[i])}, negated where flagged.
struct ChipRule {
    unsigned mask;
    bool negate;
};

Codeword build(std::span<const ChipRule> rules, std::span<const int> idx, int m) {
    Codeword w;
    w.chips.reserve(rules.size());
    for (const auto& rule : rules) {
        long k = 0;
        for (std::size_t p = 0; p < idx.size(); ++p) {
            if (rule.mask & (1u << p)) k += idx[p];
        }
        const cplx c = root_of_unity(k, m);
        w.chips.push_back(rule.negate ? -c : c);
    }
    return w;
}

// bit p of the mask = phi_{p+1}
constexpr ChipRule kCck2Rules[] = {{0b11, false}, {0b01, false}};
constexpr ChipRule kCck4Rules[] = {{0b111, false}, {0b101, false}, {0b011, false}, {0b001, true}};
constexpr ChipRule kCck8Rules[] = {{0b1111, false}, {0b1101, false}, {0b1011, false}, {0b1001, true},
                                   {0b0111, false}, {0b0101, false}, {0b0011, true},  {0b0001, false}};

// 2-bit group -> quarter turns: 00->0, 01->pi, 10->pi/2, 11->-pi/2
constexpr int kGroupToQuarter[] = {0, 2, 1, 3};

double squared_distance(const Codeword& a, const Codeword& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
    return acc;
}

constexpr double kDistTol = 1e-9;

struct Score {
    double min_d2;
    std::size_t count;
};

class SubsetScorer {
public:
    explicit SubsetScorer(std::span<const Codeword> candidates) : n_(candidates.size()), d2_(n_ * n_) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) d2_[i * n_ + j] = squared_distance(candidates[i], candidates[j]);
        }
    }

    Score score(std::span<const std::size_t> subset) const {
        Score s{std::numeric_limits<double>::infinity(), 0};
        for (std::size_t a = 0; a < subset.size(); ++a) {
            for (std::size_t b = a + 1; b < subset.size(); ++b) {
                const double d = d2_[subset[a] * n_ + subset[b]];
                if (d < s.min_d2 - kDistTol) {
                    s.min_d2 = d;
                    s.count = 1;
                } else if (d <= s.min_d2 + kDistTol) {
                    ++s.count;
                }
            }
        }
        return s;
    }

private:
    std::size_t n_;
    std::vector<double> d2_;
};

// Strictly better under the three-stage rule with lexicographic tie-break.
bool better(const Score& s, std::span<const std::size_t> idx, const SubsetSelection& best, double best_d2) {
    if (best.indices.empty()) return true;
    if (s.min_d2 > best_d2 + kDistTol) return true;
    if (s.min_d2 < best_d2 - kDistTol) return false;
    if (s.count != best.min_pair_count) return s.count < best.min_pair_count;
    return std::lexicographical_compare(idx.begin(), idx.end(), best.indices.begin(), best.indices.end());
}

struct Tracker {
    SubsetSelection best;
    double best_d2 = 0.0;

    void offer(const Score& s, std::span<const std::size_t> idx) {
        if (better(s, idx, best, best_d2)) {
            best.indices.assign(idx.begin(), idx.end());
            best.min_pair_count = s.count;
            best_d2 = s.min_d2;
        }
        ++best.subsets_examined;
    }

    SubsetSelection finish() {
        best.min_distance = std::sqrt(best_d2);
        return best;
    }
};

void check_subset_args(std::span<const Codeword> candidates, std::size_t subset_size) {
    if (subset_size < 2 || subset_size > candidates.size()) {
        throw std::invalid_argument("subset size must be in [2, candidate count]");
    }
}

// C(n, k), saturating at SIZE_MAX.
std::size_t binomial(std::size_t n, std::size_t k) {
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        std::size_t prod = 0;
        if (__builtin_mul_overflow(r, n - k + i, &prod)) return std::numeric_limits<std::size_t>::max();
        r = prod / i;
    }
    return r;
}

}  // namespace

// ---- Golay ------------------------------------------------------------------

std::pair<BinarySequence, BinarySequence> golay_pair(int k) {
    if (k < 1) throw std::invalid_argument("golay_pair: recursion depth must be >= 1");
    if (k > 31) throw std::invalid_argument("golay_pair: recursion depth too large");
    BinarySequence a{{1}};
    BinarySequence b{{1}};
    for (int level = 2; level <= k; ++level) {
        BinarySequence na = a;
        na.elements.insert(na.elements.end(), b.elements.begin(), b.elements.end());
        BinarySequence nb = a;
        for (int v : b.elements) nb.elements.push_back(-v);
        a = std::move(na);
        b = std::move(nb);
    }
    return {std::move(a), std::move(b)};
}

std::vector<long long> aperiodic_autocorrelation(const BinarySequence& seq) {
    const std::size_t n = seq.size();
    std::vector<long long> r(n, 0);
    for (std::size_t shift = 0; shift < n; ++shift) {
        long long acc = 0;
        for (std::size_t i = 0; i + shift < n; ++i) acc += seq.elements[i] * seq.elements[i + shift];
        r[shift] = acc;
    }
    return r;
}

// ---- Codebook ---------------------------------------------------------------

Codebook::Codebook(std::size_t length_n, int bits_per_codeword, std::vector<Codeword> entries)
    : Codebook(length_n, bits_per_codeword, std::move(entries), [&] {
          std::vector<std::uint32_t> id(bits_per_codeword >= 0 && bits_per_codeword < 31
                                            ? std::size_t{1} << bits_per_codeword
                                            : 0);
          std::iota(id.begin(), id.end(), 0u);
          return id;
      }()) {}

Codebook::Codebook(std::size_t length_n, int bits_per_codeword, std::vector<Codeword> entries,
                   std::vector<std::uint32_t> pattern_to_entry)
    : length_n_(length_n), bits_(bits_per_codeword), entries_(std::move(entries)),
      pattern_to_entry_(std::move(pattern_to_entry)) {
    if (bits_ < 1 || bits_ > 30) throw std::invalid_argument("Codebook: bits per codeword out of range");
    const std::size_t count = std::size_t{1} << bits_;
    if (entries_.size() != count) {
        throw std::invalid_argument("Codebook: expected " + std::to_string(count) + " entries, got " +
                                    std::to_string(entries_.size()));
    }
    if (pattern_to_entry_.size() != count) throw std::invalid_argument("Codebook: mapping size mismatch");
    entry_to_pattern_.assign(count, std::numeric_limits<std::uint32_t>::max());
    for (std::uint32_t p = 0; p < count; ++p) {
        const auto e = pattern_to_entry_[p];
        if (e >= count || entry_to_pattern_[e] != std::numeric_limits<std::uint32_t>::max()) {
            throw std::invalid_argument("Codebook: mapping is not a bijection");
        }
        entry_to_pattern_[e] = p;
    }
    for (const auto& w : entries_) {
        if (w.size() != length_n_) throw std::invalid_argument("Codebook: codeword length mismatch");
        for (const auto& c : w.chips) {
            if (std::abs(std::abs(c) - 1.0) > 1e-12) throw std::invalid_argument("Codebook: chip not unit modulus");
        }
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        for (std::size_t j = i + 1; j < entries_.size(); ++j) {
            if (entries_[i] == entries_[j]) throw std::invalid_argument("Codebook: duplicate codeword");
        }
    }
}

std::optional<std::uint32_t> Codebook::decode_exact(const Codeword& word) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i] == word) return entry_to_pattern_[i];
    }
    return std::nullopt;
}

std::uint32_t parse_bit_pattern(std::string_view bits) {
    if (bits.empty() || bits.size() > 31) throw std::invalid_argument("bit pattern must have 1..31 bits");
    std::uint32_t v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit pattern may only contain '0' and '1'");
        v = (v << 1) | static_cast<std::uint32_t>(c - '0');
    }
    return v;
}

std::string format_bit_pattern(std::uint32_t pattern, int width) {
    std::string s(static_cast<std::size_t>(width), '0');
    for (int i = 0; i < width; ++i) {
        if (pattern & (1u << (width - 1 - i))) s[static_cast<std::size_t>(i)] = '1';
    }
    return s;
}

// ---- 2-bit ------------------------------------------------------------------

Codeword cck2_codeword(const PhaseVector& phases) {
    const auto idx = phase_indices(phases, 2, 2);
    return build(kCck2Rules, idx, 2);
}

Codebook cck2_codebook() {
    std::vector<Codeword> entries;
    for (int p = 0; p < 4; ++p) {
        const int idx[] = {(p >> 1) & 1, p & 1};
        entries.push_back(build(kCck2Rules, idx, 2));
    }
    return Codebook(2, 2, std::move(entries));
}

// ---- 4-bit ------------------------------------------------------------------

Codeword cck4_codeword(const PhaseVector& phases) {
    const auto idx = phase_indices(phases, 3, 3);
    return build(kCck4Rules, idx, 3);
}

std::vector<Codeword> cck4_enumerate() {
    std::vector<Codeword> out;
    out.reserve(27);
    for (int i1 = 0; i1 < 3; ++i1)
        for (int i2 = 0; i2 < 3; ++i2)
            for (int i3 = 0; i3 < 3; ++i3) {
                const int idx[] = {i1, i2, i3};
                out.push_back(build(kCck4Rules, idx, 3));
            }
    return out;
}

Codebook cck4_reference_codebook() {
    // Each row is the phase triple (phi1, phi2, phi3) in units of 2pi/3.
    static constexpr int kRows[16][3] = {
        {0, 0, 0}, {0, 2, 1}, {0, 0, 1}, {0, 0, 2}, {0, 2, 0}, {0, 1, 1}, {0, 2, 2}, {1, 1, 1},
        {1, 0, 2}, {1, 1, 2}, {1, 1, 0}, {1, 0, 0}, {2, 1, 0}, {2, 2, 0}, {2, 2, 1}, {2, 1, 1},
    };
    std::vector<Codeword> entries;
    entries.reserve(16);
    for (const auto& row : kRows) entries.push_back(build(kCck4Rules, row, 3));
    return Codebook(4, 4, std::move(entries));
}

SubsetSelection select_subset_exhaustive(std::span<const Codeword> candidates, std::size_t subset_size) {
    check_subset_args(candidates, subset_size);
    const SubsetScorer scorer(candidates);
    Tracker tracker;
    std::vector<std::size_t> idx(subset_size);
    std::iota(idx.begin(), idx.end(), 0);
    const std::size_t n = candidates.size();
    for (;;) {
        tracker.offer(scorer.score(idx), idx);
        // next combination in lexicographic order
        std::size_t i = subset_size;
        while (i > 0 && idx[i - 1] == n - subset_size + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < subset_size; ++j) idx[j] = idx[j - 1] + 1;
    }
    return tracker.finish();
}

SubsetSelection select_subset_random(std::span<const Codeword> candidates, std::size_t subset_size,
                                     std::size_t num_random_subsets, std::mt19937_64& rng) {
    check_subset_args(candidates, subset_size);
    if (num_random_subsets == 0) throw std::invalid_argument("num_random_subsets must be >= 1");
    if (candidates.size() > 64) throw std::invalid_argument("random subset search supports at most 64 candidates");
    if (num_random_subsets > binomial(candidates.size(), subset_size)) {
        throw std::invalid_argument("num_random_subsets exceeds the number of distinct subsets");
    }
    const SubsetScorer scorer(candidates);
    Tracker tracker;
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::size_t> pool(candidates.size());
    std::vector<std::size_t> idx(subset_size);
    while (seen.size() < num_random_subsets) {
        std::iota(pool.begin(), pool.end(), 0);
        for (std::size_t i = 0; i < subset_size; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
            std::swap(pool[i], pool[pick(rng)]);
        }
        std::copy_n(pool.begin(), subset_size, idx.begin());
        std::sort(idx.begin(), idx.end());
        std::uint64_t mask = 0;
        for (auto i : idx) mask |= std::uint64_t{1} << i;
        if (!seen.insert(mask).second) continue;
        tracker.offer(scorer.score(idx), idx);
    }
    return tracker.finish();
}

Codebook select_cck4_subset(std::span<const Codeword> candidates, std::size_t num_random_subsets,
                            std::mt19937_64& rng) {
    if (candidates.size() != 27) throw std::invalid_argument("select_cck4_subset expects the 27 4-chip candidates");
    const auto sel = select_subset_random(candidates, 16, num_random_subsets, rng);
    std::vector<Codeword> entries;
    entries.reserve(16);
    for (auto i : sel.indices) entries.push_back(candidates[i]);
    return Codebook(4, 4, std::move(entries));
}

// ---- 8-bit ------------------------------------------------------------------

Codeword cck8_codeword(const PhaseVector& phases) {
    const auto idx = phase_indices(phases, 4, 4);
    return build(kCck8Rules, idx, 4);
}

Codeword cck8_codeword(std::uint8_t byte) {
    int idx[4];
    for (int g = 0; g < 4; ++g) idx[g] = kGroupToQuarter[(byte >> (6 - 2 * g)) & 0b11];
    return build(kCck8Rules, idx, 4);
}

Codeword cck8_codeword(std::string_view bits) {
    if (bits.size() != 8) throw std::invalid_argument("cck8_codeword expects exactly 8 bits");
    return cck8_codeword(static_cast<std::uint8_t>(parse_bit_pattern(bits)));
}

Codebook cck8_codebook() {
    std::vector<Codeword> entries;
    entries.reserve(256);
    for (int b = 0; b < 256; ++b) entries.push_back(cck8_codeword(static_cast<std::uint8_t>(b)));
    return Codebook(8, 8, std::move(entries));
}

std::vector<std::size_t> cck8_phi1_coset(int phi1_quarter) {
    if (phi1_quarter < 0 || phi1_quarter > 3) throw std::invalid_argument("phi1 quarter turn must be in 0..3");
    std::size_t group = 0;
    while (kGroupToQuarter[group] != phi1_quarter) ++group;
    std::vector<std::size_t> out;
    out.reserve(64);
    for (std::size_t low = 0; low < 64; ++low) out.push_back((group << 6) | low);
    return out;
}

// ---- distances --------------------------------------------------------------

double euclidean_distance(const Codeword& a, const Codeword& b) {
    if (a.size() != b.size()) throw std::invalid_argument("codeword length mismatch");
    return std::sqrt(squared_distance(a, b));
}

cplx inner_product(const Codeword& a, const Codeword& b) {
    if (a.size() != b.size()) throw std::invalid_argument("codeword length mismatch");
    cplx acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
    return acc;
}

double min_distance(std::span<const Codeword> words) {
    if (words.size() < 2) throw std::invalid_argument("min_distance needs at least two codewords");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j) best = std::min(best, squared_distance(words[i], words[j]));
    return std::sqrt(best);
}

double min_distance(const Codebook& codebook) { return min_distance(std::span<const Codeword>(codebook.entries())); }

double dmin_closed_form(int n, int m) {
    if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("dmin_closed_form: N must be a power of two >= 2");
    if (m < 2) throw std::invalid_argument("dmin_closed_form: M must be >= 2");
    return std::sqrt(n / 2.0) * std::abs(1.0 - std::polar(1.0, kTwoPi / m));
}

bool mutually_orthogonal(std::span<const Codeword> words, double tol) {
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j)
            if (std::abs(inner_product(words[i], words[j])) > tol) return false;
    return true;
}

std::vector<std::size_t> largest_orthogonal_subset(std::span<const Codeword> words, double tol) {
    const std::size_t n = words.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            adj[i][j] = adj[j][i] = std::abs(inner_product(words[i], words[j])) <= tol;

    // Orthogonal non-zero vectors cannot outnumber the dimension.
    const std::size_t bound = n == 0 ? 0 : words.front().size();
    std::vector<std::size_t> best;
    std::vector<std::size_t> current;

    std::function<void(std::vector<std::size_t>&)> expand = [&](std::vector<std::size_t>& cand) {
        if (current.size() > best.size()) best = current;
        if (best.size() >= bound) return;
        for (std::size_t k = 0; k < cand.size(); ++k) {
            if (current.size() + (cand.size() - k) <= best.size()) return;
            const std::size_t v = cand[k];
            std::vector<std::size_t> next;
            for (std::size_t t = k + 1; t < cand.size(); ++t)
                if (adj[v][cand[t]]) next.push_back(cand[t]);
            current.push_back(v);
            expand(next);
            current.pop_back();
            if (best.size() >= bound) return;
        }
    };
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    expand(all);
    return best;
}

std::optional<std::vector<std::size_t>> find_orthogonal_cck8_coset(const Codebook& cck8, std::size_t size,
                                                                   double tol) {
    if (cck8.length_n() != 8 || cck8.size() != 256) throw std::invalid_argument("expected the 8-bit codebook");
    for (int q = 0; q < 4; ++q) {
        const auto coset = cck8_phi1_coset(q);
        std::vector<Codeword> words;
        words.reserve(coset.size());
        for (auto i : coset) words.push_back(cck8.entry(i));
        if (size == coset.size()) {
            if (mutually_orthogonal(words, tol)) return coset;
            continue;
        }
        const auto sub = largest_orthogonal_subset(words, tol);
        if (sub.size() >= size) {
            std::vector<std::size_t> out;
            for (std::size_t k = 0; k < size; ++k) out.push_back(coset[sub[k]]);
            return out;
        }
    }
    return std::nullopt;
}

void write_codebook_csv(const Codebook& codebook, std::ostream& out) {
    out << "index,bit_pattern";
    for (std::size_t c = 0; c < codebook.length_n(); ++c) out << ",chip_" << c << "_re,chip_" << c << "_im";
    out << '\n';
    for (std::size_t i = 0; i < codebook.size(); ++i) {
        out << i << ',' << format_bit_pattern(codebook.pattern_for_entry(i), codebook.bits_per_codeword());
        for (const auto& chip : codebook.entry(i).chips) {
            // + 0.0 folds negative zero
            out << ',' << detail::format_double(chip.real() + 0.0) << ',' << detail::format_double(chip.imag() + 0.0);
        }
        out << '\n';
    }
}

}  // namespace scckm
