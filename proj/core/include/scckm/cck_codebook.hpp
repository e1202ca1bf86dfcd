#ifndef SCCKM_CCK_CODEBOOK_HPP
#define SCCKM_CCK_CODEBOOK_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scckm {

using cplx = std::complex<double>;

/// Sequence of +1/-1 elements; length is a power of two.
struct BinarySequence {
    std::vector<int> elements;

    std::size_t size() const { return elements.size(); }
    bool operator==(const BinarySequence&) const = default;
};

/// Golay complementary pair of length 2^(k-1).
///
/// Built by the concatenation recursion A_k = A_{k-1} | B_{k-1},
/// B_k = A_{k-1} | -B_{k-1}, starting from A_1 = B_1 = {+1}.
/// Throws std::invalid_argument for k < 1.
std::pair<BinarySequence, BinarySequence> golay_pair(int k);

/// Aperiodic autocorrelation at shifts 0..n-1, exact integer arithmetic.
std::vector<long long> aperiodic_autocorrelation(const BinarySequence& seq);

/// One polyphase codeword. Every chip has unit modulus.
struct Codeword {
    std::vector<cplx> chips;

    std::size_t size() const { return chips.size(); }
    const cplx& operator[](std::size_t i) const { return chips[i]; }
    bool operator==(const Codeword&) const = default;
};

/// Phase angles in radians (phi_1 .. phi_k).
struct PhaseVector {
    std::vector<double> phases;
};

/// Immutable set of codewords plus the bit-pattern -> entry bijection.
///
/// Bit patterns are integers in [0, 2^m); the first written bit of a pattern
/// is its most significant bit, so "10" is pattern 2.
class Codebook {
public:
    /// Identity mapping: pattern p selects entries[p].
    Codebook(std::size_t length_n, int bits_per_codeword, std::vector<Codeword> entries);

    /// Explicit mapping: pattern p selects entries[pattern_to_entry[p]].
    Codebook(std::size_t length_n, int bits_per_codeword, std::vector<Codeword> entries,
             std::vector<std::uint32_t> pattern_to_entry);

    std::size_t length_n() const { return length_n_; }
    int bits_per_codeword() const { return bits_; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<Codeword>& entries() const { return entries_; }
    const Codeword& entry(std::size_t index) const { return entries_.at(index); }

    std::size_t entry_for_pattern(std::uint32_t pattern) const { return pattern_to_entry_.at(pattern); }
    std::uint32_t pattern_for_entry(std::size_t index) const { return entry_to_pattern_.at(index); }

    const Codeword& encode(std::uint32_t pattern) const { return entries_[entry_for_pattern(pattern)]; }

    /// Exact-match inverse lookup; nullopt if the word is not in the codebook.
    std::optional<std::uint32_t> decode_exact(const Codeword& word) const;

private:
    std::size_t length_n_;
    int bits_;
    std::vector<Codeword> entries_;
    std::vector<std::uint32_t> pattern_to_entry_;
    std::vector<std::uint32_t> entry_to_pattern_;
};

/// Parses a string of '0'/'1' characters, first character most significant.
/// Throws std::invalid_argument on any other character or an empty string.
std::uint32_t parse_bit_pattern(std::string_view bits);

/// Renders the low `width` bits of `pattern`, most significant first.
std::string format_bit_pattern(std::uint32_t pattern, int width);

// ---- 2-bit ----------------------------------------------------------------

/// C0 = [e^{j(phi1+phi2)}, e^{j phi1}], phases from {0, pi}.
Codeword cck2_codeword(const PhaseVector& phases);
Codebook cck2_codebook();

// ---- 4-bit ----------------------------------------------------------------

/// C1 = [e^{j(phi1+phi2+phi3)}, e^{j(phi1+phi3)}, e^{j(phi1+phi2)}, -e^{j phi1}],
/// phases from {0, 2pi/3, 4pi/3}.
Codeword cck4_codeword(const PhaseVector& phases);

/// All 27 length-4 codewords. Index 9*i1 + 3*i2 + i3 holds the phase triple
/// (i1, i2, i3) * 2pi/3.
std::vector<Codeword> cck4_enumerate();

/// Fixed 16-entry reference codebook; row r is bit pattern r.
Codebook cck4_reference_codebook();

/// Outcome of a min-distance subset search.
struct SubsetSelection {
    std::vector<std::size_t> indices;  ///< sorted candidate indices
    double min_distance = 0.0;
    std::size_t min_pair_count = 0;    ///< pairs at exactly min_distance
    std::size_t subsets_examined = 0;
};

/// Three-stage random subset search.
///
/// Draws `num_random_subsets` distinct `subset_size`-subsets uniformly, keeps
/// those with the largest minimum pairwise distance, then the one with the
/// fewest pairs at that distance. Remaining ties go to the lexicographically
/// smallest sorted index set.
SubsetSelection select_subset_random(std::span<const Codeword> candidates, std::size_t subset_size,
                                     std::size_t num_random_subsets, std::mt19937_64& rng);

/// Same selection rule, applied to every subset.
SubsetSelection select_subset_exhaustive(std::span<const Codeword> candidates, std::size_t subset_size);

/// 16-entry codebook chosen from the 27 candidates by select_subset_random.
/// Entries keep candidate order; entry r is bit pattern r.
Codebook select_cck4_subset(std::span<const Codeword> candidates, std::size_t num_random_subsets,
                            std::mt19937_64& rng);

// ---- 8-bit ----------------------------------------------------------------

/// C2 per the eight-chip CCK rule; phases from {0, pi, pi/2, -pi/2}.
Codeword cck8_codeword(const PhaseVector& phases);

/// Splits the byte into 2-bit groups, most significant group first, mapped
/// 00->0, 01->pi, 10->pi/2, 11->-pi/2 as (phi1, phi2, phi3, phi4).
Codeword cck8_codeword(std::uint8_t byte);
Codeword cck8_codeword(std::string_view bits);

/// 256 entries indexed by byte value.
Codebook cck8_codebook();

/// Entry indices of cck8_codebook() whose phi1 equals quarter turn `phi1_quarter`
/// (0 -> 0, 1 -> pi/2, 2 -> pi, 3 -> -pi/2).
std::vector<std::size_t> cck8_phi1_coset(int phi1_quarter);

// ---- distances and correlation --------------------------------------------

double euclidean_distance(const Codeword& a, const Codeword& b);
cplx inner_product(const Codeword& a, const Codeword& b);  ///< sum a_i * conj(b_i)

/// Minimum pairwise Euclidean distance. Throws for fewer than two entries.
double min_distance(const Codebook& codebook);
double min_distance(std::span<const Codeword> words);

/// sqrt(N/2) * |1 - e^{j 2pi/M}|.
/// Throws std::invalid_argument unless n >= 2 is a power of two and m >= 2.
double dmin_closed_form(int n, int m);

bool mutually_orthogonal(std::span<const Codeword> words, double tol = 1e-9);

/// Largest mutually orthogonal subset (indices into `words`), exact search.
std::vector<std::size_t> largest_orthogonal_subset(std::span<const Codeword> words, double tol = 1e-9);

/// Searches the four fixed-phi1 cosets of the 8-bit codebook for one of
/// `size` pairwise orthogonal codewords. Returns its indices, or nullopt.
std::optional<std::vector<std::size_t>> find_orthogonal_cck8_coset(const Codebook& cck8, std::size_t size = 64,
                                                                   double tol = 1e-9);

/// CSV dump: index,bit_pattern,chip_0_re,chip_0_im,...
void write_codebook_csv(const Codebook& codebook, std::ostream& out);

}  // namespace scckm

#endif  // SCCKM_CCK_CODEBOOK_HPP
