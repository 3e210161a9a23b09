// Linear storage code [n,k] over GF(q) and the analytics the PIR
// machinery needs: information sets, generalized Hamming weights,
// puncturing, the capacity-achieving necessary condition, and exact
// direct-sum decomposition.

#ifndef PIR_CODE_HPP
#define PIR_CODE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pir/matrix.hpp"

namespace pir {

// Column indices, 1-based, sorted ascending.
using CoordSet = std::vector<int>;

class LinearCode {
  public:
    // G must have full row rank; throws otherwise.
    explicit LinearCode(Mat G);

    int n() const { return G_.cols(); }
    int k() const { return G_.rows(); }
    const Mat& generator() const { return G_; }
    const Field& field() const { return G_.field(); }

    std::vector<fe_t> encode(const std::vector<fe_t>& message) const;  // message * G

    bool operator==(const LinearCode& o) const { return G_ == o.G_; }

  private:
    Mat G_;
};

struct Punctured {
    LinearCode code;
    std::vector<int> coords;  // coords[j] = original 1-based coordinate of local column j
};

struct Decomposition {
    struct Part {
        CoordSet coords;
        LinearCode code;
    };
    std::vector<Part> parts;  // finest partition; one part means indecomposable
};

struct MdsPirCheck {
    bool pass = false;
    std::optional<int> failing_s;  // smallest violating s when pass == false
};

bool is_information_set(const LinearCode& code, const CoordSet& I);

// All size-k invertible column subsets, lexicographic.  Throws when
// binomial(n, k) exceeds cap.
std::vector<CoordSet> enumerate_information_sets(const LinearCode& code, std::uint64_t cap = 1000000);

// Lexicographically smallest information set whose coordinates all lie in
// `within` (1-based).  Empty result when none exists.
CoordSet first_information_set_within(const LinearCode& code, const CoordSet& within);

// d_s by enumeration of s-dimensional subspaces of the message space.
// Throws when q^k exceeds cap.
int generalized_hamming_weight(const LinearCode& code, int s, std::uint64_t cap = std::uint64_t{1} << 20);

// Necessary condition d_s >= (n/k) s for all s in [1, k].
MdsPirCheck mds_pir_necessary_check(const LinearCode& code, std::uint64_t cap = std::uint64_t{1} << 20);

Punctured puncture(const LinearCode& code, const CoordSet& I);

// Finest coordinate partition under which the code is a direct sum.
// Exact: unions coordinates over minimal-support codewords (the circuits
// of the code's matroid), enumerating all q^k codewords.  Throws when q^k
// exceeds cap or when some generator column is zero.
Decomposition direct_sum_decompose(const LinearCode& code, std::uint64_t cap = std::uint64_t{1} << 20);

std::string code_hash(const LinearCode& code);  // stable content hash for cross-references

}  // namespace pir

#endif
