// PIR achievable rate matrices: validation against the two defining
// conditions (constant column weight, every row support contains an
// information set), exhaustive backtracking search for given (kappa, nu),
// minimization of kappa/nu, the capacity-achieving verdict, and the
// interference matrices A/B derived from a rate matrix.

#ifndef PIR_LAMBDA_HPP
#define PIR_LAMBDA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pir/code.hpp"

namespace pir {

struct RateMatrix {
    int nu = 0, kappa = 0, n = 0;
    std::vector<std::uint8_t> lam;  // row-major nu x n, entries 0/1
    std::string code_hash;          // hash of the certified code

    std::uint8_t at(int u, int l) const { return lam[static_cast<size_t>(u) * n + l]; }  // 0-based
    CoordSet row_support(int u) const;  // 1-based coordinates
};

struct ValidateResult {
    bool valid = false;
    std::string violation;  // names the failing column or row
};

ValidateResult validate_rate_matrix(const LinearCode& code, const RateMatrix& M);

enum class SearchStatus { Found, NoneExists, BudgetExceeded };

struct LambdaSearch {
    SearchStatus status = SearchStatus::NoneExists;
    std::optional<RateMatrix> matrix;
    std::uint64_t expansions = 0;
};

LambdaSearch find_rate_matrix(const LinearCode& code, int kappa, int nu, std::uint64_t budget = 50000000);

struct MinRatioResult {
    bool found = false;
    int kappa = 0, nu = 0;
    std::optional<RateMatrix> matrix;
    bool exhaustive = true;  // false when some smaller fraction hit the search budget
};

MinRatioResult find_min_ratio(const LinearCode& code, int nu_max = 8, std::uint64_t budget = 50000000);

enum class CapacityVerdict { Achieving, NotWithinBudget, Inconclusive };

CapacityVerdict is_capacity_achieving(const LinearCode& code, int nu_max = 8, std::uint64_t budget = 50000000);

// Interference matrices: per column l the kappa row indices u with
// lambda_{u,l} = 1 (A) and the nu-kappa with lambda_{u,l} = 0 (B), each
// column in ascending order.  Entries are 1-based values in [1, nu].
struct InterferencePair {
    int kappa = 0, nu = 0, n = 0;
    std::vector<int> A;  // row-major kappa x n
    std::vector<int> B;  // row-major (nu-kappa) x n

    int a(int i, int l) const { return A[static_cast<size_t>(i) * n + l]; }  // 0-based slots
    int b(int i, int l) const { return B[static_cast<size_t>(i) * n + l]; }
};

InterferencePair build_interference_pair(const RateMatrix& M);

// S(a|A): 1-based columns of A containing value a.
std::vector<int> interference_support(const InterferencePair& P, int a);

}  // namespace pir

#endif
