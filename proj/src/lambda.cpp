#include "pir/lambda.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pir {

CoordSet RateMatrix::row_support(int u) const {
    CoordSet out;
    for (int l = 0; l < n; ++l)
        if (at(u, l)) out.push_back(l + 1);
    return out;
}

ValidateResult validate_rate_matrix(const LinearCode& code, const RateMatrix& M) {
    if (M.n != code.n()) throw std::invalid_argument("rate matrix width does not match code length");
    if (M.nu < 1 || M.kappa < 1 || M.kappa > M.nu) throw std::invalid_argument("need 1 <= kappa <= nu");
    if (M.lam.size() != static_cast<size_t>(M.nu) * M.n) throw std::invalid_argument("rate matrix size mismatch");
    for (int l = 0; l < M.n; ++l) {
        int w = 0;
        for (int u = 0; u < M.nu; ++u) w += M.at(u, l);
        if (w != M.kappa)
            return {false, "column " + std::to_string(l + 1) + " has weight " + std::to_string(w) + ", expected " +
                               std::to_string(M.kappa)};
    }
    for (int u = 0; u < M.nu; ++u) {
        CoordSet supp = M.row_support(u);
        std::vector<int> cols;
        for (int c : supp) cols.push_back(c - 1);
        if (code.generator().cols_subset(cols).rank() != code.k())
            return {false, "row " + std::to_string(u + 1) + " support contains no information set"};
    }
    return {true, ""};
}

namespace {

// Candidate row supports ordered column-1-first (0 before 1), the row order
// used for the non-decreasing symmetry break and the lexicographic result.
bool row_less(std::uint32_t a, std::uint32_t b) {
    if (a == b) return false;
    std::uint32_t d = a ^ b;
    std::uint32_t low = d & -d;
    return (a & low) == 0;
}

struct Searcher {
    const LinearCode& code;
    int kappa, nu, n;       // target column weight of the matrix searched
    bool complemented;      // searching 1-Lambda with column weight nu-kappa
    std::uint64_t budget, expansions = 0;
    bool exceeded = false;

    std::vector<std::uint32_t> cands;  // admissible row masks
    std::vector<int> cnt;              // current column weights
    std::vector<int> chosen;           // indices into cands

    // When nu-kappa < kappa the complement matrix has the smaller column
    // weight and prunes much faster; validity maps one-to-one (a row is
    // admissible when the coordinates it leaves uncovered still contain an
    // information set).
    Searcher(const LinearCode& c, int kap, int nv, std::uint64_t bud)
        : code(c), kappa(kap), nu(nv), n(c.n()), complemented(nv - kap < kap), budget(bud) {
        if (n > 20) throw std::runtime_error("rate-matrix search supports n <= 20");
        if (complemented) kappa = nu - kap;
        const std::uint32_t full = (n == 32 ? ~0u : (1u << n) - 1);
        const bool gf2 = code.field().q() == 2;
        Gf2Cols packed;
        if (gf2) packed = Gf2Cols::from(code.generator());
        auto full_rank = [&](std::uint32_t m) {
            if (__builtin_popcount(m) < code.k()) return false;
            if (gf2) return packed.rank_of_mask(m) == code.k();
            std::vector<int> cols;
            for (int l = 0; l < n; ++l)
                if (m >> l & 1) cols.push_back(l);
            return code.generator().cols_subset(cols).rank() == code.k();
        };
        for (std::uint32_t m = 0; m <= full; ++m) {
            const std::uint32_t support = complemented ? full & ~m : m;
            if (full_rank(support)) cands.push_back(m);
        }
        // heaviest rows first: combined with the exact total-weight target
        // this turns the weight ledger into a hard break during the scan
        std::sort(cands.begin(), cands.end(), [](std::uint32_t a, std::uint32_t b) {
            int wa = __builtin_popcount(a), wb = __builtin_popcount(b);
            if (wa != wb) return wa > wb;
            return row_less(a, b);
        });
        cnt.assign(n, 0);
    }

    bool dfs(int row, size_t from) {
        if (row == nu) {
            for (int l = 0; l < n; ++l)
                if (cnt[l] != kappa) return false;
            return true;
        }
        std::uint32_t must_cover = 0, must_avoid = 0;
        const int remaining = nu - row;
        int weight_needed = 0;
        for (int l = 0; l < n; ++l) {
            const int need = kappa - cnt[l];
            if (need > remaining) return false;
            if (need == remaining) must_cover |= 1u << l;
            if (need == 0) must_avoid |= 1u << l;
            weight_needed += need;
        }
        for (size_t i = from; i < cands.size(); ++i) {
            const std::uint32_t m = cands[i];
            const int w = __builtin_popcount(m);
            if (static_cast<long long>(remaining) * w < weight_needed) break;  // weights only shrink from here
            if (++expansions > budget) {
                exceeded = true;
                return false;
            }
            if (w > weight_needed) continue;
            if ((m & must_cover) != must_cover || (m & must_avoid)) continue;
            for (int l = 0; l < n; ++l)
                if (m >> l & 1) ++cnt[l];
            chosen.push_back(static_cast<int>(i));
            if (dfs(row + 1, i)) return true;  // row multiset ordered along the candidate list
            chosen.pop_back();
            for (int l = 0; l < n; ++l)
                if (m >> l & 1) --cnt[l];
            if (exceeded) return false;
        }
        return false;
    }
};

}  // namespace

LambdaSearch find_rate_matrix(const LinearCode& code, int kappa, int nu, std::uint64_t budget) {
    if (kappa < 1 || kappa > nu) throw std::invalid_argument("need 1 <= kappa <= nu");
    LambdaSearch out;
    // Lower bound kappa/nu >= k/n, else nothing to search.
    if (static_cast<long long>(kappa) * code.n() < static_cast<long long>(code.k()) * nu) {
        out.status = SearchStatus::NoneExists;
        return out;
    }
    // Support-weight obstruction: an s-dimensional subcode with support S
    // meets every information set in >= s coordinates (restriction to an
    // information set is injective), while the column weights over S sum to
    // kappa |S|.  A valid matrix therefore needs kappa d_s >= nu s for every
    // s; fractions failing it are proved nonexistent without searching.
    bool weights_known = true;
    std::uint64_t total = 1;
    for (int i = 0; i < code.k() && weights_known; ++i) {
        total *= code.field().q();
        if (total > (std::uint64_t{1} << 20)) weights_known = false;
    }
    if (weights_known) {
        for (int s = 1; s <= code.k(); ++s) {
            long long ds = generalized_hamming_weight(code, s);
            if (static_cast<long long>(kappa) * ds < static_cast<long long>(nu) * s) {
                out.status = SearchStatus::NoneExists;
                return out;
            }
        }
    }
    Searcher s(code, kappa, nu, budget);
    bool found = s.dfs(0, 0);
    out.expansions = s.expansions;
    if (found) {
        RateMatrix M;
        M.nu = nu;
        M.kappa = kappa;
        M.n = code.n();
        M.code_hash = code_hash(code);
        M.lam.assign(static_cast<size_t>(nu) * code.n(), 0);
        for (int u = 0; u < nu; ++u) {
            std::uint32_t m = s.cands[s.chosen[u]];
            for (int l = 0; l < code.n(); ++l) {
                bool bit = (m >> l & 1) != 0;
                if (s.complemented) bit = !bit;
                if (bit) M.lam[static_cast<size_t>(u) * code.n() + l] = 1;
            }
        }
        out.matrix = std::move(M);
        out.status = SearchStatus::Found;
    } else {
        out.status = s.exceeded ? SearchStatus::BudgetExceeded : SearchStatus::NoneExists;
    }
    return out;
}

namespace {

struct Fraction {
    int kappa, nu;
};

std::vector<Fraction> fractions_ascending(const LinearCode& code, int nu_max) {
    std::vector<Fraction> fs;
    for (int nu = 1; nu <= nu_max; ++nu)
        for (int kappa = 1; kappa <= nu; ++kappa)
            if (static_cast<long long>(kappa) * code.n() >= static_cast<long long>(code.k()) * nu)
                fs.push_back({kappa, nu});
    std::sort(fs.begin(), fs.end(), [](const Fraction& a, const Fraction& b) {
        long long va = static_cast<long long>(a.kappa) * b.nu, vb = static_cast<long long>(b.kappa) * a.nu;
        if (va != vb) return va < vb;
        return a.nu < b.nu;
    });
    return fs;
}

}  // namespace

MinRatioResult find_min_ratio(const LinearCode& code, int nu_max, std::uint64_t budget) {
    MinRatioResult out;
    for (const Fraction& f : fractions_ascending(code, nu_max)) {
        LambdaSearch s = find_rate_matrix(code, f.kappa, f.nu, budget);
        if (s.status == SearchStatus::Found) {
            out.found = true;
            out.kappa = f.kappa;
            out.nu = f.nu;
            out.matrix = s.matrix;
            return out;
        }
        if (s.status == SearchStatus::BudgetExceeded) out.exhaustive = false;
    }
    out.found = false;
    return out;
}

CapacityVerdict is_capacity_achieving(const LinearCode& code, int nu_max, std::uint64_t budget) {
    const int g = std::gcd(code.k(), code.n());
    const int k0 = code.k() / g, n0 = code.n() / g;
    bool exceeded = false;
    for (int t = 1; t * n0 <= nu_max; ++t) {
        LambdaSearch s = find_rate_matrix(code, t * k0, t * n0, budget);
        if (s.status == SearchStatus::Found) return CapacityVerdict::Achieving;
        if (s.status == SearchStatus::BudgetExceeded) exceeded = true;
    }
    return exceeded ? CapacityVerdict::Inconclusive : CapacityVerdict::NotWithinBudget;
}

InterferencePair build_interference_pair(const RateMatrix& M) {
    InterferencePair P;
    P.kappa = M.kappa;
    P.nu = M.nu;
    P.n = M.n;
    P.A.assign(static_cast<size_t>(M.kappa) * M.n, 0);
    P.B.assign(static_cast<size_t>(M.nu - M.kappa) * M.n, 0);
    for (int l = 0; l < M.n; ++l) {
        int ai = 0, bi = 0;
        for (int u = 0; u < M.nu; ++u) {
            if (M.at(u, l))
                P.A[static_cast<size_t>(ai++) * M.n + l] = u + 1;
            else
                P.B[static_cast<size_t>(bi++) * M.n + l] = u + 1;
        }
    }
    return P;
}

std::vector<int> interference_support(const InterferencePair& P, int a) {
    std::vector<int> out;
    for (int l = 0; l < P.n; ++l)
        for (int i = 0; i < P.kappa; ++i)
            if (P.a(i, l) == a) {
                out.push_back(l + 1);
                break;
            }
    return out;
}

}  // namespace pir
