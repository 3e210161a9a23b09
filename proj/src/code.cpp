#include "pir/code.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pir {

LinearCode::LinearCode(Mat G) : G_(std::move(G)) {
    if (G_.rows() < 1 || G_.rows() > G_.cols()) throw std::invalid_argument("need 1 <= k <= n");
    if (G_.rank() != G_.rows()) throw std::invalid_argument("generator matrix is not full row rank");
}

std::vector<fe_t> LinearCode::encode(const std::vector<fe_t>& message) const {
    return vec_mat(field(), message, G_);
}

namespace {

std::vector<int> to0(const CoordSet& I) {
    std::vector<int> out;
    out.reserve(I.size());
    for (int c : I) out.push_back(c - 1);
    return out;
}

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

bool is_information_set(const LinearCode& code, const CoordSet& I) {
    if (static_cast<int>(I.size()) != code.k())
        throw std::invalid_argument("information-set candidate must have size k");
    for (int c : I)
        if (c < 1 || c > code.n()) throw std::invalid_argument("coordinate out of range");
    return code.generator().cols_subset(to0(I)).rank() == code.k();
}

std::vector<CoordSet> enumerate_information_sets(const LinearCode& code, std::uint64_t cap) {
    const int n = code.n(), k = code.k();
    if (binomial(n, k) > cap)
        throw std::runtime_error("binomial(n,k) exceeds enumeration cap; test candidate sets on demand instead");
    std::vector<CoordSet> out;
    CoordSet I(k);
    // lexicographic k-subsets of [1, n]
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        for (int i = 0; i < k; ++i) I[i] = idx[i] + 1;
        if (is_information_set(code, I)) out.push_back(I);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

CoordSet first_information_set_within(const LinearCode& code, const CoordSet& within) {
    // Independence is a matroid, so greedily taking every coordinate that
    // grows the rank yields the lexicographically smallest basis.
    const int k = code.k();
    std::vector<int> cols;
    CoordSet out;
    for (int c : within) {
        cols.push_back(c - 1);
        if (code.generator().cols_subset(cols).rank() == static_cast<int>(cols.size()))
            out.push_back(c);
        else
            cols.pop_back();
        if (static_cast<int>(out.size()) == k) return out;
    }
    return {};
}

namespace {

// Enumerate RREF bases of all s-dimensional subspaces of F_q^k and take the
// smallest support of the corresponding subcode.  The subcode support is the
// union of the basis rows' codeword supports.
struct SubspaceWalker {
    const LinearCode& code;
    int s;
    int best;

    std::vector<int> pivots;         // ascending pivot columns
    std::vector<std::vector<fe_t>> rows;

    explicit SubspaceWalker(const LinearCode& c, int s_) : code(c), s(s_), best(c.n() + 1) {}

    void run() { choose_pivot(0, -1); }

    void choose_pivot(int level, int prev) {
        if (level == s) {
            fill_free(0, 0);
            return;
        }
        for (int p = prev + 1; p <= code.k() - (s - level); ++p) {
            pivots.push_back(p);
            choose_pivot(level + 1, p);
            pivots.pop_back();
        }
    }

    // Fill free entries of the RREF pattern row by row, position by position.
    void fill_free(int row, int col) {
        if (row == 0 && col == 0) {
            rows.assign(s, std::vector<fe_t>(code.k(), 0));
            for (int i = 0; i < s; ++i) rows[i][pivots[i]] = 1;
        }
        if (row == s) {
            evaluate();
            return;
        }
        if (col == code.k()) {
            fill_free(row + 1, 0);
            return;
        }
        bool frees = col > pivots[row];
        if (frees)
            for (int j = 0; j < s; ++j)
                if (pivots[j] == col) frees = false;  // pivot columns of later rows stay zero
        if (!frees) {
            fill_free(row, col + 1);
            return;
        }
        for (std::uint32_t v = 0; v < code.field().q(); ++v) {
            rows[row][col] = static_cast<fe_t>(v);
            fill_free(row, col + 1);
        }
        rows[row][col] = 0;
    }

    void evaluate() {
        std::vector<char> support(code.n(), 0);
        for (int i = 0; i < s; ++i) {
            auto cw = code.encode(rows[i]);
            for (int c = 0; c < code.n(); ++c)
                if (cw[c]) support[c] = 1;
        }
        int w = 0;
        for (char b : support) w += b;
        if (w < best) best = w;
    }
};

}  // namespace

int generalized_hamming_weight(const LinearCode& code, int s, std::uint64_t cap) {
    if (s < 1 || s > code.k()) throw std::invalid_argument("need 1 <= s <= k");
    std::uint64_t total = 1;
    for (int i = 0; i < code.k(); ++i) {
        total *= code.field().q();
        if (total > cap) throw std::runtime_error("q^k exceeds enumeration cap for generalized Hamming weights");
    }
    SubspaceWalker walker(code, s);
    walker.run();
    return walker.best;
}

MdsPirCheck mds_pir_necessary_check(const LinearCode& code, std::uint64_t cap) {
    for (int s = 1; s <= code.k(); ++s) {
        int ds = generalized_hamming_weight(code, s, cap);
        // d_s >= (n/k) s as exact integers: ds * k >= n * s
        if (static_cast<long long>(ds) * code.k() < static_cast<long long>(code.n()) * s)
            return {false, s};
    }
    return {true, std::nullopt};
}

Punctured puncture(const LinearCode& code, const CoordSet& I) {
    if (I.empty()) throw std::invalid_argument("puncture: coordinate set must be nonempty");
    for (int c : I)
        if (c < 1 || c > code.n()) throw std::invalid_argument("puncture: coordinate out of range");
    Mat proj = code.generator().cols_subset(to0(I));
    int rank = 0;
    Mat red = proj.rref(&rank);
    Mat G(code.field(), rank, proj.cols());
    for (int r = 0; r < rank; ++r)
        for (int c = 0; c < proj.cols(); ++c) G.at(r, c) = red.at(r, c);
    return Punctured{LinearCode(std::move(G)), I};
}

Decomposition direct_sum_decompose(const LinearCode& code, std::uint64_t cap) {
    const int n = code.n(), k = code.k();
    const Field& F = code.field();
    std::uint64_t total = 1;
    for (int i = 0; i < k; ++i) {
        total *= F.q();
        if (total > cap) throw std::runtime_error("q^k exceeds enumeration cap for direct-sum decomposition");
    }
    for (int c = 0; c < n; ++c) {
        bool zero = true;
        for (int r = 0; r < k; ++r)
            if (code.generator().at(r, c)) zero = false;
        if (zero) throw std::invalid_argument("direct-sum decomposition requires full code support (zero column found)");
    }

    // Union-find over coordinates, merged along minimal codeword supports.
    // A nonzero codeword has minimal support S exactly when the codewords
    // supported inside S form a one-dimensional space, i.e. the columns
    // outside S have rank k-1.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    std::vector<fe_t> msg(k, 0);
    std::vector<char> seen_support;
    std::vector<std::vector<char>> minimal_supports;
    for (std::uint64_t t = 1; t < total; ++t) {
        std::uint64_t v = t;
        for (int i = 0; i < k; ++i) {
            msg[i] = static_cast<fe_t>(v % F.q());
            v /= F.q();
        }
        auto cw = code.encode(msg);
        std::vector<int> outside;
        for (int c = 0; c < n; ++c)
            if (cw[c] == 0) outside.push_back(c);
        if (code.generator().cols_subset(outside).rank() != k - 1) continue;  // not minimal
        int first = -1;
        for (int c = 0; c < n; ++c)
            if (cw[c]) {
                if (first < 0)
                    first = c;
                else
                    unite(first, c);
            }
    }

    std::vector<std::vector<int>> groups(n);
    for (int c = 0; c < n; ++c) groups[find(c)].push_back(c);
    Decomposition out;
    for (int g = 0; g < n; ++g) {
        if (groups[g].empty()) continue;
        CoordSet coords;
        for (int c : groups[g]) coords.push_back(c + 1);
        std::sort(coords.begin(), coords.end());
        auto part = puncture(code, coords);
        out.parts.push_back(Decomposition::Part{part.coords, part.code});
    }
    std::sort(out.parts.begin(), out.parts.end(),
              [](const Decomposition::Part& a, const Decomposition::Part& b) { return a.coords.front() < b.coords.front(); });
    int ksum = 0;
    for (const auto& p : out.parts) ksum += p.code.k();
    if (ksum != k) throw std::logic_error("direct-sum decomposition lost dimension");
    return out;
}

std::string code_hash(const LinearCode& code) {
    // FNV-1a over (q, k, n, entries)
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(code.field().q());
    mix(static_cast<std::uint64_t>(code.k()));
    mix(static_cast<std::uint64_t>(code.n()));
    for (fe_t v : code.generator().data()) mix(v);
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace pir
