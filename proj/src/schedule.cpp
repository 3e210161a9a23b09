#include "pir/schedule.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace pir {

namespace {

struct ResolvedSum {
    std::vector<int> batches;                       // ascending batch ids h (1-based)
    std::vector<std::pair<int, int>> file_syms;     // (stripe, coord), requested file
    std::vector<std::pair<int, int>> code_syms;     // (file, stripe)
};

int batch_of(int j, int k) { return (j - 1) / k + 1; }
int coord_of(int j, int k) { return (j - 1) % k + 1; }

// Check the sum against the generator column and group its terms.
ResolvedSum resolve_sum(const LinearCode& code, const Schedule& sched, int node, int sum_idx) {
    const SchedSum& sum = sched.per_node[node - 1][sum_idx];
    const int k = code.k();
    const Mat& G = code.generator();
    ResolvedSum out;
    std::map<int, std::set<int>> per_batch;  // batch -> coords
    for (const SchedTerm& t : sum.terms) {
        switch (t.kind) {
            case SchedTerm::Interference:
                if (t.j < 1) throw std::invalid_argument("interference index must be positive");
                per_batch[batch_of(t.j, k)].insert(coord_of(t.j, k));
                break;
            case SchedTerm::FileSymbol: {
                if (t.stripe < 1 || t.stripe > sched.beta) throw std::invalid_argument("stripe out of range");
                int nz = 0, where = 0;
                for (int r = 0; r < k; ++r)
                    if (G.at(r, node - 1)) {
                        ++nz;
                        where = r + 1;
                    }
                if (nz != 1 || where != t.coord)
                    throw std::invalid_argument("node " + std::to_string(node) + ": file symbol x_{" +
                                                std::to_string(t.stripe) + "," + std::to_string(t.coord) +
                                                "} is not stored at this node");
                out.file_syms.push_back({t.stripe, t.coord});
                break;
            }
            case SchedTerm::CodeSymbol:
                if (t.stripe < 1 || t.stripe > sched.beta) throw std::invalid_argument("stripe out of range");
                if (t.file < 1) throw std::invalid_argument("code-symbol term needs a file");
                out.code_syms.push_back({t.file, t.stripe});
                break;
        }
    }
    for (auto& [h, coords] : per_batch) {
        std::set<int> expect;
        for (int r = 0; r < k; ++r)
            if (G.at(r, node - 1)) expect.insert(r + 1);
        if (coords != expect)
            throw std::invalid_argument("node " + std::to_string(node) + " sum " + std::to_string(sum_idx + 1) +
                                        ": interference terms do not match the generator column");
        out.batches.push_back(h);
    }
    std::sort(out.batches.begin(), out.batches.end());
    return out;
}

// Solve M w = rhs by elimination, free variables set to zero.
std::optional<std::vector<fe_t>> solve_linear(const Field& F, const Mat& M, const std::vector<fe_t>& rhs) {
    const int rows = M.rows(), cols = M.cols();
    Mat aug(F, rows, cols + 1);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) aug.at(r, c) = M.at(r, c);
        aug.at(r, cols) = rhs[r];
    }
    std::vector<int> pivots;
    Mat red = aug.rref(nullptr, &pivots);
    std::vector<fe_t> w(cols, 0);
    for (size_t pi = 0; pi < pivots.size(); ++pi) {
        if (pivots[pi] == cols) return std::nullopt;  // inconsistent
        // find the row with this pivot
        w[pivots[pi]] = red.at(static_cast<int>(pi), cols);
    }
    return w;
}

struct System {
    int n_ivars = 0;
    std::vector<int> batch_list;                      // ascending batch ids
    std::map<int, int> batch_pos;                     // id -> position
    int f = 1, beta = 1, k = 1;
    std::vector<std::vector<fe_t>> rows;              // equation coefficient vectors
    std::vector<std::pair<int, int>> eq_source;       // (node, sum index)

    int vars() const { return n_ivars + f * beta * k; }
    int ivar(int h, int coord) const { return batch_pos.at(h) * k + (coord - 1); }
    int xvar(int file, int stripe, int coord) const {
        return n_ivars + ((file - 1) * beta + (stripe - 1)) * k + (coord - 1);
    }
};

System build_system(const LinearCode& code, const Schedule& sched, int f, int target_file) {
    const int k = code.k();
    const Mat& G = code.generator();
    System sys;
    sys.f = f;
    sys.beta = sched.beta;
    sys.k = k;
    std::set<int> batches;
    for (int node = 1; node <= code.n(); ++node)
        for (size_t s = 0; s < sched.per_node[node - 1].size(); ++s) {
            ResolvedSum rs = resolve_sum(code, sched, node, static_cast<int>(s));
            for (int h : rs.batches) batches.insert(h);
        }
    for (int h : batches) {
        sys.batch_pos[h] = static_cast<int>(sys.batch_list.size());
        sys.batch_list.push_back(h);
    }
    sys.n_ivars = static_cast<int>(sys.batch_list.size()) * k;

    const Field& F = code.field();
    for (int node = 1; node <= code.n(); ++node)
        for (size_t s = 0; s < sched.per_node[node - 1].size(); ++s) {
            ResolvedSum rs = resolve_sum(code, sched, node, static_cast<int>(s));
            std::vector<fe_t> row(sys.vars(), 0);
            for (int h : rs.batches)
                for (int r = 0; r < k; ++r)
                    if (G.at(r, node - 1))
                        row[sys.ivar(h, r + 1)] = F.add(row[sys.ivar(h, r + 1)], G.at(r, node - 1));
            for (auto [stripe, coord] : rs.file_syms) {
                int v = sys.xvar(target_file, stripe, coord);
                row[v] = F.add(row[v], G.at(coord - 1, node - 1));
            }
            for (auto [file, stripe] : rs.code_syms) {
                if (file > f) throw std::invalid_argument("code-symbol term names a file beyond f");
                for (int r = 0; r < k; ++r)
                    if (G.at(r, node - 1)) {
                        int v = sys.xvar(file, stripe, r + 1);
                        row[v] = F.add(row[v], G.at(r, node - 1));
                    }
            }
            sys.rows.push_back(std::move(row));
            sys.eq_source.push_back({node, static_cast<int>(s)});
        }
    return sys;
}

bool privacy_of(const LinearCode& code, const Schedule& sched, std::string* detail) {
    for (int node = 1; node <= code.n(); ++node) {
        std::map<int, int> batch_uses;
        for (size_t s = 0; s < sched.per_node[node - 1].size(); ++s) {
            ResolvedSum rs = resolve_sum(code, sched, node, static_cast<int>(s));
            if (!rs.file_syms.empty() && rs.batches.empty()) {
                if (detail)
                    *detail = "node " + std::to_string(node) + " sum " + std::to_string(s + 1) +
                              " requests a file symbol without an interference mask";
                return false;
            }
            for (int h : rs.batches)
                if (++batch_uses[h] > 1) {
                    if (detail)
                        *detail = "node " + std::to_string(node) + " reuses interference batch " + std::to_string(h);
                    return false;
                }
        }
    }
    return true;
}

}  // namespace

ScheduleVerdict verify_schedule(const LinearCode& code, const Schedule& sched, int f) {
    if (static_cast<int>(sched.per_node.size()) != code.n())
        throw std::invalid_argument("schedule must list every node");
    if (f < 1) throw std::invalid_argument("need f >= 1");
    ScheduleVerdict out;
    System sys = build_system(code, sched, f, 1);

    Mat A(code.field(), static_cast<int>(sys.rows.size()), sys.vars());
    for (size_t r = 0; r < sys.rows.size(); ++r)
        for (int c = 0; c < sys.vars(); ++c) A.at(static_cast<int>(r), c) = sys.rows[r][c];
    Mat At = A.transpose();

    out.recoverable = true;
    for (int stripe = 1; stripe <= sched.beta && out.recoverable; ++stripe)
        for (int coord = 1; coord <= code.k(); ++coord) {
            std::vector<fe_t> target(sys.vars(), 0);
            target[sys.xvar(1, stripe, coord)] = 1;
            if (!solve_linear(code.field(), At, target)) {
                out.recoverable = false;
                out.detail = "x_{" + std::to_string(stripe) + "," + std::to_string(coord) + "} is undetermined";
                break;
            }
        }
    std::string pdetail;
    out.priv = privacy_of(code, sched, &pdetail);
    if (!out.priv && out.detail.empty()) out.detail = pdetail;
    for (const auto& sums : sched.per_node) out.download += static_cast<long long>(sums.size());
    out.rate = out.download ? Rational(static_cast<long long>(sched.beta) * code.k(), out.download) : Rational(0);
    return out;
}

QueryPlan plan_from_schedule(const CodedStore& store, const Schedule& sched, int m, std::uint64_t seed) {
    const LinearCode& code = store.code;
    if (static_cast<int>(sched.per_node.size()) != code.n())
        throw std::invalid_argument("schedule must list every node");
    if (m < 1 || m > store.f) throw std::invalid_argument("target file out of range");
    if (store.beta != sched.beta) throw std::invalid_argument("store beta does not match schedule");

    System sys = build_system(code, sched, store.f, m);
    const Field& F = code.field();

    QueryPlan plan;
    plan.protocol = "schedule";
    plan.target_file = m;
    plan.f = store.f;
    plan.beta = store.beta;
    plan.file_independent = true;
    plan.seed = seed;
    plan.per_node.resize(code.n());
    for (int l = 0; l < code.n(); ++l) plan.per_node[l].node = l + 1;
    std::vector<int> all_coords(code.n());
    std::iota(all_coords.begin(), all_coords.end(), 1);
    plan.parts = {PartInfo{all_coords, code.generator()}};

    // one uniform mask vector per interference batch, ascending batch id
    std::mt19937_64 rng(seed);
    const long long rows_total = static_cast<long long>(store.beta) * store.f;
    std::map<int, std::vector<fe_t>> batch_mask;
    for (int h : sys.batch_list) {
        std::vector<fe_t> u(rows_total);
        for (long long r = 0; r < rows_total; ++r) u[r] = F.sample(rng);
        batch_mask[h] = std::move(u);
    }

    std::map<std::pair<int, int>, std::pair<int, int>> combo_of;  // (node, sum) -> (node, combo idx)
    for (int node = 1; node <= code.n(); ++node) {
        for (size_t s = 0; s < sched.per_node[node - 1].size(); ++s) {
            ResolvedSum rs = resolve_sum(code, sched, node, static_cast<int>(s));
            QueryCombo c;
            c.coeff.assign(rows_total, 0);
            // combined mask of all batches in the sum
            std::vector<fe_t> mask(rows_total, 0);
            for (int h : rs.batches)
                for (long long r = 0; r < rows_total; ++r) mask[r] = F.add(mask[r], batch_mask[h][r]);
            c.coeff = mask;
            long long unit = -1;
            for (auto [stripe, coord] : rs.file_syms) {
                (void)coord;
                long long row = static_cast<long long>(m - 1) * store.beta + (stripe - 1);
                c.coeff[row] = F.add(c.coeff[row], 1);
                unit = row;
            }
            for (auto [file, stripe] : rs.code_syms) {
                long long row = static_cast<long long>(file - 1) * store.beta + (stripe - 1);
                c.coeff[row] = F.add(c.coeff[row], 1);
            }
            if (!rs.batches.empty()) {
                c.mask_id = static_cast<int>(plan.masks.size());
                plan.masks.push_back(mask);
                if (rs.file_syms.size() == 1) c.unit_row = unit;
            }
            c.repetition = 1;
            c.round = 1;
            plan.per_node[node - 1].combos.push_back(std::move(c));
            combo_of[{node, static_cast<int>(s)}] = {node, static_cast<int>(plan.per_node[node - 1].combos.size()) - 1};
        }
    }

    // precompute the elimination expressing every requested symbol from the
    // responses (valid whatever the interference values turn out to be)
    Mat A(F, static_cast<int>(sys.rows.size()), sys.vars());
    for (size_t r = 0; r < sys.rows.size(); ++r)
        for (int c = 0; c < sys.vars(); ++c) A.at(static_cast<int>(r), c) = sys.rows[r][c];
    Mat At = A.transpose();
    LinearRecovery rec;
    rec.rows.resize(static_cast<size_t>(store.beta) * code.k());
    for (int stripe = 1; stripe <= store.beta; ++stripe)
        for (int coord = 1; coord <= code.k(); ++coord) {
            std::vector<fe_t> target(sys.vars(), 0);
            target[sys.xvar(m, stripe, coord)] = 1;
            auto w = solve_linear(F, At, target);
            if (!w) throw std::invalid_argument("schedule is not recoverable: x_{" + std::to_string(stripe) + "," +
                                                std::to_string(coord) + "} is undetermined");
            auto& row = rec.rows[static_cast<size_t>(stripe - 1) * code.k() + (coord - 1)];
            for (size_t eq = 0; eq < w->size(); ++eq)
                if ((*w)[eq]) {
                    auto [node, cidx] = combo_of.at(sys.eq_source[eq]);
                    row.push_back({node, cidx, (*w)[eq]});
                }
        }
    plan.elimination = std::move(rec);
    return plan;
}

}  // namespace pir
