#include "pir/protocols.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace pir {

long long QueryPlan::total_download() const {
    long long t = 0;
    for (const auto& nq : per_node) t += static_cast<long long>(nq.combos.size());
    return t;
}

namespace {

long long ipow_ll(long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > (1ll << 62) / std::max(b, 1ll)) throw std::overflow_error("stripe count overflow");
        r *= b;
    }
    return r;
}

long long binom_ll(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::vector<int> random_perm(int n, std::mt19937_64& rng) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
        std::swap(p[i], p[j]);
    }
    return p;
}

// lexicographic size-r subsets of pool
std::vector<std::vector<int>> subsets_of(const std::vector<int>& pool, int r) {
    std::vector<std::vector<int>> out;
    if (r < 0 || r > static_cast<int>(pool.size())) return out;
    std::vector<int> idx(r);
    std::iota(idx.begin(), idx.end(), 0);
    const int n = static_cast<int>(pool.size());
    while (true) {
        std::vector<int> cur(r);
        for (int i = 0; i < r; ++i) cur[i] = pool[idx[i]];
        out.push_back(cur);
        int i = r - 1;
        while (i >= 0 && idx[i] == n - r + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (r == 0) out.assign(1, {});
    return out;
}

struct ComboRef {
    int node;  // 1-based global
    int index;
};

// Shared plumbing for appending combos to a plan.
struct PlanSink {
    QueryPlan& plan;
    const Field& F;
    int beta_global, f;

    ComboRef add(int node, const std::vector<std::pair<int, long long>>& rows, int rep, int round) {
        QueryCombo c;
        c.coeff.assign(static_cast<size_t>(beta_global) * f, 0);
        for (auto [file, stored] : rows) c.coeff[static_cast<size_t>(file - 1) * beta_global + stored] = F.add(c.coeff[static_cast<size_t>(file - 1) * beta_global + stored], 1);
        c.repetition = rep;
        c.round = round;
        auto& nq = plan.per_node[node - 1];
        nq.combos.push_back(std::move(c));
        return {node, static_cast<int>(nq.combos.size()) - 1};
    }

    ComboRef add_masked(int node, const std::vector<fe_t>& mask, int mask_id, long long unit_row, int rep, int round) {
        QueryCombo c;
        c.coeff = mask;
        if (unit_row >= 0) c.coeff[unit_row] = F.add(c.coeff[unit_row], 1);
        c.repetition = rep;
        c.round = round;
        c.mask_id = mask_id;
        c.unit_row = unit_row;
        auto& nq = plan.per_node[node - 1];
        nq.combos.push_back(std::move(c));
        return {node, static_cast<int>(nq.combos.size()) - 1};
    }
};

// One Protocol 1 / Protocol A instance on one coordinate block (the whole
// code, or a direct-sum part).  Local stripe space is [0, beta_local); the
// run maps it into the global stripe space through run_offset and the
// per-file interleaving permutation.
struct P1Run {
    const LinearCode& part_code;          // code on the part's coordinates
    const std::vector<int>& coords;       // local col -> global node (1-based)
    const RateMatrix& lam;
    const InterferencePair& pair;
    int part_index;
    int f, m;
    long long beta_global;
    long long beta_local;  // nu^f
    long long run_offset;
    const std::vector<std::vector<int>>& perm;  // per file: global y -> stored stripe
    bool asymmetric;
    PlanSink& sink;
    QueryPlan& plan;

    int kap = 0, nu = 0, n_loc = 0;
    long long group_size = 0;
    std::vector<std::vector<int>> Acol{}, Bcol{};  // per local col, ascending 1-based u
    std::vector<std::vector<int>> S{};             // per u: local cols (0-based)
    std::vector<CoordSet> solve_info{};            // per u: global info set inside S(u|A)
    std::vector<std::vector<char>> keep{};         // per u, local col
    std::vector<int> others{};                     // files != m
    std::vector<std::vector<std::vector<int>>> subsets{};  // subsets[r] = r-subsets of others

    std::map<std::pair<int, long long>, long long> block_offset{};  // (l, subset idx) within group
    std::vector<long long> next_undesired{};                        // per file (1-based), local allocator

    struct Unit {
        int batch = -1;
        std::vector<std::pair<int, long long>> rows;  // (file, stored stripe)
    };
    // units[(round, subset idx)][u-1][inst], rebuilt per repetition
    std::map<std::pair<int, int>, std::vector<std::vector<Unit>>> units{};

    std::map<long long, int> piece_of{};  // global y -> piece index in plan.pieces

    long long T(int round) const {  // undesired instances per (subset, u, node, repetition)
        return ipow_ll(kap, f - round - 1) * ipow_ll(nu - kap, round - 1);
    }
    long long bs(int round) const {  // desired block size per (group, subset)
        return ipow_ll(kap, f - round) * ipow_ll(nu - kap, round - 1);
    }

    void setup() {
        kap = lam.kappa;
        nu = lam.nu;
        n_loc = lam.n;
        if (kap >= nu) throw std::invalid_argument("protocol requires kappa < nu (code must store redundancy)");
        group_size = ipow_ll(nu, f - 1);
        Acol.assign(n_loc, {});
        Bcol.assign(n_loc, {});
        S.assign(nu + 1, {});
        for (int l = 0; l < n_loc; ++l)
            for (int u = 1; u <= nu; ++u) {
                if (lam.at(u - 1, l)) {
                    Acol[l].push_back(u);
                    S[u].push_back(l);
                } else {
                    Bcol[l].push_back(u);
                }
            }
        solve_info.assign(nu + 1, {});
        keep.assign(nu + 1, std::vector<char>(n_loc, 1));
        for (int u = 1; u <= nu; ++u) {
            CoordSet supp_local;
            for (int l : S[u]) supp_local.push_back(l + 1);
            CoordSet info_local = first_information_set_within(part_code, supp_local);
            if (info_local.empty()) throw std::logic_error("row support lost its information set");
            CoordSet info_global;
            for (int ll : info_local) info_global.push_back(coords[ll - 1]);
            solve_info[u] = info_global;
            if (asymmetric) {
                // retain exactly the lexicographically smallest information set
                keep[u].assign(n_loc, 0);
                for (int ll : info_local) keep[u][ll - 1] = 1;
            }
        }
        others.clear();
        for (int mm = 1; mm <= f; ++mm)
            if (mm != m) others.push_back(mm);
        subsets.assign(f, {});
        for (int r = 0; r < f; ++r) subsets[r] = subsets_of(others, r);
        // block offsets within a group: rounds ascending, subsets lex
        long long off = 0;
        for (int l = 1; l <= f; ++l)
            for (size_t mi = 0; mi < subsets[l - 1].size(); ++mi) {
                block_offset[{l, static_cast<long long>(mi)}] = off;
                off += bs(l);
            }
        if (off != group_size) throw std::logic_error("group layout mismatch");
        next_undesired.assign(f + 1, 0);
    }

    long long stored_row(int file, long long global_y) const { return perm[file - 1][global_y]; }

    std::pair<int, long long> row_of(int file, long long global_y) const { return {file, stored_row(file, global_y)}; }

    long long desired_y(int g, int round, long long subset_idx, long long t) const {
        return run_offset + static_cast<long long>(g - 1) * group_size + block_offset.at({round, subset_idx}) + t;
    }

    StripePiece& piece_for(long long global_y) {
        auto it = piece_of.find(global_y);
        if (it == piece_of.end()) {
            StripePiece p;
            p.part = part_index;
            p.file_row = static_cast<int>(stored_row(m, global_y));
            p.solve_nodes = {};  // set on first use
            plan.pieces.push_back(std::move(p));
            it = piece_of.emplace(global_y, static_cast<int>(plan.pieces.size()) - 1).first;
        }
        return plan.pieces[it->second];
    }

    void run() {
        setup();
        for (int rep = 1; rep <= kap; ++rep) {
            units.clear();
            for (int round = 1; round <= f; ++round) {
                emit_desired(rep, round);
                if (round <= f - 1) emit_undesired(rep, round);
            }
        }
    }

    void emit_desired(int rep, int round) {
        const auto& subs = subsets[round - 1];  // size round-1 subsets of others
        for (int l = 0; l < n_loc; ++l) {
            const int g = pair.a(rep - 1, l);
            if (asymmetric && !keep[g][l]) continue;
            const int node = coords[l];
            for (size_t mi = 0; mi < subs.size(); ++mi) {
                const long long blocksz = bs(round);
                std::vector<const Unit*> side;
                if (round >= 2) {
                    for (int u2 : Bcol[l]) {
                        const auto& uv = units.at({round - 1, static_cast<int>(mi)});
                        for (const Unit& un : uv[u2 - 1]) side.push_back(&un);
                    }
                    if (static_cast<long long>(side.size()) != blocksz) throw std::logic_error("side-information count mismatch");
                }
                for (long long t = 0; t < blocksz; ++t) {
                    const long long y = desired_y(g, round, static_cast<long long>(mi), t);
                    std::vector<std::pair<int, long long>> rows{row_of(m, y)};
                    int batch_ref = -1;
                    if (round >= 2) {
                        const Unit* un = side[t];
                        rows.insert(rows.end(), un->rows.begin(), un->rows.end());
                        batch_ref = un->batch;
                    }
                    ComboRef ref = sink.add(node, rows, rep, round);
                    StripePiece& pc = piece_for(y);
                    if (pc.solve_nodes.empty()) pc.solve_nodes = solve_info[g];
                    pc.taps.push_back({ref.node, ref.index, batch_ref});
                }
            }
        }
    }

    void emit_undesired(int rep, int round) {
        const auto& subs = subsets[round];  // size-round subsets of others
        const long long inst_count = T(round);
        for (size_t mi = 0; mi < subs.size(); ++mi) {
            auto& store = units[{round, static_cast<int>(mi)}];
            store.assign(nu, {});
            for (int u = 1; u <= nu; ++u) {
                for (long long inst = 0; inst < inst_count; ++inst) {
                    Unit un;
                    for (int file : subs[mi]) {
                        long long y = run_offset + next_undesired[file]++;
                        if (next_undesired[file] > beta_local) throw std::logic_error("undesired stripe pool exhausted");
                        un.rows.push_back(row_of(file, y));
                    }
                    SideBatch batch;
                    batch.part = part_index;
                    batch.solve_nodes = solve_info[u];
                    for (int l : S[u]) {
                        if (asymmetric && !keep[u][l]) continue;
                        ComboRef ref = sink.add(coords[l], un.rows, rep, round);
                        batch.taps.push_back({ref.node, ref.index});
                    }
                    plan.batches.push_back(std::move(batch));
                    un.batch = static_cast<int>(plan.batches.size()) - 1;
                    store[u - 1].push_back(std::move(un));
                }
            }
        }
    }
};

}  // namespace

long long required_beta_p1(const RateMatrix& M, int f) { return ipow_ll(M.nu, f); }

namespace {

QueryPlan plan_p1_family(const CodedStore& store, const RateMatrix& M, const InterferencePair& P, int m,
                         std::uint64_t seed, bool asymmetric) {
    if (m < 1 || m > store.f) throw std::invalid_argument("target file out of range");
    if (M.n != store.code.n()) throw std::invalid_argument("rate matrix does not match store");
    const long long want = required_beta_p1(M, store.f);
    if (store.beta != want)
        throw std::invalid_argument("store must hold beta = nu^f = " + std::to_string(want) + " stripes");

    QueryPlan plan;
    plan.protocol = asymmetric ? "a" : "p1";
    plan.target_file = m;
    plan.f = store.f;
    plan.beta = store.beta;
    plan.file_independent = false;
    plan.seed = seed;
    plan.per_node.resize(store.code.n());
    for (int l = 0; l < store.code.n(); ++l) plan.per_node[l].node = l + 1;
    plan.lambdas = {M};
    plan.pairs = {P};
    std::vector<int> all_coords(store.code.n());
    std::iota(all_coords.begin(), all_coords.end(), 1);
    plan.parts = {PartInfo{all_coords, store.code.generator()}};

    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> perms;
    for (int file = 0; file < store.f; ++file) perms.push_back(random_perm(store.beta, rng));
    plan.perms = {perms};

    PlanSink sink{plan, store.code.field(), store.beta, store.f};
    P1Run run{store.code, plan.parts[0].coords, M,    P,    0,    store.f, m,
              store.beta, store.beta,           0,    perms, asymmetric, sink, plan};
    run.run();
    return plan;
}

}  // namespace

QueryPlan plan_protocol1(const CodedStore& store, const RateMatrix& M, const InterferencePair& P, int m,
                         std::uint64_t seed) {
    return plan_p1_family(store, M, P, m, seed, false);
}

QueryPlan plan_protocolA(const CodedStore& store, const RateMatrix& M, const InterferencePair& P, int m,
                         std::uint64_t seed) {
    return plan_p1_family(store, M, P, m, seed, true);
}

FiStructure build_fi_structure(const LinearCode& code, const RateMatrix& M, int scale_cap) {
    const int kap = M.kappa, nu = M.nu, n = M.n;
    if (kap >= nu) throw std::invalid_argument("file-independent protocol requires kappa < nu");
    const int g = std::gcd(kap, nu - kap);
    const int b0 = (nu - kap) / g, a0 = kap / g;

    std::vector<CoordSet> all_info = enumerate_information_sets(code);

    for (int scale = 1; scale <= scale_cap; ++scale) {
        const int b = b0 * scale, a = a0 * scale;
        // lexicographic multisets of rows, size a
        std::vector<int> rows(a, 1);
        while (true) {
            // try to cover b stripes with these batch rows
            std::vector<std::vector<char>> used(a, std::vector<char>(n, 0));
            std::vector<std::vector<std::pair<int, int>>> cover(b);
            std::vector<int> chosen_T(b, -1);

            std::vector<int> ti(b, 0);
            int s = 0;
            while (s >= 0 && s < b) {
                bool placed = false;
                for (int& cand = ti[s]; cand < static_cast<int>(all_info.size()); ++cand) {
                    const CoordSet& T = all_info[cand];
                    std::vector<std::pair<int, int>> slots;
                    bool ok = true;
                    for (int node : T) {
                        int pick = -1;
                        for (int j = 0; j < a; ++j)
                            if (!M.at(rows[j] - 1, node - 1) && !used[j][node - 1]) {
                                pick = j;
                                break;
                            }
                        if (pick < 0) {
                            ok = false;
                            break;
                        }
                        used[pick][node - 1] = 1;
                        slots.push_back({node, pick});
                    }
                    if (ok) {
                        cover[s] = slots;
                        chosen_T[s] = cand;
                        ++ti[s];
                        placed = true;
                        break;
                    }
                    for (auto [node, j] : slots) used[j][node - 1] = 0;
                }
                if (placed) {
                    ++s;
                    if (s < b) ti[s] = 0;
                } else {
                    --s;
                    if (s >= 0)
                        for (auto [node, j] : cover[s]) used[j][node - 1] = 0;
                }
            }
            if (s == b) {
                FiStructure st;
                st.b = b;
                st.rows = rows;
                st.cover = cover;
                for (int j = 0; j < a; ++j) st.unmask_info.push_back(first_information_set_within(code, M.row_support(rows[j] - 1)));
                return st;
            }
            // next multiset
            int i = a - 1;
            while (i >= 0 && rows[i] == nu) --i;
            if (i < 0) break;
            ++rows[i];
            for (int j = i + 1; j < a; ++j) rows[j] = rows[i];
        }
    }
    throw std::runtime_error("no file-independent structure found within the stripe-scan cap");
}

namespace {

QueryPlan plan_fi_family(const CodedStore& store, const RateMatrix& M, const InterferencePair& P, int m,
                         std::uint64_t seed, bool asymmetric) {
    if (m < 1 || m > store.f) throw std::invalid_argument("target file out of range");
    if (M.n != store.code.n()) throw std::invalid_argument("rate matrix does not match store");
    (void)P;
    FiStructure st = build_fi_structure(store.code, M);
    if (store.beta % st.b != 0)
        throw std::invalid_argument("store beta must be a multiple of " + std::to_string(st.b));

    QueryPlan plan;
    plan.protocol = asymmetric ? "a-inf" : "p2";
    plan.target_file = m;
    plan.f = store.f;
    plan.beta = store.beta;
    plan.file_independent = true;
    plan.seed = seed;
    plan.per_node.resize(store.code.n());
    for (int l = 0; l < store.code.n(); ++l) plan.per_node[l].node = l + 1;
    plan.lambdas = {M};
    plan.pairs = {P};
    std::vector<int> all_coords(store.code.n());
    std::iota(all_coords.begin(), all_coords.end(), 1);
    plan.parts = {PartInfo{all_coords, store.code.generator()}};

    std::mt19937_64 rng(seed);
    PlanSink sink{plan, store.code.field(), store.beta, store.f};
    const int a = static_cast<int>(st.rows.size());
    const long long rows_total = static_cast<long long>(store.beta) * store.f;
    const int eras = store.beta / st.b;

    for (int era = 0; era < eras; ++era) {
        // stripe s_local of this era is stored stripe era*b + s_local of file m
        std::vector<std::map<int, int>> assigned(a);  // per batch slot: node -> stripe piece idx
        std::vector<int> piece_idx(st.b, -1);
        for (int s = 0; s < st.b; ++s) {
            StripePiece pc;
            pc.part = 0;
            pc.file_row = era * st.b + s;
            for (auto [node, j] : st.cover[s]) pc.solve_nodes.push_back(node);
            std::sort(pc.solve_nodes.begin(), pc.solve_nodes.end());
            plan.pieces.push_back(std::move(pc));
            piece_idx[s] = static_cast<int>(plan.pieces.size()) - 1;
            for (auto [node, j] : st.cover[s]) assigned[j][node] = piece_idx[s];
        }
        for (int j = 0; j < a; ++j) {
            std::vector<fe_t> mask(rows_total);
            for (long long r = 0; r < rows_total; ++r) mask[r] = store.code.field().sample(rng);
            const int mask_id = static_cast<int>(plan.masks.size());
            plan.masks.push_back(mask);
            SideBatch batch;
            batch.part = 0;
            batch.solve_nodes = st.unmask_info[j];

            auto add_clean = [&](int node) {
                ComboRef ref = sink.add_masked(node, mask, mask_id, -1, era + 1, 1);
                batch.taps.push_back({ref.node, ref.index});
            };
            auto add_unit = [&](int node, int pidx) {
                StripePiece& pc = plan.pieces[pidx];
                long long row = static_cast<long long>(m - 1) * store.beta + pc.file_row;
                ComboRef ref = sink.add_masked(node, mask, mask_id, row, era + 1, 1);
                pc.taps.push_back({ref.node, ref.index, static_cast<int>(plan.batches.size())});
            };

            if (asymmetric) {
                for (int node : st.unmask_info[j]) add_clean(node);
                for (auto [node, pidx] : assigned[j]) add_unit(node, pidx);
            } else {
                for (int node = 1; node <= store.code.n(); ++node) {
                    auto it = assigned[j].find(node);
                    if (it != assigned[j].end())
                        add_unit(node, it->second);
                    else
                        add_clean(node);
                }
            }
            plan.batches.push_back(std::move(batch));
        }
    }
    return plan;
}

}  // namespace

QueryPlan plan_protocol2(const CodedStore& store, const RateMatrix& M, const InterferencePair& P, int m,
                         std::uint64_t seed) {
    return plan_fi_family(store, M, P, m, seed, false);
}

QueryPlan plan_protocolA_inf(const CodedStore& store, const RateMatrix& M, const InterferencePair& P, int m,
                             std::uint64_t seed) {
    return plan_fi_family(store, M, P, m, seed, true);
}

namespace {

struct PartPlanData {
    Punctured punctured{LinearCode(Mat(Field::of_order(2), 1, 1, {1})), {}};
    RateMatrix lam;
    InterferencePair pair;
    long long beta_p = 0;
    FiStructure fi;  // P2 subprotocol only
};

}  // namespace

long long required_beta_B(const LinearCode& code, const Decomposition& dec, int f, Subprotocol sub, int nu_max) {
    long long beta = 1;
    for (const auto& part : dec.parts) {
        MinRatioResult mr = find_min_ratio(part.code, nu_max);
        if (!mr.found || static_cast<long long>(mr.kappa) * part.code.n() != static_cast<long long>(mr.nu) * part.code.k())
            throw std::invalid_argument("direct-sum part is not MDS-PIR capacity-achieving");
        long long bp;
        if (sub == Subprotocol::P1) {
            bp = ipow_ll(mr.nu, f);
        } else {
            FiStructure st = build_fi_structure(part.code, *mr.matrix);
            bp = st.b;
        }
        beta = std::lcm(beta, bp);
    }
    (void)code;
    return beta;
}

QueryPlan plan_protocolB(const CodedStore& store, const Decomposition& dec, int m, Subprotocol sub,
                         std::uint64_t seed, int nu_max) {
    if (m < 1 || m > store.f) throw std::invalid_argument("target file out of range");

    std::vector<PartPlanData> parts;
    for (const auto& part : dec.parts) {
        PartPlanData pd;
        pd.punctured = Punctured{part.code, part.coords};
        MinRatioResult mr = find_min_ratio(part.code, nu_max);
        if (!mr.found || static_cast<long long>(mr.kappa) * part.code.n() != static_cast<long long>(mr.nu) * part.code.k())
            throw std::invalid_argument("direct-sum part is not MDS-PIR capacity-achieving");
        pd.lam = *mr.matrix;
        pd.pair = build_interference_pair(pd.lam);
        if (sub == Subprotocol::P1) {
            pd.beta_p = ipow_ll(pd.lam.nu, store.f);
        } else {
            pd.fi = build_fi_structure(part.code, pd.lam);
            pd.beta_p = pd.fi.b;
        }
        parts.push_back(std::move(pd));
    }
    long long beta = 1;
    for (const auto& pd : parts) beta = std::lcm(beta, pd.beta_p);
    if (store.beta != beta)
        throw std::invalid_argument("store must hold beta = LCM of part stripe counts = " + std::to_string(beta));

    QueryPlan plan;
    plan.protocol = sub == Subprotocol::P1 ? "b-p1" : "b-p2";
    plan.target_file = m;
    plan.f = store.f;
    plan.beta = store.beta;
    plan.file_independent = sub == Subprotocol::P2;
    plan.seed = seed;
    plan.per_node.resize(store.code.n());
    for (int l = 0; l < store.code.n(); ++l) plan.per_node[l].node = l + 1;

    PlanSink sink{plan, store.code.field(), store.beta, store.f};

    for (size_t p = 0; p < parts.size(); ++p) {
        PartPlanData& pd = parts[p];
        plan.parts.push_back(PartInfo{pd.punctured.coords, pd.punctured.code.generator()});
        plan.lambdas.push_back(pd.lam);
        plan.pairs.push_back(pd.pair);
        std::mt19937_64 rng(mix_seed(seed, p));
        if (sub == Subprotocol::P1) {
            std::vector<std::vector<int>> perms;
            for (int file = 0; file < store.f; ++file) perms.push_back(random_perm(store.beta, rng));
            plan.perms.push_back(perms);
            const long long runs = store.beta / pd.beta_p;
            for (long long r = 0; r < runs; ++r) {
                P1Run run{pd.punctured.code, plan.parts[p].coords, pd.lam, pd.pair, static_cast<int>(p),
                          store.f, m, store.beta, pd.beta_p, r * pd.beta_p, perms, false, sink, plan};
                run.run();
            }
        } else {
            plan.perms.push_back({});
            const long long eras = store.beta / pd.fi.b;
            const long long rows_total = static_cast<long long>(store.beta) * store.f;
            const int a = static_cast<int>(pd.fi.rows.size());
            // the structure speaks part-local coordinates
            auto to_global = [&](int local) { return pd.punctured.coords[local - 1]; };
            for (long long era = 0; era < eras; ++era) {
                std::vector<std::map<int, int>> assigned(a);  // global node -> piece
                for (int s = 0; s < pd.fi.b; ++s) {
                    StripePiece pc;
                    pc.part = static_cast<int>(p);
                    pc.file_row = static_cast<int>(era * pd.fi.b + s);
                    for (auto [node, j] : pd.fi.cover[s]) pc.solve_nodes.push_back(to_global(node));
                    std::sort(pc.solve_nodes.begin(), pc.solve_nodes.end());
                    plan.pieces.push_back(std::move(pc));
                    for (auto [node, j] : pd.fi.cover[s])
                        assigned[j][to_global(node)] = static_cast<int>(plan.pieces.size()) - 1;
                }
                for (int j = 0; j < a; ++j) {
                    std::vector<fe_t> mask(rows_total);
                    for (long long rr = 0; rr < rows_total; ++rr) mask[rr] = store.code.field().sample(rng);
                    const int mask_id = static_cast<int>(plan.masks.size());
                    plan.masks.push_back(mask);
                    SideBatch batch;
                    batch.part = static_cast<int>(p);
                    for (int node : pd.fi.unmask_info[j]) batch.solve_nodes.push_back(to_global(node));
                    std::sort(batch.solve_nodes.begin(), batch.solve_nodes.end());
                    for (int node : batch.solve_nodes) {
                        ComboRef ref = sink.add_masked(node, mask, mask_id, -1, static_cast<int>(era) + 1, 1);
                        batch.taps.push_back({ref.node, ref.index});
                    }
                    for (auto [node, pidx] : assigned[j]) {
                        StripePiece& pc = plan.pieces[pidx];
                        long long row = static_cast<long long>(m - 1) * store.beta + pc.file_row;
                        ComboRef ref = sink.add_masked(node, mask, mask_id, row, static_cast<int>(era) + 1, 1);
                        pc.taps.push_back({ref.node, ref.index, static_cast<int>(plan.batches.size())});
                    }
                    plan.batches.push_back(std::move(batch));
                }
            }
        }
    }
    return plan;
}

Mat recover(const QueryPlan& plan, const std::vector<NodeResponse>& responses, const LinearCode& code) {
    const Field& F = code.field();
    const int n = code.n(), k = code.k();
    std::vector<const NodeResponse*> by_node(n + 1, nullptr);
    for (const auto& r : responses) {
        if (r.node < 1 || r.node > n) throw std::invalid_argument("response from unknown node");
        by_node[r.node] = &r;
    }
    auto value = [&](int node, int combo) -> fe_t {
        if (!by_node[node] || combo >= static_cast<int>(by_node[node]->values.size()))
            throw std::invalid_argument("responses do not match plan");
        return by_node[node]->values[combo];
    };

    Mat X(F, plan.beta, k);

    if (plan.elimination) {
        for (int i = 0; i < plan.beta; ++i)
            for (int c = 0; c < k; ++c) {
                fe_t acc = 0;
                for (auto [node, combo, coef] : plan.elimination->rows[static_cast<size_t>(i) * k + c])
                    acc = F.add(acc, F.mul(coef, value(node, combo)));
                X.at(i, c) = acc;
            }
        return X;
    }

    // part-local solve helpers
    auto local_cols = [&](const PartInfo& part, const CoordSet& nodes) {
        std::vector<int> idx;
        for (int g : nodes) {
            auto it = std::lower_bound(part.coords.begin(), part.coords.end(), g);
            if (it == part.coords.end() || *it != g) throw std::logic_error("solve node outside part");
            idx.push_back(static_cast<int>(it - part.coords.begin()));
        }
        return idx;
    };
    auto solve_codeword = [&](const PartInfo& part, const CoordSet& nodes, const std::vector<fe_t>& vals) {
        auto idx = local_cols(part, nodes);
        auto inv = part.gen.cols_subset(idx).inverse();
        if (!inv) throw std::logic_error("singular recovery system (protocol bug)");
        std::vector<fe_t> msg = vec_mat(F, vals, *inv);
        return vec_mat(F, msg, part.gen);
    };

    // 1. decode every side batch to a full part codeword
    std::vector<std::vector<fe_t>> batch_cw;
    batch_cw.reserve(plan.batches.size());
    for (const auto& b : plan.batches) {
        const PartInfo& part = plan.parts[b.part];
        std::map<int, fe_t> at;
        for (auto [node, combo] : b.taps) at[node] = value(node, combo);
        std::vector<fe_t> vals;
        for (int g : b.solve_nodes) {
            auto it = at.find(g);
            if (it == at.end()) throw std::logic_error("batch solve node was not downloaded");
            vals.push_back(it->second);
        }
        batch_cw.push_back(solve_codeword(part, b.solve_nodes, vals));
    }
    auto batch_value_at = [&](int batch, int node) -> fe_t {
        const PartInfo& part = plan.parts[plan.batches[batch].part];
        auto it = std::lower_bound(part.coords.begin(), part.coords.end(), node);
        return batch_cw[batch][static_cast<size_t>(it - part.coords.begin())];
    };

    // 2. strip side information off each piece tap and fill stripe codewords
    Mat rowbuf(F, plan.beta, n);
    std::vector<std::vector<char>> have(plan.beta, std::vector<char>(n, 0));
    for (const auto& pc : plan.pieces) {
        const PartInfo& part = plan.parts[pc.part];
        std::map<int, fe_t> at;
        for (const auto& tap : pc.taps) {
            fe_t v = value(tap.node, tap.combo);
            if (tap.batch >= 0) v = F.sub(v, batch_value_at(tap.batch, tap.node));
            at[tap.node] = v;
        }
        std::vector<fe_t> vals;
        for (int g : pc.solve_nodes) {
            auto it = at.find(g);
            if (it == at.end()) throw std::logic_error("piece solve node was not downloaded");
            vals.push_back(it->second);
        }
        std::vector<fe_t> cw = solve_codeword(part, pc.solve_nodes, vals);
        for (size_t j = 0; j < part.coords.size(); ++j) {
            rowbuf.at(pc.file_row, part.coords[j] - 1) = cw[j];
            have[pc.file_row][part.coords[j] - 1] = 1;
        }
    }

    // 3. erasure-fill each stripe from an information set of the full code
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 1);
    CoordSet J = first_information_set_within(code, all);
    std::vector<int> jidx;
    for (int g : J) jidx.push_back(g - 1);
    auto inv = code.generator().cols_subset(jidx).inverse();
    if (!inv) throw std::logic_error("code lost its information set");
    for (int i = 0; i < plan.beta; ++i) {
        std::vector<fe_t> vals;
        for (int g : J) {
            if (!have[i][g - 1]) throw std::logic_error("stripe " + std::to_string(i) + " not fully recovered (protocol bug)");
            vals.push_back(rowbuf.at(i, g - 1));
        }
        std::vector<fe_t> msg = vec_mat(F, vals, *inv);
        for (int c = 0; c < k; ++c) X.at(i, c) = msg[c];
    }
    return X;
}

ScheduleCounts schedule_counts(int kappa, int nu, int f) {
    if (kappa < 1 || kappa >= nu) throw std::invalid_argument("need kappa < nu");
    if (f < 1) throw std::invalid_argument("need f >= 1");
    ScheduleCounts out;
    out.U.assign(f, 0);
    out.W.assign(f, 0);
    for (int l = 1; l <= f - 1; ++l) {
        long long u = 0;
        for (int h = 1; h <= l; ++h) u += ipow_ll(kappa, f - h - 1) * ipow_ll(nu - kappa, h - 1);
        out.U[l] = u;
        long long w = ipow_ll(kappa, f - 1);
        for (int h = 1; h <= l; ++h) w += binom_ll(f - 1, h) * ipow_ll(kappa, f - h - 1) * ipow_ll(nu - kappa, h);
        out.W[l] = w;
    }
    long long d = 0;
    for (int i = 0; i < f; ++i) d += ipow_ll(nu, i) * ipow_ll(kappa, f - 1 - i);
    out.d_entry = d;
    return out;
}

namespace {

// (row, delta) entries of coeff - mask; the m-dependent residue of a
// masked combo, the raw coefficients of an unmasked one.
std::vector<std::pair<long long, fe_t>> combo_residue(const QueryPlan& plan, const Field& F, const QueryCombo& c) {
    std::vector<std::pair<long long, fe_t>> out;
    const std::vector<fe_t>* mask = c.mask_id >= 0 ? &plan.masks[c.mask_id] : nullptr;
    for (size_t r = 0; r < c.coeff.size(); ++r) {
        fe_t d = mask ? F.sub(c.coeff[r], (*mask)[r]) : c.coeff[r];
        if (d) out.push_back({static_cast<long long>(r), d});
    }
    return out;
}

// file-combination signature before interference masking
std::vector<int> combo_signature(const QueryPlan& plan, const Field& F, const QueryCombo& c) {
    std::vector<int> files;
    const long long beta = plan.beta;
    std::vector<char> seen(plan.f + 1, 0);
    for (auto [row, d] : combo_residue(plan, F, c)) seen[static_cast<int>(row / beta) + 1] = 1;
    for (int mfile = 1; mfile <= plan.f; ++mfile)
        if (seen[mfile]) files.push_back(mfile);
    return files;
}

std::string sig_string(std::vector<int> files) {
    std::sort(files.begin(), files.end());
    std::string s;
    for (int v : files) s += std::to_string(v) + ",";
    return s;
}

std::vector<int> swap_files(std::vector<int> files, int a, int b) {
    for (int& v : files) {
        if (v == a)
            v = b;
        else if (v == b)
            v = a;
    }
    return files;
}

}  // namespace

PrivacyVerdict audit_privacy(const std::vector<QueryPlan>& plans) {
    PrivacyVerdict out;
    if (plans.empty()) return out;
    const int f = plans[0].f;
    if (static_cast<int>(plans.size()) != f) throw std::invalid_argument("need one plan per file");
    for (int i = 0; i < f; ++i)
        if (plans[i].target_file != i + 1) throw std::invalid_argument("plans must be ordered by target file");
    const Field& F = plans[0].parts.at(0).gen.field();

    // Combinatorial check: per (node, round), the count of sums per
    // file-combination signature must agree across requested files once
    // the two target labels are swapped.  Counts are aggregated over
    // repetitions; Protocol A restores file symmetry per round only
    // across all repetitions together.
    using Key = std::tuple<int, int, std::string>;
    auto counts_of = [&](const QueryPlan& plan, int swap_a, int swap_b) {
        std::map<Key, long long> counts;
        for (const auto& nq : plan.per_node)
            for (const auto& c : nq.combos) {
                auto sig = swap_files(combo_signature(plan, F, c), swap_a, swap_b);
                ++counts[{nq.node, c.round, sig_string(sig)}];
            }
        return counts;
    };

    auto base = counts_of(plans[0], 1, 1);
    for (int i = 1; i < f; ++i) {
        auto other = counts_of(plans[i], 1, i + 1);
        for (const auto& [key, cnt] : base) {
            auto it = other.find(key);
            long long o = it == other.end() ? 0 : it->second;
            if (o != cnt) {
                out.pass = false;
                out.violations.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key)});
            }
        }
        for (const auto& [key, cnt] : other)
            if (!base.count(key)) {
                out.pass = false;
                out.violations.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key)});
            }
    }

    // Distributional check for file-independent plans: same mask stream and
    // slot layout, and the unmasked residue of every sum translates between
    // the target file blocks.  The masks are uniform over every stored row,
    // so translated residues leave the coefficient distribution unchanged.
    if (plans[0].file_independent) {
        const long long beta = plans[0].beta;
        for (int i = 1; i < f; ++i) {
            const QueryPlan &p0 = plans[0], &pi = plans[i];
            if (p0.masks != pi.masks) {
                out.pass = false;
                out.violations.push_back({0, 0, "mask streams differ between plans"});
                break;
            }
            for (size_t l = 0; l < p0.per_node.size(); ++l) {
                const auto &c0 = p0.per_node[l].combos, &ci = pi.per_node[l].combos;
                if (c0.size() != ci.size()) {
                    out.pass = false;
                    out.violations.push_back({static_cast<int>(l) + 1, 0, "combo count differs"});
                    continue;
                }
                for (size_t t = 0; t < c0.size(); ++t) {
                    bool ok = c0[t].mask_id == ci[t].mask_id;
                    if (ok) {
                        auto r0 = combo_residue(p0, F, c0[t]);
                        auto ri = combo_residue(pi, F, ci[t]);
                        for (auto& [row, d] : r0) {
                            int file = static_cast<int>(row / beta) + 1;
                            int swapped = file == 1 ? i + 1 : (file == i + 1 ? 1 : file);
                            row = static_cast<long long>(swapped - 1) * beta + row % beta;
                        }
                        std::sort(r0.begin(), r0.end());
                        std::sort(ri.begin(), ri.end());
                        ok = r0 == ri;
                    }
                    if (!ok) {
                        out.pass = false;
                        out.violations.push_back({static_cast<int>(l) + 1, c0[t].round, "translated mask mismatch"});
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace pir
