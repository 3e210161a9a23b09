#include "pir/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pir {

namespace {

Mat mat_from_rows(const Field& F, const std::vector<std::vector<fe_t>>& rows) {
    if (rows.empty()) throw std::invalid_argument("matrix has no rows");
    Mat M(F, static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) throw std::invalid_argument("ragged matrix rows");
        for (size_t c = 0; c < rows[r].size(); ++c) M.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    }
    return M;
}

std::string hex_pack_gf2(const std::vector<fe_t>& row) {
    std::string out;
    for (size_t base = 0; base < row.size(); base += 4) {
        int nibble = 0;
        for (size_t b = 0; b < 4 && base + b < row.size(); ++b)
            if (row[base + b]) nibble |= 1 << b;
        out += "0123456789abcdef"[nibble];
    }
    return out;
}

std::vector<fe_t> hex_unpack_gf2(const std::string& s, int len) {
    std::vector<fe_t> out(len, 0);
    for (int i = 0; i < len; ++i) {
        char c = s[i / 4];
        int nibble = c <= '9' ? c - '0' : c - 'a' + 10;
        out[i] = (nibble >> (i % 4)) & 1;
    }
    return out;
}

}  // namespace

LinearCode code_from_decimal(const Field& F, int k, const std::vector<long long>& columns) {
    if (k < 1) throw std::invalid_argument("decimal column form needs k");
    Mat G(F, k, static_cast<int>(columns.size()));
    for (size_t c = 0; c < columns.size(); ++c) {
        long long v = columns[c];
        if (v < 0) throw std::invalid_argument("column values must be nonnegative");
        for (int r = 0; r < k; ++r) {
            G.at(r, static_cast<int>(c)) = static_cast<fe_t>(v % F.q());
            v /= F.q();
        }
        if (v != 0) throw std::invalid_argument("column value exceeds q^k");
    }
    return LinearCode(std::move(G));
}

std::vector<long long> code_to_decimal(const LinearCode& code) {
    std::vector<long long> out;
    for (int c = 0; c < code.n(); ++c) {
        long long v = 0, mult = 1;
        for (int r = 0; r < code.k(); ++r) {
            v += static_cast<long long>(code.generator().at(r, c)) * mult;
            mult *= code.field().q();
        }
        out.push_back(v);
    }
    return out;
}

LinearCode code_from_json(const Json& j) {
    const int q = j.at("q").get<int>();
    Field F = Field::of_order(q);
    const std::string format = j.value("format", std::string("matrix"));
    if (format == "decimal") {
        return code_from_decimal(F, j.at("k").get<int>(), j.at("columns").get<std::vector<long long>>());
    }
    if (format != "matrix") throw std::invalid_argument("unknown code format: " + format);
    auto rows = j.at("rows").get<std::vector<std::vector<fe_t>>>();
    return LinearCode(mat_from_rows(F, rows));
}

Json code_to_json(const LinearCode& code) {
    Json j;
    j["q"] = code.field().q();
    j["format"] = "matrix";
    std::vector<std::vector<fe_t>> rows;
    for (int r = 0; r < code.k(); ++r) rows.push_back(code.generator().row(r));
    j["rows"] = rows;
    j["hash"] = code_hash(code);
    return j;
}

LinearCode load_code_file(const std::string& path, std::optional<int> q, std::optional<int> k,
                          const std::string& format) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open code file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        return code_from_json(Json::parse(text));
    }
    if (!q) throw std::invalid_argument("text code files need --q");
    Field F = Field::of_order(*q);
    // tokenize on commas/whitespace, keep line structure for matrix form
    if (format == "decimal") {
        std::vector<long long> cols;
        std::string tok;
        std::stringstream ss(text);
        while (std::getline(ss, tok, ',')) {
            std::stringstream ws(tok);
            long long v;
            while (ws >> v) cols.push_back(v);
        }
        if (!k) throw std::invalid_argument("decimal code files need --k");
        return code_from_decimal(F, *k, cols);
    }
    if (format != "matrix") throw std::invalid_argument("unknown code format: " + format);
    std::vector<std::vector<fe_t>> rows;
    std::stringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<fe_t> row;
        std::string cur;
        for (char ch : line) {
            if (ch == ',' || ch == ' ' || ch == '\t') {
                if (!cur.empty()) {
                    row.push_back(static_cast<fe_t>(std::stoi(cur)));
                    cur.clear();
                }
            } else if (ch >= '0' && ch <= '9') {
                cur += ch;
            } else {
                throw std::invalid_argument("unexpected character in matrix code file");
            }
        }
        if (!cur.empty()) row.push_back(static_cast<fe_t>(std::stoi(cur)));
        if (!row.empty()) rows.push_back(row);
    }
    return LinearCode(mat_from_rows(F, rows));
}

Json lambda_to_json(const RateMatrix& M) {
    Json j;
    j["kappa"] = M.kappa;
    j["nu"] = M.nu;
    j["n"] = M.n;
    std::vector<std::vector<int>> rows;
    for (int u = 0; u < M.nu; ++u) {
        std::vector<int> row;
        for (int l = 0; l < M.n; ++l) row.push_back(M.at(u, l));
        rows.push_back(row);
    }
    j["rows"] = rows;
    j["code_hash"] = M.code_hash;
    return j;
}

RateMatrix lambda_from_json(const Json& j) {
    RateMatrix M;
    M.kappa = j.at("kappa").get<int>();
    M.nu = j.at("nu").get<int>();
    M.n = j.at("n").get<int>();
    M.code_hash = j.value("code_hash", std::string());
    auto rows = j.at("rows").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(rows.size()) != M.nu) throw std::invalid_argument("lambda row count mismatch");
    M.lam.assign(static_cast<size_t>(M.nu) * M.n, 0);
    for (int u = 0; u < M.nu; ++u) {
        if (static_cast<int>(rows[u].size()) != M.n) throw std::invalid_argument("lambda row width mismatch");
        for (int l = 0; l < M.n; ++l) {
            if (rows[u][l] != 0 && rows[u][l] != 1) throw std::invalid_argument("lambda entries must be 0/1");
            M.lam[static_cast<size_t>(u) * M.n + l] = static_cast<std::uint8_t>(rows[u][l]);
        }
    }
    return M;
}

Schedule schedule_from_json(const Json& j) {
    Schedule s;
    s.name = j.value("name", std::string());
    s.beta = j.value("beta", 1);
    auto nodes = j.at("nodes");
    int n = 0;
    for (const auto& nd : nodes) n = std::max(n, nd.at("node").get<int>());
    s.per_node.assign(n, {});
    for (const auto& nd : nodes) {
        const int node = nd.at("node").get<int>();
        std::vector<SchedSum> sums;
        for (const auto& sum : nd.at("sums")) {
            SchedSum sm;
            for (const auto& term : sum) {
                SchedTerm t;
                const std::string kind = term.at("t").get<std::string>();
                if (kind == "I") {
                    t.kind = SchedTerm::Interference;
                    t.j = term.at("j").get<int>();
                } else if (kind == "x") {
                    t.kind = SchedTerm::FileSymbol;
                    t.stripe = term.at("stripe").get<int>();
                    t.coord = term.at("coord").get<int>();
                } else if (kind == "c") {
                    t.kind = SchedTerm::CodeSymbol;
                    t.file = term.at("file").get<int>();
                    t.stripe = term.at("stripe").get<int>();
                } else {
                    throw std::invalid_argument("unknown schedule term kind: " + kind);
                }
                sm.terms.push_back(t);
            }
            sums.push_back(std::move(sm));
        }
        s.per_node[node - 1] = std::move(sums);
    }
    return s;
}

std::optional<Json> schedule_embedded_code(const Json& j) {
    if (j.contains("code")) return j.at("code");
    return std::nullopt;
}

Json schedule_to_json(const Schedule& s) {
    Json j;
    j["name"] = s.name;
    j["beta"] = s.beta;
    Json nodes = Json::array();
    for (size_t nd = 0; nd < s.per_node.size(); ++nd) {
        Json entry;
        entry["node"] = nd + 1;
        Json sums = Json::array();
        for (const auto& sum : s.per_node[nd]) {
            Json terms = Json::array();
            for (const auto& t : sum.terms) {
                Json tj;
                switch (t.kind) {
                    case SchedTerm::Interference:
                        tj["t"] = "I";
                        tj["j"] = t.j;
                        break;
                    case SchedTerm::FileSymbol:
                        tj["t"] = "x";
                        tj["stripe"] = t.stripe;
                        tj["coord"] = t.coord;
                        break;
                    case SchedTerm::CodeSymbol:
                        tj["t"] = "c";
                        tj["file"] = t.file;
                        tj["stripe"] = t.stripe;
                        break;
                }
                terms.push_back(tj);
            }
            sums.push_back(terms);
        }
        entry["sums"] = sums;
        nodes.push_back(entry);
    }
    j["nodes"] = nodes;
    return j;
}

Json store_to_json(const CodedStore& store) {
    Json j;
    j["code"] = code_to_json(store.code);
    j["f"] = store.f;
    j["beta"] = store.beta;
    const bool gf2 = store.code.field().q() == 2;
    Json rows = Json::array();
    for (int r = 0; r < store.stored_rows(); ++r) {
        auto row = store.array.row(r);
        if (gf2)
            rows.push_back(hex_pack_gf2(row));
        else
            rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
}

CodedStore store_from_json(const Json& j) {
    LinearCode code = code_from_json(j.at("code"));
    const int f = j.at("f").get<int>(), beta = j.at("beta").get<int>();
    Mat array(code.field(), f * beta, code.n());
    const bool gf2 = code.field().q() == 2;
    const auto& rows = j.at("rows");
    if (static_cast<int>(rows.size()) != f * beta) throw std::invalid_argument("store row count mismatch");
    for (int r = 0; r < f * beta; ++r) {
        std::vector<fe_t> row =
            gf2 ? hex_unpack_gf2(rows[r].get<std::string>(), code.n()) : rows[r].get<std::vector<fe_t>>();
        for (int c = 0; c < code.n(); ++c) array.at(r, c) = row[c];
    }
    return CodedStore{code, f, beta, std::move(array)};
}

Json plan_to_json(const QueryPlan& plan, const Field& F) {
    const bool gf2 = F.q() == 2;
    Json j;
    j["protocol"] = plan.protocol;
    j["target"] = plan.target_file;
    j["f"] = plan.f;
    j["beta"] = plan.beta;
    j["seed"] = plan.seed;
    j["file_independent"] = plan.file_independent;
    Json nodes = Json::array();
    for (const auto& nq : plan.per_node) {
        Json entry;
        entry["node"] = nq.node;
        Json combos = Json::array();
        for (const auto& c : nq.combos) {
            Json cj;
            if (gf2)
                cj["coeff"] = hex_pack_gf2(c.coeff);
            else
                cj["coeff"] = c.coeff;
            cj["repetition"] = c.repetition;
            cj["round"] = c.round;
            combos.push_back(cj);
        }
        entry["combos"] = combos;
        nodes.push_back(entry);
    }
    j["queries"] = nodes;
    return j;
}

Json responses_to_json(const std::vector<NodeResponse>& rs) {
    Json arr = Json::array();
    for (const auto& r : rs) {
        Json e;
        e["node"] = r.node;
        e["values"] = r.values;
        arr.push_back(e);
    }
    return arr;
}

Json rate_report_to_json(const RateReport& r) {
    Json j;
    j["n"] = r.n;
    j["k"] = r.k;
    j["f"] = r.f == f_infinity ? Json("inf") : Json(r.f);
    j["kappa"] = r.kappa;
    j["nu"] = r.nu;
    j["C_f"] = render_fraction(r.c_f);
    j["C_inf"] = render_fraction(r.c_inf);
    j["R_S"] = render_fraction(r.r_s);
    j["R_A"] = render_fraction(r.r_a);
    if (r.has_r_b) j["R_B"] = render_fraction(r.r_b);
    j["capacity_achieving"] = r.capacity_achieving;
    if (r.capacity_achieving) {
        j["beta_p1"] = r.beta_p1;
        j["D_p1"] = r.d_p1;
        j["beta_p2"] = r.beta_p2;
        j["D_p2"] = r.d_p2;
    }
    return j;
}

}  // namespace pir
