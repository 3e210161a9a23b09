// pirsim: analyze storage codes, search rate matrices, tabulate rates, and
// run the retrieval protocols end to end on an in-memory store.
//
// exit codes: 0 success, 2 input/parse error, 3 protocol infeasible for the
// given code, 4 verification failure (recovery or privacy audit).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "pir/protocols.hpp"
#include "pir/serialize.hpp"

using namespace pir;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitVerification = 4;

struct CodeArgs {
    std::vector<std::string> paths;
    std::optional<int> q, k;
    std::string format = "matrix";
};

std::uint64_t plan_seed(std::uint64_t seed) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

int parse_files_flag(const std::string& s) {
    if (s == "inf" || s == "infinity") return f_infinity;
    int f = std::stoi(s);
    if (f < 1) throw std::invalid_argument("--files must be >= 1 or inf");
    return f;
}

std::string code_label(const LinearCode& code) {
    return "[" + std::to_string(code.n()) + "," + std::to_string(code.k()) + "] over GF(" +
           std::to_string(code.field().q()) + ")";
}

struct AnalyzeResult {
    LinearCode code;
    std::vector<int> weights;
    MdsPirCheck necessary;
    MinRatioResult min_ratio;
    CapacityVerdict capacity;
    Decomposition parts;
};

AnalyzeResult analyze(const LinearCode& code, int nu_max) {
    AnalyzeResult r{code, {}, {}, {}, CapacityVerdict::Inconclusive, {}};
    for (int s = 1; s <= code.k(); ++s) r.weights.push_back(generalized_hamming_weight(code, s));
    r.necessary = mds_pir_necessary_check(code);
    r.min_ratio = find_min_ratio(code, nu_max);
    r.capacity = is_capacity_achieving(code, nu_max);
    r.parts = direct_sum_decompose(code);
    return r;
}

std::string capacity_str(CapacityVerdict v, int nu_max) {
    switch (v) {
        case CapacityVerdict::Achieving:
            return "yes";
        case CapacityVerdict::NotWithinBudget:
            return "no (nu <= " + std::to_string(nu_max) + ")";
        default:
            return "inconclusive (search budget exhausted)";
    }
}

int cmd_analyze(const CodeArgs& args, int nu_max, const std::string& out) {
    LinearCode code = load_code_file(args.paths.at(0), args.q, args.k, args.format);
    AnalyzeResult r = analyze(code, nu_max);

    if (out == "json") {
        Json j;
        j["code"] = code_to_json(code);
        j["n"] = code.n();
        j["k"] = code.k();
        j["generalized_hamming_weights"] = r.weights;
        j["necessary_condition"] = r.necessary.pass;
        if (r.necessary.failing_s) j["necessary_condition_fails_at"] = *r.necessary.failing_s;
        if (r.min_ratio.found) {
            j["kappa"] = r.min_ratio.kappa;
            j["nu"] = r.min_ratio.nu;
            j["lambda"] = lambda_to_json(*r.min_ratio.matrix);
        }
        j["capacity_achieving"] = capacity_str(r.capacity, nu_max);
        Json parts = Json::array();
        for (const auto& p : r.parts.parts) {
            Json pj;
            pj["coords"] = p.coords;
            pj["n"] = p.code.n();
            pj["k"] = p.code.k();
            parts.push_back(pj);
        }
        j["direct_sum_parts"] = parts;
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::cout << "code " << code_label(code) << "\n";
    std::cout << "generalized Hamming weights:";
    for (int s = 1; s <= code.k(); ++s) std::cout << " d_" << s << " = " << r.weights[s - 1] << (s < code.k() ? "," : "");
    std::cout << "\n";
    if (r.necessary.pass)
        std::cout << "necessary condition d_s >= (n/k) s: holds\n";
    else
        std::cout << "necessary condition d_s >= (n/k) s: fails at s = " << *r.necessary.failing_s
                  << " (not MDS-PIR capacity-achieving)\n";
    if (r.min_ratio.found)
        std::cout << "min kappa/nu = " << r.min_ratio.kappa << "/" << r.min_ratio.nu
                  << (r.min_ratio.exhaustive ? "" : " (some smaller fractions hit the search budget)") << "\n";
    else
        std::cout << "min kappa/nu: not found below nu_max = " << nu_max << "\n";
    std::cout << "MDS-PIR capacity-achieving: " << capacity_str(r.capacity, nu_max) << "\n";
    if (r.parts.parts.size() == 1) {
        std::cout << "direct sum: indecomposable\n";
    } else {
        std::cout << "direct sum:";
        for (const auto& p : r.parts.parts) {
            std::cout << " [" << p.code.n() << "," << p.code.k() << "] on {";
            for (size_t i = 0; i < p.coords.size(); ++i) std::cout << (i ? "," : "") << p.coords[i];
            std::cout << "}";
        }
        std::cout << "\n";
    }
    return 0;
}

struct TableRow {
    std::string name;
    std::string ratio = "-";
    std::string r_s = "-", r_a = "-", r_b = "-", r_c = "-", cap = "-";
    std::string error;
};

int cmd_rate_table(const CodeArgs& args, int f, const std::vector<std::string>& schedule_paths, int nu_max,
                   const std::string& out) {
    std::vector<std::pair<LinearCode, Schedule>> schedules;
    for (const auto& path : schedule_paths) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open schedule file: " + path);
        Json j = Json::parse(in);
        auto cj = schedule_embedded_code(j);
        if (!cj) throw std::invalid_argument("schedule file lacks an embedded code: " + path);
        schedules.push_back({code_from_json(*cj), schedule_from_json(j)});
    }

    std::vector<TableRow> rows;
    std::vector<std::optional<RateReport>> reports;
    for (const auto& path : args.paths) {
        TableRow row;
        row.name = path.substr(path.find_last_of('/') + 1);
        std::optional<RateReport> report;
        try {
            LinearCode code = load_code_file(path, args.q, args.k, args.format);
            row.name = code_label(code);
            RateReport rep;
            rep.n = code.n();
            rep.k = code.k();
            rep.f = f;
            rep.c_f = mds_pir_capacity(code.n(), code.k(), f);
            rep.c_inf = mds_pir_capacity(code.n(), code.k(), f_infinity);
            row.cap = render4(rep.c_f);
            auto mr = find_min_ratio(code, nu_max);
            if (mr.found) {
                rep.kappa = mr.kappa;
                rep.nu = mr.nu;
                rep.r_s = rate_symmetric(mr.kappa, mr.nu, code.k(), code.n(), f);
                rep.r_a = rate_asymmetric(mr.kappa, mr.nu, f);
                row.ratio = std::to_string(mr.kappa) + "/" + std::to_string(mr.nu);
                row.r_s = render4(rep.r_s);
                row.r_a = render4(rep.r_a);
                rep.capacity_achieving =
                    static_cast<long long>(mr.kappa) * code.n() == static_cast<long long>(mr.nu) * code.k();
                if (rep.capacity_achieving && f != f_infinity) {
                    auto s1 = stripe_and_download(code.n(), code.k(), f, Subprotocol::P1);
                    auto s2 = stripe_and_download(code.n(), code.k(), f, Subprotocol::P2);
                    rep.beta_p1 = s1.beta;
                    rep.d_p1 = s1.download;
                    rep.beta_p2 = s2.beta;
                    rep.d_p2 = s2.download;
                }
            }
            auto dec = direct_sum_decompose(code);
            if (dec.parts.size() > 1) {
                bool all_cap = true;
                std::vector<std::pair<int, int>> parts;
                for (const auto& p : dec.parts) {
                    if (is_capacity_achieving(p.code, nu_max) != CapacityVerdict::Achieving) all_cap = false;
                    parts.push_back({p.code.n(), p.code.k()});
                }
                if (all_cap) {
                    rep.has_r_b = true;
                    rep.r_b = rate_direct_sum(parts, code.k(), f);
                    row.r_b = render4(rep.r_b);
                }
            }
            for (const auto& [scode, sched] : schedules)
                if (scode == code) {
                    auto v = verify_schedule(code, sched, f == f_infinity ? 2 : f);
                    if (v.recoverable && v.priv) row.r_c = render4(v.rate);
                }
            report = rep;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
        reports.push_back(std::move(report));
    }

    if (out == "json") {
        Json arr = Json::array();
        for (size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            Json j = reports[i] ? rate_report_to_json(*reports[i]) : Json::object();
            j["code"] = r.name;
            j["kappa_nu"] = r.ratio;
            j["table"] = {{"R_S", r.r_s}, {"R_A", r.r_a}, {"R_B", r.r_b}, {"R_C", r.r_c}, {"C", r.cap}};
            if (!r.error.empty()) j["error"] = r.error;
            arr.push_back(j);
        }
        std::cout << arr.dump(2) << "\n";
        return 0;
    }
    const char* sep = out == "csv" ? "," : "  ";
    std::cout << "code" << sep << "kappa/nu" << sep << "R_S" << sep << "R_A" << sep << "R_B" << sep << "R_C" << sep
              << "C" << "\n";
    for (const auto& r : rows) {
        std::cout << r.name << sep << r.ratio << sep << r.r_s << sep << r.r_a << sep << r.r_b << sep << r.r_c << sep
                  << r.cap;
        if (!r.error.empty()) std::cout << sep << "error: " << r.error;
        std::cout << "\n";
    }
    return 0;
}

int cmd_simulate(const CodeArgs& args, const std::string& protocol, int f, std::optional<long long> beta_override,
                 std::uint64_t seed, int target, const std::string& schedule_path, int nu_max,
                 const std::string& out, const std::string& transcript_path) {
    if (f == f_infinity) throw std::invalid_argument("simulation needs a finite --files value");
    LinearCode code = load_code_file(args.paths.at(0), args.q, args.k, args.format);
    if (target < 1 || target > f) throw std::invalid_argument("--target out of range");

    // everything below is driven by the protocol choice; failures here are
    // infeasibility, not parse errors
    const std::vector<std::string> known{"p1", "a", "p2", "a-inf", "b-p1", "b-p2", "schedule"};
    if (std::find(known.begin(), known.end(), protocol) == known.end())
        throw std::invalid_argument("unknown protocol: " + protocol);
    if (protocol == "schedule" && schedule_path.empty())
        throw std::invalid_argument("--protocol schedule needs --schedule");

    std::optional<RateMatrix> lam;
    std::optional<InterferencePair> pair;
    std::optional<Decomposition> dec;
    std::optional<Schedule> sched;
    long long beta = 0;
    try {
        if (protocol == "p1" || protocol == "a" || protocol == "p2" || protocol == "a-inf") {
            auto mr = find_min_ratio(code, nu_max);
            if (!mr.found) throw std::runtime_error("no rate matrix found below nu_max");
            lam = *mr.matrix;
            pair = build_interference_pair(*lam);
            if (protocol == "p1" || protocol == "a")
                beta = required_beta_p1(*lam, f);
            else
                beta = build_fi_structure(code, *lam).b;
        } else if (protocol == "b-p1" || protocol == "b-p2") {
            dec = direct_sum_decompose(code);
            beta = required_beta_B(code, *dec, f, protocol == "b-p1" ? Subprotocol::P1 : Subprotocol::P2, nu_max);
        } else {
            std::ifstream in(schedule_path);
            if (!in) throw std::invalid_argument("cannot open schedule file: " + schedule_path);
            Json j = Json::parse(in);
            sched = schedule_from_json(j);
            if (auto cj = schedule_embedded_code(j); cj && !(code_from_json(*cj) == code))
                throw std::runtime_error("schedule file certifies a different code");
            beta = sched->beta;
        }
        if (beta_override) {
            if (*beta_override < beta || *beta_override % beta)
                throw std::runtime_error("beta override must be a positive multiple of " + std::to_string(beta));
            beta = *beta_override;
        }
        if (beta > 10000000) throw std::runtime_error("stripe count " + std::to_string(beta) + " is too large to simulate");
    } catch (const std::exception& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    }

    auto files = generate_files(f, static_cast<int>(beta), code.k(), code.field(), seed);
    auto store = encode_store(files, code);

    auto build = [&](int m) {
        if (protocol == "p1") return plan_protocol1(store, *lam, *pair, m, plan_seed(seed));
        if (protocol == "a") return plan_protocolA(store, *lam, *pair, m, plan_seed(seed));
        if (protocol == "p2") return plan_protocol2(store, *lam, *pair, m, plan_seed(seed));
        if (protocol == "a-inf") return plan_protocolA_inf(store, *lam, *pair, m, plan_seed(seed));
        if (protocol == "b-p1") return plan_protocolB(store, *dec, m, Subprotocol::P1, plan_seed(seed), nu_max);
        if (protocol == "b-p2") return plan_protocolB(store, *dec, m, Subprotocol::P2, plan_seed(seed), nu_max);
        return plan_from_schedule(store, *sched, m, plan_seed(seed));
    };

    QueryPlan plan;
    std::vector<QueryPlan> family;
    try {
        for (int m = 1; m <= f; ++m) family.push_back(build(m));
        plan = family[target - 1];
    } catch (const std::exception& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    }

    std::vector<NodeResponse> responses;
    for (const auto& nq : plan.per_node) responses.push_back(node_respond(store, nq));
    Mat got = recover(plan, responses, code);
    const bool recovered = got == files.files[target - 1];
    auto audit = audit_privacy(family);

    const long long download = plan.total_download();
    Rational rate(static_cast<long long>(beta) * code.k(), download);

    if (!transcript_path.empty()) {
        Json t;
        t["command"] = "simulate";
        t["code"] = code_to_json(code);
        t["protocol"] = protocol;
        t["f"] = f;
        t["beta"] = beta;
        t["seed"] = seed;
        t["target"] = target;
        t["plan"] = plan_to_json(plan, code.field());
        t["responses"] = responses_to_json(responses);
        t["download"] = download;
        t["rate"] = render_fraction(rate);
        t["recovered"] = recovered;
        t["privacy"] = audit.pass;
        std::ofstream tf(transcript_path);
        tf << t.dump(2) << "\n";
    }

    if (out == "json") {
        Json j;
        j["protocol"] = protocol;
        j["code"] = code_label(code);
        j["f"] = f;
        j["beta"] = beta;
        j["target"] = target;
        j["seed"] = seed;
        Json per_node = Json::array();
        for (const auto& nq : plan.per_node) per_node.push_back(nq.combos.size());
        j["downloads_per_node"] = per_node;
        j["download"] = download;
        j["rate"] = render_fraction(rate);
        j["rate_decimal"] = render4(rate);
        j["recovery"] = recovered ? "pass" : "fail";
        j["privacy"] = audit.pass ? "pass" : "fail";
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "protocol " << protocol << " on " << code_label(code) << ", f = " << f << ", beta = " << beta
                  << ", target = " << target << ", seed = " << seed << "\n";
        std::cout << "downloads per node:";
        for (const auto& nq : plan.per_node) std::cout << " " << nq.combos.size();
        std::cout << "\n";
        std::cout << "total download = " << download << ", rate = " << render_fraction(rate) << " ("
                  << render4(rate) << ")\n";
        std::cout << "recovery: " << (recovered ? "pass" : "FAIL") << "\n";
        std::cout << "privacy audit: " << (audit.pass ? "pass" : "FAIL") << "\n";
        if (!audit.pass)
            for (const auto& v : audit.violations)
                std::cout << "  violation: node " << v.node << ", round " << v.round << ", files {" << v.signature
                          << "}\n";
    }
    return recovered && audit.pass ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PIR over coded storage: code analytics and protocol simulation"};
    app.require_subcommand(1);

    CodeArgs code_args;
    int nu_max = 8;
    std::string out = "text";
    std::string files_flag = "2";
    std::string protocol = "p1";
    std::string schedule_path;
    std::string transcript_path;
    std::vector<std::string> schedule_paths;
    std::uint64_t seed = 0;
    int target = 1;
    long long beta_flag = 0;

    auto add_code_opts = [&](CLI::App* cmd, bool many) {
        auto* opt = cmd->add_option("--code", code_args.paths, "code file (.json, or text with --format)");
        if (!many) opt->required()->expected(1);  // an empty list is a valid (empty) table
        cmd->add_option("--q", [&](const CLI::results_t& rs) { code_args.q = std::stoi(rs[0]); return true; },
                        "field order for text code files");
        cmd->add_option("--k", [&](const CLI::results_t& rs) { code_args.k = std::stoi(rs[0]); return true; },
                        "dimension for decimal code files");
        cmd->add_option("--format", code_args.format, "matrix | decimal")->default_val("matrix");
        cmd->add_option("--nu-max", nu_max, "largest nu tried in rate-matrix searches")->default_val(8);
        cmd->add_option("--out", out, "text | csv | json")->default_val("text");
    };

    auto* an = app.add_subcommand("analyze", "code analytics: weights, rate matrices, decomposition");
    add_code_opts(an, false);

    auto* rt = app.add_subcommand("rate-table", "closed-form rates per code");
    add_code_opts(rt, true);
    rt->add_option("--files", files_flag, "number of files, or inf")->default_val("inf");
    rt->add_option("--schedule", schedule_paths, "schedule files contributing the R_C column");

    auto* sim = app.add_subcommand("simulate", "run a protocol end to end and audit it");
    add_code_opts(sim, false);
    sim->add_option("--protocol", protocol, "p1 | p2 | a | a-inf | b-p1 | b-p2 | schedule")->required();
    sim->add_option("--schedule", schedule_path, "schedule file for --protocol schedule");
    sim->add_option("--files", files_flag, "number of files stored")->default_val("2");
    sim->add_option("--seed", seed, "rng seed for files and queries")->default_val(0);
    sim->add_option("--target", target, "file to retrieve, 1-based")->default_val(1);
    sim->add_option("--beta", beta_flag, "override stripe count (multiple of the protocol minimum)");
    sim->add_option("--transcript", transcript_path, "write a replayable transcript to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitParse : 0;
    }

    try {
        if (an->parsed()) return cmd_analyze(code_args, nu_max, out);
        if (rt->parsed()) return cmd_rate_table(code_args, parse_files_flag(files_flag), schedule_paths, nu_max, out);
        if (sim->parsed())
            return cmd_simulate(code_args, protocol, parse_files_flag(files_flag),
                                beta_flag > 0 ? std::optional<long long>(beta_flag) : std::nullopt, seed, target,
                                schedule_path, nu_max, out, transcript_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    }
    return 0;
}
