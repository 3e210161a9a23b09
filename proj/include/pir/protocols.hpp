// Query-plan construction, recovery, and privacy auditing.
//
// The file-dependent plans (Protocol 1 and its asymmetric trim, Protocol A)
// work in kappa repetitions of f rounds over beta = nu^f stripes: round-1
// singles, then sums that reuse the previous round's undesired downloads as
// side information, with all per-round counts pinned by the interference
// matrices A/B.  The file-independent plans (Protocol 2, asymmetric
// variant) mask desired symbols with interference batches, i.e. random
// codeword combinations of everything stored.  Protocol B composes either
// subprotocol over the parts of a direct-sum decomposition with
// beta = LCM of the per-part stripe counts.

#ifndef PIR_PROTOCOLS_HPP
#define PIR_PROTOCOLS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "pir/dss.hpp"
#include "pir/lambda.hpp"
#include "pir/rates.hpp"

namespace pir {

struct PartInfo {
    std::vector<int> coords;  // global 1-based nodes, ascending; local column j is coords[j]
    Mat gen;                  // k_p x n_p generator of the code on those coordinates
};

// A decodable linear-combination codeword (an undesired sum in Protocol 1,
// an interference batch in the file-independent protocols): downloaded
// clean at `taps`, solvable from the information set `solve_nodes`.
struct SideBatch {
    int part = 0;
    std::vector<std::pair<int, int>> taps;  // (node, combo index)
    CoordSet solve_nodes;
};

// One stripe's code symbols on one part: each tap yields the symbol at its
// node after subtracting the referenced batch value.
struct StripePiece {
    struct Tap {
        int node = 0;
        int combo = 0;
        int batch = -1;  // -1: the response value is the symbol itself
    };
    int part = 0;
    int file_row = 0;  // stored stripe (0-based) within the target file
    std::vector<Tap> taps;
    CoordSet solve_nodes;
};

// Schedule-backed plans recover by a precomputed elimination instead of
// the batch/piece recipe.
struct LinearRecovery {
    // entry (i*k + h') lists (node, combo, coefficient) summing to x_{i,h'+1}
    std::vector<std::vector<std::tuple<int, int, fe_t>>> rows;
};

struct QueryPlan {
    std::string protocol;  // p1 | a | p2 | a-inf | b-p1 | b-p2 | schedule
    int target_file = 1;
    int f = 1;
    int beta = 1;
    bool file_independent = false;
    std::uint64_t seed = 0;

    std::vector<NodeQuery> per_node;  // one entry per node, 1..n

    // metadata (lambda/pair/permutations per part; masks for batches)
    std::vector<RateMatrix> lambdas;
    std::vector<InterferencePair> pairs;
    std::vector<std::vector<std::vector<int>>> perms;  // [part][file][y index] -> stored stripe
    std::vector<std::vector<fe_t>> masks;              // batch id -> coefficient vector (beta*f)

    std::vector<PartInfo> parts;
    std::vector<SideBatch> batches;
    std::vector<StripePiece> pieces;
    std::optional<LinearRecovery> elimination;

    long long total_download() const;
};

long long required_beta_p1(const RateMatrix& M, int f);

QueryPlan plan_protocol1(const CodedStore& store, const RateMatrix& M, const InterferencePair& P, int m,
                         std::uint64_t seed);
QueryPlan plan_protocolA(const CodedStore& store, const RateMatrix& M, const InterferencePair& P, int m,
                         std::uint64_t seed);

// File-independent era template: b stripes served by `rows` interference
// batches per era; each stripe is recovered on exactly one information set
// worth of masked slots.
struct FiStructure {
    int b = 0;
    std::vector<int> rows;                                   // 1-based lambda rows, one batch each
    std::vector<std::vector<std::pair<int, int>>> cover;     // stripe -> [(node, batch slot)]
    std::vector<CoordSet> unmask_info;                       // per batch: info set inside the row support
};

FiStructure build_fi_structure(const LinearCode& code, const RateMatrix& M, int scale_cap = 8);

QueryPlan plan_protocol2(const CodedStore& store, const RateMatrix& M, const InterferencePair& P, int m,
                         std::uint64_t seed);
QueryPlan plan_protocolA_inf(const CodedStore& store, const RateMatrix& M, const InterferencePair& P, int m,
                             std::uint64_t seed);

long long required_beta_B(const LinearCode& code, const Decomposition& dec, int f, Subprotocol sub,
                          int nu_max = 8);
QueryPlan plan_protocolB(const CodedStore& store, const Decomposition& dec, int m, Subprotocol sub,
                         std::uint64_t seed, int nu_max = 8);

Mat recover(const QueryPlan& plan, const std::vector<NodeResponse>& responses, const LinearCode& code);

// Per-entry download counting functions for the repetition/round layout.
struct ScheduleCounts {
    std::vector<long long> U;  // U[l], l in [1, f-1]
    std::vector<long long> W;  // W[l]
    long long d_entry = 0;     // (nu^f - kappa^f) / (nu - kappa)
};

ScheduleCounts schedule_counts(int kappa, int nu, int f);

struct PrivacyVerdict {
    bool pass = true;
    struct Violation {
        int node = 0;
        int round = 0;
        std::string signature;
    };
    std::vector<Violation> violations;
};

// plans[i] must be the plan for target file i+1, all built from one seed.
PrivacyVerdict audit_privacy(const std::vector<QueryPlan>& plans);

}  // namespace pir

#endif
