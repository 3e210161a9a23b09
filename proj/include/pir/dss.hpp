// The simulated distributed storage system: file generation, encoding
// into the beta*f x n array, and the deterministic per-node response
// engine.  A node answers inner products of its own column against the
// coefficient vectors it was sent and sees nothing else.

#ifndef PIR_DSS_HPP
#define PIR_DSS_HPP

#include <cstdint>
#include <vector>

#include "pir/code.hpp"

namespace pir {

struct FileSet {
    int f = 0, beta = 0, k = 0;
    Field field;
    std::vector<Mat> files;  // f matrices, each beta x k
};

FileSet generate_files(int f, int beta, int k, const Field& F, std::uint64_t seed);

struct CodedStore {
    LinearCode code;
    int f = 0, beta = 0;
    Mat array;  // (beta f) x n; row (m-1)*beta + i is stripe i of file m encoded

    int stored_rows() const { return f * beta; }
    int row_index(int file_m, int stripe) const { return (file_m - 1) * beta + stripe; }  // stripe 0-based
    std::vector<fe_t> column(int node) const { return array.col(node - 1); }             // node 1-based
};

CodedStore encode_store(const FileSet& files, const LinearCode& code);

// One requested linear combination of a node's stored symbols, together
// with the user-side bookkeeping that travels in the plan (labels do not
// depend on the requested file).
struct QueryCombo {
    std::vector<fe_t> coeff;  // length beta*f
    int repetition = 0;       // 1-based for file-dependent protocols, else 0
    int round = 0;
    int mask_id = -1;         // interference batch id for file-independent plans
    long long unit_row = -1;  // stored row carrying the desired unit, -1 if none
};

struct NodeQuery {
    int node = 0;  // 1-based
    std::vector<QueryCombo> combos;
};

struct NodeResponse {
    int node = 0;
    std::vector<fe_t> values;
};

// Pure function of (own column, own query).
NodeResponse node_respond(const Field& F, const std::vector<fe_t>& column, const NodeQuery& q);

// Convenience: respond using the store's column for q.node.
NodeResponse node_respond(const CodedStore& store, const NodeQuery& q);

}  // namespace pir

#endif
