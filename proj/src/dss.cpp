#include "pir/dss.hpp"

#include <stdexcept>

namespace pir {

FileSet generate_files(int f, int beta, int k, const Field& F, std::uint64_t seed) {
    if (f < 1 || beta < 1 || k < 1) throw std::invalid_argument("generate_files: dimensions must be positive");
    std::mt19937_64 rng(seed);
    FileSet out{f, beta, k, F, {}};
    out.files.reserve(f);
    for (int m = 0; m < f; ++m) {
        Mat X(F, beta, k);
        for (int i = 0; i < beta; ++i)
            for (int j = 0; j < k; ++j) X.at(i, j) = F.sample(rng);
        out.files.push_back(std::move(X));
    }
    return out;
}

CodedStore encode_store(const FileSet& files, const LinearCode& code) {
    if (files.k != code.k()) throw std::invalid_argument("file stripe length does not match code dimension");
    if (!files.field.same(code.field())) throw std::invalid_argument("file field does not match code field");
    Mat array(code.field(), files.f * files.beta, code.n());
    for (int m = 0; m < files.f; ++m)
        for (int i = 0; i < files.beta; ++i) {
            auto cw = code.encode(files.files[m].row(i));
            for (int c = 0; c < code.n(); ++c) array.at(m * files.beta + i, c) = cw[c];
        }
    return CodedStore{code, files.f, files.beta, std::move(array)};
}

NodeResponse node_respond(const Field& F, const std::vector<fe_t>& column, const NodeQuery& q) {
    NodeResponse r;
    r.node = q.node;
    r.values.reserve(q.combos.size());
    for (const QueryCombo& c : q.combos) {
        if (c.coeff.size() != column.size())
            throw std::invalid_argument("query coefficient vector length does not match stored column");
        // the zero vector is admissible: interference masks are uniform over
        // the whole coefficient space, and excluding the zero draw would make
        // masked and clean queries distinguishable
        r.values.push_back(dot(F, c.coeff, column));
    }
    return r;
}

NodeResponse node_respond(const CodedStore& store, const NodeQuery& q) {
    if (q.node < 1 || q.node > store.code.n()) throw std::invalid_argument("node index out of range");
    return node_respond(store.code.field(), store.column(q.node), q);
}

}  // namespace pir
