#include "pir/matrix.hpp"

#include <stdexcept>

namespace pir {

Mat::Mat(const Field& F, int rows, int cols, std::vector<fe_t> entries) : F_(F), rows_(rows), cols_(cols), a_(std::move(entries)) {
    if (a_.size() != static_cast<size_t>(rows) * cols) throw std::invalid_argument("matrix entry count mismatch");
    for (fe_t v : a_) F_.check(v);
}

Mat Mat::identity(const Field& F, int n) {
    Mat I(F, n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

std::vector<fe_t> Mat::row(int r) const {
    std::vector<fe_t> out(cols_);
    for (int c = 0; c < cols_; ++c) out[c] = at(r, c);
    return out;
}

std::vector<fe_t> Mat::col(int c) const {
    std::vector<fe_t> out(rows_);
    for (int r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
}

Mat Mat::cols_subset(const std::vector<int>& idx) const {
    Mat out(F_, rows_, static_cast<int>(idx.size()));
    for (int r = 0; r < rows_; ++r)
        for (size_t j = 0; j < idx.size(); ++j) out.at(r, static_cast<int>(j)) = at(r, idx[j]);
    return out;
}

Mat Mat::transpose() const {
    Mat out(F_, cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
    return out;
}

Mat Mat::mul(const Mat& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("matrix product shape mismatch");
    if (!F_.same(other.F_)) throw std::invalid_argument("matrix product over mismatched fields");
    Mat out(F_, rows_, other.cols_);
    for (int r = 0; r < rows_; ++r)
        for (int i = 0; i < cols_; ++i) {
            fe_t v = at(r, i);
            if (v == 0) continue;
            for (int c = 0; c < other.cols_; ++c)
                out.at(r, c) = F_.add(out.at(r, c), F_.mul(v, other.at(i, c)));
        }
    return out;
}

Mat Mat::rref(int* rank_out, std::vector<int>* pivot_cols) const {
    Mat M = *this;
    int r = 0;
    std::vector<int> pivots;
    for (int c = 0; c < cols_ && r < rows_; ++c) {
        int p = -1;
        for (int i = r; i < rows_; ++i)
            if (M.at(i, c) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < cols_; ++j) std::swap(M.at(p, j), M.at(r, j));
        fe_t piv_inv = F_.inv(M.at(r, c));
        for (int j = 0; j < cols_; ++j) M.at(r, j) = F_.mul(M.at(r, j), piv_inv);
        for (int i = 0; i < rows_; ++i) {
            if (i == r) continue;
            fe_t factor = M.at(i, c);
            if (factor == 0) continue;
            for (int j = 0; j < cols_; ++j) M.at(i, j) = F_.sub(M.at(i, j), F_.mul(factor, M.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    if (rank_out) *rank_out = r;
    if (pivot_cols) *pivot_cols = pivots;
    return M;
}

int Mat::rank() const {
    int r = 0;
    rref(&r);
    return r;
}

std::optional<Mat> Mat::inverse() const {
    if (rows_ != cols_) return std::nullopt;
    Mat aug(F_, rows_, 2 * cols_);
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) aug.at(r, c) = at(r, c);
        aug.at(r, cols_ + r) = 1;
    }
    int rank = 0;
    Mat red = aug.rref(&rank);
    // invertible iff the left block reduced to the identity
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            if (red.at(r, c) != (r == c ? 1 : 0)) return std::nullopt;
    Mat inv(F_, rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) inv.at(r, c) = red.at(r, cols_ + c);
    return inv;
}

std::vector<fe_t> vec_mat(const Field& F, const std::vector<fe_t>& x, const Mat& M) {
    if (static_cast<int>(x.size()) != M.rows()) throw std::invalid_argument("vec_mat shape mismatch");
    std::vector<fe_t> out(M.cols(), 0);
    for (int r = 0; r < M.rows(); ++r) {
        if (x[r] == 0) continue;
        for (int c = 0; c < M.cols(); ++c) out[c] = F.add(out[c], F.mul(x[r], M.at(r, c)));
    }
    return out;
}

fe_t dot(const Field& F, const std::vector<fe_t>& a, const std::vector<fe_t>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot length mismatch");
    fe_t s = 0;
    for (size_t i = 0; i < a.size(); ++i) s = F.add(s, F.mul(a[i], b[i]));
    return s;
}

Gf2Cols Gf2Cols::from(const Mat& G) {
    if (G.field().q() != 2) throw std::invalid_argument("Gf2Cols requires GF(2)");
    if (G.rows() > 64) throw std::invalid_argument("Gf2Cols supports k <= 64");
    Gf2Cols out;
    out.k = G.rows();
    out.col.resize(G.cols(), 0);
    for (int c = 0; c < G.cols(); ++c)
        for (int r = 0; r < G.rows(); ++r)
            if (G.at(r, c)) out.col[c] |= (std::uint64_t{1} << r);
    return out;
}

namespace {

int rank_words(const std::vector<std::uint64_t>& w) {
    std::uint64_t basis[64] = {0};
    int rank = 0;
    for (std::uint64_t v : w) {
        while (v) {
            int b = __builtin_ctzll(v);
            if (!basis[b]) {
                basis[b] = v;
                ++rank;
                break;
            }
            v ^= basis[b];
        }
    }
    return rank;
}

}  // namespace

int Gf2Cols::rank_of(const std::vector<int>& cols0) const {
    std::vector<std::uint64_t> w;
    w.reserve(cols0.size());
    for (int c : cols0) w.push_back(col[c]);
    return rank_words(w);
}

int Gf2Cols::rank_of_mask(std::uint64_t mask) const {
    std::vector<std::uint64_t> w;
    while (mask) {
        int c = __builtin_ctzll(mask);
        mask &= mask - 1;
        w.push_back(col[c]);
    }
    return rank_words(w);
}

}  // namespace pir
