// Dense matrices over GF(q) with just enough linear algebra for code
// analytics: rank, RREF, inverse, column restriction, products.

#ifndef PIR_MATRIX_HPP
#define PIR_MATRIX_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "pir/field.hpp"

namespace pir {

class Mat {
  public:
    Mat(const Field& F, int rows, int cols) : F_(F), rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}
    Mat(const Field& F, int rows, int cols, std::vector<fe_t> entries);

    static Mat identity(const Field& F, int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Field& field() const { return F_; }

    fe_t& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    fe_t at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const std::vector<fe_t>& data() const { return a_; }

    std::vector<fe_t> row(int r) const;
    std::vector<fe_t> col(int c) const;

    Mat cols_subset(const std::vector<int>& idx) const;  // 0-based column picks
    Mat transpose() const;
    Mat mul(const Mat& other) const;

    // Reduced row echelon form; reports rank and pivot columns if asked.
    Mat rref(int* rank_out = nullptr, std::vector<int>* pivot_cols = nullptr) const;
    int rank() const;
    std::optional<Mat> inverse() const;

    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  private:
    Field F_;
    int rows_, cols_;
    std::vector<fe_t> a_;
};

// x * M for a row vector x (|x| = M.rows()).
std::vector<fe_t> vec_mat(const Field& F, const std::vector<fe_t>& x, const Mat& M);

// Inner product of two equal-length vectors.
fe_t dot(const Field& F, const std::vector<fe_t>& a, const std::vector<fe_t>& b);

// GF(2) columns of a k x n generator packed as k-bit words, for fast rank
// tests over column subsets during matrix searches.
struct Gf2Cols {
    int k = 0;
    std::vector<std::uint64_t> col;  // col[l], bit r = G[r][l]

    static Gf2Cols from(const Mat& G);
    int rank_of(const std::vector<int>& cols0) const;  // 0-based columns
    int rank_of_mask(std::uint64_t mask) const;        // n <= 64
};

}  // namespace pir

#endif
