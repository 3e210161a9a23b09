// Shared fixtures: the four benchmark codes and the hand-checked rate
// matrices used across the suites.

#ifndef PIR_TEST_FIXTURES_HPP
#define PIR_TEST_FIXTURES_HPP

#include <vector>

#include "pir/code.hpp"
#include "pir/lambda.hpp"

namespace fixtures {

inline pir::LinearCode make_code(int q, const std::vector<std::vector<pir::fe_t>>& rows) {
    pir::Field F = pir::Field::of_order(q);
    pir::Mat G(F, static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c) G.at(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    return pir::LinearCode(std::move(G));
}

// [5,3] binary code
inline pir::LinearCode c1() {
    return make_code(2, {{1, 0, 0, 1, 0},
                         {0, 1, 0, 1, 0},
                         {0, 0, 1, 0, 1}});
}

// [9,5] binary code
inline pir::LinearCode c2() {
    return make_code(2, {{1, 0, 0, 0, 0, 0, 0, 0, 1},
                         {0, 1, 0, 0, 0, 0, 0, 0, 1},
                         {0, 0, 1, 0, 0, 0, 1, 1, 0},
                         {0, 0, 0, 1, 0, 1, 0, 1, 1},
                         {0, 0, 0, 0, 1, 1, 1, 1, 1}});
}

// [7,4] binary code, decimal columns (1,2,4,8,8,14,5)
inline pir::LinearCode c3() {
    return make_code(2, {{1, 0, 0, 0, 0, 0, 1},
                         {0, 1, 0, 0, 0, 1, 0},
                         {0, 0, 1, 0, 0, 1, 1},
                         {0, 0, 0, 1, 1, 1, 0}});
}

// [11,6] binary code, decimal columns (1,2,4,8,16,32,48,40,24,56,55)
inline pir::LinearCode c4() {
    return make_code(2, {{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
                         {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1},
                         {0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1},
                         {0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 0},
                         {0, 0, 0, 0, 1, 0, 1, 0, 1, 1, 1},
                         {0, 0, 0, 0, 0, 1, 1, 1, 0, 1, 1}});
}

// [2,1] repetition code
inline pir::LinearCode rep2() { return make_code(2, {{1, 1}}); }

// [3,2] part of the c1 decomposition (block form)
inline pir::LinearCode g1() { return make_code(2, {{1, 0, 1}, {0, 1, 1}}); }

inline pir::RateMatrix make_lambda(const pir::LinearCode& code, int kappa,
                                   const std::vector<std::vector<std::uint8_t>>& rows) {
    pir::RateMatrix M;
    M.nu = static_cast<int>(rows.size());
    M.kappa = kappa;
    M.n = static_cast<int>(rows[0].size());
    M.code_hash = pir::code_hash(code);
    for (const auto& row : rows) M.lam.insert(M.lam.end(), row.begin(), row.end());
    return M;
}

// rate matrix for c1 with kappa/nu = 2/3
inline pir::RateMatrix lambda_c1(const pir::LinearCode& code) {
    return make_lambda(code, 2, {{0, 1, 1, 1, 1},
                                 {1, 0, 0, 1, 1},
                                 {1, 1, 1, 0, 0}});
}

// rate matrix for c2 with kappa/nu = 2/3
inline pir::RateMatrix lambda_c2(const pir::LinearCode& code) {
    return make_lambda(code, 2, {{0, 1, 0, 0, 0, 1, 1, 1, 1},
                                 {1, 0, 1, 1, 1, 1, 1, 1, 1},
                                 {1, 1, 1, 1, 1, 0, 0, 0, 0}});
}

}  // namespace fixtures

#endif
