#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "pir/lambda.hpp"

using namespace pir;

namespace {

// brute force over every binary nu x n matrix
bool exists_by_enumeration(const LinearCode& code, int kappa, int nu) {
    const int n = code.n();
    const std::uint64_t total = std::uint64_t{1} << (static_cast<std::uint64_t>(nu) * n);
    for (std::uint64_t t = 0; t < total; ++t) {
        RateMatrix M;
        M.nu = nu;
        M.kappa = kappa;
        M.n = n;
        M.lam.resize(static_cast<size_t>(nu) * n);
        for (size_t b = 0; b < M.lam.size(); ++b) M.lam[b] = (t >> b) & 1;
        if (validate_rate_matrix(code, M).valid) return true;
    }
    return false;
}

LinearCode random_code(int n, int k, std::mt19937_64& rng) {
    Field F = Field::of_order(2);
    while (true) {
        Mat G(F, k, n);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < n; ++c) G.at(r, c) = F.sample(rng);
        bool zero_col = false;
        for (int c = 0; c < n; ++c) {
            bool z = true;
            for (int r = 0; r < k; ++r)
                if (G.at(r, c)) z = false;
            if (z) zero_col = true;
        }
        if (zero_col || G.rank() != k) continue;
        return LinearCode(std::move(G));
    }
}

}  // namespace

TEST_CASE("bundled rate matrices validate") {
    auto c1 = fixtures::c1();
    auto l1 = fixtures::lambda_c1(c1);
    CHECK(validate_rate_matrix(c1, l1).valid);

    auto c2 = fixtures::c2();
    auto l2 = fixtures::lambda_c2(c2);
    CHECK(validate_rate_matrix(c2, l2).valid);

    // all-ones single row: kappa = nu = 1
    RateMatrix ones = fixtures::make_lambda(c1, 1, {{1, 1, 1, 1, 1}});
    CHECK(validate_rate_matrix(c1, ones).valid);

    // constructed violations name the offender
    RateMatrix bad = l1;
    bad.lam[0] = 1;  // column 1 weight becomes 3
    auto v = validate_rate_matrix(c1, bad);
    CHECK_FALSE(v.valid);
    CHECK(v.violation.find("column 1") != std::string::npos);

    RateMatrix badrow = fixtures::make_lambda(c1, 2, {{1, 1, 0, 1, 1},
                                                      {1, 0, 1, 1, 1},
                                                      {0, 1, 1, 0, 0}});
    auto v2 = validate_rate_matrix(c1, badrow);
    CHECK_FALSE(v2.valid);
    CHECK(v2.violation.find("row 3") != std::string::npos);
}

TEST_CASE("find_rate_matrix on the motivating cases") {
    auto c1 = fixtures::c1();
    auto r = find_rate_matrix(c1, 2, 3);
    REQUIRE(r.status == SearchStatus::Found);
    CHECK(validate_rate_matrix(c1, *r.matrix).valid);

    // kappa/nu below k/n can never exist
    CHECK(find_rate_matrix(c1, 1, 2).status == SearchStatus::NoneExists);

    auto rep = fixtures::rep2();
    auto rr = find_rate_matrix(rep, 1, 2);
    REQUIRE(rr.status == SearchStatus::Found);
    CHECK(validate_rate_matrix(rep, *rr.matrix).valid);
    // the two identity-permutation matrices are the only options here
    bool id = rr.matrix->lam == std::vector<std::uint8_t>{1, 0, 0, 1};
    bool swapped = rr.matrix->lam == std::vector<std::uint8_t>{0, 1, 1, 0};
    CHECK((id || swapped));
}

TEST_CASE("search agrees with exhaustive enumeration on small instances") {
    std::mt19937_64 rng(2024);
    std::vector<LinearCode> codes{fixtures::c1(), fixtures::rep2(), fixtures::g1()};
    for (int i = 0; i < 3; ++i) codes.push_back(random_code(5, 2, rng));
    for (int i = 0; i < 3; ++i) codes.push_back(random_code(6, 3, rng));
    for (const auto& code : codes) {
        if (code.n() > 6) continue;
        for (int nu = 1; nu <= 3; ++nu)
            for (int kappa = 1; kappa <= nu; ++kappa) {
                bool brute = exists_by_enumeration(code, kappa, nu);
                auto got = find_rate_matrix(code, kappa, nu);
                CHECK(got.status != SearchStatus::BudgetExceeded);
                CHECK((got.status == SearchStatus::Found) == brute);
                if (got.status == SearchStatus::Found) CHECK(validate_rate_matrix(code, *got.matrix).valid);
            }
    }
}

TEST_CASE("minimum ratio for the benchmark codes") {
    auto m1 = find_min_ratio(fixtures::c1());
    REQUIRE(m1.found);
    CHECK(m1.kappa == 2);
    CHECK(m1.nu == 3);
    CHECK(m1.exhaustive);

    auto m2 = find_min_ratio(fixtures::c2());
    REQUIRE(m2.found);
    CHECK(m2.kappa == 2);
    CHECK(m2.nu == 3);

    auto m3 = find_min_ratio(fixtures::c3());
    REQUIRE(m3.found);
    CHECK(m3.kappa == 3);
    CHECK(m3.nu == 5);

    auto m4 = find_min_ratio(fixtures::c4());
    REQUIRE(m4.found);
    CHECK(m4.kappa == 3);
    CHECK(m4.nu == 4);

    auto mrep = find_min_ratio(fixtures::rep2(), 2);
    REQUIRE(mrep.found);
    CHECK(mrep.kappa == 1);
    CHECK(mrep.nu == 2);

    // Lemma-style bound holds for every search result
    for (const auto& [code, res] :
         std::vector<std::pair<LinearCode, MinRatioResult>>{{fixtures::c1(), m1}, {fixtures::c2(), m2},
                                                            {fixtures::c3(), m3}, {fixtures::c4(), m4}}) {
        CHECK(res.kappa * code.n() >= res.nu * code.k());
        CHECK(validate_rate_matrix(code, *res.matrix).valid);
    }
}

TEST_CASE("capacity-achieving verdicts") {
    CHECK(is_capacity_achieving(fixtures::c1()) == CapacityVerdict::NotWithinBudget);
    CHECK(is_capacity_achieving(fixtures::g1()) == CapacityVerdict::Achieving);
    CHECK(is_capacity_achieving(fixtures::rep2()) == CapacityVerdict::Achieving);
}

TEST_CASE("equality case of the ratio bound forces information-set rows") {
    // when kappa/nu == k/n every row support must itself be an information set
    for (const auto& code : {fixtures::g1(), fixtures::rep2()}) {
        auto mr = find_min_ratio(code);
        REQUIRE(mr.found);
        REQUIRE(mr.kappa * code.n() == mr.nu * code.k());
        for (int u = 0; u < mr.nu; ++u) {
            auto supp = mr.matrix->row_support(u);
            CHECK(static_cast<int>(supp.size()) == code.k());
            CHECK(is_information_set(code, supp));
        }
    }
}

TEST_CASE("interference pair for the worked 5-node example") {
    auto c1 = fixtures::c1();
    auto lam = fixtures::lambda_c1(c1);
    auto P = build_interference_pair(lam);
    // columns of A, ascending: {2,3},{1,3},{1,3},{1,2},{1,2}
    CHECK(P.A == std::vector<int>{2, 1, 1, 1, 1, 3, 3, 3, 2, 2});
    CHECK(P.B == std::vector<int>{1, 2, 2, 3, 3});
    CHECK(interference_support(P, 1) == std::vector<int>{2, 3, 4, 5});
    CHECK(first_information_set_within(c1, interference_support(P, 1)) == CoordSet{2, 3, 4});

    // nu == kappa leaves B empty
    RateMatrix ones = fixtures::make_lambda(c1, 1, {{1, 1, 1, 1, 1}});
    CHECK(build_interference_pair(ones).B.empty());
}

TEST_CASE("claim-1 properties hold for random valid matrices") {
    std::mt19937_64 rng(99);
    int built = 0;
    while (built < 50) {
        int k = 1 + static_cast<int>(uniform_below(rng, 4));
        int n = k + 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(8 - k)));
        LinearCode code = random_code(n, k, rng);
        int nu = 2 + static_cast<int>(uniform_below(rng, 3));
        int kappa = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(nu - 1)));
        auto r = find_rate_matrix(code, kappa, nu, 2000000);
        if (r.status != SearchStatus::Found) continue;
        ++built;
        auto P = build_interference_pair(*r.matrix);
        for (int a = 1; a <= nu; ++a) {
            auto S = interference_support(P, a);
            CHECK_FALSE(first_information_set_within(code, S).empty());
        }
        // S(b_{i,l}|A) never contains l
        for (int i = 0; i < nu - kappa; ++i)
            for (int l = 0; l < n; ++l) {
                auto S = interference_support(P, P.b(i, l));
                CHECK(std::find(S.begin(), S.end(), l + 1) == S.end());
            }
    }
}
