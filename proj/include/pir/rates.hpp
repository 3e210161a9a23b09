// Closed-form capacities and achievable rates, kept as exact rationals.
// The number of files f is either a positive integer or f_infinity for the
// asymptotic regime.

#ifndef PIR_RATES_HPP
#define PIR_RATES_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "pir/lambda.hpp"

namespace pir {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr int f_infinity = -1;

bool valid_files(int f);  // f >= 1 or f_infinity

// (1 - k/n) / (1 - (k/n)^f); throws for k == n (no redundancy stored).
Rational mds_pir_capacity(int n, int k, int f);

// ((nu-kappa) k / (kappa n)) / (1 - (kappa/nu)^f)
Rational rate_symmetric(int kappa, int nu, int k, int n, int f);

// (1 - kappa/nu) / (1 - (kappa/nu)^f)
Rational rate_asymmetric(int kappa, int nu, int f);

// Harmonic-style composition over direct-sum parts (n_p, k_p).
Rational rate_direct_sum(const std::vector<std::pair<int, int>>& parts, int k, int f);

enum class Subprotocol { P1, P2 };

struct StripeDownload {
    long long beta = 0;
    long long download = 0;  // total downloaded symbols
};

// Minimal stripe count and the download it implies, for a code certified
// MDS-PIR capacity-achieving (beta = nu^f under P1, LCM(k, n-k)/k under P2).
StripeDownload stripe_and_download(int n, int k, int f, Subprotocol which);

struct Prop1Chain {
    Rational r_s, r_a, c_f;
    bool chain_ok = false;    // r_s <= r_a <= c_f
    bool all_equal = false;   // holds exactly when kappa/nu == k/n
};

Prop1Chain proposition1_check(const LinearCode& code, const RateMatrix& M, int f);

// Fixed four-decimal rendering ("0.2778"), and a trimmed variant ("0.4")
// for table cells.
std::string render4(const Rational& r);
std::string render4_trim(const Rational& r);
std::string render_fraction(const Rational& r);

struct RateReport {
    int n = 0, k = 0, f = f_infinity;
    int kappa = 0, nu = 0;
    Rational c_f, c_inf, r_s, r_a;
    bool has_r_b = false;
    Rational r_b;
    bool capacity_achieving = false;
    long long beta_p1 = 0, d_p1 = 0, beta_p2 = 0, d_p2 = 0;  // set when capacity-achieving
};

}  // namespace pir

#endif
