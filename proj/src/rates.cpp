#include "pir/rates.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace pir {

bool valid_files(int f) { return f == f_infinity || f >= 1; }

namespace {

BigInt ipow(BigInt base, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// (1 - rho) / (1 - rho^f), the shared shape of all finite-f formulas.
Rational geometric_tail(const Rational& rho, int f) {
    if (f == f_infinity) return 1 - rho;
    Rational num = 1 - rho;
    Rational den = 1 - Rational(ipow(numerator(rho), f), ipow(denominator(rho), f));
    return num / den;
}

}  // namespace

Rational mds_pir_capacity(int n, int k, int f) {
    if (k < 1 || k > n) throw std::invalid_argument("need 1 <= k <= n");
    if (!valid_files(f)) throw std::invalid_argument("file count must be >= 1 or f_infinity");
    if (k == n)
        throw std::invalid_argument("capacity formula is degenerate for k == n (storage without redundancy is unsupported)");
    return geometric_tail(Rational(k, n), f);
}

Rational rate_symmetric(int kappa, int nu, int k, int n, int f) {
    if (kappa < 1 || kappa > nu) throw std::invalid_argument("need 1 <= kappa <= nu");
    if (!valid_files(f)) throw std::invalid_argument("bad file count");
    if (kappa == nu) {
        if (f == f_infinity) return 0;
        // (nu-kappa) factor is zero and so is the denominator tail; the
        // finite-f limit of the formula as kappa -> nu is k/(nf).
        throw std::invalid_argument("rate_symmetric is degenerate for kappa == nu");
    }
    Rational head = Rational(static_cast<long long>(nu - kappa) * k, static_cast<long long>(kappa) * n);
    if (f == f_infinity) return head;
    Rational den = 1 - Rational(ipow(kappa, f), ipow(nu, f));
    return head / den;
}

Rational rate_asymmetric(int kappa, int nu, int f) {
    if (kappa < 1 || kappa > nu) throw std::invalid_argument("need 1 <= kappa <= nu");
    if (!valid_files(f)) throw std::invalid_argument("bad file count");
    if (kappa == nu) {
        if (f == f_infinity) return 0;
        throw std::invalid_argument("rate_asymmetric is degenerate for kappa == nu");
    }
    return geometric_tail(Rational(kappa, nu), f);
}

Rational rate_direct_sum(const std::vector<std::pair<int, int>>& parts, int k, int f) {
    if (parts.empty()) throw std::invalid_argument("direct-sum rate needs at least one part");
    int ksum = 0;
    Rational acc = 0;
    for (auto [np, kp] : parts) {
        ksum += kp;
        acc += Rational(kp, k) / mds_pir_capacity(np, kp, f);
    }
    if (ksum != k) throw std::invalid_argument("part dimensions must sum to k");
    return 1 / acc;
}

StripeDownload stripe_and_download(int n, int k, int f, Subprotocol which) {
    if (!valid_files(f) || f == f_infinity) throw std::invalid_argument("stripe_and_download needs finite f");
    const int g = std::gcd(n, k);
    StripeDownload out;
    Rational d;
    if (which == Subprotocol::P1) {
        BigInt beta = ipow(n / g, f);
        if (beta > std::numeric_limits<long long>::max()) throw std::overflow_error("beta too large");
        out.beta = static_cast<long long>(beta);
        d = Rational(out.beta) * k / mds_pir_capacity(n, k, f);
    } else {
        out.beta = std::lcm(static_cast<long long>(k), static_cast<long long>(n - k)) / k;
        d = Rational(out.beta) * k / mds_pir_capacity(n, k, f_infinity);
    }
    if (denominator(d) != 1) throw std::logic_error("download count came out non-integral");
    out.download = static_cast<long long>(numerator(d));
    return out;
}

Prop1Chain proposition1_check(const LinearCode& code, const RateMatrix& M, int f) {
    Prop1Chain out;
    out.r_s = rate_symmetric(M.kappa, M.nu, code.k(), code.n(), f);
    out.r_a = rate_asymmetric(M.kappa, M.nu, f);
    out.c_f = mds_pir_capacity(code.n(), code.k(), f);
    out.chain_ok = out.r_s <= out.r_a && out.r_a <= out.c_f;
    out.all_equal = out.r_s == out.r_a && out.r_a == out.c_f;
    return out;
}

std::string render4(const Rational& r) {
    if (r < 0) return "-" + render4(-r);
    BigInt num = numerator(r), den = denominator(r);
    BigInt scaled = num * 20000 / den;  // two extra for round-half-up
    BigInt rounded = (scaled + 1) / 2;
    BigInt ip = rounded / 10000, fp = rounded % 10000;
    std::string frac = fp.str();
    frac.insert(frac.begin(), 4 - frac.size(), '0');
    return ip.str() + "." + frac;
}

std::string render4_trim(const Rational& r) {
    std::string s = render4(r);
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

std::string render_fraction(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace pir
