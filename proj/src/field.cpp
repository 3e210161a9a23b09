#include "pir/field.hpp"

#include <stdexcept>
#include <string>

namespace pir {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n == 0");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

namespace {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Multiply two elements of F_p[x]/(f) in vector form, f monic of degree e.
std::uint32_t poly_mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p, std::uint32_t e,
                           const std::vector<std::uint8_t>& f) {
    std::vector<std::uint32_t> prod(2 * e, 0);
    std::vector<std::uint32_t> da(e), db(e);
    for (std::uint32_t i = 0; i < e; ++i) {
        da[i] = a % p;
        a /= p;
        db[i] = b % p;
        b /= p;
    }
    for (std::uint32_t i = 0; i < e; ++i)
        for (std::uint32_t j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
    // reduce by f: x^e = -(f_0 + f_1 x + ... + f_{e-1} x^{e-1})
    for (int d = static_cast<int>(2 * e) - 2; d >= static_cast<int>(e); --d) {
        std::uint32_t c = prod[d];
        if (c == 0) continue;
        prod[d] = 0;
        for (std::uint32_t i = 0; i < e; ++i) {
            std::uint32_t sub = (c * f[i]) % p;
            prod[d - e + i] = (prod[d - e + i] + p - sub) % p;
        }
    }
    std::uint32_t out = 0, mult = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        out += prod[i] * mult;
        mult *= p;
    }
    return out;
}

}  // namespace

Field Field::prime_field(std::uint32_t p) {
    if (!is_prime(p) || p > 65521) throw std::invalid_argument("field order must be a prime power <= 65521");
    Field F;
    F.q_ = p;
    F.p_ = p;
    F.e_ = 1;
    return F;
}

Field Field::extension_field(std::uint32_t p, std::uint32_t e) {
    if (!is_prime(p)) throw std::invalid_argument("characteristic must be prime");
    if (e < 2) return prime_field(p);
    std::uint64_t q64 = 1;
    for (std::uint32_t i = 0; i < e; ++i) q64 *= p;
    if (q64 > 4096) throw std::invalid_argument("extension field order must be <= 4096");
    const std::uint32_t q = static_cast<std::uint32_t>(q64);

    Field F;
    F.q_ = q;
    F.p_ = p;
    F.e_ = e;

    // Scan monic candidates in canonical order; a candidate is primitive
    // exactly when repeated multiplication by x first returns to 1 after
    // q-1 steps (a reducible f cannot have a unit of that order).
    for (std::uint32_t t = 1; t < q; ++t) {
        if (t % p == 0) continue;  // f(0) must be nonzero
        std::vector<std::uint8_t> f(e + 1);
        std::uint32_t tt = t;
        for (std::uint32_t i = 0; i < e; ++i) {
            f[i] = static_cast<std::uint8_t>(tt % p);
            tt /= p;
        }
        f[e] = 1;

        auto exp = std::make_shared<std::vector<fe_t>>();
        exp->reserve(q - 1);
        std::uint32_t cur = 1;
        bool primitive = true;
        for (std::uint32_t i = 0; i < q - 1; ++i) {
            exp->push_back(static_cast<fe_t>(cur));
            cur = poly_mul_mod(cur, p, p, e, f);  // multiply by x (encoded as p)
            if (cur == 1 && i + 1 < q - 1) {
                primitive = false;
                break;
            }
        }
        if (!primitive || cur != 1) continue;

        auto log = std::make_shared<std::vector<fe_t>>(q, 0);
        for (std::uint32_t i = 0; i < q - 1; ++i) (*log)[(*exp)[i]] = static_cast<fe_t>(i);
        F.prim_poly_ = std::move(f);
        F.exp_ = std::move(exp);
        F.log_ = std::move(log);
        return F;
    }
    throw std::logic_error("no primitive polynomial found");  // unreachable for prime powers
}

Field Field::of_order(std::uint32_t q) {
    if (q < 2) throw std::invalid_argument("field order must be >= 2");
    for (std::uint32_t p = 2; p <= q; ++p) {
        if (!is_prime(p)) continue;
        if (q % p != 0) continue;
        std::uint32_t e = 0, rest = q;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        if (rest != 1) throw std::invalid_argument("field order " + std::to_string(q) + " is not a prime power");
        return e == 1 ? prime_field(p) : extension_field(p, e);
    }
    throw std::invalid_argument("bad field order");
}

void Field::check(fe_t a) const {
    if (a >= q_) throw std::invalid_argument("field element " + std::to_string(a) + " out of range for GF(" + std::to_string(q_) + ")");
}

fe_t Field::add(fe_t a, fe_t b) const {
    check(a);
    check(b);
    if (e_ == 1) return static_cast<fe_t>((static_cast<std::uint32_t>(a) + b) % p_);
    // coefficient-wise mod p
    std::uint32_t out = 0, mult = 1, x = a, y = b;
    for (std::uint32_t i = 0; i < e_; ++i) {
        out += ((x % p_ + y % p_) % p_) * mult;
        x /= p_;
        y /= p_;
        mult *= p_;
    }
    return static_cast<fe_t>(out);
}

fe_t Field::neg(fe_t a) const {
    check(a);
    if (e_ == 1) return static_cast<fe_t>(a == 0 ? 0 : p_ - a);
    std::uint32_t out = 0, mult = 1, x = a;
    for (std::uint32_t i = 0; i < e_; ++i) {
        std::uint32_t c = x % p_;
        out += (c == 0 ? 0 : p_ - c) * mult;
        x /= p_;
        mult *= p_;
    }
    return static_cast<fe_t>(out);
}

fe_t Field::sub(fe_t a, fe_t b) const { return add(a, neg(b)); }

fe_t Field::mul(fe_t a, fe_t b) const {
    check(a);
    check(b);
    if (a == 0 || b == 0) return 0;
    if (e_ == 1) return static_cast<fe_t>((static_cast<std::uint32_t>(a) * b) % p_);
    std::uint32_t s = (*log_)[a] + (*log_)[b];
    if (s >= q_ - 1) s -= q_ - 1;
    return (*exp_)[s];
}

fe_t Field::inv(fe_t a) const {
    check(a);
    if (a == 0) throw std::domain_error("division by zero in GF(" + std::to_string(q_) + ")");
    if (e_ == 1) return pow(a, p_ - 2);
    std::uint32_t l = (*log_)[a];
    return (*exp_)[l == 0 ? 0 : q_ - 1 - l];
}

fe_t Field::div(fe_t a, fe_t b) const { return mul(a, inv(b)); }

fe_t Field::pow(fe_t a, std::uint64_t n) const {
    check(a);
    fe_t r = 1, base = a;
    while (n) {
        if (n & 1) r = mul(r, base);
        base = mul(base, base);
        n >>= 1;
    }
    return r;
}

fe_t Field::sample(std::mt19937_64& rng) const { return static_cast<fe_t>(uniform_below(rng, q_)); }

}  // namespace pir
