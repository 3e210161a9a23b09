// Exact arithmetic over GF(q), q = p^e.
//
// Prime fields use modular arithmetic directly.  Extension fields are
// built as F_p[x]/(f) with log/antilog tables, where f is the canonical
// (lexicographically smallest, coefficients read low-degree-first) monic
// primitive polynomial of degree e over F_p.  Elements are encoded as
// integers in [0, q): the coefficient vector of the polynomial basis read
// low-degree-first, i.e. value = sum_i c_i * p^i.

#ifndef PIR_FIELD_HPP
#define PIR_FIELD_HPP

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

namespace pir {

// Canonical integer representative of a field element, value < q.
using fe_t = std::uint16_t;

// Uniform draw from [0, n) with rejection; mt19937_64 output is fully
// specified by the standard, so streams are reproducible everywhere.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

class Field {
  public:
    // q must be a prime power, 2 <= q <= 65521 for primes, q <= 4096 for
    // extension fields (table-backed).
    static Field of_order(std::uint32_t q);
    static Field prime_field(std::uint32_t p);
    static Field extension_field(std::uint32_t p, std::uint32_t e);

    std::uint32_t q() const { return q_; }
    std::uint32_t characteristic() const { return p_; }
    std::uint32_t degree() const { return e_; }

    bool same(const Field& other) const { return q_ == other.q_ && p_ == other.p_; }

    fe_t add(fe_t a, fe_t b) const;
    fe_t sub(fe_t a, fe_t b) const;
    fe_t mul(fe_t a, fe_t b) const;
    fe_t div(fe_t a, fe_t b) const;  // throws on b == 0
    fe_t neg(fe_t a) const;
    fe_t inv(fe_t a) const;          // throws on a == 0
    fe_t pow(fe_t a, std::uint64_t n) const;

    fe_t sample(std::mt19937_64& rng) const;

    // Primitive polynomial as integer digits base p, low degree first,
    // including the leading monic coefficient.  Empty for prime fields.
    const std::vector<std::uint8_t>& primitive_poly() const { return prim_poly_; }

    void check(fe_t a) const;  // throws if a >= q

  private:
    Field() = default;

    std::uint32_t q_ = 0, p_ = 0, e_ = 1;
    std::vector<std::uint8_t> prim_poly_;
    // log_[a] for a != 0, exp_[i] = g^i with g = x the primitive element.
    std::shared_ptr<const std::vector<fe_t>> exp_, log_;
};

}  // namespace pir

#endif
