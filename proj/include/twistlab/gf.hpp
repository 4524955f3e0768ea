#pragma once

// Exact arithmetic in GF(p^n) for small p and moderate n.
//
// Elements are stored as packed coefficient vectors in the polynomial basis
// 1, g, g^2, ... of the field generator g.  Each coefficient occupies a fixed
// number of bits, lowest power in the lowest bits, so comparing two packed
// words as integers gives the canonical order (coefficient vector read as a
// base-p number).  Field contexts are interned: creating GF(p^n) twice hands
// back the same context, so contexts compare by identity.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twistlab/error.hpp"

namespace twistlab::gf {

inline constexpr std::uint64_t kDefaultLimit = std::uint64_t{1} << 22;
inline constexpr std::uint64_t kSplitSearchLimit = std::uint64_t{1} << 24;

namespace detail {
struct FieldData;
}

class FieldElem;

/// Handle to an interned finite field GF(p^n).  Cheap to copy.
class FieldCtx {
public:
    FieldCtx() = default;

    /// Returns GF(p^n) whose modulus is the smallest monic irreducible
    /// polynomial of degree n (coefficients c0..c_{n-1} read as a base-p number).
    static FieldCtx create(std::uint64_t p, unsigned n, std::uint64_t limit = kDefaultLimit);

    bool valid() const { return d_ != nullptr; }
    std::uint64_t p() const;
    unsigned n() const;
    std::uint64_t q() const;
    /// Monic modulus, ascending coefficients, length n + 1.
    const std::vector<std::uint32_t>& modulus() const;
    /// "p^n"
    std::string name() const;

    FieldElem zero() const;
    FieldElem one() const;
    FieldElem from_int(std::int64_t v) const;
    FieldElem generator() const;
    FieldElem from_coeffs(std::span<const std::int64_t> coeffs) const;
    /// Element with the given canonical index (0 <= index < q).
    FieldElem from_index(std::uint64_t index) const;

    bool is_subfield_of(const FieldCtx& super) const;

    bool operator==(const FieldCtx& other) const { return d_ == other.d_; }

    const detail::FieldData* data() const { return d_; }
    explicit FieldCtx(const detail::FieldData* d) : d_(d) {}

private:
    const detail::FieldData* d_ = nullptr;
};

class FieldElem {
public:
    FieldElem() = default;
    FieldElem(const detail::FieldData* f, std::uint64_t packed) : f_(f), v_(packed) {}

    FieldCtx ctx() const { return FieldCtx(f_); }
    std::uint64_t packed() const { return v_; }
    /// Canonical index: coefficient vector read as a base-p integer.
    std::uint64_t index() const;
    std::vector<std::uint32_t> coeffs() const;

    bool is_zero() const { return v_ == 0; }
    bool is_one() const;

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator-() const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator/(const FieldElem& o) const;
    FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
    FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
    FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }

    FieldElem inv() const;
    /// Square-and-multiply; negative exponents invert first.  0^0 = 1.
    FieldElem pow(std::int64_t e) const;
    FieldElem square() const { return *this * *this; }

    bool operator==(const FieldElem& o) const { return f_ == o.f_ && v_ == o.v_; }
    /// Canonical order within a field; elements of different fields order by (p, n).
    std::strong_ordering operator<=>(const FieldElem& o) const;

private:
    const detail::FieldData* f_ = nullptr;
    std::uint64_t v_ = 0;
};

/// e^(p^k).
FieldElem frobenius(const FieldElem& e, std::uint64_t k);

/// Absolute trace to the prime field, returned as an element of e's field.
FieldElem trace(const FieldElem& e);

bool is_square(const FieldElem& e);
/// A square root (the canonically smaller of the two), if one exists.
std::optional<FieldElem> sqrt(const FieldElem& e);

/// All w with w^p - w = c, sorted.  Only for characteristic 2 and 3.
std::vector<FieldElem> artin_schreier_roots(const FieldElem& c);

/// All roots in the coefficients' field of sum_i coeffs[i] x^i (ascending), sorted.
std::vector<FieldElem> poly_roots(std::span<const FieldElem> coeffs);

/// All x with x^m = c, sorted.
std::vector<FieldElem> nth_roots(const FieldElem& c, std::uint64_t m);

/// All x with sum_i coeffs[i] * x^(p^i) + constant = 0, sorted.  The left side
/// is affine over F_p, so this is solved by linear algebra.
std::vector<FieldElem> additive_roots(std::span<const FieldElem> coeffs, const FieldElem& constant);

/// A generator of the multiplicative group (smallest in canonical order).
FieldElem primitive_element(const FieldCtx& ctx);

/// Image of e in super.  Embeddings are compatible along towers.
FieldElem subfield_embed(const FieldElem& e, const FieldCtx& super);
/// Preimage of e under subfield_embed(., e.ctx()) from sub, if e lies in the image.
std::optional<FieldElem> subfield_restrict(const FieldElem& e, const FieldCtx& sub);

std::vector<FieldElem> enumerate_field(const FieldCtx& ctx, std::uint64_t limit = kDefaultLimit);

/// `p^n:c0,c1,...` for n > 1, the residue for prime fields.
std::string to_string(const FieldElem& e);
/// Accepts `p^n:c0,...` (must match ctx) or a possibly negative integer.
FieldElem parse_elem(const FieldCtx& ctx, std::string_view text);

bool is_prime(std::uint64_t p);

/// Irreducibility of a monic polynomial over F_p (ascending coefficients).
bool is_irreducible_mod_p(std::span<const std::uint32_t> poly, std::uint64_t p);

} // namespace twistlab::gf
