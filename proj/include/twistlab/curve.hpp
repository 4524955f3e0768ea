#pragma once

// Long Weierstrass curves y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twistlab/gf.hpp"

namespace twistlab::curve {

using gf::FieldCtx;
using gf::FieldElem;

class WeierstrassCurve {
public:
    WeierstrassCurve() = default;
    /// Coefficients in the order a1, a2, a3, a4, a6; all must live in `field`.
    WeierstrassCurve(FieldCtx field, std::array<FieldElem, 5> a);

    static WeierstrassCurve from_ints(FieldCtx field, std::array<std::int64_t, 5> a);
    /// y^2 = x^3 + a4 x + a6
    static WeierstrassCurve short_form(FieldCtx field, FieldElem a4, FieldElem a6);

    const FieldCtx& field() const { return field_; }
    const std::array<FieldElem, 5>& coeffs() const { return a_; }
    const FieldElem& a1() const { return a_[0]; }
    const FieldElem& a2() const { return a_[1]; }
    const FieldElem& a3() const { return a_[2]; }
    const FieldElem& a4() const { return a_[3]; }
    const FieldElem& a6() const { return a_[4]; }

    bool operator==(const WeierstrassCurve& o) const { return field_ == o.field_ && a_ == o.a_; }
    /// Lexicographic on (a1, a2, a3, a4, a6) in canonical element order.
    std::strong_ordering operator<=>(const WeierstrassCurve& o) const { return a_ <=> o.a_; }

private:
    FieldCtx field_;
    std::array<FieldElem, 5> a_;
};

struct Invariants {
    FieldElem b2, b4, b6, b8, c4, c6, discriminant;
};

Invariants invariants(const WeierstrassCurve& e);
FieldElem discriminant(const WeierstrassCurve& e);
bool is_elliptic(const WeierstrassCurve& e);
/// c4^3 / discriminant; throws DomainError on a singular curve.
FieldElem j_invariant(const WeierstrassCurve& e);

struct CurvePoint {
    bool infinity = true;
    FieldElem x, y;

    static CurvePoint at_infinity() { return {}; }
    static CurvePoint affine(FieldElem x, FieldElem y) { return {false, x, y}; }

    bool operator==(const CurvePoint& o) const
    {
        return infinity == o.infinity && (infinity || (x == o.x && y == o.y));
    }
    std::strong_ordering operator<=>(const CurvePoint& o) const
    {
        if (infinity || o.infinity) return o.infinity <=> infinity;
        if (auto c = x <=> o.x; c != 0) return c;
        return y <=> o.y;
    }
};

bool is_on_curve(const WeierstrassCurve& e, const CurvePoint& pt);

/// All rational points, infinity first, then affine points in canonical order.
std::vector<CurvePoint> enumerate_points(const WeierstrassCurve& e, std::uint64_t limit = gf::kDefaultLimit);
std::uint64_t point_count(const WeierstrassCurve& e, std::uint64_t limit = gf::kDefaultLimit);

WeierstrassCurve base_change(const WeierstrassCurve& e, const FieldCtx& super);

/// Trace q + 1 - #E(F_q) divisible by p.
bool is_supersingular(const WeierstrassCurve& e, std::uint64_t limit = gf::kDefaultLimit);

/// `[a1,a2,a3,a4,a6]`
std::string to_string(const WeierstrassCurve& e);
WeierstrassCurve parse_curve(const FieldCtx& field, std::string_view text);
/// Human-readable equation, e.g. `y^2 + y = x^3 + x`.
std::string equation(const WeierstrassCurve& e);

} // namespace twistlab::curve
