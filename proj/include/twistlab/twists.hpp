#pragma once

// Explicit twists: curves over the base field matched one-to-one with the
// Frobenius classes of Aut(E), plus the classical twist constructors.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "twistlab/twistcoh.hpp"

namespace twistlab::twists {

using autmap::CurveIsomorphism;
using curve::WeierstrassCurve;
using gf::FieldCtx;
using gf::FieldElem;
using twistcoh::FrobAction;
using twistcoh::FrobClass;

struct TwistEntry {
    WeierstrassCurve curve;
    /// Index into TwistReport::classes.
    std::size_t class_index = 0;
    std::size_t split_degree = 1;
    std::uint64_t points = 0;
    /// An isomorphism source -> curve over the degree-split_degree extension.
    CurveIsomorphism psi;
    /// Group index of (Fr psi)^-1 o psi.
    std::size_t cocycle = 0;
};

struct TwistReport {
    FieldCtx base;
    WeierstrassCurve source;
    FrobAction action;
    std::vector<FrobClass> classes;
    /// One entry per class, in class order.
    std::vector<TwistEntry> entries;
};

/// Calls `visit` on candidate curves over base with the given j, in the
/// deterministic order of the family grid for (p, j), then the long-form grid
/// if `fallback` and it fits the limit.  Stops when visit returns false;
/// returns false if the grids ran out.
bool scan_family(const FieldCtx& base, const FieldElem& j, const std::function<bool(const WeierstrassCurve&)>& visit,
                 std::uint64_t limit = gf::kDefaultLimit, bool fallback = true);

/// Base-isomorphism class representatives among curves with invariant j, first
/// found in grid order, stopping once `stop_at` classes are known.
std::vector<WeierstrassCurve> classify_curves(const FieldCtx& base, const FieldElem& j,
                                              std::optional<std::size_t> stop_at = std::nullopt,
                                              std::uint64_t limit = gf::kDefaultLimit);

/// Throws LimitError when a splitting field exceeds `limit`, VerificationError
/// if the classes and the curves found cannot be matched.
TwistReport enumerate_twists(const WeierstrassCurve& e, std::uint64_t limit = gf::kSplitSearchLimit);

/// y^2 = x^3 + d A2 x^2 + d^2 A4 x + d^3 A6 from the completed square of e (odd p).
WeierstrassCurve quadratic_twist(const WeierstrassCurve& e, const FieldElem& d);
/// y^2 + xy = x^3 + (a2 + d) x^2 + a6 after normalizing e (p = 2, j != 0).
WeierstrassCurve artin_schreier_twist(const WeierstrassCurve& e, const FieldElem& d);
/// y^2 = x^3 + b m for e: y^2 = x^3 + b (p >= 5).
WeierstrassCurve unit_twist(const WeierstrassCurve& e, const FieldElem& m);

struct PointCountTable {
    std::vector<std::uint64_t> counts;
    std::vector<std::pair<std::size_t, std::size_t>> separated;
    std::vector<std::pair<std::size_t, std::size_t>> unseparated;

    bool all_distinct() const { return unseparated.empty(); }
};

PointCountTable point_count_table(const TwistReport& report);

struct Verdict {
    std::string item;
    std::string expected;
    std::string actual;
    bool pass = false;
};

/// Number of base-isomorphism classes of curves with j = 0, found by direct
/// classification of the family grid.
std::size_t j0_census(std::uint64_t p, unsigned n);

/// Twist counts for j = 0 and j != 0, split-degree multiset and j = 0 census
/// over F_{p^n} (p in {2, 3}) against the known values.
std::vector<Verdict> verify_tables(std::uint64_t p, unsigned n);

/// The j = 0 curve y^2 = x^3 - x (p = 3) or y^2 + y = x^3 (p = 2), and an
/// ordinary companion y^2 = x^3 + x^2 + 1 (p = 3) or y^2 + xy = x^3 + 1 (p = 2).
WeierstrassCurve central_curve(std::uint64_t p, unsigned n);
WeierstrassCurve ordinary_curve(std::uint64_t p, unsigned n);

/// {base, source, twists: [{curve, class_rep, split_degree, points, equation}]}
nlohmann::ordered_json twist_report_json(const TwistReport& report);

} // namespace twistlab::twists
