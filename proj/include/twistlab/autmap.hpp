#pragma once

// Weierstrass changes of variables (u, r, s, t) and automorphism groups.
//
// An isomorphism from `source` to `target` sends a point (x, y) of the source to
// (u^2 x + r, u^3 y + u^2 s x + t) on the target.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twistlab/curve.hpp"

namespace twistlab::autmap {

using curve::CurvePoint;
using curve::WeierstrassCurve;
using gf::FieldCtx;
using gf::FieldElem;

struct IsoParams {
    FieldElem u, r, s, t;

    bool operator==(const IsoParams&) const = default;
    std::strong_ordering operator<=>(const IsoParams& o) const
    {
        if (auto c = u <=> o.u; c != 0) return c;
        if (auto c = r <=> o.r; c != 0) return c;
        if (auto c = s <=> o.s; c != 0) return c;
        return t <=> o.t;
    }
};

/// Coefficients of the curve whose points are carried onto `target` by params,
/// i.e. the source of the isomorphism (params) -> target.
WeierstrassCurve pullback(const WeierstrassCurve& target, const IsoParams& params);
/// Target of the isomorphism with the given source and params.
WeierstrassCurve transform_coeffs(const WeierstrassCurve& source, const IsoParams& params);

class CurveIsomorphism {
public:
    CurveIsomorphism() = default;
    /// Curves are base-changed into the parameters' field.  Throws DomainError
    /// unless u != 0 and the parameters really carry source onto target.
    CurveIsomorphism(const WeierstrassCurve& source, const WeierstrassCurve& target, IsoParams params);

    /// The isomorphism out of `source` with the given parameters; the target is computed.
    static CurveIsomorphism from_params(const WeierstrassCurve& source, IsoParams params);
    static CurveIsomorphism identity(const WeierstrassCurve& e);

    const FieldCtx& field() const { return field_; }
    const WeierstrassCurve& source() const { return source_; }
    const WeierstrassCurve& target() const { return target_; }
    const IsoParams& params() const { return p_; }
    const FieldElem& u() const { return p_.u; }
    const FieldElem& r() const { return p_.r; }
    const FieldElem& s() const { return p_.s; }
    const FieldElem& t() const { return p_.t; }

    bool is_identity() const;
    CurvePoint apply(const CurvePoint& pt) const;

    bool operator==(const CurveIsomorphism& o) const
    {
        return source_ == o.source_ && target_ == o.target_ && p_ == o.p_;
    }
    std::strong_ordering operator<=>(const CurveIsomorphism& o) const { return p_ <=> o.p_; }

private:
    struct Unchecked {};
    CurveIsomorphism(Unchecked, WeierstrassCurve source, WeierstrassCurve target, IsoParams params);

    FieldCtx field_;
    WeierstrassCurve source_, target_;
    IsoParams p_;

    friend CurveIsomorphism compose(const CurveIsomorphism&, const CurveIsomorphism&);
    friend CurveIsomorphism invert(const CurveIsomorphism&);
    friend CurveIsomorphism embed(const CurveIsomorphism&, const FieldCtx&);
    friend CurveIsomorphism galois_apply(const CurveIsomorphism&, const FieldCtx&, std::uint64_t);
};

IsoParams compose_params(const IsoParams& f, const IsoParams& g);
IsoParams invert_params(const IsoParams& f);

/// f o g: apply g first.  Fields are unified by embedding into the larger one.
CurveIsomorphism compose(const CurveIsomorphism& f, const CurveIsomorphism& g);
CurveIsomorphism invert(const CurveIsomorphism& f);
/// Same map over an extension of its field.
CurveIsomorphism embed(const CurveIsomorphism& f, const FieldCtx& super);
/// Raise every parameter to the (#base)^k-th power.  Source and target must be
/// defined over `base`.
CurveIsomorphism galois_apply(const CurveIsomorphism& f, const FieldCtx& base, std::uint64_t k = 1);

/// The curve restricted to `sub` if all coefficients lie there.
std::optional<WeierstrassCurve> descend(const WeierstrassCurve& e, const FieldCtx& sub);

/// All isomorphisms e1 -> e2 defined over `field`, sorted.
std::vector<CurveIsomorphism> find_isomorphisms(const WeierstrassCurve& e1, const WeierstrassCurve& e2,
                                                const FieldCtx& field);
/// Reference search over every (u, r, s, t); only for tiny fields.
std::vector<CurveIsomorphism> find_isomorphisms_exhaustive(const WeierstrassCurve& e1, const WeierstrassCurve& e2,
                                                           const FieldCtx& field);
/// Smallest d <= max_degree with an isomorphism over the degree-d extension of the common base.
std::optional<unsigned> minimal_isomorphism_degree(const WeierstrassCurve& e1, const WeierstrassCurve& e2,
                                                   unsigned max_degree,
                                                   std::uint64_t limit = gf::kSplitSearchLimit);

/// Largest possible automorphism group order for curves with this j.
std::size_t max_aut_order(std::uint64_t p, const FieldElem& j);

class AutGroup {
public:
    AutGroup() = default;
    /// Elements are sorted and the Cayley table is computed from compose.
    AutGroup(WeierstrassCurve curve, FieldCtx field, std::vector<CurveIsomorphism> elements);
    /// Takes the table as given (no checks); see verify_group.
    static AutGroup from_table(WeierstrassCurve curve, FieldCtx field, std::vector<CurveIsomorphism> elements,
                               std::vector<std::vector<std::size_t>> cayley);

    /// The curve over its own base field.
    const WeierstrassCurve& curve() const { return curve_; }
    /// Field over which every automorphism is defined.
    const FieldCtx& field() const { return field_; }
    const std::vector<CurveIsomorphism>& elements() const { return elems_; }
    const CurveIsomorphism& operator[](std::size_t i) const { return elems_[i]; }
    std::size_t size() const { return elems_.size(); }
    const std::vector<std::vector<std::size_t>>& cayley() const { return cayley_; }

    /// Index of elements[i] o elements[j].
    std::size_t mul(std::size_t i, std::size_t j) const { return cayley_[i][j]; }
    std::size_t identity() const { return identity_; }
    std::size_t inverse(std::size_t i) const;
    std::size_t order_of(std::size_t i) const;
    std::optional<std::size_t> index_of(const IsoParams& params) const;
    /// Accepts isomorphisms over a subfield or superfield of field().
    std::optional<std::size_t> index_of(const CurveIsomorphism& f) const;
    /// (x, y) -> (x, -y - a1 x - a3).
    std::size_t minus_one() const;

private:
    WeierstrassCurve curve_;
    FieldCtx field_;
    std::vector<CurveIsomorphism> elems_;
    std::vector<std::vector<std::size_t>> cayley_;
    std::size_t identity_ = 0;
};

/// Full automorphism group over the smallest extension in the search order that
/// reaches the maximal order for (p, j).
AutGroup automorphism_group(const WeierstrassCurve& e, std::uint64_t limit = gf::kSplitSearchLimit);

/// Checks the Cayley table against compose and the group axioms.  Returns a
/// description of the first problem found.
std::optional<std::string> verify_group(const AutGroup& g);

using Mask = std::uint32_t;

/// Every subgroup as a bitmask over element indices (|G| <= 32), sorted by (size, mask).
std::vector<Mask> all_subgroups(const AutGroup& g);
std::vector<std::size_t> mask_members(Mask m);
/// Smallest subgroup containing the elements of m.
Mask subgroup_closure(const AutGroup& g, Mask m);
bool is_normal(const AutGroup& g, Mask m);

struct GroupStructure {
    std::size_t order = 0;
    bool abelian = false;
    bool cyclic = false;
    std::vector<std::size_t> element_orders;
    std::vector<std::vector<std::size_t>> conjugacy_classes;
    std::vector<std::size_t> center;
    std::vector<Mask> subgroups;
    std::map<std::size_t, std::size_t> subgroup_counts;
    std::map<std::size_t, std::size_t> normal_subgroup_counts;
    std::size_t minus_one = 0;

    /// The subgroup of this order if there is exactly one.
    std::optional<Mask> unique_subgroup(std::size_t order) const;
};

GroupStructure group_structure(const AutGroup& g);

/// `(u,r,s,t)@p^m`
std::string to_string(const CurveIsomorphism& f);
std::string to_string(const IsoParams& p);

} // namespace twistlab::autmap
