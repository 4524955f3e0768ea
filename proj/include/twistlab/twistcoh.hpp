#pragma once

// Frobenius-twisted conjugacy classes of an automorphism group over a finite
// base field, cocycles determined by their value at Frobenius, and induced maps
// from Frobenius-stable subgroups.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "json.hpp"

#include "twistlab/autmap.hpp"

namespace twistlab::twistcoh {

using autmap::AutGroup;
using autmap::Mask;
using gf::FieldCtx;

/// tau -> Fr(tau) on element indices, Fr being the #base-power map.
class FrobAction {
public:
    FrobAction() = default;
    /// Throws DomainError if the curve is not defined over base, VerificationError
    /// if the permutation is not an automorphism of the Cayley table.
    FrobAction(AutGroup group, FieldCtx base);

    const AutGroup& group() const { return g_; }
    const FieldCtx& base() const { return base_; }
    const std::vector<std::size_t>& perm() const { return perm_; }
    std::size_t apply(std::size_t i) const { return perm_[i]; }
    std::size_t apply(std::size_t i, std::uint64_t k) const;
    /// Order of the permutation.
    std::size_t order() const { return order_; }

private:
    AutGroup g_;
    FieldCtx base_;
    std::vector<std::size_t> perm_;
    std::size_t order_ = 1;
};

FrobAction frobenius_action(const AutGroup& g, const FieldCtx& base);
/// Automorphism group of e over its own base field, with the Frobenius action.
FrobAction frobenius_action(const curve::WeierstrassCurve& e);

struct FrobClass {
    /// Smallest member index (elements are sorted canonically).
    std::size_t rep = 0;
    std::vector<std::size_t> members;
    /// Least cocycle order over the members: the splitting degree of the twist.
    std::size_t split_degree = 1;
};

/// Orbits of tau -> s^-1 tau Fr(s), s ranging over the subgroup (default: all).
std::vector<FrobClass> frobenius_classes(const FrobAction& a, std::optional<Mask> subgroup = std::nullopt);
/// Index into `classes` of the class containing element i.
std::size_t class_of(const std::vector<FrobClass>& classes, std::size_t i);

/// Value at Fr^j of the cocycle Fr -> image: image . Fr(image) . ... . Fr^(j-1)(image).
std::size_t cocycle_value(const FrobAction& a, std::size_t image, std::uint64_t j);
/// Least j >= 1 with trivial value; default bound |G| * action order.
std::optional<std::size_t> cocycle_order(const FrobAction& a, std::size_t image,
                                         std::optional<std::size_t> max = std::nullopt);

struct StableSubgroup {
    Mask mask = 0;
    std::size_t order = 0;
    bool cyclic = false;
};

bool is_stable(const FrobAction& a, Mask m);
std::vector<StableSubgroup> stable_subgroups(const FrobAction& a);
/// First stable cyclic subgroup of the given order, in canonical order.
std::optional<Mask> stable_cyclic_subgroup(const FrobAction& a, std::size_t order);

struct InducedMap {
    Mask subgroup = 0;
    std::vector<FrobClass> h_classes;
    std::vector<FrobClass> g_classes;
    /// G-class index for each H-class.
    std::vector<std::size_t> image;
    std::size_t kernel_size = 0;
    std::size_t image_size = 0;
    /// Pairs of H-class indices with equal image.
    std::vector<std::pair<std::size_t, std::size_t>> collisions;

    bool injective() const { return kernel_size == 1 && collisions.empty(); }
};

InducedMap induced_map(const FrobAction& a, Mask subgroup);

struct CapitulationReport {
    InducedMap map;
    /// Nontrivial H-classes whose image is the trivial G-class.
    std::vector<std::size_t> capitulated;
    /// Remaining nontrivial H-classes with the splitting degree of their image.
    std::vector<std::pair<std::size_t, std::size_t>> surviving;

    bool all_capitulate() const { return surviving.empty(); }
};

CapitulationReport capitulation_report(const FrobAction& a, Mask subgroup);

/// {base, group_order, action_order, classes: [{rep, size, cocycle_order}]}
nlohmann::ordered_json class_report_json(const FrobAction& a, const std::vector<FrobClass>& classes);

} // namespace twistlab::twistcoh
