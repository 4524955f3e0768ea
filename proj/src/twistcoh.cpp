#include "twistlab/twistcoh.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace twistlab::twistcoh {

FrobAction::FrobAction(AutGroup group, FieldCtx base) : g_(std::move(group)), base_(base)
{
    if (!base_.is_subfield_of(g_.field())) {
        throw DomainError(base_.name() + " is not a subfield of " + g_.field().name());
    }
    const auto n = g_.size();
    perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto idx = g_.index_of(autmap::galois_apply(g_[i], base_).params());
        if (!idx) throw VerificationError("Frobenius image of an automorphism left the group");
        perm_[i] = *idx;
    }
    std::vector<std::size_t> sorted = perm_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (sorted[i] != i) throw VerificationError("Frobenius action is not a permutation");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (perm_[g_.mul(i, j)] != g_.mul(perm_[i], perm_[j])) {
                throw VerificationError("Frobenius action is not a group automorphism");
            }
        }
    }
    std::vector<std::size_t> cur = perm_;
    while (true) {
        bool id = true;
        for (std::size_t i = 0; i < n && id; ++i) id = cur[i] == i;
        if (id) break;
        for (auto& c : cur) c = perm_[c];
        if (++order_ > n * n) throw VerificationError("Frobenius action of unbounded order");
    }
}

std::size_t FrobAction::apply(std::size_t i, std::uint64_t k) const
{
    for (std::uint64_t step = 0; step < k % order_; ++step) i = perm_[i];
    return i;
}

FrobAction frobenius_action(const AutGroup& g, const FieldCtx& base) { return FrobAction(g, base); }

FrobAction frobenius_action(const curve::WeierstrassCurve& e)
{
    return FrobAction(autmap::automorphism_group(e), e.field());
}

std::vector<FrobClass> frobenius_classes(const FrobAction& a, std::optional<Mask> subgroup)
{
    const auto& g = a.group();
    const std::size_t n = g.size();
    const Mask h = subgroup.value_or(n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1);
    const auto hs = autmap::mask_members(h);
    std::vector<bool> done(n, false);
    std::vector<FrobClass> out;
    for (std::size_t tau : hs) {
        if (done[tau]) continue;
        FrobClass cls;
        for (std::size_t s : hs) {
            const std::size_t m = g.mul(g.mul(g.inverse(s), tau), a.apply(s));
            if (!done[m]) {
                done[m] = true;
                cls.members.push_back(m);
            }
        }
        std::sort(cls.members.begin(), cls.members.end());
        cls.rep = cls.members.front();
        cls.split_degree = 0;
        for (std::size_t m : cls.members) {
            const auto ord = cocycle_order(a, m);
            if (!ord) throw VerificationError("cocycle without finite order");
            if (cls.split_degree == 0 || *ord < cls.split_degree) cls.split_degree = *ord;
        }
        out.push_back(std::move(cls));
    }
    std::sort(out.begin(), out.end(), [](const FrobClass& x, const FrobClass& y) { return x.rep < y.rep; });
    return out;
}

std::size_t class_of(const std::vector<FrobClass>& classes, std::size_t i)
{
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (std::binary_search(classes[c].members.begin(), classes[c].members.end(), i)) return c;
    }
    throw DomainError("element not covered by the class list");
}

std::size_t cocycle_value(const FrobAction& a, std::size_t image, std::uint64_t j)
{
    const auto& g = a.group();
    std::size_t v = g.identity();
    for (std::uint64_t step = 0; step < j; ++step) v = g.mul(image, a.apply(v));
    return v;
}

std::optional<std::size_t> cocycle_order(const FrobAction& a, std::size_t image, std::optional<std::size_t> max)
{
    const auto& g = a.group();
    const std::size_t bound = max.value_or(g.size() * a.order());
    std::size_t v = g.identity();
    for (std::size_t j = 1; j <= bound; ++j) {
        v = g.mul(image, a.apply(v));
        if (v == g.identity()) return j;
    }
    return std::nullopt;
}

bool is_stable(const FrobAction& a, Mask m)
{
    for (std::size_t i : autmap::mask_members(m)) {
        if (!(m >> a.apply(i) & 1)) return false;
    }
    return true;
}

std::vector<StableSubgroup> stable_subgroups(const FrobAction& a)
{
    std::vector<StableSubgroup> out;
    const auto& g = a.group();
    for (Mask m : autmap::all_subgroups(g)) {
        if (!is_stable(a, m)) continue;
        StableSubgroup s;
        s.mask = m;
        s.order = static_cast<std::size_t>(std::popcount(m));
        for (std::size_t i : autmap::mask_members(m)) s.cyclic = s.cyclic || g.order_of(i) == s.order;
        out.push_back(s);
    }
    return out;
}

std::optional<Mask> stable_cyclic_subgroup(const FrobAction& a, std::size_t order)
{
    for (const auto& s : stable_subgroups(a)) {
        if (s.order == order && s.cyclic) return s.mask;
    }
    return std::nullopt;
}

InducedMap induced_map(const FrobAction& a, Mask subgroup)
{
    const auto& g = a.group();
    if (autmap::subgroup_closure(g, subgroup) != subgroup) throw DomainError("mask is not a subgroup");
    if (!is_stable(a, subgroup)) throw DomainError("subgroup is not stable under Frobenius");
    InducedMap im;
    im.subgroup = subgroup;
    im.g_classes = frobenius_classes(a);
    im.h_classes = frobenius_classes(a, subgroup);
    const std::size_t trivial = class_of(im.g_classes, g.identity());
    for (const auto& hc : im.h_classes) {
        const std::size_t c = class_of(im.g_classes, hc.rep);
        im.image.push_back(c);
        if (c == trivial) ++im.kernel_size;
    }
    std::vector<std::size_t> distinct = im.image;
    std::sort(distinct.begin(), distinct.end());
    im.image_size = static_cast<std::size_t>(std::unique(distinct.begin(), distinct.end()) - distinct.begin());
    for (std::size_t x = 0; x < im.image.size(); ++x) {
        for (std::size_t y = x + 1; y < im.image.size(); ++y) {
            if (im.image[x] == im.image[y]) im.collisions.emplace_back(x, y);
        }
    }
    return im;
}

CapitulationReport capitulation_report(const FrobAction& a, Mask subgroup)
{
    CapitulationReport rep;
    rep.map = induced_map(a, subgroup);
    const auto& g = a.group();
    const std::size_t trivial = class_of(rep.map.g_classes, g.identity());
    for (std::size_t c = 0; c < rep.map.h_classes.size(); ++c) {
        if (rep.map.h_classes[c].rep == g.identity()) continue;
        if (rep.map.image[c] == trivial) {
            rep.capitulated.push_back(c);
        } else {
            rep.surviving.emplace_back(c, rep.map.g_classes[rep.map.image[c]].split_degree);
        }
    }
    return rep;
}

nlohmann::ordered_json class_report_json(const FrobAction& a, const std::vector<FrobClass>& classes)
{
    nlohmann::ordered_json j;
    j["base"] = a.base().name();
    j["group_order"] = a.group().size();
    j["action_order"] = a.order();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& c : classes) {
        nlohmann::ordered_json item;
        item["rep"] = autmap::to_string(a.group()[c.rep]);
        item["size"] = c.members.size();
        item["cocycle_order"] = c.split_degree;
        arr.push_back(std::move(item));
    }
    j["classes"] = std::move(arr);
    return j;
}

} // namespace twistlab::twistcoh
