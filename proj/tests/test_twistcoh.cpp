#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "twistlab/twistcoh.hpp"

using namespace twistlab;
using namespace twistlab::gf;
using namespace twistlab::curve;
using namespace twistlab::autmap;
using namespace twistlab::twistcoh;

namespace {

WeierstrassCurve mk(std::uint64_t p, unsigned n, std::array<std::int64_t, 5> a)
{
    return WeierstrassCurve::from_ints(FieldCtx::create(p, n), a);
}

// y^2 = x^3 - x and y^2 + y = x^3 over F_{p^n}
FrobAction central(std::uint64_t p, unsigned n)
{
    return frobenius_action(p == 3 ? mk(3, n, {0, 0, 0, -1, 0}) : mk(2, n, {0, 0, 1, 0, 0}));
}

// Phi_{u,r}: (u, r, 0, 0) in the char-3 group
std::size_t phi3(const AutGroup& g, const FieldElem& u, const FieldElem& r)
{
    const auto& f = g.field();
    auto idx = g.index_of(IsoParams{u, r, f.zero(), f.zero()});
    REQUIRE(idx);
    return *idx;
}

// Phi_{u,r,t}: (u, r, r^2, t) in the char-2 group
std::size_t phi2(const AutGroup& g, const FieldElem& u, const FieldElem& r, const FieldElem& t)
{
    auto idx = g.index_of(IsoParams{u, r, r * r, t});
    REQUIRE(idx);
    return *idx;
}

std::multiset<std::size_t> sizes(const std::vector<FrobClass>& cls)
{
    std::multiset<std::size_t> out;
    for (const auto& c : cls) out.insert(c.members.size());
    return out;
}

std::multiset<std::size_t> split_degrees(const std::vector<FrobClass>& cls)
{
    std::multiset<std::size_t> out;
    for (const auto& c : cls) out.insert(c.split_degree);
    return out;
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

const FrobClass& class_with(const std::vector<FrobClass>& cls, std::size_t i) { return cls[class_of(cls, i)]; }

} // namespace

TEST_CASE("frobenius action")
{
    for (auto [p, n, expected] : std::vector<std::tuple<std::uint64_t, unsigned, std::size_t>>{
             {2, 1, 2}, {2, 2, 1}, {2, 3, 2}, {2, 4, 1}, {3, 1, 2}, {3, 2, 1}, {3, 3, 2}, {3, 4, 1}}) {
        const auto a = central(p, n);
        CHECK(a.order() == expected);
        CHECK((a.group().field().n() / n) % a.order() == 0);
        CHECK(a.apply(a.group().identity()) == a.group().identity());
    }
    const auto g = automorphism_group(mk(3, 1, {0, 0, 0, -1, 0}));
    CHECK_THROWS_AS(frobenius_action(g, FieldCtx::create(3, 4)), DomainError);
    CHECK_THROWS_AS(frobenius_action(g, FieldCtx::create(2, 1)), DomainError);
}

TEST_CASE("twisted classes over F_3 and F_9")
{
    const auto a3 = central(3, 1);
    const auto& g = a3.group();
    const auto& f = g.field();
    const auto one = f.one(), zero = f.zero();
    const auto i = *sqrt(f.from_int(-1));
    const auto c3 = frobenius_classes(a3);
    CHECK(c3.size() == 4);
    CHECK(sizes(c3) == std::multiset<std::size_t>{2, 2, 2, 6});
    CHECK(class_with(c3, phi3(g, one, zero)).members == sorted({phi3(g, one, zero), phi3(g, -one, zero)}));
    CHECK(class_with(c3, phi3(g, one, one)).members == sorted({phi3(g, one, one), phi3(g, -one, -one)}));
    CHECK(class_with(c3, phi3(g, one, -one)).members == sorted({phi3(g, one, -one), phi3(g, -one, one)}));
    std::vector<std::size_t> ci;
    for (const auto& u : {i, -i}) {
        for (const auto& r : {zero, one, -one}) ci.push_back(phi3(g, u, r));
    }
    CHECK(class_with(c3, phi3(g, i, zero)).members == sorted(ci));
    CHECK(split_degrees(c3) == std::multiset<std::size_t>{1, 2, 3, 3});

    const auto a9 = central(3, 2);
    const auto& g9 = a9.group();
    const auto c9 = frobenius_classes(a9);
    CHECK(c9.size() == 6);
    CHECK(sizes(c9) == std::multiset<std::size_t>{1, 1, 2, 2, 3, 3});
    const auto f9 = g9.field();
    const auto i9 = *sqrt(f9.from_int(-1));
    CHECK(class_with(c9, phi3(g9, f9.one(), f9.one())).members
          == sorted({phi3(g9, f9.one(), f9.one()), phi3(g9, f9.one(), -f9.one())}));
    CHECK(class_with(c9, phi3(g9, -f9.one(), f9.one())).members
          == sorted({phi3(g9, -f9.one(), f9.one()), phi3(g9, -f9.one(), -f9.one())}));
    CHECK(class_with(c9, phi3(g9, i9, f9.zero())).members.size() == 3);
    CHECK(split_degrees(c9) == std::multiset<std::size_t>{1, 2, 3, 6, 4, 4});
    CHECK(cocycle_order(a9, phi3(g9, -f9.one(), f9.zero())) == 2u);
    CHECK(cocycle_order(a9, phi3(g9, f9.one(), f9.one())) == 3u);
    CHECK(cocycle_order(a9, phi3(g9, i9, f9.zero())) == 4u);
}

TEST_CASE("twisted classes over F_2 and F_4")
{
    const auto a2 = central(2, 1);
    const auto& g = a2.group();
    const auto& f = g.field();
    const auto one = f.one(), zero = f.zero(), w = f.generator(), w2 = w * w;
    const auto c2 = frobenius_classes(a2);
    CHECK(c2.size() == 3);
    CHECK(sizes(c2) == std::multiset<std::size_t>{12, 6, 6});
    const std::vector<std::size_t> listing = {
        phi2(g, one, zero, zero), phi2(g, one, zero, one),  phi2(g, one, one, w),   phi2(g, one, one, w2),
        phi2(g, w2, zero, zero),  phi2(g, w2, w2, w),       phi2(g, w2, w2, w2),    phi2(g, w2, zero, one),
        phi2(g, w, zero, zero),   phi2(g, w, w, w2),        phi2(g, w, zero, one),  phi2(g, w, w, w),
    };
    CHECK(std::set<std::size_t>(listing.begin(), listing.end()).size() == 12);
    CHECK(class_with(c2, g.identity()).members == sorted(listing));
    CHECK(split_degrees(c2) == std::multiset<std::size_t>{1, 8, 8});
    CHECK(class_with(c2, phi2(g, one, w, w)).members
          == sorted({phi2(g, one, w, w), phi2(g, one, w2, w2), phi2(g, w, one, w2), phi2(g, w, w2, w),
                     phi2(g, w2, one, w), phi2(g, w2, w, w2)}));
    CHECK(class_with(c2, phi2(g, one, w, w2)).members
          == sorted({phi2(g, one, w, w2), phi2(g, one, w2, w), phi2(g, w, one, w), phi2(g, w, w2, w2),
                     phi2(g, w2, one, w2), phi2(g, w2, w, w)}));
    for (const auto& c : c2) {
        if (c.rep == g.identity()) continue;
        for (std::size_t m : c.members) CHECK(cocycle_order(a2, m) == 8u);
    }

    const auto phi = phi2(g, one, w, w);
    for (std::uint64_t j = 1; j <= 7; ++j) CHECK(cocycle_value(a2, phi, j) != g.identity());
    CHECK(cocycle_value(a2, phi, 8) == g.identity());

    const auto a4 = central(2, 2);
    const auto& g4 = a4.group();
    const auto c4 = frobenius_classes(a4);
    CHECK(c4.size() == 7);
    CHECK(sizes(c4) == std::multiset<std::size_t>{1, 1, 4, 4, 4, 4, 6});
    CHECK(split_degrees(c4) == std::multiset<std::size_t>{1, 2, 6, 6, 3, 3, 4});
    const auto& f4 = g4.field();
    const auto o4 = f4.one(), z4 = f4.zero(), w4 = f4.generator(), w24 = w4 * w4;
    CHECK(cocycle_order(a4, phi2(g4, o4, z4, o4)) == 2u);
    CHECK(class_with(c4, phi2(g4, w24, z4, o4)).members
          == sorted({phi2(g4, w24, z4, o4), phi2(g4, w24, o4, w4), phi2(g4, w24, w24, w4), phi2(g4, w24, w4, w4)}));
    CHECK(class_with(c4, phi2(g4, w4, z4, z4)).members
          == sorted({phi2(g4, w4, z4, z4), phi2(g4, w4, o4, w4), phi2(g4, w4, w24, w4), phi2(g4, w4, w4, w4)}));
    CHECK(class_with(c4, phi2(g4, o4, o4, w4)).members.size() == 6);
}

TEST_CASE("class partition and trivial-action properties")
{
    for (std::uint64_t p : {2u, 3u}) {
        for (unsigned n = 1; n <= 4; ++n) {
            const auto a = central(p, n);
            const auto& g = a.group();
            const auto cls = frobenius_classes(a);
            std::vector<int> seen(g.size(), 0);
            for (const auto& c : cls) {
                CHECK(c.rep == c.members.front());
                for (std::size_t m : c.members) ++seen[m];
                // each class is the orbit of any of its members
                for (std::size_t s = 0; s < g.size(); ++s) {
                    const auto x = g.mul(g.mul(g.inverse(s), c.members.back()), a.apply(s));
                    CHECK(std::binary_search(c.members.begin(), c.members.end(), x));
                }
                for (std::size_t m : c.members) {
                    const auto ord = cocycle_order(a, m);
                    REQUIRE(ord);
                    CHECK(*ord >= c.split_degree);
                    CHECK(*ord <= g.size() * a.order());
                }
            }
            CHECK(std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; }));
            CHECK(std::is_sorted(cls.begin(), cls.end(), [](auto& x, auto& y) { return x.rep < y.rep; }));
            if (a.order() == 1) {
                auto conj = group_structure(g).conjugacy_classes;
                std::vector<std::vector<std::size_t>> members;
                for (const auto& c : cls) members.push_back(c.members);
                std::sort(conj.begin(), conj.end());
                std::sort(members.begin(), members.end());
                CHECK(conj == members);
                for (const auto& c : cls) CHECK(c.split_degree == g.order_of(c.rep));
            }
        }
    }
}

TEST_CASE("cocycle order is not a class invariant")
{
    // the identity and -1 share a class over F_3 but their cocycles split over different degrees
    const auto a = central(3, 1);
    const auto& g = a.group();
    const auto cls = frobenius_classes(a);
    CHECK(class_of(cls, g.identity()) == class_of(cls, g.minus_one()));
    CHECK(cocycle_order(a, g.identity()) == 1u);
    CHECK(cocycle_order(a, g.minus_one()) == 2u);
}

TEST_CASE("twist counts in characteristic 2 and 3")
{
    for (unsigned n = 1; n <= 4; ++n) {
        CHECK(frobenius_classes(central(3, n)).size() == (n % 2 ? 4u : 6u));
        CHECK(frobenius_classes(central(2, n)).size() == (n % 2 ? 3u : 7u));
        CHECK(frobenius_classes(frobenius_action(mk(3, n, {0, 1, 0, 0, 1}))).size() == 2);
        CHECK(frobenius_classes(frobenius_action(mk(2, n, {1, 0, 0, 0, 1}))).size() == 2);
    }
}

TEST_CASE("cocycle identity")
{
    std::mt19937_64 rng(5);
    for (std::uint64_t p : {2u, 3u}) {
        for (unsigned n = 1; n <= 3; ++n) {
            const auto a = central(p, n);
            const auto& g = a.group();
            std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
            for (int trial = 0; trial < 8; ++trial) {
                const auto image = pick(rng);
                CHECK(cocycle_value(a, image, 0) == g.identity());
                CHECK(cocycle_value(a, image, 1) == image);
                for (std::uint64_t j = 0; j <= 12; ++j) {
                    for (std::uint64_t k = 0; k <= 12; ++k) {
                        const auto lhs = cocycle_value(a, image, j + k);
                        const auto rhs = g.mul(cocycle_value(a, image, j), a.apply(cocycle_value(a, image, k), j));
                        if (lhs != rhs) FAIL_CHECK("cocycle identity fails for j=" << j << " k=" << k);
                    }
                }
            }
            CHECK(cocycle_order(a, g.identity()) == 1u);
            for (std::uint64_t j = 0; j < 5; ++j) CHECK(cocycle_value(a, g.identity(), j) == g.identity());
        }
    }
}

TEST_CASE("stable subgroups")
{
    const auto a3 = central(3, 1);
    const auto& g3 = a3.group();
    const auto i = *sqrt(g3.field().from_int(-1));
    const auto stable3 = stable_subgroups(a3);
    const Mask h4 = subgroup_closure(g3, Mask{1} << phi3(g3, i, g3.field().zero()));
    CHECK(std::popcount(h4) == 4);
    CHECK(std::any_of(stable3.begin(), stable3.end(), [&](auto& s) { return s.mask == h4 && s.cyclic; }));
    CHECK(stable3.front().order == 1);
    CHECK(stable3.back().order == 12);

    const auto a2 = central(2, 1);
    const auto& g2 = a2.group();
    const auto& f = g2.field();
    const Mask h6 = subgroup_closure(g2, Mask{1} << phi2(g2, f.generator() * f.generator(), f.zero(), f.one()));
    CHECK(std::popcount(h6) == 6);
    CHECK(is_stable(a2, h6));
    const auto stable2 = stable_subgroups(a2);
    CHECK(stable2.front().order == 1);
    CHECK(stable2.back().order == 24);
    CHECK(stable_cyclic_subgroup(a2, 3));
}

TEST_CASE("induced maps")
{
    const auto a9 = central(3, 2);
    const auto c3 = induced_map(a9, *stable_cyclic_subgroup(a9, 3));
    CHECK(c3.h_classes.size() == 3);
    CHECK(c3.kernel_size == 1);
    CHECK(c3.collisions.size() == 1);
    CHECK_FALSE(c3.injective());
    const auto c6 = induced_map(a9, *stable_cyclic_subgroup(a9, 6));
    CHECK(c6.kernel_size == 1);
    CHECK(c6.collisions.size() == 2);
    const auto triv = induced_map(a9, Mask{1} << a9.group().identity());
    CHECK(triv.kernel_size == 1);
    CHECK(triv.collisions.empty());
    CHECK(triv.injective());

    for (auto [q, kernel] : std::vector<std::pair<std::uint64_t, std::size_t>>{{5, 1}, {7, 2}, {11, 2}, {13, 1}}) {
        const auto a = frobenius_action(mk(q, 1, {0, 0, 0, -1, 0}));
        CHECK(a.group().size() == 4);
        const Mask h = subgroup_closure(a.group(), Mask{1} << a.group().minus_one());
        const auto im = induced_map(a, h);
        CHECK(im.kernel_size == kernel);
        const auto rep = capitulation_report(a, h);
        CHECK(rep.capitulated.size() == kernel - 1);
        CHECK(rep.all_capitulate() == (kernel == 2));
    }

    const auto a2 = central(2, 1);
    std::size_t order3 = 0;
    for (const auto& s : stable_subgroups(a2)) {
        if (s.order != 3) continue;
        ++order3;
        const auto rep = capitulation_report(a2, s.mask);
        CHECK(rep.all_capitulate());
        CHECK(rep.map.image_size == 1);
        for (std::size_t m : mask_members(s.mask)) {
            CHECK(class_of(rep.map.g_classes, m) == class_of(rep.map.g_classes, a2.group().identity()));
        }
    }
    CHECK(order3 >= 1);

    const auto& g2 = a2.group();
    Mask unstable = 0;
    for (Mask m : all_subgroups(g2)) {
        if (!is_stable(a2, m)) {
            unstable = m;
            break;
        }
    }
    REQUIRE(unstable);
    CHECK_THROWS_AS(induced_map(a2, unstable), DomainError);
    CHECK_THROWS_AS(induced_map(a2, 0b110), DomainError);
}

TEST_CASE("cocycles named by their value at Frobenius")
{
    for (unsigned n : {1u, 2u}) {
        const auto a = central(3, n);
        const auto& g = a.group();
        const auto i = *sqrt(g.field().from_int(-1));
        const auto cls = frobenius_classes(a);
        CHECK(class_of(cls, phi3(g, i, g.field().zero())) != class_of(cls, g.identity()));
    }
    for (unsigned n : {1u, 2u}) {
        const auto a = central(2, n);
        const auto& g = a.group();
        const auto& f = g.field();
        const auto cls = frobenius_classes(a);
        const auto phi = phi2(g, f.generator() * f.generator(), f.zero(), f.one());
        CHECK((class_of(cls, phi) == class_of(cls, g.identity())) == (n == 1));
    }
}

TEST_CASE("class report json")
{
    const auto a = central(3, 1);
    const auto j = class_report_json(a, frobenius_classes(a));
    CHECK(j["base"] == "3^1");
    CHECK(j["group_order"] == 12);
    CHECK(j["action_order"] == 2);
    CHECK(j["classes"].size() == 4);
    CHECK(j["classes"][0]["rep"] == "(3^2:1,0,3^2:0,0,3^2:0,0,3^2:0,0)@3^2");
    CHECK(j["classes"][0]["size"] == 2);
    CHECK(j["classes"][0]["cocycle_order"] == 1);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"base", "group_order", "action_order", "classes"});
}
