// Acceptance gate: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistlab/twists.hpp"

using namespace twistlab;
using namespace twistlab::gf;
using namespace twistlab::curve;
using namespace twistlab::autmap;
using namespace twistlab::twistcoh;
using namespace twistlab::twists;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;

    void expect(bool ok, const std::string& what)
    {
        if (ok) return;
        if (pass) detail = what;
        else detail += "; " + what;
        pass = false;
    }
};

std::string set_text(const std::multiset<std::size_t>& s)
{
    std::string out = "{";
    for (auto it = s.begin(); it != s.end(); ++it) out += (it == s.begin() ? "" : ",") + std::to_string(*it);
    return out + "}";
}

WeierstrassCurve mk(std::uint64_t p, unsigned n, std::array<std::int64_t, 5> a)
{
    return WeierstrassCurve::from_ints(FieldCtx::create(p, n), a);
}

bool iso_over_base(const WeierstrassCurve& a, const WeierstrassCurve& b)
{
    return !find_isomorphisms(a, b, a.field()).empty();
}

std::size_t phi3(const AutGroup& g, const FieldElem& u, const FieldElem& r)
{
    const auto z = g.field().zero();
    auto idx = g.index_of(IsoParams{u, r, z, z});
    if (!idx) throw VerificationError("missing automorphism " + to_string(IsoParams{u, r, z, z}));
    return *idx;
}

std::size_t phi2(const AutGroup& g, const FieldElem& u, const FieldElem& r, const FieldElem& t)
{
    auto idx = g.index_of(IsoParams{u, r, r * r, t});
    if (!idx) throw VerificationError("missing automorphism");
    return *idx;
}

std::set<std::size_t> members_of(const std::vector<FrobClass>& cls, std::size_t i)
{
    const auto& m = cls[class_of(cls, i)].members;
    return {m.begin(), m.end()};
}

// Class member sets as parameter strings.
std::set<std::set<std::string>> class_strings(const FrobAction& a, const std::vector<FrobClass>& cls)
{
    std::set<std::set<std::string>> out;
    for (const auto& c : cls) {
        std::set<std::string> s;
        for (auto m : c.members) s.insert(to_string(a.group()[m].params()));
        out.insert(s);
    }
    return out;
}

std::set<std::set<std::string>> golden_classes(const std::string& file)
{
    std::ifstream in(std::string(TWISTLAB_GOLDEN) + "/" + file);
    if (!in) throw Error("cannot open golden file " + file);
    auto j = nlohmann::json::parse(in);
    std::set<std::set<std::string>> out;
    for (const auto& c : j["classes"]) {
        std::set<std::string> s;
        for (const auto& m : c["members"]) s.insert(m.get<std::string>());
        out.insert(s);
    }
    return out;
}

std::set<std::string> param_strings(const AutGroup& g, const std::set<std::size_t>& idx)
{
    std::set<std::string> s;
    for (auto i : idx) s.insert(to_string(g[i].params()));
    return s;
}

// ---------------------------------------------------------------------------

Outcome twist_counts(std::uint64_t p, const std::vector<std::size_t>& j0)
{
    Outcome o;
    for (unsigned n = 1; n <= 4; ++n) {
        auto c0 = frobenius_classes(frobenius_action(central_curve(p, n))).size();
        auto c1 = frobenius_classes(frobenius_action(ordinary_curve(p, n))).size();
        o.expect(c0 == j0[n - 1], "j=0 over " + std::to_string(p) + "^" + std::to_string(n) + ": " + std::to_string(c0));
        o.expect(c1 == 2, "j!=0 over " + std::to_string(p) + "^" + std::to_string(n) + ": " + std::to_string(c1));
    }
    return o;
}

Outcome criterion3()
{
    Outcome o;
    const auto a = frobenius_action(central_curve(3, 1));
    const auto& g = a.group();
    const auto& f = g.field();
    const auto one = f.one(), zero = f.zero(), i = *gf::sqrt(f.from_int(-1));
    const auto cls = frobenius_classes(a);
    std::set<std::size_t> ci;
    for (const auto& u : {i, -i})
        for (const auto& r : {zero, one, -one}) ci.insert(phi3(g, u, r));
    std::set<std::set<std::string>> listed = {
        param_strings(g, {phi3(g, one, zero), phi3(g, -one, zero)}),
        param_strings(g, {phi3(g, one, one), phi3(g, -one, -one)}),
        param_strings(g, {phi3(g, one, -one), phi3(g, -one, one)}),
        param_strings(g, ci),
    };
    const auto computed = class_strings(a, cls);
    const auto golden = golden_classes("h1_3_1.json");
    o.expect(computed == listed, "F_3 classes differ from the listing");
    o.expect(golden == listed, "F_3 golden file differs from the listing");

    const auto a9 = frobenius_action(central_curve(3, 2));
    const auto& g9 = a9.group();
    const auto& f9 = g9.field();
    const auto c9 = frobenius_classes(a9);
    std::multiset<std::size_t> sizes;
    for (const auto& c : c9) sizes.insert(c.members.size());
    o.expect(sizes == std::multiset<std::size_t>{1, 1, 2, 2, 3, 3}, "F_9 class sizes " + set_text(sizes));
    const auto c11 = param_strings(g9, {phi3(g9, f9.one(), f9.one()), phi3(g9, f9.one(), -f9.one())});
    o.expect(param_strings(g9, members_of(c9, phi3(g9, f9.one(), f9.one()))) == c11, "F_9 C_{1,1} mismatch");
    const auto golden9 = golden_classes("h1_3_2.json");
    o.expect(class_strings(a9, c9) == golden9, "F_9 classes differ from the golden file");
    o.expect(golden9.count(c11) == 1, "F_9 golden file lacks C_{1,1}");
    return o;
}

Outcome criterion4()
{
    Outcome o;
    const auto r = enumerate_twists(central_curve(3, 1));
    const auto f = r.base;
    o.expect(r.entries.size() == 4, "entry count " + std::to_string(r.entries.size()));
    auto degree = [&](std::array<std::int64_t, 5> a) -> std::size_t {
        const auto e = WeierstrassCurve::from_ints(f, a);
        for (const auto& t : r.entries)
            if (iso_over_base(t.curve, e)) return t.split_degree;
        return 0;
    };
    o.expect(degree({0, 0, 0, 1, 0}) == 2, "y^2 = x^3 + x");
    o.expect(degree({0, 0, 0, -1, -1}) == 3, "y^2 = x^3 - x - 1");
    o.expect(degree({0, 0, 0, -1, 1}) == 3, "y^2 = x^3 - x + 1");
    o.expect(degree({0, 0, 0, -1, 0}) == 1, "trivial twist");
    return o;
}

Outcome criterion5()
{
    Outcome o;
    const auto a = frobenius_action(central_curve(2, 1));
    const auto& g = a.group();
    const auto& f = g.field();
    const auto one = f.one(), zero = f.zero(), w = f.generator(), w2 = w * w;
    const auto cls = frobenius_classes(a);
    std::multiset<std::size_t> sizes;
    for (const auto& c : cls) sizes.insert(c.members.size());
    o.expect(sizes == std::multiset<std::size_t>{12, 6, 6}, "F_2 class sizes " + set_text(sizes));
    const std::set<std::size_t> listing = {
        phi2(g, one, zero, zero), phi2(g, one, zero, one), phi2(g, one, one, w),  phi2(g, one, one, w2),
        phi2(g, w2, zero, zero),  phi2(g, w2, w2, w),      phi2(g, w2, w2, w2),   phi2(g, w2, zero, one),
        phi2(g, w, zero, zero),   phi2(g, w, w, w2),       phi2(g, w, zero, one), phi2(g, w, w, w),
    };
    o.expect(listing.size() == 12 && members_of(cls, g.identity()) == listing, "12-element class listing");
    for (const auto& c : cls) {
        if (c.rep == g.identity()) continue;
        for (auto m : c.members) o.expect(cocycle_order(a, m) == 8u, "nontrivial cocycle order != 8");
    }
    std::multiset<std::size_t> deg;
    for (const auto& c : frobenius_classes(frobenius_action(central_curve(2, 2)))) deg.insert(c.split_degree);
    o.expect(deg == std::multiset<std::size_t>{1, 2, 6, 6, 3, 3, 4}, "F_4 split degrees " + set_text(deg));
    return o;
}

Outcome criterion6()
{
    Outcome o;
    const auto r = enumerate_twists(central_curve(2, 1));
    const auto f = r.base;
    const std::vector<std::pair<WeierstrassCurve, std::uint64_t>> want = {
        {WeierstrassCurve::from_ints(f, {0, 0, 1, 0, 0}), 3},
        {WeierstrassCurve::from_ints(f, {0, 0, 1, 1, 0}), 5},
        {WeierstrassCurve::from_ints(f, {0, 0, 1, 1, 1}), 1},
    };
    o.expect(r.entries.size() == 3, "F_2 entry count");
    std::set<std::size_t> hit;
    for (const auto& [e, pts] : want) {
        bool found = false;
        for (std::size_t i = 0; i < r.entries.size(); ++i) {
            if (!iso_over_base(r.entries[i].curve, e)) continue;
            found = true;
            hit.insert(i);
            o.expect(r.entries[i].points == pts, equation(e) + " point count " + std::to_string(r.entries[i].points));
        }
        o.expect(found, equation(e) + " missing");
    }
    o.expect(hit.size() == 3, "twist set mismatch");
    o.expect(point_count_table(r).all_distinct(), "point counts not pairwise distinct");

    const auto r4 = enumerate_twists(central_curve(2, 2));
    const auto f4 = r4.base;
    const auto z = f4.zero();
    const WeierstrassCurve tw(f4, {z, z, f4.one(), z, f4.generator()});
    bool quad = false;
    for (const auto& t : r4.entries)
        if (t.split_degree == 2) quad = iso_over_base(t.curve, tw);
    o.expect(quad, "quadratic twist over F_4 is not y^2 + y = x^3 + w");
    return o;
}

Outcome criterion7()
{
    Outcome o;
    const std::vector<std::size_t> want = {4, 6, 4, 6};
    for (unsigned n = 1; n <= 4; ++n) {
        auto c = j0_census(3, n);
        o.expect(c == want[n - 1], "F_3^" + std::to_string(n) + " census " + std::to_string(c));
    }
    return o;
}

Outcome criterion8()
{
    Outcome o;
    for (std::uint64_t q : {5, 7, 11, 13}) {
        const auto e = mk(q, 1, {0, 0, 0, -1, 0});
        const auto a = frobenius_action(e);
        const auto h = subgroup_closure(a.group(), Mask{1} << a.group().minus_one());
        const bool cap = q % 4 == 3;
        const auto k = induced_map(a, h).kernel_size;
        o.expect(k == (cap ? 2u : 1u), "kernel over F_" + std::to_string(q) + " is " + std::to_string(k));
        for (const auto& d : enumerate_field(e.field())) {
            if (d.is_zero() || is_square(d)) continue;
            o.expect(iso_over_base(quadratic_twist(e, d), e) == cap,
                     "twist by " + to_string(d) + " over F_" + std::to_string(q));
        }
    }
    return o;
}

Outcome criterion9()
{
    Outcome o;
    const auto a9 = frobenius_action(central_curve(3, 2));
    for (auto [order, collisions] : std::vector<std::pair<std::size_t, std::size_t>>{{3, 1}, {6, 2}}) {
        const auto h = stable_cyclic_subgroup(a9, order);
        o.expect(h.has_value(), "no stable C" + std::to_string(order));
        if (!h) continue;
        const auto m = induced_map(a9, *h);
        o.expect(m.kernel_size == 1, "C" + std::to_string(order) + " kernel " + std::to_string(m.kernel_size));
        o.expect(m.collisions.size() == collisions,
                 "C" + std::to_string(order) + " collisions " + std::to_string(m.collisions.size()));
    }
    const auto a2 = frobenius_action(central_curve(2, 1));
    std::size_t stable3 = 0;
    for (const auto& s : stable_subgroups(a2)) {
        if (s.order != 3) continue;
        ++stable3;
        o.expect(capitulation_report(a2, s.mask).all_capitulate(), "order-3 subgroup with a surviving class");
    }
    o.expect(stable3 > 0, "no stable order-3 subgroup over F_2");
    return o;
}

Outcome criterion10()
{
    Outcome o;
    for (unsigned n : {1u, 2u}) {
        const auto r = enumerate_twists(central_curve(3, n));
        const auto& g = r.action.group();
        const auto i = *gf::sqrt(g.field().from_int(-1));
        const auto cls = class_of(r.classes, phi3(g, i, g.field().zero()));
        o.expect(cls != class_of(r.classes, g.identity()), "Phi_{i,0} trivial over F_3^" + std::to_string(n));
        o.expect(r.entries[cls].split_degree > 1 && !iso_over_base(r.entries[cls].curve, r.source),
                 "labelled twist over F_3^" + std::to_string(n) + " is E");
    }
    for (unsigned n : {1u, 2u}) {
        const auto r = enumerate_twists(central_curve(2, n));
        const auto& g = r.action.group();
        const auto& f = g.field();
        const auto cls = class_of(r.classes, phi2(g, f.generator() * f.generator(), f.zero(), f.one()));
        const bool trivial = cls == class_of(r.classes, g.identity());
        o.expect(trivial == (n % 2 == 1), "Phi_{w^2,0,1} over F_2^" + std::to_string(n));
        o.expect(iso_over_base(r.entries[cls].curve, r.source) == trivial, "labelled curve over F_2^" + std::to_string(n));
    }
    return o;
}

Outcome field_axioms()
{
    Outcome o;
    for (std::uint64_t p = 2; p <= 81; ++p) {
        if (!is_prime(p)) continue;
        for (unsigned n = 1; std::pow(double(p), n) <= 81.0; ++n) {
            const auto f = FieldCtx::create(p, n);
            const auto el = enumerate_field(f);
            const auto zero = f.zero(), one = f.one();
            bool ok = el.size() == f.q();
            for (const auto& a : el) {
                ok = ok && a + zero == a && a * one == a && a + (-a) == zero;
                if (!a.is_zero()) ok = ok && a * a.inv() == one;
                for (const auto& b : el) {
                    ok = ok && a + b == b + a && a * b == b * a;
                    for (const auto& c : el) {
                        ok = ok && (a + b) + c == a + (b + c) && (a * b) * c == a * (b * c) &&
                             a * (b + c) == a * b + a * c;
                    }
                }
                if (!ok) break;
            }
            o.expect(ok, "field axioms fail over " + f.name());
        }
    }
    return o;
}

Outcome cocycle_and_partition()
{
    Outcome o;
    for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{3, 1}, {3, 2}, {2, 1}, {2, 2}, {2, 3}}) {
        const auto a = frobenius_action(central_curve(p, n));
        const auto& g = a.group();
        for (std::size_t x = 0; x < g.size(); ++x)
            for (std::uint64_t j = 0; j <= 12; ++j)
                for (std::uint64_t k = 0; k <= 12; ++k)
                    o.expect(cocycle_value(a, x, j + k) == g.mul(cocycle_value(a, x, j), a.apply(cocycle_value(a, x, k), j)),
                             "cocycle identity over " + std::to_string(p) + "^" + std::to_string(n));
        const auto cls = frobenius_classes(a);
        std::vector<int> seen(g.size(), 0);
        for (std::size_t c = 0; c < cls.size(); ++c) {
            for (auto m : cls[c].members) {
                ++seen[m];
                for (std::size_t s = 0; s < g.size(); ++s) {
                    auto img = g.mul(g.mul(g.inverse(s), m), a.apply(s));
                    o.expect(class_of(cls, img) == c, "class not closed under twisted conjugation");
                }
            }
        }
        for (int s : seen) o.expect(s == 1, "classes do not partition the group");
    }
    return o;
}

Outcome hasse(std::uint32_t seed)
{
    Outcome o;
    auto check = [&](const WeierstrassCurve& e) {
        if (!is_elliptic(e)) return;
        const double q = double(e.field().q());
        const double t = q + 1 - double(point_count(e));
        o.expect(t * t <= 4 * q, "Hasse bound fails for " + to_string(e));
    };
    for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}}) {
        const auto f = FieldCtx::create(p, n);
        const auto el = enumerate_field(f);
        for (const auto& a1 : el)
            for (const auto& a2 : el)
                for (const auto& a3 : el)
                    for (const auto& a4 : el)
                        for (const auto& a6 : el) check(WeierstrassCurve(f, {a1, a2, a3, a4, a6}));
    }
    std::mt19937 rng(seed);
    for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{
             {2, 3}, {3, 2}, {2, 4}, {5, 2}, {3, 3}, {2, 5}, {7, 2}, {3, 4}, {2, 6}, {11, 2}}) {
        const auto f = FieldCtx::create(p, n);
        std::uniform_int_distribution<std::uint64_t> d(0, f.q() - 1);
        for (int i = 0; i < 200; ++i) {
            check(WeierstrassCurve(f, {f.from_index(d(rng)), f.from_index(d(rng)), f.from_index(d(rng)),
                                       f.from_index(d(rng)), f.from_index(d(rng))}));
        }
    }
    return o;
}

Outcome pointwise_isos()
{
    Outcome o;
    auto check = [&](const CurveIsomorphism& f) {
        const auto src = base_change(f.source(), f.field());
        const auto dst = base_change(f.target(), f.field());
        std::set<CurvePoint> images;
        const auto pts = enumerate_points(src);
        for (const auto& P : pts) {
            auto Q = f.apply(P);
            o.expect(is_on_curve(dst, Q), "image off the target curve");
            images.insert(Q);
        }
        o.expect(images.size() == pts.size(), "isomorphism not injective on points");
    };
    for (auto [p, n] : std::vector<std::pair<std::uint64_t, unsigned>>{{3, 1}, {2, 1}, {3, 2}, {2, 2}}) {
        const auto g = automorphism_group(central_curve(p, n));
        for (const auto& f : g.elements()) check(f);
        const auto r = enumerate_twists(central_curve(p, n));
        for (const auto& t : r.entries)
            if (t.psi.field().q() <= 4096) check(t.psi);
    }
    for (std::uint64_t q : {5, 7, 13}) {
        for (const auto& e : {mk(q, 1, {0, 0, 0, -1, 0}), mk(q, 1, {0, 0, 0, 0, 1})}) {
            const auto g = automorphism_group(e);
            for (const auto& f : g.elements()) check(f);
        }
    }
    return o;
}

Outcome criterion11()
{
    constexpr std::uint32_t kSeed = 20261018;
    Outcome o;
    for (auto& part : {field_axioms(), cocycle_and_partition(), hasse(kSeed), pointwise_isos()}) {
        o.expect(part.pass, part.detail);
    }
    if (o.pass) o.detail = "sampling seed " + std::to_string(kSeed);
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        std::string name;
        std::function<Outcome()> run;
        double max_seconds = 0;
    };
    const std::vector<Criterion> criteria = {
        {1, "twist counts, characteristic 3", [] { return twist_counts(3, {4, 6, 4, 6}); }, 10.0},
        {2, "twist counts, characteristic 2", [] { return twist_counts(2, {3, 7, 3, 7}); }, 10.0},
        {3, "class data over F_3 and F_9", criterion3},
        {4, "explicit twists over F_3", criterion4},
        {5, "class data over F_2 and F_4", criterion5},
        {6, "explicit twists over F_2 and F_4", criterion6},
        {7, "j = 0 census over F_3^n", criterion7},
        {8, "capitulation for y^2 = x^3 - x", criterion8},
        {9, "cubic and sextic induced maps", criterion9},
        {10, "cocycles at Frobenius", criterion10},
        {11, "property suites", criterion11},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto start = Clock::now();
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("error: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(Clock::now() - start).count();
        if (c.max_seconds > 0 && secs > c.max_seconds) o.expect(false, "took longer than the time budget");
        std::ostringstream line;
        line << (o.pass ? "PASS" : "FAIL") << " " << c.id << " " << c.name;
        line.setf(std::ios::fixed);
        line.precision(2);
        line << " (" << secs << " s)";
        if (!o.detail.empty()) line << ": " << o.detail;
        std::cout << line.str() << std::endl;
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
