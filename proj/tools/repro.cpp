#include "repro.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "twistlab/twists.hpp"

namespace twistlab::cli {

namespace {

using namespace twistlab::autmap;
using namespace twistlab::twistcoh;
using namespace twistlab::twists;
using gf::FieldElem;

constexpr std::size_t kMissing = ~std::size_t{0};

// Phi_{u,r} = (u, r, 0, 0) for y^2 = x^3 - x
std::size_t phi3(const AutGroup& g, const FieldElem& u, const FieldElem& r)
{
    const auto z = g.field().zero();
    return g.index_of(IsoParams{u, r, z, z}).value_or(kMissing);
}

// Phi_{u,r,t} = (u, r, r^2, t) for y^2 + y = x^3
std::size_t phi2(const AutGroup& g, const FieldElem& u, const FieldElem& r, const FieldElem& t)
{
    return g.index_of(IsoParams{u, r, r * r, t}).value_or(kMissing);
}

std::set<std::size_t> member_set(const std::vector<FrobClass>& cls, std::size_t i)
{
    if (i == kMissing) return {};
    const auto& m = cls[class_of(cls, i)].members;
    return {m.begin(), m.end()};
}

std::string slug(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c))) out += c;
        else if (c == '!') out += "n";
        else if (c == '=') continue;
        else if (!out.empty() && out.back() != '_') out += '_';
    }
    return out;
}

std::string multiset_text(std::vector<std::size_t> v)
{
    std::sort(v.begin(), v.end());
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

class Collector {
public:
    void add(std::string id, std::string expected, std::string actual, std::string description)
    {
        bool pass = expected == actual;
        items.push_back({std::move(id), std::move(expected), std::move(actual), pass, std::move(description)});
    }

    // Runs a block; errors become a failed item.
    template <class F>
    void guard(const std::string& id, const std::string& description, F&& f)
    {
        try {
            f();
        } catch (const std::exception& e) {
            items.push_back({id, "ok", "error", false, description + ": " + e.what()});
        }
    }

    std::vector<ReproItem> items;
};

void tables(Collector& c)
{
    for (std::uint64_t p : {2, 3}) {
        for (unsigned n = 1; n <= 4; ++n) {
            const auto prefix = "tables.p" + std::to_string(p) + ".n" + std::to_string(n);
            c.guard(prefix, "count tables over F_" + std::to_string(p) + "^" + std::to_string(n), [&] {
                for (const auto& v : verify_tables(p, n)) {
                    c.add(prefix + "." + slug(v.item), v.expected, v.actual,
                          v.item + " over F_" + std::to_string(p) + "^" + std::to_string(n));
                }
            });
        }
    }
}

void class_listings(Collector& c)
{
    c.guard("classes.3^1", "Frobenius classes of y^2 = x^3 - x over F_3", [&] {
        const auto a = frobenius_action(central_curve(3, 1));
        const auto& g = a.group();
        const auto& f = g.field();
        const auto one = f.one(), zero = f.zero(), i = *gf::sqrt(f.from_int(-1));
        const auto cls = frobenius_classes(a);
        std::set<std::size_t> ci;
        for (const auto& u : {i, -i})
            for (const auto& r : {zero, one, -one}) ci.insert(phi3(g, u, r));
        bool ok = cls.size() == 4 &&
                  member_set(cls, phi3(g, one, zero)) == std::set{phi3(g, one, zero), phi3(g, -one, zero)} &&
                  member_set(cls, phi3(g, one, one)) == std::set{phi3(g, one, one), phi3(g, -one, -one)} &&
                  member_set(cls, phi3(g, one, -one)) == std::set{phi3(g, one, -one), phi3(g, -one, one)} &&
                  member_set(cls, phi3(g, i, zero)) == ci;
        c.add("classes.3^1.listing", "yes", yes_no(ok), "four classes with the listed members over F_3");
    });
    c.guard("classes.3^2", "Frobenius classes of y^2 = x^3 - x over F_9", [&] {
        const auto a = frobenius_action(central_curve(3, 2));
        const auto& g = a.group();
        const auto& f = g.field();
        const auto cls = frobenius_classes(a);
        std::vector<std::size_t> sizes;
        for (const auto& k : cls) sizes.push_back(k.members.size());
        c.add("classes.3^2.sizes", "{1,1,2,2,3,3}", multiset_text(sizes), "class sizes over F_9");
        const auto one = f.one();
        bool ok = member_set(cls, phi3(g, one, one)) == std::set{phi3(g, one, one), phi3(g, one, -one)};
        c.add("classes.3^2.C11", "yes", yes_no(ok), "C_{1,1} = {Phi_{1,1}, Phi_{1,-1}} over F_9");
    });
    c.guard("classes.2^1", "Frobenius classes of y^2 + y = x^3 over F_2", [&] {
        const auto a = frobenius_action(central_curve(2, 1));
        const auto& g = a.group();
        const auto& f = g.field();
        const auto one = f.one(), zero = f.zero(), w = f.generator(), w2 = w * w;
        const auto cls = frobenius_classes(a);
        std::vector<std::size_t> sizes;
        for (const auto& k : cls) sizes.push_back(k.members.size());
        c.add("classes.2^1.sizes", "{6,6,12}", multiset_text(sizes), "class sizes over F_2");
        const std::set<std::size_t> listing = {
            phi2(g, one, zero, zero), phi2(g, one, zero, one), phi2(g, one, one, w),   phi2(g, one, one, w2),
            phi2(g, w2, zero, zero),  phi2(g, w2, w2, w),      phi2(g, w2, w2, w2),    phi2(g, w2, zero, one),
            phi2(g, w, zero, zero),   phi2(g, w, w, w2),       phi2(g, w, zero, one),  phi2(g, w, w, w),
        };
        c.add("classes.2^1.listing", "yes", yes_no(member_set(cls, g.identity()) == listing),
              "the 12-element class equals the listed automorphisms");
        std::vector<std::size_t> orders;
        for (const auto& k : cls) {
            if (k.rep == g.identity()) continue;
            std::set<std::size_t> o;
            for (auto m : k.members) o.insert(cocycle_order(a, m).value_or(0));
            orders.push_back(o.size() == 1 ? *o.begin() : 0);
        }
        c.add("classes.2^1.cocycle_orders", "{8,8}", multiset_text(orders), "nontrivial cocycle orders over F_2");
    });
    c.guard("classes.2^2", "Frobenius classes of y^2 + y = x^3 over F_4", [&] {
        const auto cls = frobenius_classes(frobenius_action(central_curve(2, 2)));
        std::vector<std::size_t> deg;
        for (const auto& k : cls) deg.push_back(k.split_degree);
        c.add("classes.2^2.split_degrees", "{1,2,3,3,4,6,6}", multiset_text(deg), "split degrees over F_4");
    });
}

void explicit_twists(Collector& c)
{
    auto iso = [](const WeierstrassCurve& a, const WeierstrassCurve& b) {
        return !find_isomorphisms(a, b, a.field()).empty();
    };
    auto degree_of = [&](const TwistReport& r, const WeierstrassCurve& e) -> std::string {
        for (const auto& t : r.entries)
            if (iso(t.curve, e)) return std::to_string(t.split_degree);
        return "absent";
    };
    c.guard("twists.3^1", "explicit twists over F_3", [&] {
        const auto r = enumerate_twists(central_curve(3, 1));
        const auto f = r.base;
        c.add("twists.3^1.count", "4", std::to_string(r.entries.size()), "twists of y^2 = x^3 - x over F_3");
        c.add("twists.3^1.x3+x", "2", degree_of(r, WeierstrassCurve::from_ints(f, {0, 0, 0, 1, 0})),
              "y^2 = x^3 + x splits over the quadratic extension");
        c.add("twists.3^1.x3-x-1", "3", degree_of(r, WeierstrassCurve::from_ints(f, {0, 0, 0, -1, -1})),
              "y^2 = x^3 - x - 1 splits over the cubic extension");
        c.add("twists.3^1.x3-x+1", "3", degree_of(r, WeierstrassCurve::from_ints(f, {0, 0, 0, -1, 1})),
              "y^2 = x^3 - x + 1 splits over the cubic extension");
    });
    c.guard("twists.2^1", "explicit twists over F_2", [&] {
        const auto r = enumerate_twists(central_curve(2, 1));
        const auto f = r.base;
        std::vector<WeierstrassCurve> want{WeierstrassCurve::from_ints(f, {0, 0, 1, 0, 0}),
                                           WeierstrassCurve::from_ints(f, {0, 0, 1, 1, 0}),
                                           WeierstrassCurve::from_ints(f, {0, 0, 1, 1, 1})};
        std::string counts;
        bool matched = r.entries.size() == 3;
        for (const auto& w : want) {
            std::string pts = "absent";
            for (const auto& t : r.entries)
                if (iso(t.curve, w)) pts = std::to_string(t.points);
            if (pts == "absent") matched = false;
            counts += (counts.empty() ? "" : ",") + pts;
        }
        c.add("twists.2^1.set", "yes", yes_no(matched), "twists are y^2 + y = x^3, x^3 + x, x^3 + x + 1");
        c.add("twists.2^1.points", "3,5,1", counts, "point counts of the three twists");
        c.add("twists.2^1.separated", "yes", yes_no(point_count_table(r).all_distinct()),
              "point counts separate the twists");
    });
    c.guard("twists.2^2", "explicit twists over F_4", [&] {
        const auto r = enumerate_twists(central_curve(2, 2));
        const auto f = r.base;
        const auto z = f.zero();
        WeierstrassCurve tw(f, {z, z, f.one(), z, f.generator()});
        c.add("twists.2^2.count", "7", std::to_string(r.entries.size()), "twists of y^2 + y = x^3 over F_4");
        c.add("twists.2^2.quadratic", "2", degree_of(r, tw), "y^2 + y = x^3 + w is the quadratic twist");
    });
}

void capitulation(Collector& c)
{
    for (std::uint64_t q : {5, 7, 11, 13}) {
        const auto id = "capitulation.q" + std::to_string(q);
        c.guard(id, "quadratic twists of y^2 = x^3 - x over F_" + std::to_string(q), [&] {
            const auto e = WeierstrassCurve::from_ints(FieldCtx::create(q, 1), {0, 0, 0, -1, 0});
            const auto a = frobenius_action(e);
            const auto h = subgroup_closure(a.group(), Mask{1} << a.group().minus_one());
            const bool cap = q % 4 == 3;
            c.add(id + ".kernel", cap ? "2" : "1", std::to_string(induced_map(a, h).kernel_size),
                  "kernel of the induced map for <-1>");
            std::size_t iso = 0, total = 0;
            for (const auto& d : gf::enumerate_field(e.field())) {
                if (d.is_zero() || gf::is_square(d)) continue;
                ++total;
                if (!find_isomorphisms(quadratic_twist(e, d), e, e.field()).empty()) ++iso;
            }
            std::string actual = iso == total ? "isomorphic" : iso == 0 ? "non-isomorphic" : "mixed";
            c.add(id + ".nonsquare_twists", cap ? "isomorphic" : "non-isomorphic", actual,
                  "quadratic twists by non-squares versus E over the base");
        });
    }
    c.guard("induced.3^2", "cubic and sextic subgroups over F_9", [&] {
        const auto a = frobenius_action(central_curve(3, 2));
        for (std::size_t order : {3, 6}) {
            const auto h = stable_cyclic_subgroup(a, order);
            const auto id = "induced.3^2.C" + std::to_string(order);
            if (!h) {
                c.add(id, "stable", "absent", "stable cyclic subgroup of order " + std::to_string(order));
                continue;
            }
            const auto m = induced_map(a, *h);
            c.add(id + ".kernel", "1", std::to_string(m.kernel_size), "kernel size");
            c.add(id + ".collisions", order == 3 ? "1" : "2", std::to_string(m.collisions.size()),
                  "fiber collisions among H-classes");
        }
    });
    c.guard("induced.2^1", "order-3 subgroups over F_2", [&] {
        const auto a = frobenius_action(central_curve(2, 1));
        std::size_t stable = 0, all = 0;
        for (const auto& s : stable_subgroups(a)) {
            if (s.order != 3) continue;
            ++stable;
            if (capitulation_report(a, s.mask).all_capitulate()) ++all;
        }
        c.add("induced.2^1.C3_capitulate", "yes", yes_no(stable > 0 && stable == all),
              "every stable order-3 subgroup capitulates");
    });
}

void cocycles(Collector& c)
{
    for (unsigned n : {1u, 2u}) {
        const auto id = "cocycle.3^" + std::to_string(n);
        c.guard(id, "Fr -> Phi_{i,0}", [&] {
            const auto a = frobenius_action(central_curve(3, n));
            const auto& g = a.group();
            const auto cls = frobenius_classes(a);
            const auto i = *gf::sqrt(g.field().from_int(-1));
            const auto idx = phi3(g, i, g.field().zero());
            const bool trivial = idx != kMissing && class_of(cls, idx) == class_of(cls, g.identity());
            c.add(id, "nontrivial", trivial ? "trivial" : "nontrivial", "class labelled by Fr -> Phi_{i,0}");
        });
    }
    for (unsigned n : {1u, 2u}) {
        const auto id = "cocycle.2^" + std::to_string(n);
        c.guard(id, "Fr -> Phi_{w^2,0,1}", [&] {
            const auto a = frobenius_action(central_curve(2, n));
            const auto& g = a.group();
            const auto& f = g.field();
            const auto cls = frobenius_classes(a);
            const auto idx = phi2(g, f.generator() * f.generator(), f.zero(), f.one());
            const bool trivial = idx != kMissing && class_of(cls, idx) == class_of(cls, g.identity());
            c.add(id, n % 2 ? "trivial" : "nontrivial", trivial ? "trivial" : "nontrivial",
                  "class labelled by Fr -> Phi_{w^2,0,1}");
        });
    }
}

void group_check(Collector& c, bool inject_fault)
{
    c.guard("cayley.3^1", "Cayley table of Aut(y^2 = x^3 - x)", [&] {
        auto g = automorphism_group(central_curve(3, 1));
        auto table = g.cayley();
        if (inject_fault) std::swap(table[1][1], table[1][2]);
        auto h = AutGroup::from_table(g.curve(), g.field(), g.elements(), table);
        auto problem = verify_group(h);
        std::string desc = inject_fault ? "group axioms, table deliberately corrupted" : "group axioms of the Cayley table";
        if (problem) desc += ": " + *problem;
        c.add("cayley.3^1", "valid", problem ? "invalid" : "valid", desc);
    });
}

} // namespace

std::vector<ReproItem> run_repro(const ReproOptions& opt)
{
    Collector c;
    tables(c);
    class_listings(c);
    explicit_twists(c);
    capitulation(c);
    cocycles(c);
    group_check(c, opt.inject_fault);
    return std::move(c.items);
}

nlohmann::ordered_json repro_json(const std::vector<ReproItem>& items)
{
    nlohmann::ordered_json j;
    auto arr = nlohmann::ordered_json::array();
    std::size_t passed = 0;
    for (const auto& it : items) {
        nlohmann::ordered_json e;
        e["id"] = it.id;
        e["pass"] = it.pass;
        e["expected"] = it.expected;
        e["actual"] = it.actual;
        e["description"] = it.description;
        arr.push_back(std::move(e));
        if (it.pass) ++passed;
    }
    j["items"] = std::move(arr);
    j["passed"] = passed;
    j["failed"] = items.size() - passed;
    return j;
}

} // namespace twistlab::cli
