#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "render.hpp"
#include "repro.hpp"
#include "twistlab/twists.hpp"

using namespace twistlab;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kLimit = 2, kVerify = 3 };

struct RunConfig {
    std::uint64_t p = 0;
    unsigned n = 1;
    std::string curve;
    std::string short_form;
    std::string subgroup;
    std::size_t max_split_degree = 24;
    std::optional<std::uint64_t> limit;
    bool json = false;
    bool inject_fault = false;
};

// --limit wins over TWISTLAB_LIMIT, which wins over the defaults.
std::optional<std::uint64_t> configured_limit(const RunConfig& cfg)
{
    if (cfg.limit) return cfg.limit;
    if (const char* env = std::getenv("TWISTLAB_LIMIT")) {
        std::size_t used = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(env, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || env[used] != '\0' || v == 0) throw DomainError("TWISTLAB_LIMIT must be a positive integer");
        return v;
    }
    return std::nullopt;
}

std::uint64_t field_limit(const RunConfig& cfg) { return configured_limit(cfg).value_or(gf::kDefaultLimit); }
std::uint64_t split_limit(const RunConfig& cfg) { return configured_limit(cfg).value_or(gf::kSplitSearchLimit); }

gf::FieldCtx base_field(const RunConfig& cfg)
{
    if (!gf::is_prime(cfg.p)) throw DomainError("--p must be prime");
    if (cfg.n == 0) throw DomainError("--n must be positive");
    return gf::FieldCtx::create(cfg.p, cfg.n, field_limit(cfg));
}

curve::WeierstrassCurve input_curve(const RunConfig& cfg)
{
    auto f = base_field(cfg);
    if (!cfg.curve.empty() && !cfg.short_form.empty()) throw DomainError("give either --curve or --short");
    curve::WeierstrassCurve e;
    if (!cfg.curve.empty()) {
        e = curve::parse_curve(f, cfg.curve);
    } else if (!cfg.short_form.empty()) {
        // p = 2: y^2 + y = x^3 + a x + b; otherwise y^2 = x^3 + a x + b
        e = curve::parse_curve(f, std::string(cfg.p == 2 ? "[0,0,1," : "[0,0,0,") + cfg.short_form + "]");
    } else if (cfg.p == 2 || cfg.p == 3) {
        e = twists::central_curve(cfg.p, cfg.n);
    } else {
        throw DomainError("--curve or --short is required for p >= 5");
    }
    if (!curve::is_elliptic(e)) throw DomainError("curve " + curve::to_string(e) + " is singular");
    return e;
}

json coeff_array(const curve::WeierstrassCurve& e)
{
    auto a = json::array();
    for (const auto& c : e.coeffs()) a.push_back(gf::to_string(c));
    return a;
}

json cmd_automorphisms(const RunConfig& cfg)
{
    auto e = input_curve(cfg);
    auto g = autmap::automorphism_group(e, split_limit(cfg));
    if (auto problem = autmap::verify_group(g)) throw VerificationError(*problem);
    auto st = autmap::group_structure(g);
    json j;
    j["base"] = e.field().name();
    j["curve"] = coeff_array(e);
    j["equation"] = curve::equation(e);
    j["j"] = gf::to_string(curve::j_invariant(e));
    j["field"] = g.field().name();
    j["order"] = g.size();
    j["abelian"] = st.abelian;
    j["cyclic"] = st.cyclic;
    j["center_size"] = st.center.size();
    j["minus_one"] = autmap::to_string(g[st.minus_one]);
    json counts;
    for (auto [order, count] : st.subgroup_counts) counts[std::to_string(order)] = count;
    j["subgroup_counts"] = counts;
    auto elems = json::array();
    for (std::size_t i = 0; i < g.size(); ++i) {
        json el;
        el["index"] = i;
        el["order"] = st.element_orders[i];
        el["automorphism"] = autmap::to_string(g[i]);
        elems.push_back(std::move(el));
    }
    j["elements"] = std::move(elems);
    return j;
}

json cmd_twists(const RunConfig& cfg)
{
    auto e = input_curve(cfg);
    auto a = twistcoh::frobenius_action(autmap::automorphism_group(e, split_limit(cfg)), e.field());
    for (const auto& c : twistcoh::frobenius_classes(a)) {
        if (c.split_degree > cfg.max_split_degree) {
            throw LimitError("split degree " + std::to_string(c.split_degree) + " exceeds --max-split-degree");
        }
    }
    return twists::twist_report_json(twists::enumerate_twists(e, split_limit(cfg)));
}

autmap::Mask named_subgroup(const twistcoh::FrobAction& a, const std::string& name)
{
    const auto& g = a.group();
    autmap::Mask m = 0;
    if (name == "trivial") {
        m = autmap::Mask{1} << g.identity();
    } else if (name == "full") {
        m = g.size() >= 32 ? ~autmap::Mask{0} : (autmap::Mask{1} << g.size()) - 1;
    } else if (name == "minus-one") {
        m = autmap::subgroup_closure(g, autmap::Mask{1} << g.minus_one());
    } else if (name.size() >= 2 && name[0] == 'C') {
        std::size_t order = 0;
        try {
            order = std::stoul(name.substr(1));
        } catch (const std::exception&) {
            throw DomainError("unknown subgroup " + name);
        }
        auto s = twistcoh::stable_cyclic_subgroup(a, order);
        if (!s) throw DomainError("no Frobenius-stable cyclic subgroup of order " + std::to_string(order));
        m = *s;
    } else {
        throw DomainError("unknown subgroup " + name + " (use trivial, full, minus-one or C<order>)");
    }
    if (!twistcoh::is_stable(a, m)) throw DomainError("subgroup " + name + " is not Frobenius-stable");
    return m;
}

json cmd_h1(const RunConfig& cfg)
{
    auto e = input_curve(cfg);
    auto a = twistcoh::frobenius_action(autmap::automorphism_group(e, split_limit(cfg)), e.field());
    const auto& g = a.group();
    auto classes = twistcoh::frobenius_classes(a);
    auto j = twistcoh::class_report_json(a, classes);
    for (std::size_t i = 0; i < classes.size(); ++i) {
        auto members = json::array();
        for (auto m : classes[i].members) members.push_back(autmap::to_string(g[m].params()));
        j["classes"][i]["members"] = std::move(members);
    }
    if (!cfg.subgroup.empty()) {
        auto mask = named_subgroup(a, cfg.subgroup);
        auto rep = twistcoh::capitulation_report(a, mask);
        const auto& m = rep.map;
        json s;
        s["name"] = cfg.subgroup;
        s["order"] = autmap::mask_members(mask).size();
        auto hc = json::array();
        for (std::size_t i = 0; i < m.h_classes.size(); ++i) {
            json c;
            c["rep"] = autmap::to_string(g[m.h_classes[i].rep]);
            c["size"] = m.h_classes[i].members.size();
            c["cocycle_order"] = m.h_classes[i].split_degree;
            c["image_rep"] = autmap::to_string(g[m.g_classes[m.image[i]].rep]);
            hc.push_back(std::move(c));
        }
        s["h_classes"] = std::move(hc);
        s["kernel_size"] = m.kernel_size;
        s["image_size"] = m.image_size;
        s["injective"] = m.injective();
        auto col = json::array();
        for (auto [x, y] : m.collisions) col.push_back(json::array({x, y}));
        s["collisions"] = std::move(col);
        s["capitulated"] = rep.capitulated;
        j["subgroup"] = std::move(s);
    }
    return j;
}

json cmd_census(const RunConfig& cfg)
{
    auto f = base_field(cfg);
    auto reps = twists::classify_curves(f, f.zero(), std::nullopt, field_limit(cfg));
    json j;
    j["base"] = f.name();
    j["j"] = "0";
    j["classes"] = reps.size();
    auto arr = json::array();
    for (const auto& e : reps) {
        json c;
        c["curve"] = coeff_array(e);
        c["points"] = curve::point_count(e, field_limit(cfg));
        c["supersingular"] = curve::is_supersingular(e, field_limit(cfg));
        c["equation"] = curve::equation(e);
        arr.push_back(std::move(c));
    }
    j["curves"] = std::move(arr);
    return j;
}

void emit(const json& j, bool as_json)
{
    if (as_json) std::cout << j.dump(2) << "\n";
    else std::cout << cli::render_text(j);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"twistlab: twists of elliptic curves over finite fields"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto field_opts = [&](CLI::App* sub, bool with_curve) {
        sub->add_option("--p", cfg.p, "characteristic")->required();
        sub->add_option("--n", cfg.n, "extension degree")->capture_default_str();
        if (with_curve) {
            sub->add_option("--curve", cfg.curve, "coefficients [a1,a2,a3,a4,a6]");
            sub->add_option("--short", cfg.short_form, "a,b for y^2 = x^3 + ax + b (y^2 + y = x^3 + ax + b if p = 2)");
        }
        sub->add_option("--limit", cfg.limit, "field size limit (also TWISTLAB_LIMIT)");
        sub->add_flag("--json", cfg.json, "JSON output");
    };

    auto* aut = app.add_subcommand("automorphisms", "automorphism group of a curve");
    field_opts(aut, true);
    auto* tw = app.add_subcommand("twists", "twists of a curve over its base field");
    field_opts(tw, true);
    tw->add_option("--max-split-degree", cfg.max_split_degree, "largest splitting degree to search")
        ->capture_default_str();
    auto* h1 = app.add_subcommand("h1", "Frobenius-twisted conjugacy classes");
    field_opts(h1, true);
    h1->add_option("--subgroup", cfg.subgroup, "trivial, full, minus-one or C<order>");
    auto* census = app.add_subcommand("census", "j = 0 curves up to isomorphism over the base");
    field_opts(census, false);
    auto* repro = app.add_subcommand("repro", "run every reproduction check");
    repro->add_flag("--json", cfg.json, "JSON output");
    repro->add_flag("--inject-fault", cfg.inject_fault, "corrupt a Cayley table to exercise failure reporting");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*repro) {
            auto items = cli::run_repro({cfg.inject_fault});
            auto j = cli::repro_json(items);
            emit(j, cfg.json);
            return j["failed"].get<std::size_t>() == 0 ? kOk : kVerify;
        }
        if (cfg.limit && *cfg.limit == 0) throw DomainError("--limit must be positive");
        if (cfg.max_split_degree == 0) throw DomainError("--max-split-degree must be positive");
        json j;
        if (*aut) j = cmd_automorphisms(cfg);
        else if (*tw) j = cmd_twists(cfg);
        else if (*h1) j = cmd_h1(cfg);
        else j = cmd_census(cfg);
        emit(j, cfg.json);
        return kOk;
    } catch (const LimitError& e) {
        std::cerr << "limit: " << e.what() << "\n";
        return kLimit;
    } catch (const VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kVerify;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
