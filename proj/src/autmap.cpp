#include "twistlab/autmap.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <set>

namespace twistlab::autmap {

namespace {

FieldElem k(const FieldCtx& f, std::int64_t v) { return f.from_int(v); }

IsoParams embed_params(const IsoParams& p, const FieldCtx& super)
{
    return {gf::subfield_embed(p.u, super), gf::subfield_embed(p.r, super), gf::subfield_embed(p.s, super),
            gf::subfield_embed(p.t, super)};
}

std::optional<IsoParams> restrict_params(const IsoParams& p, const FieldCtx& sub)
{
    auto u = gf::subfield_restrict(p.u, sub);
    auto r = gf::subfield_restrict(p.r, sub);
    auto s = gf::subfield_restrict(p.s, sub);
    auto t = gf::subfield_restrict(p.t, sub);
    if (!u || !r || !s || !t) return std::nullopt;
    return IsoParams{*u, *r, *s, *t};
}

FieldCtx params_field(const IsoParams& p)
{
    const FieldCtx f = p.u.ctx();
    if (!(p.r.ctx() == f) || !(p.s.ctx() == f) || !(p.t.ctx() == f)) {
        throw DomainError("isomorphism parameters live in different fields");
    }
    return f;
}

} // namespace

WeierstrassCurve pullback(const WeierstrassCurve& target, const IsoParams& p)
{
    const auto& f = target.field();
    const auto &a1 = target.a1(), &a2 = target.a2(), &a3 = target.a3(), &a4 = target.a4(), &a6 = target.a6();
    const auto &u = p.u, &r = p.r, &s = p.s, &t = p.t;
    if (u.is_zero()) throw DomainError("isomorphism with u = 0");
    const FieldElem ui = u.inv();
    const FieldElem ui2 = ui * ui, ui3 = ui2 * ui, ui4 = ui2 * ui2, ui6 = ui3 * ui3;
    const FieldElem b1 = ui * (a1 + k(f, 2) * s);
    const FieldElem b2 = ui2 * (a2 - s * a1 + k(f, 3) * r - s * s);
    const FieldElem b3 = ui3 * (a3 + r * a1 + k(f, 2) * t);
    const FieldElem b4 = ui4 * (a4 - s * a3 + k(f, 2) * r * a2 - (t + r * s) * a1 + k(f, 3) * r * r - k(f, 2) * s * t);
    const FieldElem b6 = ui6 * (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1);
    return WeierstrassCurve(f, {b1, b2, b3, b4, b6});
}

WeierstrassCurve transform_coeffs(const WeierstrassCurve& source, const IsoParams& params)
{
    return pullback(source, invert_params(params));
}

IsoParams compose_params(const IsoParams& f, const IsoParams& g)
{
    const FieldElem uf2 = f.u * f.u;
    return {f.u * g.u, uf2 * g.r + f.r, f.u * g.s + f.s, uf2 * f.u * g.t + uf2 * f.s * g.r + f.t};
}

IsoParams invert_params(const IsoParams& f)
{
    const FieldElem ui = f.u.inv();
    const FieldElem ui2 = ui * ui;
    return {ui, -(ui2 * f.r), -(ui * f.s), ui2 * ui * (f.s * f.r - f.t)};
}

CurveIsomorphism::CurveIsomorphism(const WeierstrassCurve& source, const WeierstrassCurve& target, IsoParams params)
    : p_(params)
{
    field_ = params_field(p_);
    if (p_.u.is_zero()) throw DomainError("isomorphism with u = 0");
    source_ = curve::base_change(source, field_);
    target_ = curve::base_change(target, field_);
    if (!(pullback(target_, p_) == source_)) {
        throw DomainError("parameters " + to_string(p_) + " do not map " + curve::to_string(source_) + " onto "
                          + curve::to_string(target_));
    }
}

CurveIsomorphism::CurveIsomorphism(Unchecked, WeierstrassCurve source, WeierstrassCurve target, IsoParams params)
    : field_(params.u.ctx()), source_(std::move(source)), target_(std::move(target)), p_(params)
{
}

CurveIsomorphism CurveIsomorphism::from_params(const WeierstrassCurve& source, IsoParams params)
{
    const FieldCtx f = params_field(params);
    const auto src = curve::base_change(source, f);
    return CurveIsomorphism(src, transform_coeffs(src, params), params);
}

CurveIsomorphism CurveIsomorphism::identity(const WeierstrassCurve& e)
{
    const auto& f = e.field();
    return CurveIsomorphism(Unchecked{}, e, e, {f.one(), f.zero(), f.zero(), f.zero()});
}

bool CurveIsomorphism::is_identity() const
{
    return p_.u.is_one() && p_.r.is_zero() && p_.s.is_zero() && p_.t.is_zero();
}

CurvePoint CurveIsomorphism::apply(const CurvePoint& pt) const
{
    if (pt.infinity) return pt;
    if (!(pt.x.ctx() == field_) || !(pt.y.ctx() == field_)) {
        throw DomainError("point outside " + field_.name());
    }
    const FieldElem u2 = p_.u * p_.u;
    return CurvePoint::affine(u2 * pt.x + p_.r, u2 * p_.u * pt.y + u2 * p_.s * pt.x + p_.t);
}

CurveIsomorphism embed(const CurveIsomorphism& f, const FieldCtx& super)
{
    if (f.field_ == super) return f;
    return CurveIsomorphism(CurveIsomorphism::Unchecked{}, curve::base_change(f.source_, super),
                            curve::base_change(f.target_, super), embed_params(f.p_, super));
}

CurveIsomorphism compose(const CurveIsomorphism& f, const CurveIsomorphism& g)
{
    if (!(f.field() == g.field())) {
        if (f.field().is_subfield_of(g.field())) return compose(embed(f, g.field()), g);
        if (g.field().is_subfield_of(f.field())) return compose(f, embed(g, f.field()));
        throw DomainError("cannot compose isomorphisms over " + f.field().name() + " and " + g.field().name());
    }
    if (!(g.target() == f.source())) throw DomainError("compose: target of g is not the source of f");
    return CurveIsomorphism(CurveIsomorphism::Unchecked{}, g.source_, f.target_, compose_params(f.p_, g.p_));
}

CurveIsomorphism invert(const CurveIsomorphism& f)
{
    return CurveIsomorphism(CurveIsomorphism::Unchecked{}, f.target_, f.source_, invert_params(f.p_));
}

std::optional<WeierstrassCurve> descend(const WeierstrassCurve& e, const FieldCtx& sub)
{
    if (e.field() == sub) return e;
    std::array<FieldElem, 5> a;
    for (std::size_t i = 0; i < 5; ++i) {
        auto c = gf::subfield_restrict(e.coeffs()[i], sub);
        if (!c) return std::nullopt;
        a[i] = *c;
    }
    return WeierstrassCurve(sub, a);
}

CurveIsomorphism galois_apply(const CurveIsomorphism& f, const FieldCtx& base, std::uint64_t k)
{
    if (!base.is_subfield_of(f.field())) {
        throw DomainError(base.name() + " is not a subfield of " + f.field().name());
    }
    if (!descend(f.source(), base) || !descend(f.target(), base)) {
        throw DomainError("galois_apply: curves are not defined over " + base.name());
    }
    const std::uint64_t e = base.n() * k;
    const IsoParams p{gf::frobenius(f.u(), e), gf::frobenius(f.r(), e), gf::frobenius(f.s(), e),
                      gf::frobenius(f.t(), e)};
    return CurveIsomorphism(CurveIsomorphism::Unchecked{}, f.source_, f.target_, p);
}

namespace {

// Candidate (r, s, t) for a fixed u, solving the coefficient relations in order.
// `a` is the target, `b` the source; every candidate is checked afterwards.
std::vector<IsoParams> solve_for_u(const WeierstrassCurve& a, const WeierstrassCurve& b, const FieldElem& u)
{
    const auto& f = a.field();
    const auto p = f.p();
    const FieldElem u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
    std::vector<IsoParams> out;
    if (p >= 5) {
        const FieldElem half = k(f, 2).inv();
        const FieldElem s = (u * b.a1() - a.a1()) * half;
        const FieldElem r = (u2 * b.a2() - a.a2() + s * a.a1() + s * s) / k(f, 3);
        const FieldElem t = (u3 * b.a3() - a.a3() - r * a.a1()) * half;
        out.push_back({u, r, s, t});
        return out;
    }
    if (p == 3) {
        const FieldElem half = k(f, 2).inv();
        const FieldElem s = (u * b.a1() - a.a1()) * half;
        const FieldElem alpha = (u3 * b.a3() - a.a3()) * half;
        const FieldElem beta = -a.a1() * half;
        const FieldElem lin = k(f, 2) * a.a2() - (beta + s) * a.a1() - k(f, 2) * s * beta;
        const FieldElem con = a.a4() - s * a.a3() - alpha * a.a1() - k(f, 2) * s * alpha - u4 * b.a4();
        std::vector<FieldElem> rs;
        if (!lin.is_zero()) {
            rs.push_back(-con / lin);
        } else {
            const std::array<FieldElem, 4> cubic{
                a.a6() - alpha * a.a3() - alpha * alpha - u6 * b.a6(),
                a.a4() - beta * a.a3() - k(f, 2) * alpha * beta - alpha * a.a1(),
                a.a2() - beta * beta - beta * a.a1(),
                f.one(),
            };
            rs = gf::poly_roots(cubic);
        }
        for (const auto& r : rs) out.push_back({u, r, s, alpha + beta * r});
        return out;
    }
    // characteristic 2
    const FieldElem c = u2 * b.a2() + a.a2();
    if (a.a1().is_zero()) {
        if (a.a3().is_zero()) return out;
        const std::array<FieldElem, 3> lin{a.a3(), f.zero(), f.one()};
        const auto ss = gf::additive_roots(lin, a.a4() + c * c + u4 * b.a4());
        const FieldElem a3sq_inv = (a.a3() * a.a3()).inv();
        for (const auto& s : ss) {
            const FieldElem r = c + s * s;
            const FieldElem kk = a.a6() + r * a.a4() + r * r * a.a2() + r * r * r + u6 * b.a6();
            for (const auto& w : gf::artin_schreier_roots(kk * a3sq_inv)) out.push_back({u, r, s, a.a3() * w});
        }
        return out;
    }
    const FieldElem a1inv = a.a1().inv();
    const FieldElem r = (u3 * b.a3() + a.a3()) * a1inv;
    for (const auto& w : gf::artin_schreier_roots((c + r) * a1inv * a1inv)) {
        const FieldElem s = a.a1() * w;
        const FieldElem t = (u4 * b.a4() + a.a4() + s * a.a3() + r * r) * a1inv + r * s;
        out.push_back({u, r, s, t});
    }
    return out;
}

std::pair<WeierstrassCurve, WeierstrassCurve> into_field(const WeierstrassCurve& e1, const WeierstrassCurve& e2,
                                                         const FieldCtx& field)
{
    if (!e1.field().is_subfield_of(field) || !e2.field().is_subfield_of(field)) {
        throw DomainError("curves are not defined over a subfield of " + field.name());
    }
    auto a = curve::base_change(e1, field);
    auto b = curve::base_change(e2, field);
    if (!curve::is_elliptic(a) || !curve::is_elliptic(b)) throw DomainError("isomorphism search on a singular curve");
    return {a, b};
}

} // namespace

std::vector<CurveIsomorphism> find_isomorphisms(const WeierstrassCurve& e1, const WeierstrassCurve& e2,
                                                const FieldCtx& field)
{
    const auto [src, dst] = into_field(e1, e2, field);
    std::vector<CurveIsomorphism> out;
    if (!(curve::j_invariant(src) == curve::j_invariant(dst))) return out;
    const FieldElem ratio = curve::discriminant(dst) / curve::discriminant(src);
    for (const auto& u : gf::nth_roots(ratio, 12)) {
        for (const auto& params : solve_for_u(dst, src, u)) {
            if (pullback(dst, params) == src) out.emplace_back(src, dst, params);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<CurveIsomorphism> find_isomorphisms_exhaustive(const WeierstrassCurve& e1, const WeierstrassCurve& e2,
                                                           const FieldCtx& field)
{
    const auto [src, dst] = into_field(e1, e2, field);
    if (field.q() > 32) throw LimitError("exhaustive isomorphism search over " + field.name());
    const auto elems = gf::enumerate_field(field);
    std::vector<CurveIsomorphism> out;
    for (const auto& u : elems) {
        if (u.is_zero()) continue;
        for (const auto& r : elems) {
            for (const auto& s : elems) {
                for (const auto& t : elems) {
                    const IsoParams params{u, r, s, t};
                    if (pullback(dst, params) == src) out.emplace_back(src, dst, params);
                }
            }
        }
    }
    return out;
}

std::optional<unsigned> minimal_isomorphism_degree(const WeierstrassCurve& e1, const WeierstrassCurve& e2,
                                                   unsigned max_degree, std::uint64_t limit)
{
    if (!(e1.field() == e2.field())) throw DomainError("minimal_isomorphism_degree needs a common base field");
    if (!(curve::j_invariant(e1) == curve::j_invariant(e2))) return std::nullopt;
    const auto& base = e1.field();
    for (unsigned d = 1; d <= max_degree; ++d) {
        const auto field = FieldCtx::create(base.p(), base.n() * d, limit);
        if (!find_isomorphisms(e1, e2, field).empty()) return d;
    }
    return std::nullopt;
}

std::size_t max_aut_order(std::uint64_t p, const FieldElem& j)
{
    if (j.is_zero()) return p == 2 ? 24 : p == 3 ? 12 : 6;
    if (p >= 5 && j == j.ctx().from_int(1728)) return 4;
    return 2;
}

AutGroup::AutGroup(WeierstrassCurve curve, FieldCtx field, std::vector<CurveIsomorphism> elements)
    : curve_(std::move(curve)), field_(field), elems_(std::move(elements))
{
    std::sort(elems_.begin(), elems_.end());
    const std::size_t n = elems_.size();
    cayley_.assign(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            auto idx = index_of(compose_params(elems_[i].params(), elems_[j].params()));
            if (!idx) throw VerificationError("automorphisms are not closed under composition");
            cayley_[i][j] = *idx;
        }
    }
    auto id = index_of(IsoParams{field_.one(), field_.zero(), field_.zero(), field_.zero()});
    if (!id) throw VerificationError("automorphism group without identity");
    identity_ = *id;
}

AutGroup AutGroup::from_table(WeierstrassCurve curve, FieldCtx field, std::vector<CurveIsomorphism> elements,
                              std::vector<std::vector<std::size_t>> cayley)
{
    AutGroup g;
    g.curve_ = std::move(curve);
    g.field_ = field;
    g.elems_ = std::move(elements);
    g.cayley_ = std::move(cayley);
    auto id = g.index_of(IsoParams{field.one(), field.zero(), field.zero(), field.zero()});
    g.identity_ = id.value_or(0);
    return g;
}

std::size_t AutGroup::inverse(std::size_t i) const
{
    for (std::size_t j = 0; j < size(); ++j) {
        if (mul(i, j) == identity_) return j;
    }
    throw VerificationError("element without inverse");
}

std::size_t AutGroup::order_of(std::size_t i) const
{
    std::size_t x = i, ord = 1;
    while (x != identity_) {
        x = mul(i, x);
        if (++ord > size()) throw VerificationError("element of unbounded order");
    }
    return ord;
}

std::optional<std::size_t> AutGroup::index_of(const IsoParams& params) const
{
    auto it = std::lower_bound(elems_.begin(), elems_.end(), params,
                               [](const CurveIsomorphism& e, const IsoParams& p) { return e.params() < p; });
    if (it == elems_.end() || !(it->params() == params)) return std::nullopt;
    return static_cast<std::size_t>(it - elems_.begin());
}

std::optional<std::size_t> AutGroup::index_of(const CurveIsomorphism& f) const
{
    if (f.field().p() != field_.p()) return std::nullopt;
    const auto e = curve::base_change(curve_, f.field());
    if (!(f.source() == e) || !(f.target() == e)) return std::nullopt;
    // every automorphism is defined over field(), so f lives in the common subfield
    const auto common = FieldCtx::create(field_.p(), std::gcd(field_.n(), f.field().n()));
    auto p = restrict_params(f.params(), common);
    if (!p) return std::nullopt;
    return index_of(embed_params(*p, field_));
}

std::size_t AutGroup::minus_one() const
{
    const auto e = curve::base_change(curve_, field_);
    auto idx = index_of(IsoParams{-field_.one(), field_.zero(), -e.a1(), -e.a3()});
    if (!idx) throw VerificationError("-1 missing from the automorphism group");
    return *idx;
}

AutGroup automorphism_group(const WeierstrassCurve& e, std::uint64_t limit)
{
    if (!curve::is_elliptic(e)) throw DomainError("automorphism group of a singular curve");
    const auto& base = e.field();
    const std::size_t target = max_aut_order(base.p(), curve::j_invariant(e));
    const std::vector<unsigned> degrees = base.p() == 2 ? std::vector<unsigned>{1, 2, 3, 4, 6, 8, 12, 24}
                                                        : std::vector<unsigned>{1, 2, 3, 4, 6, 12};
    std::vector<CurveIsomorphism> best;
    FieldCtx best_field;
    std::size_t stale = 0;
    for (unsigned d : degrees) {
        const auto field = FieldCtx::create(base.p(), base.n() * d, limit);
        auto isos = find_isomorphisms(e, e, field);
        if (isos.size() > best.size()) {
            best = std::move(isos);
            best_field = field;
            stale = 0;
        } else if (++stale >= 2) {
            break;
        }
        if (best.size() == target) break;
    }
    return AutGroup(e, best_field, std::move(best));
}

std::optional<std::string> verify_group(const AutGroup& g)
{
    const std::size_t n = g.size();
    if (g.cayley().size() != n) return "Cayley table has the wrong size";
    for (std::size_t i = 0; i < n; ++i) {
        if (g.cayley()[i].size() != n) return "Cayley table has the wrong size";
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t m = g.mul(i, j);
            if (m >= n) return "Cayley entry out of range";
            if (!(compose_params(g[i].params(), g[j].params()) == g[m].params())) {
                return "Cayley entry (" + std::to_string(i) + "," + std::to_string(j) + ") disagrees with composition";
            }
        }
    }
    const std::size_t id = g.identity();
    if (!g[id].is_identity()) return "identity element missing";
    for (std::size_t i = 0; i < n; ++i) {
        if (g.mul(i, id) != i || g.mul(id, i) != i) return "identity is not neutral";
        bool has_inverse = false;
        for (std::size_t j = 0; j < n && !has_inverse; ++j) has_inverse = g.mul(i, j) == id && g.mul(j, i) == id;
        if (!has_inverse) return "element without two-sided inverse";
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) return "multiplication is not associative";
            }
        }
    }
    return std::nullopt;
}

Mask subgroup_closure(const AutGroup& g, Mask m)
{
    m |= Mask{1} << g.identity();
    while (true) {
        Mask next = m;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!(m >> i & 1)) continue;
            for (std::size_t j = 0; j < g.size(); ++j) {
                if (m >> j & 1) next |= Mask{1} << g.mul(i, j);
            }
        }
        if (next == m) return m;
        m = next;
    }
}

std::vector<std::size_t> mask_members(Mask m)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; m; ++i, m >>= 1) {
        if (m & 1) out.push_back(i);
    }
    return out;
}

std::vector<Mask> all_subgroups(const AutGroup& g)
{
    if (g.size() > 32) throw LimitError("subgroup enumeration needs |G| <= 32");
    std::set<Mask> seen{subgroup_closure(g, 0)};
    std::vector<Mask> todo(seen.begin(), seen.end());
    while (!todo.empty()) {
        const Mask h = todo.back();
        todo.pop_back();
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (h >> i & 1) continue;
            const Mask k = subgroup_closure(g, h | Mask{1} << i);
            if (seen.insert(k).second) todo.push_back(k);
        }
    }
    std::vector<Mask> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end(), [](Mask a, Mask b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    return out;
}

bool is_normal(const AutGroup& g, Mask m)
{
    for (std::size_t x = 0; x < g.size(); ++x) {
        const std::size_t xi = g.inverse(x);
        for (std::size_t h : mask_members(m)) {
            if (!(m >> g.mul(g.mul(x, h), xi) & 1)) return false;
        }
    }
    return true;
}

std::optional<Mask> GroupStructure::unique_subgroup(std::size_t order) const
{
    std::optional<Mask> found;
    for (Mask m : subgroups) {
        if (static_cast<std::size_t>(std::popcount(m)) != order) continue;
        if (found) return std::nullopt;
        found = m;
    }
    return found;
}

GroupStructure group_structure(const AutGroup& g)
{
    GroupStructure st;
    const std::size_t n = g.size();
    st.order = n;
    st.abelian = true;
    for (std::size_t i = 0; i < n; ++i) {
        st.element_orders.push_back(g.order_of(i));
        if (st.element_orders.back() == n) st.cyclic = true;
        bool central = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (g.mul(i, j) != g.mul(j, i)) {
                central = false;
                st.abelian = false;
            }
        }
        if (central) st.center.push_back(i);
    }
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        std::set<std::size_t> cls;
        for (std::size_t x = 0; x < n; ++x) cls.insert(g.mul(g.mul(x, i), g.inverse(x)));
        for (std::size_t c : cls) done[c] = true;
        st.conjugacy_classes.emplace_back(cls.begin(), cls.end());
    }
    st.subgroups = all_subgroups(g);
    for (Mask m : st.subgroups) {
        const auto size = static_cast<std::size_t>(std::popcount(m));
        ++st.subgroup_counts[size];
        if (is_normal(g, m)) ++st.normal_subgroup_counts[size];
    }
    st.minus_one = g.minus_one();
    return st;
}

std::string to_string(const IsoParams& p)
{
    return "(" + gf::to_string(p.u) + "," + gf::to_string(p.r) + "," + gf::to_string(p.s) + "," + gf::to_string(p.t)
           + ")";
}

std::string to_string(const CurveIsomorphism& f) { return to_string(f.params()) + "@" + f.field().name(); }

} // namespace twistlab::autmap
