#include "twistlab/curve.hpp"

#include <algorithm>

namespace twistlab::curve {

WeierstrassCurve::WeierstrassCurve(FieldCtx field, std::array<FieldElem, 5> a) : field_(field), a_(a)
{
    for (const auto& c : a_) {
        if (!(c.ctx() == field_)) throw DomainError("curve coefficient outside " + field_.name());
    }
}

WeierstrassCurve WeierstrassCurve::from_ints(FieldCtx field, std::array<std::int64_t, 5> a)
{
    return WeierstrassCurve(field, {field.from_int(a[0]), field.from_int(a[1]), field.from_int(a[2]),
                                    field.from_int(a[3]), field.from_int(a[4])});
}

WeierstrassCurve WeierstrassCurve::short_form(FieldCtx field, FieldElem a4, FieldElem a6)
{
    return WeierstrassCurve(field, {field.zero(), field.zero(), field.zero(), a4, a6});
}

Invariants invariants(const WeierstrassCurve& e)
{
    const auto& f = e.field();
    auto k = [&f](std::int64_t v) { return f.from_int(v); };
    const auto &a1 = e.a1(), &a2 = e.a2(), &a3 = e.a3(), &a4 = e.a4(), &a6 = e.a6();
    Invariants inv;
    inv.b2 = a1 * a1 + k(4) * a2;
    inv.b4 = k(2) * a4 + a1 * a3;
    inv.b6 = a3 * a3 + k(4) * a6;
    inv.b8 = a1 * a1 * a6 + k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    inv.c4 = inv.b2 * inv.b2 - k(24) * inv.b4;
    inv.c6 = -(inv.b2 * inv.b2 * inv.b2) + k(36) * inv.b2 * inv.b4 - k(216) * inv.b6;
    inv.discriminant = -(inv.b2 * inv.b2 * inv.b8) - k(8) * inv.b4 * inv.b4 * inv.b4 - k(27) * inv.b6 * inv.b6
                       + k(9) * inv.b2 * inv.b4 * inv.b6;
    return inv;
}

FieldElem discriminant(const WeierstrassCurve& e) { return invariants(e).discriminant; }

bool is_elliptic(const WeierstrassCurve& e) { return !discriminant(e).is_zero(); }

FieldElem j_invariant(const WeierstrassCurve& e)
{
    const auto inv = invariants(e);
    if (inv.discriminant.is_zero()) throw DomainError("j-invariant of a singular curve " + to_string(e));
    return inv.c4 * inv.c4 * inv.c4 / inv.discriminant;
}

bool is_on_curve(const WeierstrassCurve& e, const CurvePoint& pt)
{
    if (pt.infinity) return true;
    if (!(pt.x.ctx() == e.field()) || !(pt.y.ctx() == e.field())) {
        throw DomainError("point coordinates outside " + e.field().name());
    }
    const auto &x = pt.x, &y = pt.y;
    const auto lhs = y * y + e.a1() * x * y + e.a3() * y;
    const auto rhs = x * x * x + e.a2() * x * x + e.a4() * x + e.a6();
    return lhs == rhs;
}

namespace {

// Points above one x: y^2 + h y = f with h = a1 x + a3.
template <typename Emit>
void solve_column(const WeierstrassCurve& e, const FieldElem& x, bool count_only, Emit&& emit)
{
    const auto& field = e.field();
    const FieldElem h = e.a1() * x + e.a3();
    const FieldElem f = x * x * x + e.a2() * x * x + e.a4() * x + e.a6();
    if (field.p() == 2) {
        if (h.is_zero()) {
            emit(count_only ? f : *gf::sqrt(f));
            return;
        }
        const FieldElem c = f / (h * h);
        if (count_only) {
            if (gf::trace(c).is_zero()) {
                emit(c);
                emit(c);
            }
            return;
        }
        for (const auto& w : gf::artin_schreier_roots(c)) emit(h * w);
        return;
    }
    // (2y + h)^2 = h^2 + 4f
    const FieldElem disc = h * h + field.from_int(4) * f;
    if (count_only) {
        if (disc.is_zero()) {
            emit(disc);
        } else if (gf::is_square(disc)) {
            emit(disc);
            emit(disc);
        }
        return;
    }
    const auto root = gf::sqrt(disc);
    if (!root) return;
    const FieldElem half = field.from_int(2).inv();
    if (root->is_zero()) {
        emit(-h * half);
        return;
    }
    emit((-h + *root) * half);
    emit((-h - *root) * half);
}

void check_limit(const WeierstrassCurve& e, std::uint64_t limit)
{
    if (e.field().q() > limit) throw LimitError("point enumeration over " + e.field().name() + " exceeds limit");
}

} // namespace

std::vector<CurvePoint> enumerate_points(const WeierstrassCurve& e, std::uint64_t limit)
{
    check_limit(e, limit);
    std::vector<CurvePoint> pts{CurvePoint::at_infinity()};
    const auto& field = e.field();
    for (std::uint64_t i = 0; i < field.q(); ++i) {
        const FieldElem x = field.from_index(i);
        std::vector<FieldElem> ys;
        solve_column(e, x, false, [&ys](const FieldElem& y) { ys.push_back(y); });
        std::sort(ys.begin(), ys.end());
        for (const auto& y : ys) pts.push_back(CurvePoint::affine(x, y));
    }
    return pts;
}

std::uint64_t point_count(const WeierstrassCurve& e, std::uint64_t limit)
{
    check_limit(e, limit);
    std::uint64_t count = 1;
    const auto& field = e.field();
    for (std::uint64_t i = 0; i < field.q(); ++i) {
        solve_column(e, field.from_index(i), true, [&count](const FieldElem&) { ++count; });
    }
    return count;
}

WeierstrassCurve base_change(const WeierstrassCurve& e, const FieldCtx& super)
{
    if (e.field() == super) return e;
    std::array<FieldElem, 5> a;
    for (std::size_t i = 0; i < 5; ++i) a[i] = gf::subfield_embed(e.coeffs()[i], super);
    return WeierstrassCurve(super, a);
}

bool is_supersingular(const WeierstrassCurve& e, std::uint64_t limit)
{
    if (!is_elliptic(e)) throw DomainError("supersingularity of a singular curve");
    const auto q = static_cast<std::int64_t>(e.field().q());
    const auto trace = q + 1 - static_cast<std::int64_t>(point_count(e, limit));
    return trace % static_cast<std::int64_t>(e.field().p()) == 0;
}

std::string to_string(const WeierstrassCurve& e)
{
    std::string s = "[";
    for (std::size_t i = 0; i < 5; ++i) {
        if (i) s += ',';
        s += gf::to_string(e.coeffs()[i]);
    }
    return s + "]";
}

WeierstrassCurve parse_curve(const FieldCtx& field, std::string_view text)
{
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
        throw DomainError("curve literal must look like [a1,a2,a3,a4,a6]");
    }
    text = text.substr(1, text.size() - 2);
    std::vector<std::string> tokens;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        tokens.emplace_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    std::vector<FieldElem> coeffs;
    for (std::size_t i = 0; i < tokens.size();) {
        if (tokens[i].find(':') == std::string::npos) {
            coeffs.push_back(gf::parse_elem(field, tokens[i]));
            ++i;
            continue;
        }
        std::string joined = tokens[i];
        const std::size_t take = field.n();
        if (i + take > tokens.size()) throw DomainError("truncated element in curve literal");
        for (std::size_t k = 1; k < take; ++k) joined += "," + tokens[i + k];
        coeffs.push_back(gf::parse_elem(field, joined));
        i += take;
    }
    if (coeffs.size() != 5) throw DomainError("curve literal needs exactly five coefficients");
    return WeierstrassCurve(field, {coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]});
}

namespace {

std::string coeff_term(const FieldElem& c, const std::string& mono)
{
    const std::string s = gf::to_string(c);
    if (mono.empty()) return s;
    if (c.is_one()) return mono;
    return (c.ctx().n() == 1 ? s : "(" + s + ")") + mono;
}

} // namespace

std::string equation(const WeierstrassCurve& e)
{
    std::string lhs = "y^2";
    if (!e.a1().is_zero()) lhs += " + " + coeff_term(e.a1(), "xy");
    if (!e.a3().is_zero()) lhs += " + " + coeff_term(e.a3(), "y");
    std::string rhs = "x^3";
    if (!e.a2().is_zero()) rhs += " + " + coeff_term(e.a2(), "x^2");
    if (!e.a4().is_zero()) rhs += " + " + coeff_term(e.a4(), "x");
    if (!e.a6().is_zero()) rhs += " + " + coeff_term(e.a6(), "");
    return lhs + " = " + rhs;
}

} // namespace twistlab::curve
