#include "twistlab/gf.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <functional>
#include <tuple>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <unordered_map>

namespace twistlab::gf {

namespace detail {

struct FieldData {
    std::uint64_t p = 0;
    unsigned n = 0;
    std::uint64_t q = 0;
    unsigned bits = 0;
    std::uint64_t mask = 0;
    std::vector<std::uint32_t> modulus;
    std::uint64_t mod2 = 0; // p == 2 only: modulus as a bitmask, including x^n
    std::vector<std::uint64_t> q1_factors;

    mutable std::once_flag prim_once;
    mutable std::uint64_t prim = 0;
    mutable std::once_flag nonres_once;
    mutable std::uint64_t nonres = 0;

    std::uint32_t digit(std::uint64_t v, unsigned i) const
    {
        return static_cast<std::uint32_t>((v >> (i * bits)) & mask);
    }
};

} // namespace detail

using detail::FieldData;

namespace {

// ---------------------------------------------------------------------------
// Polynomials over F_p (ascending coefficients, trimmed).

using Poly = std::vector<std::uint32_t>;

std::uint64_t inv_mod_p(std::uint64_t a, std::uint64_t p)
{
    std::uint64_t result = 1, base = a % p, e = p - 2;
    while (e) {
        if (e & 1) result = static_cast<std::uint64_t>(static_cast<unsigned __int128>(result) * base % p);
        base = static_cast<std::uint64_t>(static_cast<unsigned __int128>(base) * base % p);
        e >>= 1;
    }
    return result;
}

void trim(Poly& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, std::uint64_t p)
{
    trim(a);
    const std::size_t dm = m.size() - 1;
    const std::uint64_t lead_inv = inv_mod_p(m.back(), p);
    while (a.size() >= m.size()) {
        const std::uint64_t c = a.back() * lead_inv % p;
        const std::size_t shift = a.size() - 1 - dm;
        for (std::size_t j = 0; j <= dm; ++j) {
            a[shift + j] = static_cast<std::uint32_t>((a[shift + j] + (p - c) * m[j]) % p);
        }
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p)
{
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint64_t> prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
        }
    }
    Poly r(prod.begin(), prod.end());
    return poly_mod(std::move(r), m, p);
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& m, std::uint64_t p)
{
    Poly result{1};
    base = poly_mod(std::move(base), m, p);
    while (e) {
        if (e & 1) result = poly_mulmod(result, base, m, p);
        base = poly_mulmod(base, base, m, p);
        e >>= 1;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Linear algebra over F_p.

struct LinearSolution {
    bool solvable = false;
    std::vector<std::uint32_t> particular;
    std::vector<std::vector<std::uint32_t>> kernel;
};

// rows x cols system A x = b.
LinearSolution solve_mod_p(std::vector<std::vector<std::uint32_t>> a, std::vector<std::uint32_t> b, std::uint64_t p)
{
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        std::swap(b[piv], b[r]);
        const std::uint64_t inv = inv_mod_p(a[r][c], p);
        for (auto& x : a[r]) x = static_cast<std::uint32_t>(x * inv % p);
        b[r] = static_cast<std::uint32_t>(b[r] * inv % p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            const std::uint64_t f = a[i][c];
            for (std::size_t j = 0; j < cols; ++j) {
                a[i][j] = static_cast<std::uint32_t>((a[i][j] + (p - f) * a[r][j]) % p);
            }
            b[i] = static_cast<std::uint32_t>((b[i] + (p - f) * b[r]) % p);
        }
        pivot_cols.push_back(c);
        ++r;
    }
    LinearSolution sol;
    for (std::size_t i = r; i < rows; ++i) {
        if (b[i] != 0) return sol;
    }
    sol.solvable = true;
    sol.particular.assign(cols, 0);
    for (std::size_t i = 0; i < r; ++i) sol.particular[pivot_cols[i]] = b[i];
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<std::uint32_t> v(cols, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < r; ++i) {
            v[pivot_cols[i]] = static_cast<std::uint32_t>((p - a[i][free]) % p);
        }
        sol.kernel.push_back(std::move(v));
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Packed-word arithmetic.

std::uint64_t pack_digits(const FieldData& f, const std::uint64_t* digits)
{
    std::uint64_t v = 0;
    for (unsigned i = 0; i < f.n; ++i) v |= (digits[i] % f.p) << (i * f.bits);
    return v;
}

std::uint64_t add_packed(const FieldData& f, std::uint64_t a, std::uint64_t b)
{
    if (f.p == 2) return a ^ b;
    if (f.n == 1) {
        const std::uint64_t s = a + b;
        return s >= f.p ? s - f.p : s;
    }
    std::uint64_t v = 0;
    for (unsigned i = 0; i < f.n; ++i) {
        std::uint64_t s = std::uint64_t{f.digit(a, i)} + f.digit(b, i);
        if (s >= f.p) s -= f.p;
        v |= s << (i * f.bits);
    }
    return v;
}

std::uint64_t neg_packed(const FieldData& f, std::uint64_t a)
{
    if (f.p == 2) return a;
    std::uint64_t v = 0;
    for (unsigned i = 0; i < f.n; ++i) {
        const std::uint64_t d = f.digit(a, i);
        v |= (d == 0 ? 0 : f.p - d) << (i * f.bits);
    }
    return v;
}

std::uint64_t mul_packed(const FieldData& f, std::uint64_t a, std::uint64_t b)
{
    if (f.n == 1) return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % f.p);
    if (f.p == 2) {
        std::uint64_t prod = 0;
        std::uint64_t x = a;
        for (unsigned i = 0; x; ++i, x >>= 1) {
            if (x & 1) prod ^= b << i;
        }
        for (int i = 2 * static_cast<int>(f.n) - 2; i >= static_cast<int>(f.n); --i) {
            if ((prod >> i) & 1) prod ^= f.mod2 << (i - f.n);
        }
        return prod;
    }
    const unsigned n = f.n;
    std::uint64_t da[64], db[64], prod[128] = {};
    for (unsigned i = 0; i < n; ++i) {
        da[i] = f.digit(a, i);
        db[i] = f.digit(b, i);
    }
    for (unsigned i = 0; i < n; ++i) {
        if (!da[i]) continue;
        for (unsigned j = 0; j < n; ++j) prod[i + j] += da[i] * db[j];
    }
    for (int i = 2 * static_cast<int>(n) - 2; i >= static_cast<int>(n); --i) {
        const std::uint64_t c = prod[i] % f.p;
        if (!c) continue;
        const std::uint64_t nc = f.p - c;
        for (unsigned j = 0; j < n; ++j) prod[i - n + j] += nc * f.modulus[j];
    }
    return pack_digits(f, prod);
}

std::uint64_t pow_packed(const FieldData& f, std::uint64_t a, std::uint64_t e)
{
    std::uint64_t result = 1, base = a;
    while (e) {
        if (e & 1) result = mul_packed(f, result, base);
        base = mul_packed(f, base, base);
        e >>= 1;
    }
    return result;
}

const FieldData& need(const FieldData* f)
{
    if (!f) throw DomainError("operation on an uninitialized field element");
    return *f;
}

const FieldData& common(const FieldData* a, const FieldData* b)
{
    if (a != b) throw DomainError("arithmetic between elements of different fields");
    return need(a);
}

std::vector<std::uint64_t> factor(std::uint64_t n)
{
    std::vector<std::uint64_t> fs;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

// ---------------------------------------------------------------------------
// Registry of interned fields.

std::mutex& registry_mutex()
{
    static std::mutex m;
    return m;
}

std::map<std::pair<std::uint64_t, unsigned>, std::unique_ptr<FieldData>>& registry()
{
    static std::map<std::pair<std::uint64_t, unsigned>, std::unique_ptr<FieldData>> r;
    return r;
}

Poly smallest_irreducible(std::uint64_t p, unsigned n)
{
    Poly f(n + 1, 0);
    f[n] = 1;
    if (n == 1) return f; // x
    std::uint64_t count = 1;
    for (unsigned i = 0; i < n; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::uint64_t v = idx;
        for (unsigned i = 0; i < n; ++i) {
            f[i] = static_cast<std::uint32_t>(v % p);
            v /= p;
        }
        if (f[0] == 0) continue;
        if (is_irreducible_mod_p(f, p)) return f;
    }
    throw VerificationError("no irreducible polynomial found");
}

} // namespace

bool is_prime(std::uint64_t p)
{
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

bool is_irreducible_mod_p(std::span<const std::uint32_t> poly, std::uint64_t p)
{
    Poly f(poly.begin(), poly.end());
    trim(f);
    if (f.size() < 2) return false;
    const std::size_t n = f.size() - 1;
    if (n == 1) return true;
    // Ben-Or: f is irreducible iff gcd(f, x^(p^i) - x) = 1 for i <= n/2.
    Poly h{0, 1};
    for (std::size_t i = 1; i <= n / 2; ++i) {
        h = poly_powmod(h, p, f, p);
        Poly diff = h;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = static_cast<std::uint32_t>((diff[1] + p - 1) % p);
        trim(diff);
        if (diff.empty()) return false;
        if (poly_gcd(f, diff, p).size() > 1) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// FieldCtx

FieldCtx FieldCtx::create(std::uint64_t p, unsigned n, std::uint64_t limit)
{
    if (!is_prime(p)) throw DomainError("characteristic " + std::to_string(p) + " is not prime");
    if (n == 0) throw DomainError("extension degree must be positive");
    std::uint64_t q = 1;
    for (unsigned i = 0; i < n; ++i) {
        if (q > limit / p) {
            throw LimitError("field " + std::to_string(p) + "^" + std::to_string(n) + " exceeds the size limit "
                             + std::to_string(limit));
        }
        q *= p;
    }
    if (q > limit) {
        throw LimitError("field " + std::to_string(p) + "^" + std::to_string(n) + " exceeds the size limit "
                         + std::to_string(limit));
    }
    std::lock_guard lock(registry_mutex());
    auto& reg = registry();
    auto it = reg.find({p, n});
    if (it != reg.end()) return FieldCtx(it->second.get());

    auto d = std::make_unique<FieldData>();
    d->p = p;
    d->n = n;
    d->q = q;
    d->bits = (p == 2) ? 1 : static_cast<unsigned>(std::bit_width(p - 1));
    if (d->bits * n > 64 || (p == 2 && n > 32)) {
        throw LimitError("field element does not fit the packed representation");
    }
    d->mask = (d->bits == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << d->bits) - 1);
    d->modulus = smallest_irreducible(p, n);
    if (p == 2) {
        for (unsigned i = 0; i <= n; ++i) {
            if (d->modulus[i]) d->mod2 |= std::uint64_t{1} << i;
        }
    }
    d->q1_factors = factor(q - 1);
    const FieldData* raw = d.get();
    reg.emplace(std::make_pair(p, n), std::move(d));
    return FieldCtx(raw);
}

std::uint64_t FieldCtx::p() const { return need(d_).p; }
unsigned FieldCtx::n() const { return need(d_).n; }
std::uint64_t FieldCtx::q() const { return need(d_).q; }
const std::vector<std::uint32_t>& FieldCtx::modulus() const { return need(d_).modulus; }

std::string FieldCtx::name() const { return std::to_string(p()) + "^" + std::to_string(n()); }

FieldElem FieldCtx::zero() const { return FieldElem(&need(d_), 0); }
FieldElem FieldCtx::one() const { return FieldElem(&need(d_), 1); }

FieldElem FieldCtx::from_int(std::int64_t v) const
{
    const auto& f = need(d_);
    const auto p = static_cast<std::int64_t>(f.p);
    std::int64_t r = v % p;
    if (r < 0) r += p;
    return FieldElem(&f, static_cast<std::uint64_t>(r));
}

FieldElem FieldCtx::generator() const
{
    const auto& f = need(d_);
    if (f.n == 1) return FieldElem(&f, 0); // the root of the modulus x
    return FieldElem(&f, std::uint64_t{1} << f.bits);
}

FieldElem FieldCtx::from_coeffs(std::span<const std::int64_t> coeffs) const
{
    const auto& f = need(d_);
    if (coeffs.size() > f.n) throw DomainError("too many coefficients for " + name());
    std::uint64_t digits[64] = {};
    const auto p = static_cast<std::int64_t>(f.p);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        std::int64_t r = coeffs[i] % p;
        if (r < 0) r += p;
        digits[i] = static_cast<std::uint64_t>(r);
    }
    return FieldElem(&f, pack_digits(f, digits));
}

FieldElem FieldCtx::from_index(std::uint64_t index) const
{
    const auto& f = need(d_);
    if (index >= f.q) throw DomainError("element index out of range");
    if (f.p == 2) return FieldElem(&f, index);
    std::uint64_t digits[64] = {};
    for (unsigned i = 0; i < f.n; ++i) {
        digits[i] = index % f.p;
        index /= f.p;
    }
    return FieldElem(&f, pack_digits(f, digits));
}

bool FieldCtx::is_subfield_of(const FieldCtx& super) const
{
    return p() == super.p() && super.n() % n() == 0;
}

// ---------------------------------------------------------------------------
// FieldElem

std::uint64_t FieldElem::index() const
{
    const auto& f = need(f_);
    if (f.p == 2) return v_;
    std::uint64_t idx = 0;
    for (int i = static_cast<int>(f.n) - 1; i >= 0; --i) idx = idx * f.p + f.digit(v_, i);
    return idx;
}

std::vector<std::uint32_t> FieldElem::coeffs() const
{
    const auto& f = need(f_);
    std::vector<std::uint32_t> c(f.n);
    for (unsigned i = 0; i < f.n; ++i) c[i] = f.digit(v_, i);
    return c;
}

bool FieldElem::is_one() const { return v_ == 1; }

FieldElem FieldElem::operator+(const FieldElem& o) const
{
    const auto& f = common(f_, o.f_);
    return FieldElem(&f, add_packed(f, v_, o.v_));
}

FieldElem FieldElem::operator-(const FieldElem& o) const
{
    const auto& f = common(f_, o.f_);
    return FieldElem(&f, add_packed(f, v_, neg_packed(f, o.v_)));
}

FieldElem FieldElem::operator-() const
{
    const auto& f = need(f_);
    return FieldElem(&f, neg_packed(f, v_));
}

FieldElem FieldElem::operator*(const FieldElem& o) const
{
    const auto& f = common(f_, o.f_);
    return FieldElem(&f, mul_packed(f, v_, o.v_));
}

FieldElem FieldElem::operator/(const FieldElem& o) const { return *this * o.inv(); }

FieldElem FieldElem::inv() const
{
    const auto& f = need(f_);
    if (v_ == 0) throw DomainError("inversion of zero");
    return FieldElem(&f, pow_packed(f, v_, f.q - 2));
}

FieldElem FieldElem::pow(std::int64_t e) const
{
    const auto& f = need(f_);
    if (e == 0) return FieldElem(&f, 1);
    if (v_ == 0) {
        if (e < 0) throw DomainError("negative power of zero");
        return *this;
    }
    const std::uint64_t order = f.q - 1;
    std::uint64_t k;
    if (e > 0) {
        k = static_cast<std::uint64_t>(e) % order;
    } else {
        const std::uint64_t m = static_cast<std::uint64_t>(-(e + 1)) % order + 1;
        k = (order - m % order) % order;
    }
    return FieldElem(&f, pow_packed(f, v_, k));
}

std::strong_ordering FieldElem::operator<=>(const FieldElem& o) const
{
    if (f_ != o.f_) {
        const auto& a = need(f_);
        const auto& b = need(o.f_);
        if (auto c = a.p <=> b.p; c != 0) return c;
        if (auto c = a.n <=> b.n; c != 0) return c;
    }
    return v_ <=> o.v_;
}

// ---------------------------------------------------------------------------
// Frobenius, squares, traces.

FieldElem frobenius(const FieldElem& e, std::uint64_t k)
{
    const auto& f = need(e.ctx().data());
    k %= f.n;
    std::uint64_t v = e.packed();
    for (std::uint64_t i = 0; i < k; ++i) v = pow_packed(f, v, f.p);
    return FieldElem(&f, v);
}

FieldElem trace(const FieldElem& e)
{
    const auto& f = need(e.ctx().data());
    FieldElem acc = e.ctx().zero();
    FieldElem cur = e;
    for (unsigned i = 0; i < f.n; ++i) {
        acc += cur;
        cur = FieldElem(&f, pow_packed(f, cur.packed(), f.p));
    }
    return acc;
}

bool is_square(const FieldElem& e)
{
    const auto& f = need(e.ctx().data());
    if (f.p == 2 || e.is_zero()) return true;
    return pow_packed(f, e.packed(), (f.q - 1) / 2) == 1;
}

namespace {

std::uint64_t non_residue(const FieldData& f)
{
    std::call_once(f.nonres_once, [&f] {
        FieldCtx ctx(&f);
        for (std::uint64_t i = 1; i < f.q; ++i) {
            FieldElem c = ctx.from_index(i);
            if (!is_square(c)) {
                f.nonres = c.packed();
                return;
            }
        }
    });
    return f.nonres;
}

} // namespace

std::optional<FieldElem> sqrt(const FieldElem& e)
{
    const auto& f = need(e.ctx().data());
    if (e.is_zero()) return e;
    if (f.p == 2) return frobenius(e, f.n - 1);
    if (!is_square(e)) return std::nullopt;
    // Tonelli-Shanks.
    std::uint64_t odd = f.q - 1;
    unsigned s = 0;
    while ((odd & 1) == 0) {
        odd >>= 1;
        ++s;
    }
    std::uint64_t z = pow_packed(f, non_residue(f), odd);
    std::uint64_t x = pow_packed(f, e.packed(), (odd + 1) / 2);
    std::uint64_t t = pow_packed(f, e.packed(), odd);
    unsigned m = s;
    while (t != 1) {
        unsigned i = 0;
        std::uint64_t t2 = t;
        while (t2 != 1) {
            t2 = mul_packed(f, t2, t2);
            ++i;
        }
        std::uint64_t b = z;
        for (unsigned j = 0; j + i + 1 < m; ++j) b = mul_packed(f, b, b);
        x = mul_packed(f, x, b);
        z = mul_packed(f, b, b);
        t = mul_packed(f, t, z);
        m = i;
    }
    FieldElem r(&f, x);
    FieldElem nr = -r;
    return std::min(r, nr);
}

// ---------------------------------------------------------------------------
// Root finding.

namespace {

std::vector<std::vector<std::uint32_t>> linear_map_matrix(const FieldCtx& ctx,
                                                          const std::function<FieldElem(const FieldElem&)>& map)
{
    const unsigned n = ctx.n();
    std::vector<std::vector<std::uint32_t>> a(n, std::vector<std::uint32_t>(n, 0));
    std::vector<std::int64_t> basis(n, 0);
    for (unsigned j = 0; j < n; ++j) {
        std::fill(basis.begin(), basis.end(), 0);
        basis[j] = 1;
        const auto image = map(ctx.from_coeffs(basis)).coeffs();
        for (unsigned i = 0; i < n; ++i) a[i][j] = image[i];
    }
    return a;
}

std::vector<FieldElem> affine_solutions(const FieldCtx& ctx, const LinearSolution& sol)
{
    std::vector<FieldElem> out;
    if (!sol.solvable) return out;
    const std::uint64_t p = ctx.p();
    const std::size_t k = sol.kernel.size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= p;
    std::vector<std::uint64_t> counter(k, 0);
    std::vector<std::int64_t> v(ctx.n());
    for (std::uint64_t it = 0; it < total; ++it) {
        for (unsigned i = 0; i < ctx.n(); ++i) {
            std::uint64_t acc = sol.particular[i];
            for (std::size_t j = 0; j < k; ++j) acc += counter[j] * sol.kernel[j][i];
            v[i] = static_cast<std::int64_t>(acc % p);
        }
        out.push_back(ctx.from_coeffs(v));
        for (std::size_t j = 0; j < k; ++j) {
            if (++counter[j] < p) break;
            counter[j] = 0;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m)
{
    if (m == 1) return 0;
    __int128 t = 0, new_t = 1, r = m, new_r = a % m;
    while (new_r != 0) {
        const __int128 quot = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - quot * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - quot * new_r);
    }
    if (t < 0) t += m;
    return static_cast<std::uint64_t>(t);
}

// Baby-step giant-step discrete log to the primitive element.
std::uint64_t discrete_log(const FieldElem& c)
{
    const auto& f = need(c.ctx().data());
    const std::uint64_t order = f.q - 1;
    const std::uint64_t gamma = primitive_element(c.ctx()).packed();
    const auto m = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(order))));
    std::unordered_map<std::uint64_t, std::uint64_t> baby;
    baby.reserve(m * 2);
    std::uint64_t cur = 1;
    for (std::uint64_t j = 0; j < m; ++j) {
        baby.emplace(cur, j);
        cur = mul_packed(f, cur, gamma);
    }
    // giant step factor gamma^(-m)
    const std::uint64_t factor = pow_packed(f, pow_packed(f, gamma, m), f.q - 2);
    std::uint64_t y = c.packed();
    for (std::uint64_t i = 0; i <= m; ++i) {
        if (auto it = baby.find(y); it != baby.end()) return (i * m + it->second) % order;
        y = mul_packed(f, y, factor);
    }
    throw VerificationError("discrete logarithm not found");
}

FieldElem eval_poly(std::span<const FieldElem> coeffs, const FieldElem& x)
{
    FieldElem acc = x.ctx().zero();
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

bool is_power_of(std::uint64_t v, std::uint64_t p)
{
    while (v > 1) {
        if (v % p) return false;
        v /= p;
    }
    return v == 1;
}

} // namespace

FieldElem primitive_element(const FieldCtx& ctx)
{
    const auto& f = need(ctx.data());
    std::call_once(f.prim_once, [&f] {
        for (std::uint64_t i = 1; i < f.q; ++i) {
            const std::uint64_t c = FieldCtx(&f).from_index(i).packed();
            bool ok = true;
            for (auto l : f.q1_factors) {
                if (pow_packed(f, c, (f.q - 1) / l) == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                f.prim = c;
                return;
            }
        }
        f.prim = 1; // q = 2
    });
    return FieldElem(&f, f.prim);
}

std::vector<FieldElem> additive_roots(std::span<const FieldElem> coeffs, const FieldElem& constant)
{
    const FieldCtx ctx = constant.ctx();
    for (const auto& c : coeffs) {
        if (!(c.ctx() == ctx)) throw DomainError("additive_roots: mixed fields");
    }
    auto map = [&](const FieldElem& x) {
        FieldElem acc = ctx.zero();
        FieldElem cur = x;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            acc += coeffs[i] * cur;
            cur = frobenius(cur, 1);
        }
        return acc;
    };
    auto a = linear_map_matrix(ctx, map);
    const auto rhs = (-constant).coeffs();
    return affine_solutions(ctx, solve_mod_p(std::move(a), rhs, ctx.p()));
}

std::vector<FieldElem> artin_schreier_roots(const FieldElem& c)
{
    const FieldCtx ctx = c.ctx();
    if (ctx.p() != 2 && ctx.p() != 3) throw DomainError("Artin-Schreier solver needs characteristic 2 or 3");
    const FieldElem coeffs[] = {-ctx.one(), ctx.one()};
    return additive_roots(coeffs, -c);
}

std::vector<FieldElem> nth_roots(const FieldElem& c, std::uint64_t m)
{
    const FieldCtx ctx = c.ctx();
    const auto& f = need(ctx.data());
    if (m == 0) {
        if (!c.is_one()) return {};
        std::vector<FieldElem> all = enumerate_field(ctx);
        all.erase(all.begin());
        return all;
    }
    if (c.is_zero()) return {c};
    const std::uint64_t order = f.q - 1;
    const std::uint64_t g = std::gcd(m, order);
    const std::uint64_t log = discrete_log(c);
    if (log % g) return {};
    const std::uint64_t reduced = order / g;
    const std::uint64_t y0 = static_cast<std::uint64_t>(static_cast<unsigned __int128>(log / g)
                                                        * mod_inverse((m / g) % reduced, reduced) % (reduced ? reduced : 1));
    const FieldElem gamma = primitive_element(ctx);
    std::vector<FieldElem> out;
    FieldElem x = gamma.pow(static_cast<std::int64_t>(y0));
    const FieldElem step = gamma.pow(static_cast<std::int64_t>(reduced));
    for (std::uint64_t j = 0; j < g; ++j) {
        out.push_back(x);
        x *= step;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<FieldElem> poly_roots(std::span<const FieldElem> coeffs_in)
{
    std::vector<FieldElem> coeffs(coeffs_in.begin(), coeffs_in.end());
    while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    if (coeffs.empty()) throw DomainError("poly_roots: zero polynomial");
    const FieldCtx ctx = coeffs.front().ctx();
    for (const auto& c : coeffs) {
        if (!(c.ctx() == ctx)) throw DomainError("poly_roots: mixed fields");
    }
    if (coeffs.size() == 1) return {};

    std::vector<FieldElem> out;
    // Factor out x^k.
    std::size_t low = 0;
    while (coeffs[low].is_zero()) ++low;
    if (low > 0) {
        out.push_back(ctx.zero());
        coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(low));
    }
    const std::size_t deg = coeffs.size() - 1;
    if (deg > 0) {
        const FieldElem lead_inv = coeffs.back().inv();
        for (auto& c : coeffs) c *= lead_inv;
        const std::uint64_t p = ctx.p();

        std::vector<FieldElem> found;
        bool binomial = true, additive = true;
        for (std::size_t i = 1; i < deg; ++i) {
            if (!coeffs[i].is_zero()) {
                binomial = false;
                if (!is_power_of(i, p)) additive = false;
            }
        }
        if (!is_power_of(deg, p)) additive = false;

        if (deg == 1) {
            found.push_back(-coeffs[0]);
        } else if (binomial) {
            found = nth_roots(-coeffs[0], deg);
        } else if (additive) {
            std::vector<FieldElem> lin;
            for (std::uint64_t e = 1; e <= deg; e *= p) lin.push_back(coeffs[e]);
            found = additive_roots(lin, coeffs[0]);
        } else if (deg == 2 && p != 2) {
            const FieldElem half_b = coeffs[1] / ctx.from_int(2);
            if (auto s = sqrt(half_b * half_b - coeffs[0])) {
                found.push_back(-half_b + *s);
                found.push_back(-half_b - *s);
            }
        } else {
            if (ctx.q() > kSplitSearchLimit) throw LimitError("poly_roots: field too large for exhaustive scan");
            for (std::uint64_t i = 0; i < ctx.q(); ++i) {
                const FieldElem x = ctx.from_index(i);
                if (eval_poly(coeffs, x).is_zero()) found.push_back(x);
            }
        }
        out.insert(out.end(), found.begin(), found.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Subfield embeddings.
//
// The image of the generator of GF(p^m) in GF(p^N) is the smallest root of the
// GF(p^m) modulus that agrees with the already fixed embeddings of every
// intermediate subfield GF(p^d), d | m.  This keeps all embeddings compatible
// along towers.

namespace {

std::recursive_mutex& embed_mutex()
{
    static std::recursive_mutex m;
    return m;
}

// images[k] = (image of generator)^k, packed in super.
const std::vector<std::uint64_t>& embedding_images(const FieldCtx& sub, const FieldCtx& super);

FieldElem apply_images(const FieldElem& e, const FieldCtx& super, const std::vector<std::uint64_t>& images)
{
    const auto c = e.coeffs();
    FieldElem acc = super.zero();
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k]) acc += super.from_int(c[k]) * FieldElem(super.data(), images[k]);
    }
    return acc;
}

std::vector<FieldElem> subfield_elements(const FieldCtx& super, unsigned m)
{
    auto map = [m](const FieldElem& x) { return frobenius(x, m) - x; };
    auto a = linear_map_matrix(super, map);
    return affine_solutions(super, solve_mod_p(std::move(a), std::vector<std::uint32_t>(super.n(), 0), super.p()));
}

const std::vector<std::uint64_t>& embedding_images(const FieldCtx& sub, const FieldCtx& super)
{
    static std::map<std::pair<const FieldData*, const FieldData*>, std::vector<std::uint64_t>> cache;
    std::lock_guard lock(embed_mutex());
    const auto key = std::make_pair(sub.data(), super.data());
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    const unsigned m = sub.n();
    std::vector<std::uint64_t> images;
    if (sub == super) {
        const FieldElem g = sub.generator();
        FieldElem cur = sub.one();
        for (unsigned k = 0; k < m; ++k) {
            images.push_back(cur.packed());
            cur *= g;
        }
    } else if (m == 1) {
        images.push_back(1);
    } else {
        const auto& mod = sub.modulus();
        std::vector<FieldElem> poly;
        for (auto c : mod) poly.push_back(super.from_int(c));
        std::vector<FieldElem> roots;
        for (const auto& x : subfield_elements(super, m)) {
            if (eval_poly(poly, x).is_zero()) roots.push_back(x);
        }
        std::vector<unsigned> divisors;
        for (unsigned d = 2; d < m; ++d) {
            if (m % d == 0) divisors.push_back(d);
        }
        bool chosen = false;
        for (const auto& beta : roots) {
            std::vector<std::uint64_t> candidate;
            FieldElem cur = super.one();
            for (unsigned k = 0; k < m; ++k) {
                candidate.push_back(cur.packed());
                cur *= beta;
            }
            bool compatible = true;
            for (unsigned d : divisors) {
                const FieldCtx mid = FieldCtx::create(sub.p(), d, kSplitSearchLimit);
                const FieldElem via_sub = apply_images(subfield_embed(mid.generator(), sub), super, candidate);
                if (!(via_sub == subfield_embed(mid.generator(), super))) {
                    compatible = false;
                    break;
                }
            }
            if (compatible) {
                images = std::move(candidate);
                chosen = true;
                break;
            }
        }
        if (!chosen) throw VerificationError("no compatible embedding of " + sub.name() + " into " + super.name());
    }
    return cache.emplace(key, std::move(images)).first->second;
}

} // namespace

FieldElem subfield_embed(const FieldElem& e, const FieldCtx& super)
{
    const FieldCtx sub = e.ctx();
    if (!sub.is_subfield_of(super)) {
        throw DomainError("cannot embed " + sub.name() + " into " + super.name());
    }
    if (sub == super) return e;
    if (sub.n() == 1) return super.from_int(static_cast<std::int64_t>(e.packed()));
    return apply_images(e, super, embedding_images(sub, super));
}

std::optional<FieldElem> subfield_restrict(const FieldElem& e, const FieldCtx& sub)
{
    const FieldCtx super = e.ctx();
    if (!sub.is_subfield_of(super)) {
        throw DomainError("cannot restrict " + super.name() + " to " + sub.name());
    }
    if (sub == super) return e;
    const unsigned m = sub.n(), big = super.n();
    std::vector<std::vector<std::uint32_t>> a(big, std::vector<std::uint32_t>(m, 0));
    std::vector<std::int64_t> basis(m, 0);
    for (unsigned k = 0; k < m; ++k) {
        std::fill(basis.begin(), basis.end(), 0);
        basis[k] = 1;
        const auto image = subfield_embed(sub.from_coeffs(basis), super).coeffs();
        for (unsigned i = 0; i < big; ++i) a[i][k] = image[i];
    }
    const auto sol = solve_mod_p(std::move(a), e.coeffs(), super.p());
    if (!sol.solvable) return std::nullopt;
    std::vector<std::int64_t> c(sol.particular.begin(), sol.particular.end());
    return sub.from_coeffs(c);
}

std::vector<FieldElem> enumerate_field(const FieldCtx& ctx, std::uint64_t limit)
{
    if (ctx.q() > limit) throw LimitError("cannot enumerate " + ctx.name() + ": exceeds limit");
    std::vector<FieldElem> out;
    out.reserve(ctx.q());
    for (std::uint64_t i = 0; i < ctx.q(); ++i) out.push_back(ctx.from_index(i));
    return out;
}

// ---------------------------------------------------------------------------
// Text format.

std::string to_string(const FieldElem& e)
{
    const FieldCtx ctx = e.ctx();
    if (ctx.n() == 1) return std::to_string(e.packed());
    std::string s = ctx.name() + ":";
    const auto c = e.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(c[i]);
    }
    return s;
}

namespace {

std::int64_t parse_int(std::string_view s)
{
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw DomainError("malformed integer '" + std::string(s) + "'");
    }
    return v;
}

} // namespace

FieldElem parse_elem(const FieldCtx& ctx, std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) return ctx.from_int(parse_int(text));
    std::string_view head = text.substr(0, colon);
    while (!head.empty() && head.front() == ' ') head.remove_prefix(1);
    if (head != ctx.name()) {
        throw DomainError("element '" + std::string(text) + "' does not belong to " + ctx.name());
    }
    std::vector<std::int64_t> coeffs;
    std::string_view rest = text.substr(colon + 1);
    while (true) {
        const auto comma = rest.find(',');
        coeffs.push_back(parse_int(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    if (coeffs.size() != ctx.n()) {
        throw DomainError("element '" + std::string(text) + "' needs " + std::to_string(ctx.n()) + " coefficients");
    }
    return ctx.from_coeffs(coeffs);
}

} // namespace twistlab::gf
