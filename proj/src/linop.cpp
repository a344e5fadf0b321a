#include "qlin/linop.hpp"

#include <numeric>
#include <utility>

namespace qlin::lin {

namespace {

void trim(std::vector<gf::FieldElem>& c) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

// p-exponent of base, or -1 if base is not a power of the tower's p
int pexp_of(const gf::FieldTower& t, std::uint64_t base) {
    if (base < 2) return -1;
    int p = t.p();
    int e = 0;
    while (base > 1) {
        if (base % static_cast<std::uint64_t>(p) != 0) return -1;
        base /= static_cast<std::uint64_t>(p);
        ++e;
    }
    return e;
}

const gf::FieldTower& same_tower(const LinPoly& a, const LinPoly& b) {
    if (!a.has_tower() || !b.has_tower()) throw TowerMismatch("linearized polynomial has no tower");
    if (&a.tower() != &b.tower()) throw TowerMismatch("linearized polynomials from different towers");
    return a.tower();
}

}  // namespace

LinPoly LinPoly::make_pexp(const gf::FieldTower& t, int pexp, std::vector<gf::FieldElem> coeffs) {
    if (pexp < 1) throw TowerMismatch("base exponent must be positive");
    for (const auto& c : coeffs)
        if (!c.has_tower() || &c.tower() != &t)
            throw TowerMismatch("coefficient from a different tower");
    LinPoly f;
    f.tw_ = &t;
    f.pexp_ = pexp;
    f.c_ = std::move(coeffs);
    trim(f.c_);
    return f;
}

LinPoly LinPoly::make(const gf::FieldTower& t, std::uint64_t base,
                      std::vector<gf::FieldElem> coeffs) {
    int pe = pexp_of(t, base);
    if (pe < 0)
        throw TowerMismatch("base " + std::to_string(base) + " is not a power of p");
    return make_pexp(t, pe, std::move(coeffs));
}

LinPoly LinPoly::zero(const gf::FieldTower& t, std::uint64_t base) { return make(t, base, {}); }

LinPoly LinPoly::identity(const gf::FieldTower& t, std::uint64_t base) {
    return make(t, base, {t.one()});
}

LinPoly LinPoly::frob_monomial(const gf::FieldTower& t, std::uint64_t base, int i) {
    if (i < 0) throw InvariantViolation("negative frobenius index");
    std::vector<gf::FieldElem> c(static_cast<std::size_t>(i) + 1, t.zero());
    c.back() = t.one();
    return make(t, base, std::move(c));
}

std::uint64_t LinPoly::base() const {
    if (!tw_) throw TowerMismatch("linearized polynomial has no tower");
    unsigned __int128 v = 1;
    for (int i = 0; i < pexp_; ++i) {
        v *= static_cast<unsigned>(tw_->p());
        if (v > static_cast<unsigned __int128>(UINT64_MAX)) throw CapExceeded("base overflows");
    }
    return static_cast<std::uint64_t>(v);
}

gf::FieldElem LinPoly::coeff(int i) const {
    if (i < 0 || i > top_index()) return tw_ ? tw_->zero() : gf::FieldElem{};
    return c_[static_cast<std::size_t>(i)];
}

LinPoly rebase(const LinPoly& f, std::uint64_t new_base) {
    if (!f.has_tower()) throw TowerMismatch("linearized polynomial has no tower");
    const gf::FieldTower& t = f.tower();
    int tn = 0;
    {
        std::uint64_t b = new_base;
        int p = t.p();
        if (b < 2) throw TowerMismatch("base must be a power of p");
        while (b > 1) {
            if (b % static_cast<std::uint64_t>(p) != 0)
                throw TowerMismatch("base is not a power of p");
            b /= static_cast<std::uint64_t>(p);
            ++tn;
        }
    }
    if (f.base_pexp() % tn != 0)
        throw NonDividingDegrees("cannot rewrite base p^" + std::to_string(f.base_pexp()) +
                                 " over p^" + std::to_string(tn));
    int stride = f.base_pexp() / tn;
    if (f.is_zero()) return LinPoly::make_pexp(t, tn, {});
    std::vector<gf::FieldElem> out(static_cast<std::size_t>(f.top_index()) * stride + 1, t.zero());
    for (int i = 0; i <= f.top_index(); ++i)
        out[static_cast<std::size_t>(i) * stride] = f.coeff(i);
    return LinPoly::make_pexp(t, tn, std::move(out));
}

namespace {

// rewrite both to the gcd of the p-exponents
std::pair<LinPoly, LinPoly> common_base(const LinPoly& a, const LinPoly& b) {
    int t0 = std::gcd(a.base_pexp(), b.base_pexp());
    const gf::FieldTower& t = a.tower();
    unsigned __int128 nb = 1;
    for (int i = 0; i < t0; ++i) nb *= static_cast<unsigned>(t.p());
    std::uint64_t base = static_cast<std::uint64_t>(nb);
    return {rebase(a, base), rebase(b, base)};
}

}  // namespace

LinPoly operator+(const LinPoly& a, const LinPoly& b) {
    const gf::FieldTower& t = same_tower(a, b);
    auto [fa, fb] = common_base(a, b);
    std::vector<gf::FieldElem> out(
        static_cast<std::size_t>(std::max(fa.top_index(), fb.top_index()) + 1), t.zero());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = fa.coeff(static_cast<int>(i)) + fb.coeff(static_cast<int>(i));
    return LinPoly::make_pexp(t, fa.base_pexp(), std::move(out));
}

LinPoly operator-(const LinPoly& a, const LinPoly& b) {
    const gf::FieldTower& t = same_tower(a, b);
    auto [fa, fb] = common_base(a, b);
    std::vector<gf::FieldElem> out(
        static_cast<std::size_t>(std::max(fa.top_index(), fb.top_index()) + 1), t.zero());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = fa.coeff(static_cast<int>(i)) - fb.coeff(static_cast<int>(i));
    return LinPoly::make_pexp(t, fa.base_pexp(), std::move(out));
}

LinPoly operator*(const gf::FieldElem& s, const LinPoly& f) {
    if (!f.has_tower()) throw TowerMismatch("linearized polynomial has no tower");
    std::vector<gf::FieldElem> out = f.coeffs();
    for (auto& c : out) c *= s;
    return LinPoly::make_pexp(f.tower(), f.base_pexp(), std::move(out));
}

bool operator==(const LinPoly& a, const LinPoly& b) {
    if (!a.has_tower() || !b.has_tower()) return a.is_zero() && b.is_zero();
    if (&a.tower() != &b.tower()) return false;
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    auto [fa, fb] = common_base(a, b);
    if (fa.top_index() != fb.top_index()) return false;
    for (int i = 0; i <= fa.top_index(); ++i)
        if (!(fa.coeff(i) == fb.coeff(i))) return false;
    return true;
}

gf::FieldElem lin_eval(const LinPoly& f, const gf::FieldElem& z) {
    if (!f.has_tower()) throw TowerMismatch("linearized polynomial has no tower");
    const gf::FieldTower& t = f.tower();
    if (!z.has_tower() || &z.tower() != &t) throw TowerMismatch("point from a different tower");
    gf::FieldElem acc = t.zero();
    for (int i = 0; i <= f.top_index(); ++i) {
        if (f.coeff(i).is_zero()) continue;
        acc += f.coeff(i) * gf::frobenius(z, static_cast<std::uint64_t>(t.p()),
                                          static_cast<std::uint64_t>(f.base_pexp()) * i);
    }
    return acc;
}

LinPoly lin_compose(const LinPoly& f, const LinPoly& g) {
    const gf::FieldTower& t = same_tower(f, g);
    int t0 = std::gcd(f.base_pexp(), g.base_pexp());
    if (f.is_zero() || g.is_zero()) return LinPoly::make_pexp(t, t0, {});
    int u = f.base_pexp() / t0;   // f's index stride in the common base
    int v = g.base_pexp() / t0;
    std::vector<gf::FieldElem> out(
        static_cast<std::size_t>(u * f.top_index() + v * g.top_index()) + 1, t.zero());
    std::uint64_t p = static_cast<std::uint64_t>(t.p());
    for (int i = 0; i <= f.top_index(); ++i) {
        const gf::FieldElem fi = f.coeff(i);
        if (fi.is_zero()) continue;
        std::uint64_t fexp = static_cast<std::uint64_t>(f.base_pexp()) * i;
        for (int j = 0; j <= g.top_index(); ++j) {
            const gf::FieldElem gj = g.coeff(j);
            if (gj.is_zero()) continue;
            out[static_cast<std::size_t>(u * i + v * j)] += fi * gf::frobenius(gj, p, fexp);
        }
    }
    return LinPoly::make_pexp(t, t0, std::move(out));
}

LinPoly lin_compose_power(const LinPoly& f, int k) {
    if (!f.has_tower()) throw TowerMismatch("linearized polynomial has no tower");
    if (k < 0) throw InvariantViolation("negative composition power");
    LinPoly acc = LinPoly::make_pexp(f.tower(), f.base_pexp(), {f.tower().one()});
    for (int i = 0; i < k; ++i) acc = lin_compose(f, acc);
    return acc;
}

poly::OrdPoly associate(const LinPoly& f) {
    if (!f.has_tower()) throw TowerMismatch("linearized polynomial has no tower");
    return poly::OrdPoly::make(f.tower(), f.coeffs());
}

LinPoly lift(const poly::OrdPoly& g, std::uint64_t base) {
    if (!g.has_tower()) throw TowerMismatch("polynomial has no tower");
    return LinPoly::make(g.tower(), base, g.coeffs());
}

poly::OrdPoly expand(const LinPoly& f) {
    if (!f.has_tower()) throw TowerMismatch("linearized polynomial has no tower");
    const gf::FieldTower& t = f.tower();
    if (f.is_zero()) return poly::OrdPoly::zero(t);
    std::uint64_t cap = std::uint64_t{1} << 20;
    std::uint64_t deg = 1;
    for (int i = 0; i < f.top_index(); ++i) {
        deg *= f.base();
        if (deg > cap) throw DegreeCapExceeded("expanded degree exceeds 2^20");
    }
    std::vector<gf::FieldElem> out(deg + 1, t.zero());
    std::uint64_t e = 1;
    for (int i = 0; i <= f.top_index(); ++i) {
        out[e] = f.coeff(i);
        if (i < f.top_index()) e *= f.base();
    }
    return poly::OrdPoly::make(t, std::move(out));
}

bool coeffs_in(const LinPoly& f, gf::Subfield level) {
    for (const auto& c : f.coeffs())
        if (!gf::in_subfield(c, level)) return false;
    return true;
}

LinPoly lin_gcd(const LinPoly& f, const LinPoly& g) {
    const gf::FieldTower& t = same_tower(f, g);
    int qexp = t.s() * t.m();
    if (f.base_pexp() != qexp || g.base_pexp() != qexp)
        throw CoefficientsOutsideFq("gcd requires base q on both sides");
    gf::Subfield fq = t.q_level();
    if (!coeffs_in(f, fq) || !coeffs_in(g, fq))
        throw CoefficientsOutsideFq("gcd requires coefficients in F_q");
    if (f.is_zero() && g.is_zero()) throw BothZero("gcd(0, 0)");
    return lift(poly::ord_gcd(associate(f), associate(g)), t.q());
}

LinPoly twist(const LinPoly& f, int j) {
    if (!f.has_tower()) throw TowerMismatch("linearized polynomial has no tower");
    if (j < 0) throw InvariantViolation("negative twist");
    const gf::FieldTower& t = f.tower();
    std::vector<gf::FieldElem> out = f.coeffs();
    for (auto& c : out) c = gf::frobenius(c, t.r(), static_cast<std::uint64_t>(j));
    return LinPoly::make_pexp(t, f.base_pexp(), std::move(out));
}

std::string to_string(const LinPoly& f) {
    if (!f.has_tower()) return "0";
    if (f.is_zero()) return "0";
    std::string base = std::to_string(f.base());
    std::string out;
    for (int i = f.top_index(); i >= 0; --i) {
        gf::FieldElem c = f.coeff(i);
        if (c.is_zero()) continue;
        if (!out.empty()) out += " + ";
        std::string xpart = (i == 0) ? "X" : "X^(" + base + "^" + std::to_string(i) + ")";
        if (c == f.tower().one())
            out += xpart;
        else
            out += gf::to_string(c) + "*" + xpart;
    }
    return out;
}

}  // namespace qlin::lin
