#include "qlin/poly.hpp"

#include <algorithm>
#include <bit>

namespace qlin::poly {

namespace {

void trim(std::vector<gf::FieldElem>& c) {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

const gf::FieldTower& same_tower(const OrdPoly& a, const OrdPoly& b) {
    if (!a.has_tower() || !b.has_tower()) throw TowerMismatch("polynomial has no tower");
    if (&a.tower() != &b.tower()) throw TowerMismatch("polynomials from different towers");
    return a.tower();
}

}  // namespace

OrdPoly OrdPoly::make(const gf::FieldTower& t, std::vector<gf::FieldElem> coeffs) {
    for (const auto& c : coeffs)
        if (!c.has_tower() || &c.tower() != &t)
            throw TowerMismatch("coefficient from a different tower");
    OrdPoly f;
    f.tw_ = &t;
    f.c_ = std::move(coeffs);
    trim(f.c_);
    return f;
}

OrdPoly OrdPoly::zero(const gf::FieldTower& t) { return make(t, {}); }

OrdPoly OrdPoly::one(const gf::FieldTower& t) { return make(t, {t.one()}); }

OrdPoly OrdPoly::monomial(const gf::FieldTower& t, int deg, const gf::FieldElem& coeff) {
    if (deg < 0) throw InvariantViolation("negative monomial degree");
    std::vector<gf::FieldElem> c(static_cast<std::size_t>(deg) + 1, t.zero());
    c.back() = coeff;
    return make(t, std::move(c));
}

OrdPoly OrdPoly::monomial(const gf::FieldTower& t, int deg) { return monomial(t, deg, t.one()); }

gf::FieldElem OrdPoly::coeff(int i) const {
    if (i < 0 || i > degree()) return tw_ ? tw_->zero() : gf::FieldElem{};
    return c_[static_cast<std::size_t>(i)];
}

gf::FieldElem OrdPoly::lead() const {
    if (is_zero()) throw InvariantViolation("leading coefficient of zero");
    return c_.back();
}

OrdPoly operator+(const OrdPoly& a, const OrdPoly& b) {
    const gf::FieldTower& t = same_tower(a, b);
    std::vector<gf::FieldElem> out(std::max(a.c_.size(), b.c_.size()), t.zero());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i < a.c_.size()) out[i] += a.c_[i];
        if (i < b.c_.size()) out[i] += b.c_[i];
    }
    return OrdPoly::make(t, std::move(out));
}

OrdPoly operator-(const OrdPoly& a, const OrdPoly& b) {
    const gf::FieldTower& t = same_tower(a, b);
    std::vector<gf::FieldElem> out(std::max(a.c_.size(), b.c_.size()), t.zero());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i < a.c_.size()) out[i] += a.c_[i];
        if (i < b.c_.size()) out[i] -= b.c_[i];
    }
    return OrdPoly::make(t, std::move(out));
}

OrdPoly operator*(const OrdPoly& a, const OrdPoly& b) {
    const gf::FieldTower& t = same_tower(a, b);
    if (a.is_zero() || b.is_zero()) return OrdPoly::zero(t);
    std::vector<gf::FieldElem> out(a.c_.size() + b.c_.size() - 1, t.zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            out[i + j] += a.c_[i] * b.c_[j];
    }
    return OrdPoly::make(t, std::move(out));
}

OrdPoly operator*(const gf::FieldElem& s, const OrdPoly& f) {
    if (!f.has_tower()) throw TowerMismatch("polynomial has no tower");
    std::vector<gf::FieldElem> out = f.c_;
    for (auto& c : out) c *= s;
    return OrdPoly::make(f.tower(), std::move(out));
}

bool operator==(const OrdPoly& a, const OrdPoly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        if (!(a.c_[i] == b.c_[i])) return false;
    return true;
}

std::pair<OrdPoly, OrdPoly> divrem(const OrdPoly& f, const OrdPoly& g) {
    const gf::FieldTower& t = same_tower(f, g);
    if (g.is_zero()) throw DivisionByZero("polynomial division by zero");
    if (f.degree() < g.degree()) return {OrdPoly::zero(t), f};
    std::vector<gf::FieldElem> rem = f.coeffs();
    std::vector<gf::FieldElem> quot(static_cast<std::size_t>(f.degree() - g.degree()) + 1, t.zero());
    gf::FieldElem lead_inv = gf::inv(g.lead());
    int dg = g.degree();
    for (int dr = static_cast<int>(rem.size()) - 1; dr >= dg; --dr) {
        if (rem[static_cast<std::size_t>(dr)].is_zero()) continue;
        gf::FieldElem c = rem[static_cast<std::size_t>(dr)] * lead_inv;
        quot[static_cast<std::size_t>(dr - dg)] = c;
        for (int i = 0; i <= dg; ++i)
            rem[static_cast<std::size_t>(dr - dg + i)] -= c * g.coeff(i);
    }
    return {OrdPoly::make(t, std::move(quot)), OrdPoly::make(t, std::move(rem))};
}

gf::FieldElem eval(const OrdPoly& f, const gf::FieldElem& x) {
    if (!f.has_tower()) throw TowerMismatch("polynomial has no tower");
    const gf::FieldTower& t = f.tower();
    if (!x.has_tower() || &x.tower() != &t) throw TowerMismatch("point from a different tower");
    gf::FieldElem acc = t.zero();
    for (int i = f.degree(); i >= 0; --i) acc = acc * x + f.coeff(i);
    return acc;
}

OrdPoly ord_gcd(const OrdPoly& f, const OrdPoly& g) {
    same_tower(f, g);
    if (f.is_zero() && g.is_zero()) throw BothZero("gcd(0, 0)");
    OrdPoly a = f, b = g;
    while (!b.is_zero()) {
        OrdPoly r = divrem(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return gf::inv(a.lead()) * a;
}

OrdPoly ord_det(const std::vector<std::vector<OrdPoly>>& M) {
    std::size_t n = M.size();
    if (n == 0) throw NonSquare("empty matrix");
    for (const auto& row : M)
        if (row.size() != n) throw NonSquare("row length " + std::to_string(row.size()));
    if (n > 7) throw DeterminantCapExceeded("dimension " + std::to_string(n));
    const gf::FieldTower* tw = nullptr;
    for (const auto& row : M)
        for (const auto& entry : row) {
            if (!entry.has_tower()) throw TowerMismatch("matrix entry has no tower");
            if (!tw) tw = &entry.tower();
            else if (tw != &entry.tower()) throw TowerMismatch("matrix entries from different towers");
        }
    const gf::FieldTower& t = *tw;

    // minors over column subsets: D[mask] is the determinant of the last
    // popcount(mask) rows restricted to the columns in mask
    std::vector<OrdPoly> D(std::size_t{1} << n);
    D[0] = OrdPoly::one(t);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        int k = std::popcount(mask);
        std::size_t row = n - static_cast<std::size_t>(k);
        OrdPoly acc = OrdPoly::zero(t);
        int sign = 1;
        for (std::size_t col = 0; col < n; ++col) {
            if (!(mask & (1u << col))) continue;
            const OrdPoly& entry = M[row][col];
            if (!entry.is_zero()) {
                OrdPoly term = entry * D[mask & ~(1u << col)];
                acc = (sign > 0) ? acc + term : acc - term;
            }
            sign = -sign;
        }
        D[mask] = std::move(acc);
    }
    return D[(std::size_t{1} << n) - 1];
}

OrdPoly all_ones(int e, const gf::FieldTower& t) {
    if (e < 1) throw InvariantViolation("all_ones requires e >= 1");
    return OrdPoly::make(t, std::vector<gf::FieldElem>(static_cast<std::size_t>(e), t.one()));
}

std::string to_string(const OrdPoly& f) {
    if (f.is_zero()) return "0";
    std::string out;
    for (int i = f.degree(); i >= 0; --i) {
        gf::FieldElem c = f.coeff(i);
        if (c.is_zero()) continue;
        if (!out.empty()) out += " + ";
        if (i == 0) {
            out += gf::to_string(c);
        } else {
            std::string xpart = (i == 1) ? "x" : "x^" + std::to_string(i);
            if (c == f.tower().one())
                out += xpart;
            else
                out += gf::to_string(c) + "*" + xpart;
        }
    }
    return out;
}

}  // namespace qlin::poly
