#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qlin/gf.hpp"

namespace qlin::poly {

// Ordinary (non-linearized) univariate polynomial over the ambient field,
// dense, lowest degree first, no trailing zero coefficients.  The zero
// polynomial has an empty coefficient vector and degree -1.
class OrdPoly {
  public:
    OrdPoly() = default;

    static OrdPoly make(const gf::FieldTower& t, std::vector<gf::FieldElem> coeffs);
    static OrdPoly zero(const gf::FieldTower& t);
    static OrdPoly one(const gf::FieldTower& t);
    // coeff * x^deg
    static OrdPoly monomial(const gf::FieldTower& t, int deg, const gf::FieldElem& coeff);
    static OrdPoly monomial(const gf::FieldTower& t, int deg);

    const gf::FieldTower& tower() const { return *tw_; }
    bool has_tower() const { return tw_ != nullptr; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<gf::FieldElem>& coeffs() const { return c_; }
    gf::FieldElem coeff(int i) const;  // zero beyond degree
    gf::FieldElem lead() const;        // requires nonzero

    friend OrdPoly operator+(const OrdPoly&, const OrdPoly&);
    friend OrdPoly operator-(const OrdPoly&, const OrdPoly&);
    friend OrdPoly operator*(const OrdPoly&, const OrdPoly&);
    friend OrdPoly operator*(const gf::FieldElem&, const OrdPoly&);
    friend bool operator==(const OrdPoly&, const OrdPoly&);
    friend bool operator!=(const OrdPoly& a, const OrdPoly& b) { return !(a == b); }

  private:
    std::vector<gf::FieldElem> c_;
    const gf::FieldTower* tw_ = nullptr;
};

// (quotient, remainder) with deg rem < deg g; g must be nonzero.
std::pair<OrdPoly, OrdPoly> divrem(const OrdPoly& f, const OrdPoly& g);

gf::FieldElem eval(const OrdPoly& f, const gf::FieldElem& x);

// Monic gcd via Euclid; not both zero.
OrdPoly ord_gcd(const OrdPoly& f, const OrdPoly& g);

// Exact determinant of a square polynomial matrix, dimension <= 7.
// Cofactor expansion with minors shared across column subsets.
OrdPoly ord_det(const std::vector<std::vector<OrdPoly>>& M);

// 1 + x + ... + x^(e-1)
OrdPoly all_ones(int e, const gf::FieldTower& t);

// "c_d*x^d + ... + c_0", coefficients as power-basis tuples
std::string to_string(const OrdPoly& f);

}  // namespace qlin::poly
