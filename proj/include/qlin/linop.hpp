#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlin/poly.hpp"

namespace qlin::lin {

// B-linearized polynomial  sum_i c_i x^(B^i)  for a base B = p^t, t >= 1.
// Stored by the p-exponent t, with dense coefficients indexed by i and no
// trailing zeros.  Marrying two bases always happens through the gcd of the
// p-exponents, where both polynomials rewrite exactly.
class LinPoly {
  public:
    LinPoly() = default;

    static LinPoly make(const gf::FieldTower& t, std::uint64_t base,
                        std::vector<gf::FieldElem> coeffs);
    static LinPoly make_pexp(const gf::FieldTower& t, int pexp,
                             std::vector<gf::FieldElem> coeffs);
    static LinPoly zero(const gf::FieldTower& t, std::uint64_t base);
    static LinPoly identity(const gf::FieldTower& t, std::uint64_t base);  // x
    // x^(B^i)
    static LinPoly frob_monomial(const gf::FieldTower& t, std::uint64_t base, int i);

    const gf::FieldTower& tower() const { return *tw_; }
    bool has_tower() const { return tw_ != nullptr; }
    int base_pexp() const { return pexp_; }
    std::uint64_t base() const;  // p^pexp, guarded
    const std::vector<gf::FieldElem>& coeffs() const { return c_; }
    gf::FieldElem coeff(int i) const;
    // largest i with c_i != 0; -1 for the zero polynomial
    int top_index() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    friend LinPoly operator+(const LinPoly&, const LinPoly&);
    friend LinPoly operator-(const LinPoly&, const LinPoly&);
    friend LinPoly operator*(const gf::FieldElem&, const LinPoly&);
    // formal equality: equal after rewriting to the common base
    friend bool operator==(const LinPoly&, const LinPoly&);
    friend bool operator!=(const LinPoly& a, const LinPoly& b) { return !(a == b); }

  private:
    std::vector<gf::FieldElem> c_;
    const gf::FieldTower* tw_ = nullptr;
    int pexp_ = 0;
};

gf::FieldElem lin_eval(const LinPoly& f, const gf::FieldElem& z);

// f(g(x)) in the coarsest common base (gcd of the p-exponents)
LinPoly lin_compose(const LinPoly& f, const LinPoly& g);

// k-fold self-composition f^[k]; f^[0] = x
LinPoly lin_compose_power(const LinPoly& f, int k);

// exact exponent rewriting to a base whose p-exponent divides f's
LinPoly rebase(const LinPoly& f, std::uint64_t new_base);

// sum_i c_i x^(B^i)  <->  sum_i c_i x^i
poly::OrdPoly associate(const LinPoly& f);
LinPoly lift(const poly::OrdPoly& g, std::uint64_t base);

// the actual polynomial, dense in x; degree B^(top index), capped at 2^20
poly::OrdPoly expand(const LinPoly& f);

// gcd through the associates; requires base q and coefficients in F_q.
// Normalized so the associate is monic.
LinPoly lin_gcd(const LinPoly& f, const LinPoly& g);

// coefficients raised to the r^j power; the argument is untouched
LinPoly twist(const LinPoly& f, int j);

bool coeffs_in(const LinPoly& f, gf::Subfield level);

std::string to_string(const LinPoly& f);

}  // namespace qlin::lin
