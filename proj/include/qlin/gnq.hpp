#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qlin/linop.hpp"

namespace qlin::gnq {

// n with its base-q digit decomposition (least significant first) and digit sum
struct GnqSpec {
    std::uint64_t n = 0;
    std::uint64_t q = 0;
    std::vector<int> digits;
    int weight = 0;
};

GnqSpec gnq_spec(std::uint64_t n, const gf::FieldTower& t);

// x + x^q + ... + x^(q^(a-1)); a = 0 gives the zero polynomial
lin::LinPoly S_poly(int a, const gf::FieldTower& t);

// the unique g with g(x^q - x) = sum over c in F_q of (x+c)^n, found by
// expanding the right side over F_p and greedily peeling (x^q - x)^k
poly::OrdPoly gnq_coeffs(std::uint64_t n, const gf::FieldTower& t);

// Point evaluation of the same g on F_{q^e} without ever expanding it:
// solve x^q - x = y in the degree-p auxiliary extension (the system is
// F_p-linear), then sum (x+c)^n over c.  The result does not depend on
// which preimage the solver picks.
class GnqEvaluator {
  public:
    explicit GnqEvaluator(const gf::FieldTower& t);

    const gf::FieldTower& tower() const { return *tw_; }
    // some x with x^q - x = y; y must lie in F_{q^e}
    gf::FieldElem preimage(const gf::FieldElem& y) const;
    gf::FieldElem operator()(std::uint64_t n, const gf::FieldElem& y) const;

  private:
    const gf::FieldTower* tw_ = nullptr;
    std::vector<gf::FieldElem> fq_;
    int dim_ = 0;
    std::vector<std::vector<std::uint8_t>> rows_;  // reduced matrix of x -> x^q - x
    std::vector<std::vector<std::uint8_t>> tf_;    // row transform applied to the rhs
    std::vector<int> pivot_;
};

gf::FieldElem gnq_eval(std::uint64_t n, const gf::FieldElem& y);

// formal sum of composition-products of linearized polynomials
struct SumOfProducts {
    std::vector<std::vector<lin::LinPoly>> terms;
};

gf::FieldElem sop_eval(const SumOfProducts& f, const gf::FieldElem& x);
std::string to_string(const SumOfProducts& f);

// g as minus the sum of all (t+2)-fold products of S_{a_i}, available when
// n = 1 + q^(a_1) + ... + q^(a_(q+t)) with -1 <= t <= q-4
struct WeightForm {
    int t = 0;
    std::vector<int> exps;                   // a_1 <= ... <= a_(q+t)
    std::vector<std::vector<int>> subsets;   // index sets into exps, size t+2
};

WeightForm gnq_weight_form(std::uint64_t n, const gf::FieldTower& t);
gf::FieldElem weight_form_eval(const WeightForm& w, const gf::FieldTower& t,
                               const gf::FieldElem& y);
// the same sum with every S-exponent folded mod e, valid on F_{q^e}
SumOfProducts weight_form_reduced(const WeightForm& w, const gf::FieldTower& t);

// g_{n+q^a} - g_{n+q^b} == (S_a - S_b) * g_n as exact polynomials
bool gnq_recurrence_check(std::uint64_t n, int a, int b, const gf::FieldTower& t);

// exhaustive permutation test over a subfield, at most 2^20 points
bool is_pp(const std::function<gf::FieldElem(const gf::FieldElem&)>& fn,
           const gf::FieldTower& t, gf::Subfield domain);

// data attached to one fiber value c: f restricted to S_e^(-1)(c) reads
// sum_i a_i f_i(x)^(r^i) + b
struct FiberData {
    gf::FieldElem c;
    std::vector<gf::FieldElem> a;
    std::vector<lin::LinPoly> f;
    gf::FieldElem b;
};

// claimed determinant, cleared of denominators:
// det(A_c) * den == num_base + c^3 * num_c3, coefficients over F_p
struct ClaimedDetA {
    std::vector<long long> num_base;
    std::vector<long long> num_c3;
    std::vector<long long> den;
};

struct CriterionInstance {
    std::string id;
    std::map<std::string, int> params;
    std::optional<std::uint64_t> n;   // absent for families given only by f
    const gf::FieldTower* tower = nullptr;
    SumOfProducts f;
    poly::OrdPoly fbar;
    std::vector<FiberData> fibers;    // one per c, in subfield enumeration order
    ClaimedDetA detA;
};

struct CriterionReport {
    bool square_commutes = false;   // S_e(f(x)) == fbar(S_e(x)) everywhere
    bool base_pp = false;           // fbar permutes F_q
    bool fibers_match = false;      // the per-fiber decomposition reproduces f
    bool detA_matches = false;      // computed determinant equals the claimed form
    bool gcd_ok = false;            // determinant coprime to 1 + x + ... + x^(e-1)
    bool congruence_ok = false;     // f agrees with the n-indexed family member
    bool pp_confirmed = false;      // f permutes F_{q^e}
    std::string detail;
    bool all() const {
        return square_commutes && base_pp && fibers_match && detA_matches && gcd_ok &&
               congruence_ok && pp_confirmed;
    }
};

CriterionReport criterion_check(const CriterionInstance& inst, const gf::FieldTower& t);

CriterionInstance instance_registry(const std::string& id,
                                    const std::map<std::string, int>& params,
                                    const gf::FieldTower& t);
const std::vector<std::string>& registry_ids();

std::string instance_to_json(const CriterionInstance& inst);
CriterionInstance instance_from_json(const std::string& text, const gf::FieldTower& t);

}  // namespace qlin::gnq
