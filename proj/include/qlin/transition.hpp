#pragma once

#include <cstdint>
#include <vector>

#include "qlin/linop.hpp"

namespace qlin::trans {

// The data (a_0..a_{m-1}, f_0..f_{m-1}) of an r-linearized combination
// sum_i a_i f_i(z)^(r^i) with a_i in F_q and f_i q-linearized over F_r.
// m always equals the tower's m.
struct TransitionInput {
    const gf::FieldTower* tower = nullptr;
    std::vector<gf::FieldElem> a;
    std::vector<lin::LinPoly> f;
};

TransitionInput make_input(const gf::FieldTower& t, std::vector<gf::FieldElem> a,
                           std::vector<lin::LinPoly> f);
void validate_input(const TransitionInput& in);

struct TransitionMatrix {
    std::vector<std::vector<lin::LinPoly>> entries;  // m x m, base q
};

// entry (i,j) = a_{-i+j}^(r^i) f_{-i+j} composed with x^(r^delta),
// delta = 0 for i <= j and m for i > j, subscripts mod m
TransitionMatrix build_M(const TransitionInput& in);

// determinant of M through the associate isomorphism; q-linearized with all
// coefficients in F_r (asserted)
lin::LinPoly det_M(const TransitionInput& in);

// independent oracle: cofactor expansion directly in the composition ring,
// m <= 3
lin::LinPoly det_M_direct(const TransitionInput& in);

// the combination sum_i a_i f_i(z)^(r^i) as a single r-linearized polynomial
lin::LinPoly lhs_r_linearized(const TransitionInput& in);

struct RootTransferReport {
    std::uint64_t domain_size = 0;
    std::uint64_t roots_found = 0;
    std::uint64_t transfers_verified = 0;
    std::uint64_t violations = 0;
};

// every root of the r-linearized combination inside search_level must be a
// root of det M; counts reported, violations counted rather than thrown
RootTransferReport verify_root_transfer(const TransitionInput& in, gf::Subfield search_level);

// all mu with mu_i >= 0, sum mu_i = m, sum i*mu_i = 0 mod m, ordered by the
// sorted index tuple 0^(mu_0) 1^(mu_1) ... read as a lex-ascending word
std::vector<std::vector<int>> enumerate_frakM(int m);

// the permutations sigma of Z_m whose difference multiset {sigma(i)-i mod m}
// has multiplicities mu, together with the alternating coefficient
// sum_sigma sgn(sigma) prod_j a_{sigma(j)-j}^(r^j)
struct DiffClass {
    std::vector<int> mu;
    std::vector<std::vector<int>> perms;
    gf::FieldElem coeff;  // lies in F_r (asserted)
};

DiffClass frakS_and_coeff(const std::vector<int>& mu, const std::vector<gf::FieldElem>& a);

// sum over mu of c_mu * f_0^[mu_0] o ... o f_{m-1}^[mu_{m-1}] o x^(q^(sum i*mu_i / m));
// must equal det_M exactly
lin::LinPoly expansion_det(const TransitionInput& in);

// one permutation realizing the difference multiset mu; exists for every
// mu in the enumerated set
std::vector<int> hall_witness(const std::vector<int>& mu);

int perm_sign(const std::vector<int>& sigma);        // +1 or -1
std::vector<int> index_tuple(const std::vector<int>& mu);  // sorted multiset word

}  // namespace qlin::trans
