#pragma once

#include <random>
#include <vector>

#include "qlin/transition.hpp"

namespace qlin::sample {

// uniform element of the given subfield
inline gf::FieldElem elem(const gf::FieldTower& t, gf::Subfield level, std::mt19937_64& rng) {
    std::uint64_t order = t.level_order(level);
    std::uint64_t k = std::uniform_int_distribution<std::uint64_t>(0, order - 1)(rng);
    gf::SubfieldEnum en = gf::enumerate_subfield(t, level);
    auto it = en.begin();
    for (std::uint64_t i = 0; i < k; ++i) ++it;
    return *it;
}

// base-q linearized polynomial with coefficients in F_r and top index < len
inline lin::LinPoly linpoly(const gf::FieldTower& t, int len, std::mt19937_64& rng) {
    std::vector<gf::FieldElem> coeffs;
    coeffs.reserve(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) coeffs.push_back(elem(t, t.r_level(1), rng));
    return lin::LinPoly::make(t, t.q(), std::move(coeffs));
}

// random data for the m-term combination sum_i a_i f_i(z)^(r^i)
inline trans::TransitionInput input(const gf::FieldTower& t, int len, std::mt19937_64& rng) {
    std::vector<gf::FieldElem> a;
    std::vector<lin::LinPoly> f;
    for (int i = 0; i < t.m(); ++i) {
        a.push_back(elem(t, t.q_level(1), rng));
        f.push_back(linpoly(t, len, rng));
    }
    return trans::make_input(t, std::move(a), std::move(f));
}

}  // namespace qlin::sample
