#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <string>
#include <vector>

#include "qlin/sample.hpp"
#include "qlin/transition.hpp"

using namespace qlin;

namespace {

std::string word_of(const std::vector<int>& mu) {
    std::string w;
    for (int v : trans::index_tuple(mu)) w += static_cast<char>('0' + v);
    return w;
}

}  // namespace

TEST_CASE("single summand collapses to a scaled factor") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 1, 1, 1);
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        trans::TransitionInput in = sample::input(t, 4, rng);
        CHECK(trans::det_M(in) == in.a[0] * in.f[0]);
        CHECK(trans::expansion_det(in) == in.a[0] * in.f[0]);
    }
}

TEST_CASE("two summands give the hand-derived determinant") {
    // det = a0^(1+r) f0 o f0  -  a1^(1+r) f1 o f1 o x^q, with the sign visible
    // away from characteristic two
    std::mt19937_64 rng(52);
    for (int p : {2, 3}) {
        gf::FieldTower t = gf::FieldTower::build(p, 1, 2, 1, 1);
        for (int trial = 0; trial < 10; ++trial) {
            trans::TransitionInput in = sample::input(t, 3, rng);
            gf::FieldElem c0 = in.a[0] * gf::frobenius(in.a[0], t.r(), 1);
            gf::FieldElem c1 = in.a[1] * gf::frobenius(in.a[1], t.r(), 1);
            lin::LinPoly xq = lin::LinPoly::frob_monomial(t, t.q(), 1);
            lin::LinPoly expected = c0 * lin_compose(in.f[0], in.f[0]) -
                                    c1 * lin_compose(in.f[1], lin_compose(in.f[1], xq));
            CHECK(trans::det_M(in) == expected);
        }
    }
}

TEST_CASE("matrix layout: lower entries carry the extra power") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 1, 1);
    std::mt19937_64 rng(53);
    trans::TransitionInput in = sample::input(t, 3, rng);
    trans::TransitionMatrix M = trans::build_M(in);
    REQUIRE(M.entries.size() == 2);
    lin::LinPoly xq = lin::LinPoly::frob_monomial(t, t.q(), 1);
    CHECK(M.entries[0][0] == in.a[0] * in.f[0]);
    CHECK(M.entries[0][1] == in.a[1] * in.f[1]);
    CHECK(M.entries[1][0] ==
          gf::frobenius(in.a[1], t.r(), 1) * lin_compose(in.f[1], xq));
    CHECK(M.entries[1][1] == gf::frobenius(in.a[0], t.r(), 1) * in.f[0]);
}

TEST_CASE("both determinant paths agree for small sizes") {
    std::mt19937_64 rng(54);
    for (int p : {2, 3}) {
        for (int m = 1; m <= 3; ++m) {
            gf::FieldTower t = gf::FieldTower::build(p, 1, m, 1, 1);
            for (int trial = 0; trial < 6; ++trial) {
                trans::TransitionInput in = sample::input(t, 3, rng);
                CHECK(trans::det_M(in) == trans::det_M_direct(in));
            }
        }
    }
}

TEST_CASE("expansion reproduces the determinant across shapes") {
    std::mt19937_64 rng(55);
    for (int m = 1; m <= 5; ++m) {
        gf::FieldTower t = gf::FieldTower::build(2, 1, m, 1, 1);
        for (int trial = 0; trial < 4; ++trial) {
            trans::TransitionInput in = sample::input(t, 3, rng);
            CHECK(trans::expansion_det(in) == trans::det_M(in));
        }
    }
    for (int m = 1; m <= 3; ++m) {
        gf::FieldTower t = gf::FieldTower::build(3, 1, m, 1, 1);
        for (int trial = 0; trial < 4; ++trial) {
            trans::TransitionInput in = sample::input(t, 3, rng);
            CHECK(trans::expansion_det(in) == trans::det_M(in));
        }
    }
}

TEST_CASE("determinant coefficients stay in the small field") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 3, 2, 1);
    std::mt19937_64 rng(56);
    for (int trial = 0; trial < 6; ++trial) {
        trans::TransitionInput in = sample::input(t, 3, rng);
        CHECK(lin::coeffs_in(trans::det_M(in), t.r_level(1)));
    }
}

TEST_CASE("difference class enumeration sizes") {
    CHECK(trans::enumerate_frakM(1).size() == 1);
    CHECK(trans::enumerate_frakM(2).size() == 2);
    CHECK(trans::enumerate_frakM(3).size() == 4);
    CHECK(trans::enumerate_frakM(4).size() == 10);
    CHECK(trans::enumerate_frakM(5).size() == 26);
    CHECK(trans::enumerate_frakM(6).size() == 80);
    CHECK_THROWS_AS(trans::enumerate_frakM(8), CapExceeded);
}

TEST_CASE("five-summand classes arrive in frozen lexicographic order") {
    const std::vector<std::string> expected = {
        "00000", "00014", "00023", "00113", "00122", "00244", "00334", "01112", "01144",
        "01234", "01333", "02224", "02233", "03444", "11111", "11134", "11224", "11233",
        "12223", "12444", "13344", "22222", "22344", "23334", "33333", "44444"};
    std::vector<std::vector<int>> classes = trans::enumerate_frakM(5);
    REQUIRE(classes.size() == expected.size());
    for (std::size_t i = 0; i < classes.size(); ++i) CHECK(word_of(classes[i]) == expected[i]);
}

TEST_CASE("class members have the right sum and weighted sum") {
    for (int m = 1; m <= 6; ++m) {
        for (const auto& mu : trans::enumerate_frakM(m)) {
            int total = 0, weighted = 0;
            for (int i = 0; i < m; ++i) {
                total += mu[static_cast<std::size_t>(i)];
                weighted += i * mu[static_cast<std::size_t>(i)];
            }
            CHECK(total == m);
            CHECK(weighted % m == 0);
        }
    }
}

TEST_CASE("every class has a verifiable witness permutation") {
    for (int m = 1; m <= 6; ++m) {
        for (const auto& mu : trans::enumerate_frakM(m)) {
            std::vector<int> sigma = trans::hall_witness(mu);
            REQUIRE(static_cast<int>(sigma.size()) == m);
            std::vector<int> counts(static_cast<std::size_t>(m), 0);
            for (int i = 0; i < m; ++i) {
                int d = ((sigma[static_cast<std::size_t>(i)] - i) % m + m) % m;
                ++counts[static_cast<std::size_t>(d)];
            }
            CHECK(counts == mu);
            int sgn = trans::perm_sign(sigma);
            CHECK((sgn == 1 || sgn == -1));
        }
    }
}

TEST_CASE("class permutation counts partition all permutations") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 4, 1, 1);
    std::mt19937_64 rng(57);
    trans::TransitionInput in = sample::input(t, 3, rng);
    std::size_t total = 0;
    for (const auto& mu : trans::enumerate_frakM(4)) {
        trans::DiffClass dc = trans::frakS_and_coeff(mu, in.a);
        for (const auto& sigma : dc.perms) {
            std::vector<int> counts(4, 0);
            for (int i = 0; i < 4; ++i) {
                int d = ((sigma[static_cast<std::size_t>(i)] - i) % 4 + 4) % 4;
                ++counts[static_cast<std::size_t>(d)];
            }
            CHECK(counts == mu);
        }
        total += dc.perms.size();
        CHECK(gf::in_subfield(dc.coeff, t.r_level(1)));
    }
    CHECK(total == 24);
}

TEST_CASE("two-summand class coefficients in odd characteristic") {
    gf::FieldTower t = gf::FieldTower::build(3, 1, 2, 1, 1);
    std::mt19937_64 rng(58);
    trans::TransitionInput in = sample::input(t, 3, rng);
    trans::DiffClass d0 = trans::frakS_and_coeff({2, 0}, in.a);
    trans::DiffClass d1 = trans::frakS_and_coeff({0, 2}, in.a);
    CHECK(d0.coeff == in.a[0] * gf::frobenius(in.a[0], t.r(), 1));
    CHECK(d1.coeff == t.zero() - in.a[1] * gf::frobenius(in.a[1], t.r(), 1));
    CHECK_THROWS_AS(trans::frakS_and_coeff({1, 1}, in.a), NotInFrakM);
}

TEST_CASE("roots of the combination transfer to the determinant") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 8; ++trial) {
        trans::TransitionInput in = sample::input(t, 3, rng);
        trans::RootTransferReport rep = trans::verify_root_transfer(in, t.qe_level());
        CHECK(rep.domain_size == 64);
        CHECK(rep.roots_found >= 1);  // zero is always a root
        CHECK(rep.transfers_verified == rep.roots_found);
        CHECK(rep.violations == 0);
    }
}

TEST_CASE("assembled combination matches its pointwise definition") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    std::mt19937_64 rng(60);
    for (int trial = 0; trial < 10; ++trial) {
        trans::TransitionInput in = sample::input(t, 3, rng);
        lin::LinPoly lhs = trans::lhs_r_linearized(in);
        gf::FieldElem z = sample::elem(t, t.qe_level(), rng);
        gf::FieldElem direct = t.zero();
        for (int i = 0; i < t.m(); ++i)
            direct += in.a[static_cast<std::size_t>(i)] *
                      gf::frobenius(lin_eval(in.f[static_cast<std::size_t>(i)], z), t.r(),
                                    static_cast<std::uint64_t>(i));
        CHECK(lin_eval(lhs, z) == direct);
    }
}

TEST_CASE("input validation rejects out-of-field data") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    std::mt19937_64 rng(61);
    trans::TransitionInput good = sample::input(t, 3, rng);

    trans::TransitionInput short_a = good;
    short_a.a.pop_back();
    CHECK_THROWS_AS(trans::validate_input(short_a), InvariantViolation);

    trans::TransitionInput stray = good;
    stray.a[0] = t.gen();  // generates the top field, not a middle-field scalar
    CHECK_THROWS_AS(trans::validate_input(stray), InvariantViolation);

    trans::TransitionInput wide = good;
    gf::SubfieldEnum qe = gf::enumerate_subfield(t, t.q_level(1));
    gf::FieldElem w = t.zero();
    for (const gf::FieldElem& x : qe) w = x;  // last element, outside F_2
    CHECK_FALSE(gf::in_subfield(w, t.r_level(1)));
    wide.f[1] = lin::LinPoly::make(t, t.q(), {w});
    CHECK_THROWS_AS(trans::validate_input(wide), InvariantViolation);
}

TEST_CASE("determinant size guard") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 8, 1, 1);
    std::mt19937_64 rng(62);
    trans::TransitionInput in = sample::input(t, 2, rng);
    CHECK_THROWS_AS(trans::det_M(in), DeterminantCapExceeded);
    CHECK_THROWS_AS(trans::det_M_direct(in), CapExceeded);
}
