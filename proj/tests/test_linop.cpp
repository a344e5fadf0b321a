#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <vector>

#include "qlin/linop.hpp"
#include "qlin/sample.hpp"

using namespace qlin;

namespace {

lin::LinPoly random_q_poly(const gf::FieldTower& t, int len, std::mt19937_64& rng) {
    std::vector<gf::FieldElem> c;
    for (int i = 0; i < len; ++i) c.push_back(sample::elem(t, t.q_level(1), rng));
    return lin::LinPoly::make(t, t.q(), std::move(c));
}

std::set<unsigned long long> root_set(const lin::LinPoly& f, const gf::FieldTower& t) {
    std::set<unsigned long long> roots;
    gf::SubfieldEnum full = gf::enumerate_subfield(t, t.qe_level());
    for (const gf::FieldElem& z : full)
        if (lin_eval(f, z).is_zero()) roots.insert(static_cast<unsigned long long>(t.pack(z)));
    return roots;
}

}  // namespace

TEST_CASE("evaluation is additive and q-linear over the middle field") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        lin::LinPoly f = random_q_poly(t, 4, rng);
        gf::FieldElem x = sample::elem(t, t.qe_level(), rng);
        gf::FieldElem y = sample::elem(t, t.qe_level(), rng);
        gf::FieldElem lam = sample::elem(t, t.q_level(1), rng);
        CHECK(lin_eval(f, x + y) == lin_eval(f, x) + lin_eval(f, y));
        CHECK(lin_eval(f, lam * x) == lam * lin_eval(f, x));
    }
}

TEST_CASE("composition evaluates as nesting") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 30; ++trial) {
        lin::LinPoly f = random_q_poly(t, 3, rng);
        lin::LinPoly g = random_q_poly(t, 3, rng);
        gf::FieldElem x = sample::elem(t, t.qe_level(), rng);
        CHECK(lin_eval(lin_compose(f, g), x) == lin_eval(f, lin_eval(g, x)));
    }
}

TEST_CASE("iterated composition") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    std::mt19937_64 rng(33);
    lin::LinPoly f = random_q_poly(t, 3, rng);
    CHECK(lin_compose_power(f, 0) == lin::LinPoly::identity(t, t.q()));
    CHECK(lin_compose_power(f, 1) == f);
    CHECK(lin_compose_power(f, 3) == lin_compose(f, lin_compose(f, f)));
}

TEST_CASE("associate is an exponent bookkeeping bijection") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 20; ++trial) {
        lin::LinPoly f = random_q_poly(t, 4, rng);
        CHECK(lin::lift(lin::associate(f), t.q()) == f);
        // with coefficients inside F_q the associate turns composition into product
        lin::LinPoly g = random_q_poly(t, 4, rng);
        CHECK(lin::associate(lin_compose(f, g)) == lin::associate(f) * lin::associate(g));
    }
}

TEST_CASE("rebasing preserves the induced map") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 20; ++trial) {
        lin::LinPoly f = random_q_poly(t, 3, rng);
        lin::LinPoly g = lin::rebase(f, t.r());
        CHECK(g.base_pexp() == 1);
        gf::FieldElem x = sample::elem(t, t.qe_level(), rng);
        CHECK(lin_eval(f, x) == lin_eval(g, x));
    }
}

TEST_CASE("twisting conjugates evaluation by the frobenius") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    std::mt19937_64 rng(36);
    for (int trial = 0; trial < 20; ++trial) {
        lin::LinPoly f = random_q_poly(t, 3, rng);
        int j = std::uniform_int_distribution<int>(0, 3)(rng);
        gf::FieldElem x = sample::elem(t, t.qe_level(), rng);
        gf::FieldElem lhs = gf::frobenius(lin_eval(f, x), t.r(), static_cast<std::uint64_t>(j));
        gf::FieldElem rhs = lin_eval(lin::twist(f, j), gf::frobenius(x, t.r(), static_cast<std::uint64_t>(j)));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("mixed bases meet at the common base") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    std::mt19937_64 rng(37);
    lin::LinPoly f = random_q_poly(t, 3, rng);                       // base 4
    lin::LinPoly g = lin::LinPoly::frob_monomial(t, t.r(), 1);       // base 2
    lin::LinPoly h = lin_compose(f, g);
    CHECK(h.base_pexp() == 1);
    gf::FieldElem x = sample::elem(t, t.qe_level(), rng);
    CHECK(lin_eval(h, x) == lin_eval(f, x * x));
}

TEST_CASE("gcd root set is the intersection of root sets") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    std::mt19937_64 rng(38);
    int nontrivial = 0;
    for (int trial = 0; trial < 25; ++trial) {
        lin::LinPoly f = random_q_poly(t, 3, rng);
        lin::LinPoly g = random_q_poly(t, 3, rng);
        if (f.is_zero() && g.is_zero()) continue;
        lin::LinPoly h = lin::lin_gcd(f, g);
        std::set<unsigned long long> rf = root_set(f, t);
        std::set<unsigned long long> rg = root_set(g, t);
        std::set<unsigned long long> expected;
        for (unsigned long long x : rf)
            if (rg.count(x)) expected.insert(x);
        CHECK(root_set(h, t) == expected);
        if (expected.size() > 1) ++nontrivial;
    }
    CHECK(nontrivial > 0);  // the sample hit at least one shared kernel
}

TEST_CASE("gcd input guards") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    CHECK_THROWS_AS(
        lin::lin_gcd(lin::LinPoly::zero(t, t.q()), lin::LinPoly::zero(t, t.q())), BothZero);
    // a coefficient outside F_q is rejected
    lin::LinPoly bad = lin::LinPoly::make(t, t.q(), {t.gen()});
    CHECK_THROWS_AS(lin::lin_gcd(bad, lin::LinPoly::identity(t, t.q())),
                    CoefficientsOutsideFq);
}

TEST_CASE("dense expansion realizes the same function") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    std::mt19937_64 rng(39);
    CHECK(lin::expand(lin::LinPoly::identity(t, t.q())) == poly::OrdPoly::monomial(t, 1));
    CHECK(lin::expand(lin::LinPoly::frob_monomial(t, t.q(), 1)) ==
          poly::OrdPoly::monomial(t, 4));
    for (int trial = 0; trial < 15; ++trial) {
        lin::LinPoly f = random_q_poly(t, 3, rng);
        poly::OrdPoly dense = lin::expand(f);
        gf::FieldElem x = sample::elem(t, t.qe_level(), rng);
        CHECK(poly::eval(dense, x) == lin_eval(f, x));
    }
    // degree guard: base^top blows past the dense cap
    std::vector<gf::FieldElem> far(22, t.zero());
    far.push_back(t.one());
    CHECK_THROWS_AS(lin::expand(lin::LinPoly::make(t, t.r(), far)), DegreeCapExceeded);
}

TEST_CASE("coefficient subfield detection") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    std::mt19937_64 rng(40);
    lin::LinPoly f = sample::linpoly(t, 4, rng);   // coefficients in F_2
    CHECK(lin::coeffs_in(f, t.r_level(1)));
    CHECK(lin::coeffs_in(f, t.q_level(1)));
    lin::LinPoly g = lin::LinPoly::make(t, t.q(), {t.gen()});
    CHECK_FALSE(lin::coeffs_in(g, t.q_level(1)));  // the generator spans the full field
    CHECK(lin::coeffs_in(g, t.qe_level()));
}

TEST_CASE("base validation") {
    gf::FieldTower t = gf::FieldTower::build(2, 1, 2, 3, 1);
    CHECK_THROWS_AS(lin::LinPoly::make(t, 3, {t.one()}), TowerMismatch);
    CHECK_THROWS_AS(lin::LinPoly::make(t, 1, {t.one()}), TowerMismatch);
    gf::FieldTower other = gf::FieldTower::build(2, 1, 2, 1, 1);
    CHECK_THROWS_AS(lin::LinPoly::make(t, t.q(), {other.one()}), TowerMismatch);
}
