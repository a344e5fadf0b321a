#include <numeric>
#include <sstream>

#include "json.hpp"
#include "qlin/errors.hpp"
#include "qlin/gnq.hpp"

namespace qlin::gnq {

namespace {

using nlohmann::json;

int need_param(const std::map<std::string, int>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) throw PredicateFailed("missing parameter " + key);
    return it->second;
}

void check_params_exactly(const std::map<std::string, int>& params,
                          std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : params) {
        (void)v;
        bool known = false;
        for (const char* key : keys)
            if (k == key) known = true;
        if (!known) throw PredicateFailed("unexpected parameter " + k);
    }
}

void check_q4_tower(const gf::FieldTower& t, int e) {
    if (t.p() != 2 || t.s() != 1 || t.m() != 2)
        throw InstanceInvariantViolation("registry families require q = 4 (r = 2, m = 2)");
    if (t.e() != e)
        throw InstanceInvariantViolation("tower extension degree differs from parameter e");
}

std::uint64_t pow4(int e) {
    if (e < 0 || e > 30) throw InstanceInvariantViolation("exponent out of range");
    return std::uint64_t{1} << (2 * e);
}

// characteristic-2 coefficient vectors for the claimed determinants
std::vector<long long> xpow(int d) {
    std::vector<long long> v(static_cast<std::size_t>(d) + 1, 0);
    v.back() = 1;
    return v;
}

std::vector<long long> vadd(std::vector<long long> a, const std::vector<long long>& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % 2;
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

poly::OrdPoly int_poly(const std::vector<long long>& v, const gf::FieldTower& t) {
    std::vector<gf::FieldElem> coeffs;
    coeffs.reserve(v.size());
    for (long long x : v) coeffs.push_back(t.from_int(x));
    return poly::OrdPoly::make(t, std::move(coeffs));
}

// (num / (x+1)^2) must divide exactly; gcd of the quotient with
// 1 + x + ... + x^(e-1) decides the family predicate
void check_spectrum(const std::vector<long long>& num, int e, const gf::FieldTower& t,
                    const std::string& who) {
    poly::OrdPoly den =
        int_poly({1, 0, 1}, t);  // (x+1)^2 in characteristic 2
    auto [quot, rem] = poly::divrem(int_poly(num, t), den);
    if (!rem.is_zero())
        throw InvariantViolation(who + ": numerator not divisible by (x+1)^2");
    if (poly::ord_gcd(quot, poly::all_ones(e, t)) != poly::OrdPoly::one(t))
        throw PredicateFailed(who + ": quotient shares a factor with 1+x+...+x^(e-1)");
}

std::vector<FiberData> build_fibers(
    const gf::FieldTower& t,
    const std::function<FiberData(const gf::FieldElem& c, const gf::FieldElem& c2,
                                  const gf::FieldElem& c3)>& make) {
    std::vector<FiberData> out;
    for (const auto& c : gf::enumerate_subfield(t, t.q_level(1)))
        out.push_back(make(c, gf::pow(c, 2), gf::pow(c, 3)));
    return out;
}

}  // namespace

const std::vector<std::string>& registry_ids() {
    static const std::vector<std::string> ids = {"P3.3", "P3.4", "P3.5", "P3.6",
                                                 "P3.7", "R3.8a", "R3.8b"};
    return ids;
}

CriterionInstance instance_registry(const std::string& id,
                                    const std::map<std::string, int>& params,
                                    const gf::FieldTower& t) {
    CriterionInstance inst;
    inst.id = id;
    inst.params = params;
    inst.tower = &t;
    auto S = [&](int a) { return S_poly(a, t); };
    auto X = [&](int i) { return lin::LinPoly::frob_monomial(t, t.q(), i); };
    gf::FieldElem one = t.one();

    if (id == "P3.3") {
        check_params_exactly(params, {"a", "b", "k", "e"});
        int a = need_param(params, "a"), b = need_param(params, "b");
        int k = need_param(params, "k"), e = need_param(params, "e");
        check_q4_tower(t, e);
        if (a < 1 || b < 1 || k < 1 || e < 1)
            throw PredicateFailed("parameters must be at least 1");
        if (std::gcd(e, 2 * k) != 1) throw PredicateFailed("gcd(e, 2k) must be 1");
        if (a != k && b != k) throw PredicateFailed("one of a, b must equal k");
        inst.n = 1 + pow4(a) + pow4(b) + pow4(e) + pow4(e + k);
        inst.f.terms = {{S(a), S(b)}, {S(a), S(k)}, {S(b), S(k)}, {S(e), S(k)}, {S(e), S(e)}};
        inst.fbar = poly::OrdPoly::monomial(t, 2);
        inst.fibers = build_fibers(t, [&](const gf::FieldElem& c, const gf::FieldElem& c2,
                                          const gf::FieldElem& c3) {
            (void)c3;
            return FiberData{c, {c, one}, {S(k), S(k)}, c2};
        });
        inst.detA = {vadd(xpow(2 * k + 1), xpow(1)), vadd(xpow(2 * k), xpow(0)), {1, 0, 1}};
        return inst;
    }
    if (id == "P3.4") {
        check_params_exactly(params, {"a", "e"});
        int a = need_param(params, "a"), e = need_param(params, "e");
        check_q4_tower(t, e);
        if (a < 1 || e < 1) throw PredicateFailed("parameters must be at least 1");
        if (e % 2 != 0) throw PredicateFailed("e must be even");
        if (std::gcd(e, 2 * a + 1) != 1) throw PredicateFailed("gcd(e, 2a+1) must be 1");
        inst.n = 1 + 3 * pow4(a) + pow4(e) + 2 * pow4(e + a);
        inst.f.terms = {{X(a)}, {S(e)}, {S(a), S(a), S(e), S(e)}, {S(a), S(e), S(e), S(e)}};
        inst.fbar = poly::OrdPoly::monomial(t, 1);
        inst.fibers = build_fibers(t, [&](const gf::FieldElem& c, const gf::FieldElem& c2,
                                          const gf::FieldElem& c3) {
            return FiberData{c, {one, c2}, {X(a) + c3 * S(a), S(a)}, c};
        });
        inst.detA = {vadd(xpow(2 * a + 1), xpow(2 * a)), vadd(xpow(2 * a), xpow(0)), {1, 1}};
        return inst;
    }
    if (id == "P3.5") {
        check_params_exactly(params, {"e"});
        int e = need_param(params, "e");
        check_q4_tower(t, e);
        if (e <= 1 || e % 2 == 0) throw PredicateFailed("e must be odd and greater than 1");
        inst.n = 1 + 2 * pow4(1) + 2 * pow4(e - 1) + 2 * pow4(e + 1);
        inst.f.terms = {{S(2)}, {S(1), S(1), S(e), S(e)}, {S(e - 1), S(e - 1), S(e), S(e)}};
        inst.fbar = poly::OrdPoly::monomial(t, 1);
        inst.fibers = build_fibers(t, [&](const gf::FieldElem& c, const gf::FieldElem& c2,
                                          const gf::FieldElem& c3) {
            (void)c3;
            return FiberData{c, {one, c2}, {S(2), S(1) + S(e - 1)}, t.zero()};
        });
        inst.detA = {vadd(xpow(4), xpow(0)), vadd(xpow(2 * e - 1), xpow(3)), {1, 0, 1}};
        return inst;
    }
    if (id == "P3.6") {
        check_params_exactly(params, {"e"});
        int e = need_param(params, "e");
        check_q4_tower(t, e);
        if (e < 2 || e % 2 != 0) throw PredicateFailed("e must be even");
        if (e % 3 == 0) throw PredicateFailed("e must not be divisible by 3");
        inst.n = 1 + 2 * pow4(1) + pow4(3) + pow4(e) + 2 * pow4(e + 1);
        inst.f.terms = {{X(2)}, {S(e)}, {S(1), S(1), S(e), S(e)}, {S(3), S(e), S(e), S(e)}};
        inst.fbar = poly::OrdPoly::monomial(t, 1);
        inst.fibers = build_fibers(t, [&](const gf::FieldElem& c, const gf::FieldElem& c2,
                                          const gf::FieldElem& c3) {
            return FiberData{c, {one, c2}, {X(2) + c3 * S(3), S(1)}, c};
        });
        inst.detA = {xpow(4), {1, 1, 1, 0, 1}, {1}};
        return inst;
    }
    if (id == "P3.7") {
        check_params_exactly(params, {"e"});
        int e = need_param(params, "e");
        check_q4_tower(t, e);
        if (e < 2 || e % 2 != 0) throw PredicateFailed("e must be even");
        if (e % 5 == 0) throw PredicateFailed("e must not be divisible by 5");
        inst.n = 1 + 2 * pow4(2) + pow4(4) + pow4(e) + 2 * pow4(e + 2);
        inst.f.terms = {{X(3)}, {S(e)}, {S(2), S(2), S(e), S(e)}, {S(4), S(e), S(e), S(e)}};
        inst.fbar = poly::OrdPoly::monomial(t, 1);
        inst.fibers = build_fibers(t, [&](const gf::FieldElem& c, const gf::FieldElem& c2,
                                          const gf::FieldElem& c3) {
            return FiberData{c, {one, c2}, {X(3) + c3 * S(4), S(2)}, c};
        });
        inst.detA = {xpow(6), {1, 1, 1, 1, 1, 0, 1}, {1}};
        return inst;
    }
    if (id == "R3.8a") {
        check_params_exactly(params, {"a", "b", "e"});
        int a = need_param(params, "a"), b = need_param(params, "b");
        int e = need_param(params, "e");
        check_q4_tower(t, e);
        if (a < 1 || b < 1 || e < 1) throw PredicateFailed("parameters must be at least 1");
        if ((a + b) % 2 != 0) throw PredicateFailed("a + b must be even");
        if (std::gcd(e, a) != 1) throw PredicateFailed("gcd(e, a) must be 1");
        std::vector<long long> num =
            vadd(vadd(xpow(2 * a), xpow(0)), vadd(xpow(2 * b + 1), xpow(3)));
        check_spectrum(num, e, t, id);
        inst.f.terms = {{S(a)}, {S(1), S(1), S(e), S(e)}, {S(b), S(b), S(e), S(e)}};
        inst.fbar = poly::OrdPoly::monomial(t, 1);
        inst.fibers = build_fibers(t, [&](const gf::FieldElem& c, const gf::FieldElem& c2,
                                          const gf::FieldElem& c3) {
            (void)c3;
            return FiberData{c, {one, c2}, {S(a), S(1) + S(b)}, t.zero()};
        });
        inst.detA = {vadd(xpow(2 * a), xpow(0)), vadd(xpow(2 * b + 1), xpow(3)), {1, 0, 1}};
        return inst;
    }
    if (id == "R3.8b") {
        check_params_exactly(params, {"a", "b", "e"});
        int a = need_param(params, "a"), b = need_param(params, "b");
        int e = need_param(params, "e");
        check_q4_tower(t, e);
        if (a < 1 || b < 1 || e < 1) throw PredicateFailed("parameters must be at least 1");
        if ((a + e) % 2 != 0) throw PredicateFailed("a + e must be even");
        if (std::gcd(e, std::abs(a - b)) != 1) throw PredicateFailed("gcd(e, a-b) must be 1");
        std::vector<long long> num =
            vadd(vadd(xpow(2 * a), xpow(3)), vadd(xpow(1), xpow(0)));
        check_spectrum(num, e, t, id);
        inst.f.terms = {
            {S(a)}, {S(b)}, {S(e)}, {S(1), S(1), S(e), S(e)}, {S(b), S(e), S(e), S(e)}};
        inst.fbar = poly::OrdPoly::monomial(t, 1);
        inst.fibers = build_fibers(t, [&](const gf::FieldElem& c, const gf::FieldElem& c2,
                                          const gf::FieldElem& c3) {
            return FiberData{c, {one, c2}, {S(a) + (one + c3) * S(b), S(1)}, c};
        });
        inst.detA = {vadd(xpow(2 * a), xpow(2 * b)),
                     vadd(vadd(xpow(2 * b), xpow(3)), vadd(xpow(1), xpow(0))), {1, 0, 1}};
        return inst;
    }
    throw UnknownId("no registered family " + id);
}

CriterionReport criterion_check(const CriterionInstance& inst, const gf::FieldTower& t) {
    if (inst.tower != &t) throw TowerMismatch("instance bound to a different tower");
    const int m = t.m();
    const int e = t.e();
    const std::uint64_t r = t.r();
    const std::uint64_t q_order = t.level_order(t.q_level(1));
    if (t.level_order(t.qe_level()) > (std::uint64_t{1} << 20))
        throw CapExceeded("domain larger than 2^20");

    if (inst.fibers.size() != q_order)
        throw InstanceInvariantViolation("need one fiber record per element of F_q");
    {
        std::vector<bool> seen(inst.fibers.size(), false);
        for (const auto& c : gf::enumerate_subfield(t, t.q_level(1))) {
            bool found = false;
            for (std::size_t i = 0; i < inst.fibers.size(); ++i) {
                if (!seen[i] && inst.fibers[i].c == c) {
                    seen[i] = true;
                    found = true;
                    break;
                }
            }
            if (!found)
                throw InstanceInvariantViolation("fiber records do not cover F_q exactly");
        }
    }
    for (const auto& fib : inst.fibers) {
        if (fib.a.size() != static_cast<std::size_t>(m) ||
            fib.f.size() != static_cast<std::size_t>(m))
            throw InstanceInvariantViolation("each fiber needs m scalars and m polynomials");
        for (const auto& ai : fib.a)
            if (!gf::in_subfield(ai, t.q_level(1)))
                throw InstanceInvariantViolation("fiber scalar outside F_q");
        for (const auto& fi : fib.f) {
            if (fi.base_pexp() != t.s() * t.m())
                throw InstanceInvariantViolation("fiber polynomial not written in base q");
            if (!lin::coeffs_in(fi, t.q_level(1)))
                throw InstanceInvariantViolation("fiber polynomial coefficient outside F_q");
        }
        if (!gf::in_subfield(fib.b, t.qe_level()))
            throw InstanceInvariantViolation("fiber shift outside F_{q^e}");
    }

    CriterionReport rep;
    std::ostringstream detail;
    lin::LinPoly Se = S_poly(e, t);

    std::optional<GnqEvaluator> ev;
    if (inst.n) ev.emplace(t);

    bool square = true, fibers_ok = true, congr = true;
    for (const auto& z : gf::enumerate_subfield(t, t.qe_level())) {
        gf::FieldElem fx = sop_eval(inst.f, z);
        gf::FieldElem sez = lin_eval(Se, z);
        if (square && lin_eval(Se, fx) != poly::eval(inst.fbar, sez)) {
            square = false;
            detail << "square fails at " << gf::to_string(z) << "; ";
        }
        const FiberData* fib = nullptr;
        for (const auto& cand : inst.fibers)
            if (cand.c == sez) {
                fib = &cand;
                break;
            }
        if (fib == nullptr) throw InstanceInvariantViolation("point maps to an unlisted fiber");
        gf::FieldElem rhs = fib->b;
        for (int i = 0; i < m; ++i)
            rhs += fib->a[static_cast<std::size_t>(i)] *
                   gf::frobenius(lin_eval(fib->f[static_cast<std::size_t>(i)], z), r,
                                 static_cast<std::uint64_t>(i));
        if (fibers_ok && fx != rhs) {
            fibers_ok = false;
            detail << "fiber decomposition fails on fiber c = " << gf::to_string(sez) << "; ";
        }
        if (congr && ev && (*ev)(*inst.n, z) != fx) {
            congr = false;
            detail << "reduced form disagrees with the exponent family at "
                   << gf::to_string(z) << "; ";
        }
    }
    rep.square_commutes = square;
    rep.fibers_match = fibers_ok;
    rep.congruence_ok = congr;

    rep.base_pp = is_pp([&](const gf::FieldElem& x) { return poly::eval(inst.fbar, x); }, t,
                        t.q_level(1));
    if (!rep.base_pp) detail << "base map is not a permutation of F_q; ";

    poly::OrdPoly num_base = int_poly(inst.detA.num_base, t);
    poly::OrdPoly num_c3 = int_poly(inst.detA.num_c3, t);
    poly::OrdPoly den = int_poly(inst.detA.den, t);
    if (den.is_zero()) throw InstanceInvariantViolation("zero claimed denominator");
    poly::OrdPoly ones = poly::all_ones(e, t);
    bool det_ok = true, gcd_ok = true;
    for (const auto& fib : inst.fibers) {
        std::vector<std::vector<poly::OrdPoly>> A(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                int k = ((j - i) % m + m) % m;
                poly::OrdPoly cell =
                    gf::frobenius(fib.a[static_cast<std::size_t>(k)], r,
                                  static_cast<std::uint64_t>(i)) *
                    lin::associate(fib.f[static_cast<std::size_t>(k)]);
                if (i > j) cell = cell * poly::OrdPoly::monomial(t, 1);
                A[static_cast<std::size_t>(i)].push_back(cell);
            }
        }
        poly::OrdPoly det = poly::ord_det(A);
        poly::OrdPoly claimed = num_base + gf::pow(fib.c, 3) * num_c3;
        if (det * den != claimed) {
            det_ok = false;
            detail << "determinant mismatch on fiber c = " << gf::to_string(fib.c) << "; ";
        }
        if (poly::ord_gcd(det, ones) != poly::OrdPoly::one(t)) {
            gcd_ok = false;
            detail << "determinant shares a factor with 1+x+...+x^(e-1) on fiber c = "
                   << gf::to_string(fib.c) << "; ";
        }
    }
    rep.detA_matches = det_ok;
    rep.gcd_ok = gcd_ok;

    rep.pp_confirmed =
        is_pp([&](const gf::FieldElem& x) { return sop_eval(inst.f, x); }, t, t.qe_level());
    if (!rep.pp_confirmed) detail << "map is not a permutation of F_{q^e}; ";

    rep.detail = detail.str();
    return rep;
}

namespace {

json elem_to_json(const gf::FieldElem& x, const gf::FieldTower& t) {
    json arr = json::array();
    for (int i = 0; i < t.degree(); ++i) arr.push_back(static_cast<int>(x.coord(i)));
    return arr;
}

gf::FieldElem elem_from_json(const json& j, const gf::FieldTower& t) {
    std::vector<std::uint8_t> coords;
    for (const auto& v : j) coords.push_back(static_cast<std::uint8_t>(v.get<int>()));
    return t.make(coords);
}

json lin_to_json(const lin::LinPoly& f, const gf::FieldTower& t) {
    json arr = json::array();
    for (const auto& c : f.coeffs()) arr.push_back(elem_to_json(c, t));
    return json{{"pexp", f.base_pexp()}, {"coeffs", arr}};
}

lin::LinPoly lin_from_json(const json& j, const gf::FieldTower& t) {
    std::vector<gf::FieldElem> coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.push_back(elem_from_json(c, t));
    return lin::LinPoly::make_pexp(t, j.at("pexp").get<int>(), std::move(coeffs));
}

}  // namespace

std::string instance_to_json(const CriterionInstance& inst) {
    if (inst.tower == nullptr) throw InstanceInvariantViolation("instance has no tower");
    const gf::FieldTower& t = *inst.tower;
    json j;
    j["id"] = inst.id;
    j["params"] = inst.params;
    if (inst.n)
        j["n"] = *inst.n;
    else
        j["n"] = nullptr;
    j["tower"] = {{"p", t.p()}, {"s", t.s()}, {"m", t.m()}, {"e", t.e()},
                  {"aux_factor", t.aux_factor()}};
    json terms = json::array();
    for (const auto& term : inst.f.terms) {
        json factors = json::array();
        for (const auto& fac : term) factors.push_back(lin_to_json(fac, t));
        terms.push_back(factors);
    }
    j["f"] = terms;
    json fbar = json::array();
    for (const auto& c : inst.fbar.coeffs()) fbar.push_back(elem_to_json(c, t));
    j["fbar"] = fbar;
    json fibers = json::array();
    for (const auto& fib : inst.fibers) {
        json a = json::array();
        for (const auto& ai : fib.a) a.push_back(elem_to_json(ai, t));
        json f = json::array();
        for (const auto& fi : fib.f) f.push_back(lin_to_json(fi, t));
        fibers.push_back(json{{"c", elem_to_json(fib.c, t)},
                              {"a", a},
                              {"f", f},
                              {"b", elem_to_json(fib.b, t)}});
    }
    j["fibers"] = fibers;
    j["claimed_detA"] = {{"num_base", inst.detA.num_base},
                         {"num_c3", inst.detA.num_c3},
                         {"den", inst.detA.den}};
    return j.dump(1);
}

CriterionInstance instance_from_json(const std::string& text, const gf::FieldTower& t) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& ex) {
        throw InstanceInvariantViolation(std::string("bad instance document: ") + ex.what());
    }
    try {
        const auto& tw = j.at("tower");
        if (tw.at("p").get<int>() != t.p() || tw.at("s").get<int>() != t.s() ||
            tw.at("m").get<int>() != t.m() || tw.at("e").get<int>() != t.e() ||
            tw.at("aux_factor").get<int>() != t.aux_factor())
            throw InstanceInvariantViolation("instance written for a different tower");
        CriterionInstance inst;
        inst.id = j.at("id").get<std::string>();
        inst.params = j.at("params").get<std::map<std::string, int>>();
        if (!j.at("n").is_null()) inst.n = j.at("n").get<std::uint64_t>();
        inst.tower = &t;
        for (const auto& term : j.at("f")) {
            std::vector<lin::LinPoly> factors;
            for (const auto& fac : term) factors.push_back(lin_from_json(fac, t));
            inst.f.terms.push_back(std::move(factors));
        }
        std::vector<gf::FieldElem> fbar;
        for (const auto& c : j.at("fbar")) fbar.push_back(elem_from_json(c, t));
        inst.fbar = poly::OrdPoly::make(t, std::move(fbar));
        for (const auto& fj : j.at("fibers")) {
            FiberData fib;
            fib.c = elem_from_json(fj.at("c"), t);
            for (const auto& ai : fj.at("a")) fib.a.push_back(elem_from_json(ai, t));
            for (const auto& fi : fj.at("f")) fib.f.push_back(lin_from_json(fi, t));
            fib.b = elem_from_json(fj.at("b"), t);
            inst.fibers.push_back(std::move(fib));
        }
        const auto& d = j.at("claimed_detA");
        inst.detA.num_base = d.at("num_base").get<std::vector<long long>>();
        inst.detA.num_c3 = d.at("num_c3").get<std::vector<long long>>();
        inst.detA.den = d.at("den").get<std::vector<long long>>();
        return inst;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& ex) {
        throw InstanceInvariantViolation(std::string("bad instance document: ") + ex.what());
    }
}

}  // namespace qlin::gnq
