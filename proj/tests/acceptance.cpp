// Acceptance gate: one line per criterion, [PASS] or [FAIL], nonzero exit if
// anything fails.  Each criterion re-derives its expectations from scratch
// rather than trusting intermediate library state.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qlin/gnq.hpp"
#include "qlin/sample.hpp"
#include "qlin/transition.hpp"

#ifndef QLIN_MANIFEST_FILE
#error "QLIN_MANIFEST_FILE must point at the bundled manifest"
#endif

using namespace qlin;

namespace {

struct Outcome {
    bool pass = false;
    std::string note;
};

struct ManifestRow {
    int e = 0;
    std::uint64_t n = 0;
    std::string digits;
};

std::vector<ManifestRow> load_manifest() {
    std::ifstream f(QLIN_MANIFEST_FILE);
    if (!f) throw ManifestMissing("cannot open " QLIN_MANIFEST_FILE);
    std::vector<ManifestRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(f, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        ManifestRow row;
        std::size_t c1 = line.find(',');
        std::size_t c2 = line.find(',', c1 + 1);
        std::size_t q1 = line.find('"', c2);
        std::size_t q2 = line.find('"', q1 + 1);
        row.e = std::stoi(line.substr(0, c1));
        row.n = std::stoull(line.substr(c1 + 1, c2 - c1 - 1));
        row.digits = line.substr(q1 + 1, q2 - q1 - 1);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string digits_string(const std::vector<int>& digits) {
    std::string out;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(digits[i]);
    }
    return out;
}

// ---- criterion 1: the closed-form expansion equals the matrix determinant

Outcome criterion1() {
    struct Shape {
        int p, m;
    };
    const std::vector<Shape> shapes = {{2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5},
                                       {3, 1}, {3, 2}, {3, 3}};
    std::vector<std::unique_ptr<gf::FieldTower>> towers;
    for (const Shape& s : shapes) towers.push_back(gf::FieldTower::build_ptr(s.p, 1, s.m, 1, 1));

    std::mt19937_64 rng(0xC0FFEE);
    int checked = 0;
    for (int i = 0; i < 50; ++i) {
        const gf::FieldTower& t = *towers[static_cast<std::size_t>(i) % towers.size()];
        trans::TransitionInput in = sample::input(t, 3, rng);
        if (trans::expansion_det(in) != trans::det_M(in))
            return {false, "expansion mismatch on input " + std::to_string(i)};
        ++checked;
    }
    return {true, std::to_string(checked) + " random inputs over 8 field shapes"};
}

// ---- criterion 2: root transfer plus coefficient containment

Outcome criterion2() {
    std::unique_ptr<gf::FieldTower> t4 = gf::FieldTower::build_ptr(2, 1, 2, 4, 1);
    std::unique_ptr<gf::FieldTower> t5 = gf::FieldTower::build_ptr(2, 1, 2, 5, 1);
    std::mt19937_64 rng(0xBEEF);
    std::uint64_t roots_total = 0;
    for (int i = 0; i < 100; ++i) {
        const gf::FieldTower& t = i % 2 == 0 ? *t4 : *t5;
        trans::TransitionInput in = sample::input(t, 3, rng);
        trans::RootTransferReport rep = trans::verify_root_transfer(in, t.qe_level());
        if (rep.violations != 0)
            return {false, "root failed to transfer on input " + std::to_string(i)};
        if (rep.transfers_verified != rep.roots_found)
            return {false, "transfer accounting broken on input " + std::to_string(i)};
        if (!lin::coeffs_in(trans::det_M(in), t.r_level(1)))
            return {false, "determinant escaped the base field on input " + std::to_string(i)};
        roots_total += rep.roots_found;
    }
    return {true, "100 inputs, " + std::to_string(roots_total) + " roots transferred"};
}

// ---- criterion 3: difference class enumeration and witnesses

Outcome criterion3() {
    const std::vector<std::size_t> expected = {1, 2, 4, 10, 26, 80};
    for (int m = 1; m <= 6; ++m) {
        std::vector<std::vector<int>> classes = trans::enumerate_frakM(m);
        if (classes.size() != expected[static_cast<std::size_t>(m - 1)])
            return {false, "class count changed at m = " + std::to_string(m)};
        for (const auto& mu : classes) {
            std::vector<int> sigma = trans::hall_witness(mu);
            std::vector<int> counts(static_cast<std::size_t>(m), 0);
            for (int i = 0; i < m; ++i) {
                int d = ((sigma[static_cast<std::size_t>(i)] - i) % m + m) % m;
                ++counts[static_cast<std::size_t>(d)];
            }
            if (counts != mu)
                return {false, "witness mismatch at m = " + std::to_string(m)};
        }
    }
    return {true, "class counts 1,2,4,10,26,80 with verified witnesses"};
}

// ---- criterion 4: gcd kernels equal kernel intersections

Outcome criterion4() {
    std::unique_ptr<gf::FieldTower> tp = gf::FieldTower::build_ptr(2, 1, 2, 5, 1);
    const gf::FieldTower& t = *tp;
    std::mt19937_64 rng(0xDADA);
    std::size_t nontrivial = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<gf::FieldElem> cf, cg;
        for (int i = 0; i < 4; ++i) {
            cf.push_back(sample::elem(t, t.q_level(1), rng));
            cg.push_back(sample::elem(t, t.q_level(1), rng));
        }
        lin::LinPoly f = lin::LinPoly::make(t, t.q(), cf);
        lin::LinPoly g = lin::LinPoly::make(t, t.q(), cg);
        if (f.is_zero() && g.is_zero()) continue;
        lin::LinPoly h = lin::lin_gcd(f, g);

        std::size_t shared = 0;
        gf::SubfieldEnum full = gf::enumerate_subfield(t, t.qe_level());
        for (const gf::FieldElem& z : full) {
            bool in_both = lin_eval(f, z).is_zero() && lin_eval(g, z).is_zero();
            bool in_gcd = lin_eval(h, z).is_zero();
            if (in_both != in_gcd)
                return {false, "kernel mismatch on trial " + std::to_string(trial)};
            if (in_both) ++shared;
        }
        if (shared > 1) ++nontrivial;
    }
    return {true, "100 pairs over 1024 points, " + std::to_string(nontrivial) +
                      " with nontrivial shared kernels"};
}

// ---- criterion 5: coefficient path, evaluation path, shift recurrence,
// ----              and the compact product form all agree

Outcome criterion5() {
    std::unique_ptr<gf::FieldTower> t2 = gf::FieldTower::build_ptr(2, 1, 2, 2, 2);
    std::unique_ptr<gf::FieldTower> t3 = gf::FieldTower::build_ptr(2, 1, 2, 3, 2);
    gnq::GnqEvaluator ev2(*t2), ev3(*t3);

    std::vector<gf::FieldElem> pts2, pts3;
    {
        gf::SubfieldEnum s2 = gf::enumerate_subfield(*t2, t2->qe_level());
        for (const gf::FieldElem& y : s2) pts2.push_back(y);
        gf::SubfieldEnum s3 = gf::enumerate_subfield(*t3, t3->qe_level());
        for (const gf::FieldElem& y : s3) pts3.push_back(y);
    }
    for (std::uint64_t n = 0; n <= 2000; ++n) {
        poly::OrdPoly g2 = gnq::gnq_coeffs(n, *t2);
        for (const gf::FieldElem& y : pts2)
            if (poly::eval(g2, y) != ev2(n, y))
                return {false, "path disagreement at n = " + std::to_string(n) + " (e = 2)"};
        poly::OrdPoly g3 = gnq::gnq_coeffs(n, *t3);
        for (const gf::FieldElem& y : pts3)
            if (poly::eval(g3, y) != ev3(n, y))
                return {false, "path disagreement at n = " + std::to_string(n) + " (e = 3)"};
    }

    std::mt19937_64 rng(0xFEED);
    for (int trial = 0; trial < 200; ++trial) {
        std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(0, 2000)(rng);
        int a = std::uniform_int_distribution<int>(0, 3)(rng);
        int b = std::uniform_int_distribution<int>(0, a)(rng);
        if (!gnq::gnq_recurrence_check(n, a, b, *t2))
            return {false, "shift recurrence failed at n = " + std::to_string(n)};
    }

    std::vector<ManifestRow> rows = load_manifest();
    std::map<int, std::unique_ptr<gf::FieldTower>> towers;
    std::map<int, std::unique_ptr<gnq::GnqEvaluator>> evs;
    std::size_t weight5 = 0;
    for (const ManifestRow& row : rows) {
        gnq::GnqSpec spec;
        {
            gf::FieldTower probe = gf::FieldTower::build(2, 1, 2, 1, 1);
            spec = gnq::gnq_spec(row.n, probe);
        }
        if (spec.weight != 5) continue;
        ++weight5;
        if (!towers.count(row.e)) {
            towers[row.e] = gf::FieldTower::build_ptr(2, 1, 2, row.e, 2);
            evs[row.e] = std::make_unique<gnq::GnqEvaluator>(*towers[row.e]);
        }
        const gf::FieldTower& t = *towers[row.e];
        gnq::WeightForm w = gnq::gnq_weight_form(row.n, t);
        gf::SubfieldEnum full = gf::enumerate_subfield(t, t.qe_level());
        for (const gf::FieldElem& y : full)
            if (gnq::weight_form_eval(w, t, y) != (*evs[row.e])(row.n, y))
                return {false, "product form mismatch at n = " + std::to_string(row.n)};
    }
    return {true, "2001 exponents at 80 points, 200 shifts, " + std::to_string(weight5) +
                      " product forms over full fields"};
}

// ---- criterion 6: the manifest holds, and nearby exponents fail

Outcome criterion6() {
    std::vector<ManifestRow> rows = load_manifest();
    if (rows.size() != 69) return {false, "expected 69 manifest rows"};

    std::map<int, std::unique_ptr<gf::FieldTower>> towers;
    std::map<int, std::unique_ptr<gnq::GnqEvaluator>> evs;
    for (const ManifestRow& row : rows) {
        if (!towers.count(row.e)) {
            towers[row.e] = gf::FieldTower::build_ptr(2, 1, 2, row.e, 2);
            evs[row.e] = std::make_unique<gnq::GnqEvaluator>(*towers[row.e]);
        }
        const gf::FieldTower& t = *towers[row.e];
        const gnq::GnqEvaluator& ev = *evs[row.e];
        gnq::GnqSpec spec = gnq::gnq_spec(row.n, t);
        if (digits_string(spec.digits) != row.digits)
            return {false, "digit mismatch at n = " + std::to_string(row.n)};
        if (spec.weight <= 4)
            return {false, "weight too small at n = " + std::to_string(row.n)};
        std::uint64_t n = row.n;
        if (!gnq::is_pp([&](const gf::FieldElem& x) { return ev(n, x); }, t, t.qe_level()))
            return {false, "permutation check failed at n = " + std::to_string(row.n)};
    }

    int controls = 0;
    for (std::size_t i = 0; i < 20 && i < rows.size(); ++i) {
        const ManifestRow& row = rows[i];
        const gf::FieldTower& t = *towers[row.e];
        const gnq::GnqEvaluator& ev = *evs[row.e];
        // pre-screened non-permutation neighbors: n + 1 throughout, except
        // that 164 = 4 * 41 does permute (a fourth-power twist of a lighter
        // exponent), so the 163 row drops to 162 instead
        std::uint64_t n = row.n == 163 ? 162 : row.n + 1;
        if (gnq::is_pp([&](const gf::FieldElem& x) { return ev(n, x); }, t, t.qe_level()))
            return {false, "perturbed exponent " + std::to_string(n) +
                               " unexpectedly permutes (e = " + std::to_string(row.e) + ")"};
        ++controls;
    }
    return {true, "69 rows verified, " + std::to_string(controls) +
                      " perturbed controls rejected"};
}

// ---- criterion 7: registered families instantiate, verify, and land on
// ----              the tabulated exponents

Outcome criterion7() {
    struct Pick {
        std::string id;
        std::map<std::string, int> params;
        std::uint64_t expect_n;  // 0 when the family carries no exponent
    };
    const std::vector<Pick> picks = {
        {"P3.3", {{"a", 1}, {"b", 1}, {"k", 1}, {"e", 5}}, 5129},
        {"P3.3", {{"a", 1}, {"b", 2}, {"k", 2}, {"e", 5}}, 17429},
        {"P3.3", {{"a", 2}, {"b", 3}, {"k", 2}, {"e", 5}}, 17489},
        {"P3.3", {{"a", 2}, {"b", 4}, {"k", 2}, {"e", 5}}, 17681},
        {"P3.4", {{"a", 1}, {"e", 4}}, 2317},
        {"P3.4", {{"a", 2}, {"e", 6}}, 135217},
        {"P3.5", {{"e", 3}}, 553},
        {"P3.5", {{"e", 5}}, 8713},
        {"P3.6", {{"e", 4}}, 2377},
        {"P3.7", {{"e", 6}}, 135457},
        {"R3.8a", {{"a", 2}, {"b", 4}, {"e", 5}}, 0},
        {"R3.8a", {{"a", 3}, {"b", 3}, {"e", 4}}, 0},
        {"R3.8b", {{"a", 2}, {"b", 3}, {"e", 4}}, 0},
        {"R3.8b", {{"a", 4}, {"b", 3}, {"e", 6}}, 0},
    };

    std::map<int, std::unique_ptr<gf::FieldTower>> towers;
    std::set<std::uint64_t> reproduced;
    for (const Pick& pick : picks) {
        int e = pick.params.at("e");
        if (!towers.count(e)) towers[e] = gf::FieldTower::build_ptr(2, 1, 2, e, 2);
        const gf::FieldTower& t = *towers[e];
        gnq::CriterionInstance inst;
        try {
            inst = gnq::instance_registry(pick.id, pick.params, t);
        } catch (const Error& ex) {
            return {false, pick.id + " refused its parameters: " + ex.what()};
        }
        if (pick.expect_n != 0) {
            if (!inst.n || *inst.n != pick.expect_n)
                return {false, pick.id + " produced the wrong exponent"};
            reproduced.insert(*inst.n);
        } else if (inst.n) {
            return {false, pick.id + " unexpectedly carries an exponent"};
        }
        gnq::CriterionReport rep = gnq::criterion_check(inst, t);
        if (!rep.all())
            return {false, pick.id + " failed: " + rep.detail};
    }

    for (std::uint64_t n : {17429ull, 17489ull, 17681ull, 2317ull, 135217ull, 8713ull,
                            2377ull, 135457ull})
        if (!reproduced.count(n))
            return {false, "tabulated exponent " + std::to_string(n) + " not reproduced"};
    return {true, std::to_string(picks.size()) + " instances verified, 8 tabulated exponents reproduced"};
}

}  // namespace

int main() {
    struct Entry {
        const char* label;
        Outcome (*fn)();
        double budget_seconds;
    };
    const Entry entries[] = {
        {"determinant expansion identity", criterion1, 30.0},
        {"root transfer with base-field coefficients", criterion2, 60.0},
        {"difference classes and witnesses", criterion3, 10.0},
        {"gcd kernel intersection", criterion4, 30.0},
        {"substitution coefficient cross-paths", criterion5, 120.0},
        {"manifest verification with perturbed controls", criterion6, 300.0},
        {"family registry end to end", criterion7, 180.0},
    };

    int failures = 0;
    int index = 0;
    for (const Entry& entry : entries) {
        ++index;
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = entry.fn();
        } catch (const std::exception& ex) {
            out = {false, std::string("exception: ") + ex.what()};
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (out.pass && secs > entry.budget_seconds) {
            out.pass = false;
            out.note += " (exceeded " + std::to_string(entry.budget_seconds) + "s budget)";
        }
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(2);
        line << (out.pass ? "[PASS]" : "[FAIL]") << " criterion " << index << ": "
             << entry.label << " (" << secs << "s) - " << out.note;
        std::cout << line.str() << "\n";
        if (!out.pass) ++failures;
    }
    std::cout << (7 - failures) << "/7 criteria passed\n";
    return failures == 0 ? 0 : 1;
}
