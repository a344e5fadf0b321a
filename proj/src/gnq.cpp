#include "qlin/gnq.hpp"

#include <algorithm>
#include <array>

#include "qlin/errors.hpp"

namespace qlin::gnq {

namespace {

constexpr std::uint64_t kMaxN = 10000;
constexpr std::uint64_t kMaxDomain = std::uint64_t{1} << 20;

long long pow_mod(long long b, long long e, long long p) {
    long long r = 1;
    b %= p;
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

}  // namespace

GnqSpec gnq_spec(std::uint64_t n, const gf::FieldTower& t) {
    GnqSpec s;
    s.n = n;
    s.q = t.q();
    std::uint64_t v = n;
    while (v > 0) {
        s.digits.push_back(static_cast<int>(v % s.q));
        v /= s.q;
    }
    for (int d : s.digits) s.weight += d;
    return s;
}

lin::LinPoly S_poly(int a, const gf::FieldTower& t) {
    if (a < 0) throw InvariantViolation("negative span");
    if (a == 0) return lin::LinPoly::zero(t, t.q());
    return lin::LinPoly::make(t, t.q(),
                              std::vector<gf::FieldElem>(static_cast<std::size_t>(a), t.one()));
}

poly::OrdPoly gnq_coeffs(std::uint64_t n, const gf::FieldTower& t) {
    if (n > kMaxN) throw DegreeCapExceeded("exponent exceeds 10^4");
    const long long p = t.p();
    const std::uint64_t q = t.q();

    // digit-binomial table so C(.,.) mod p reduces to lookups
    std::vector<std::vector<long long>> pas(static_cast<std::size_t>(p));
    for (long long i = 0; i < p; ++i) {
        pas[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i) + 1, 1);
        for (long long j = 1; j < i; ++j)
            pas[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                (pas[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
                 pas[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)]) %
                p;
    }
    auto binom = [&](std::uint64_t nn, std::uint64_t kk) -> long long {
        long long r = 1;
        auto up = static_cast<std::uint64_t>(p);
        while ((nn > 0 || kk > 0) && r != 0) {
            std::uint64_t nd = nn % up, kd = kk % up;
            r = kd > nd ? 0 : r * pas[static_cast<std::size_t>(nd)][static_cast<std::size_t>(kd)] % p;
            nn /= up;
            kk /= up;
        }
        return r;
    };

    // sum over c in F_q of (x+c)^n: the x^j coefficient is
    // C(n,j) * sum_c c^(n-j), and the power sum is -1 exactly when
    // (q-1) | (n-j) with n-j >= 1, else 0
    std::vector<long long> h(n + 1, 0);
    for (std::uint64_t j = 0; j < n; ++j) {
        std::uint64_t dd = n - j;
        if (dd % (q - 1) != 0) continue;
        h[j] = (p - binom(n, j)) % p;
    }

    std::vector<long long> g(n / q + 1, 0);
    long long d = static_cast<long long>(n);
    while (d >= 0) {
        while (d >= 0 && h[static_cast<std::size_t>(d)] == 0) --d;
        if (d < 0) break;
        if (d % static_cast<long long>(q) != 0)
            throw ExtractionFailure("leading degree " + std::to_string(d) +
                                    " is not a multiple of q");
        long long k = d / static_cast<long long>(q);
        long long lead = h[static_cast<std::size_t>(d)];
        g[static_cast<std::size_t>(k)] = lead;
        // subtract lead * (x^q - x)^k; only exponents <= d are touched
        for (long long i = 0; i <= k; ++i) {
            long long c = binom(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(i));
            if ((k - i) % 2 != 0) c = (p - c) % p;
            auto exp = static_cast<std::size_t>(static_cast<std::uint64_t>(i) * q +
                                                static_cast<std::uint64_t>(k - i));
            h[exp] = ((h[exp] - lead * c) % p + p) % p;
        }
    }

    std::vector<gf::FieldElem> coeffs;
    coeffs.reserve(g.size());
    for (long long v : g) coeffs.push_back(t.from_int(v));
    return poly::OrdPoly::make(t, std::move(coeffs));
}

GnqEvaluator::GnqEvaluator(const gf::FieldTower& t) : tw_(&t) {
    if (t.aux_factor() != t.p())
        throw AuxFieldMissing("tower must carry the auxiliary degree-p extension");
    const int p = t.p();
    dim_ = t.degree();
    for (const auto& c : gf::enumerate_subfield(t, t.q_level(1))) fq_.push_back(c);

    // matrix of x -> x^q - x over F_p, in the power basis
    rows_.assign(static_cast<std::size_t>(dim_),
                 std::vector<std::uint8_t>(static_cast<std::size_t>(dim_), 0));
    tf_.assign(static_cast<std::size_t>(dim_),
               std::vector<std::uint8_t>(static_cast<std::size_t>(dim_), 0));
    for (int j = 0; j < dim_; ++j) {
        std::vector<std::uint8_t> unit(static_cast<std::size_t>(dim_), 0);
        unit[static_cast<std::size_t>(j)] = 1;
        gf::FieldElem u = t.make(unit);
        gf::FieldElem col = gf::frobenius(u, t.q(), 1) - u;
        for (int i = 0; i < dim_; ++i)
            rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = col.coord(i);
        tf_[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = 1;
    }

    auto addmul = [&](std::vector<std::uint8_t>& dst, const std::vector<std::uint8_t>& src,
                      int factor) {
        for (std::size_t i = 0; i < dst.size(); ++i)
            dst[i] = static_cast<std::uint8_t>((dst[i] + factor * src[i]) % p);
    };
    int rank = 0;
    for (int col = 0; col < dim_ && rank < dim_; ++col) {
        int pr = -1;
        for (int i = rank; i < dim_; ++i)
            if (rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        std::swap(rows_[static_cast<std::size_t>(pr)], rows_[static_cast<std::size_t>(rank)]);
        std::swap(tf_[static_cast<std::size_t>(pr)], tf_[static_cast<std::size_t>(rank)]);
        auto inv = static_cast<int>(pow_mod(
            rows_[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)], p - 2, p));
        if (inv != 1) {
            for (auto& v : rows_[static_cast<std::size_t>(rank)])
                v = static_cast<std::uint8_t>(v * inv % p);
            for (auto& v : tf_[static_cast<std::size_t>(rank)])
                v = static_cast<std::uint8_t>(v * inv % p);
        }
        for (int i = 0; i < dim_; ++i) {
            if (i == rank) continue;
            int f = rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
            if (f == 0) continue;
            addmul(rows_[static_cast<std::size_t>(i)], rows_[static_cast<std::size_t>(rank)],
                   p - f);
            addmul(tf_[static_cast<std::size_t>(i)], tf_[static_cast<std::size_t>(rank)], p - f);
        }
        pivot_.push_back(col);
        ++rank;
    }
}

gf::FieldElem GnqEvaluator::preimage(const gf::FieldElem& y) const {
    const gf::FieldTower& t = *tw_;
    if (!y.has_tower() || &y.tower() != tw_)
        throw TowerMismatch("argument from a different tower");
    if (!gf::in_subfield(y, t.qe_level()))
        throw NotInTopField("argument outside F_{q^e}");

    const int p = t.p();
    std::vector<int> v(static_cast<std::size_t>(dim_), 0);
    for (int i = 0; i < dim_; ++i) {
        int acc = 0;
        for (int j = 0; j < dim_; ++j)
            acc += tf_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * y.coord(j);
        v[static_cast<std::size_t>(i)] = acc % p;
    }
    std::vector<std::uint8_t> x(static_cast<std::size_t>(dim_), 0);
    auto rank = static_cast<int>(pivot_.size());
    for (int i = 0; i < rank; ++i)
        x[static_cast<std::size_t>(pivot_[static_cast<std::size_t>(i)])] =
            static_cast<std::uint8_t>(v[static_cast<std::size_t>(i)]);
    for (int i = rank; i < dim_; ++i)
        if (v[static_cast<std::size_t>(i)] != 0)
            throw InvariantViolation("additive system inconsistent for an in-range argument");
    gf::FieldElem out = t.make(x);
    if (gf::frobenius(out, t.q(), 1) - out != y)
        throw InvariantViolation("preimage check failed");
    return out;
}

gf::FieldElem GnqEvaluator::operator()(std::uint64_t n, const gf::FieldElem& y) const {
    const gf::FieldTower& t = *tw_;
    gf::FieldElem x = preimage(y);
    gf::FieldElem acc = t.zero();
    for (const auto& c : fq_) acc += gf::pow(x + c, n);
    if (!gf::in_subfield(acc, t.qe_level()))
        throw InvariantViolation("value escaped F_{q^e}");
    return acc;
}

gf::FieldElem gnq_eval(std::uint64_t n, const gf::FieldElem& y) {
    if (!y.has_tower()) throw TowerMismatch("argument has no tower");
    GnqEvaluator ev(y.tower());
    return ev(n, y);
}

gf::FieldElem sop_eval(const SumOfProducts& f, const gf::FieldElem& x) {
    if (!x.has_tower()) throw TowerMismatch("argument has no tower");
    gf::FieldElem acc = x.tower().zero();
    for (const auto& term : f.terms) {
        if (term.empty()) throw InvariantViolation("empty product");
        gf::FieldElem prod = lin_eval(term[0], x);
        for (std::size_t i = 1; i < term.size(); ++i) prod *= lin_eval(term[i], x);
        acc += prod;
    }
    return acc;
}

std::string to_string(const SumOfProducts& f) {
    if (f.terms.empty()) return "0";
    std::string out;
    for (const auto& term : f.terms) {
        if (!out.empty()) out += " + ";
        if (term.size() == 1) {
            out += "(" + lin::to_string(term[0]) + ")";
            continue;
        }
        for (std::size_t i = 0; i < term.size(); ++i) {
            if (i > 0) out += "*";
            out += "(" + lin::to_string(term[i]) + ")";
        }
    }
    return out;
}

WeightForm gnq_weight_form(std::uint64_t n, const gf::FieldTower& t) {
    const std::uint64_t q = t.q();
    if (q < 3) throw FormNotApplicable("no admissible weight range for this q");
    if (n < 1) throw FormNotApplicable("decomposition starts at 1");
    WeightForm w;
    std::uint64_t v = n - 1;
    int pos = 0, count = 0;
    while (v > 0) {
        int d = static_cast<int>(v % q);
        for (int i = 0; i < d; ++i) w.exps.push_back(pos);
        count += d;
        v /= q;
        ++pos;
    }
    int tpar = count - static_cast<int>(q);
    if (tpar < -1 || tpar > static_cast<int>(q) - 4)
        throw FormNotApplicable("unit-term count " + std::to_string(count) +
                                " outside the admissible range");
    w.t = tpar;
    int k = tpar + 2;
    std::vector<int> idx(static_cast<std::size_t>(k));
    // lexicographic k-subsets of {0..count-1}
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        w.subsets.push_back(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == count - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return w;
}

gf::FieldElem weight_form_eval(const WeightForm& w, const gf::FieldTower& t,
                               const gf::FieldElem& y) {
    std::map<int, gf::FieldElem> cache;
    auto sval = [&](int a) {
        auto it = cache.find(a);
        if (it != cache.end()) return it->second;
        gf::FieldElem v = lin_eval(S_poly(a, t), y);
        cache.emplace(a, v);
        return v;
    };
    gf::FieldElem acc = t.zero();
    for (const auto& sub : w.subsets) {
        gf::FieldElem prod = t.one();
        for (int i : sub) prod *= sval(w.exps[static_cast<std::size_t>(i)]);
        acc += prod;
    }
    return -acc;
}

SumOfProducts weight_form_reduced(const WeightForm& w, const gf::FieldTower& t) {
    const int e = t.e();
    const int p = t.p();
    auto folded = [&](int a) {
        std::vector<int> cnt(static_cast<std::size_t>(e), 0);
        for (int i = 0; i < a; ++i) cnt[static_cast<std::size_t>(i % e)]++;
        std::vector<gf::FieldElem> coeffs;
        coeffs.reserve(cnt.size());
        for (int c : cnt) coeffs.push_back(t.from_int(c % p));
        return lin::LinPoly::make(t, t.q(), std::move(coeffs));
    };
    gf::FieldElem minus_one = -t.one();
    SumOfProducts out;
    for (const auto& sub : w.subsets) {
        std::vector<lin::LinPoly> term;
        term.reserve(sub.size());
        for (int i : sub) term.push_back(folded(w.exps[static_cast<std::size_t>(i)]));
        term[0] = minus_one * term[0];
        out.terms.push_back(std::move(term));
    }
    return out;
}

bool gnq_recurrence_check(std::uint64_t n, int a, int b, const gf::FieldTower& t) {
    if (a < b || b < 0) throw InvariantViolation("need a >= b >= 0");
    const std::uint64_t q = t.q();
    unsigned __int128 qa = 1, qb = 1;
    for (int i = 0; i < a; ++i) qa *= q;
    for (int i = 0; i < b; ++i) qb *= q;
    if (qa > kMaxN || n + static_cast<std::uint64_t>(qa) > kMaxN)
        throw DegreeCapExceeded("shifted exponent exceeds the dense-path cap");
    poly::OrdPoly lhs = gnq_coeffs(n + static_cast<std::uint64_t>(qa), t) -
                        gnq_coeffs(n + static_cast<std::uint64_t>(qb), t);
    poly::OrdPoly sdiff = lin::expand(S_poly(a, t)) - lin::expand(S_poly(b, t));
    return lhs == sdiff * gnq_coeffs(n, t);
}

bool is_pp(const std::function<gf::FieldElem(const gf::FieldElem&)>& fn,
           const gf::FieldTower& t, gf::Subfield domain) {
    if (t.level_order(domain) > kMaxDomain) throw CapExceeded("domain larger than 2^20");
    if (t.pack_fits()) {
        std::vector<unsigned __int128> keys;
        keys.reserve(static_cast<std::size_t>(t.level_order(domain)));
        for (const auto& z : gf::enumerate_subfield(t, domain)) {
            gf::FieldElem img = fn(z);
            if (!gf::in_subfield(img, domain)) return false;
            keys.push_back(t.pack(img));
        }
        std::sort(keys.begin(), keys.end());
        return std::adjacent_find(keys.begin(), keys.end()) == keys.end();
    }
    std::vector<std::array<std::uint8_t, gf::kMaxAmbientDegree>> keys;
    keys.reserve(static_cast<std::size_t>(t.level_order(domain)));
    for (const auto& z : gf::enumerate_subfield(t, domain)) {
        gf::FieldElem img = fn(z);
        if (!gf::in_subfield(img, domain)) return false;
        std::array<std::uint8_t, gf::kMaxAmbientDegree> key{};
        std::copy(img.coords(), img.coords() + t.degree(), key.begin());
        keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());
    return std::adjacent_find(keys.begin(), keys.end()) == keys.end();
}

}  // namespace qlin::gnq
