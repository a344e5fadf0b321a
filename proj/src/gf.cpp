#include "qlin/gf.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>

namespace qlin::gf {

namespace {

bool small_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int inv_mod(int a, int p) {
    // extended Euclid on integers; a != 0 mod p
    int t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
        int q = r / nr;
        int tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    return ((t % p) + p) % p;
}

// ---- dense F_p[x] helpers used only at tower construction time ----
using FpPoly = std::vector<std::uint8_t>;

int pdeg(const FpPoly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (f[static_cast<std::size_t>(i)]) return i;
    return -1;
}

void ptrim(FpPoly& f) { f.resize(static_cast<std::size_t>(pdeg(f) + 1)); }

FpPoly pmul(const FpPoly& a, const FpPoly& b, int p) {
    if (a.empty() || b.empty()) return {};
    FpPoly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = static_cast<std::uint8_t>((out[i + j] + a[i] * b[j]) % p);
    }
    ptrim(out);
    return out;
}

// a mod f, f nonzero (any invertible leading coefficient)
FpPoly pmod(FpPoly a, const FpPoly& f, int p) {
    int df = pdeg(f);
    int fl_inv = inv_mod(f[static_cast<std::size_t>(df)], p);
    for (int da = pdeg(a); da >= df; da = pdeg(a)) {
        int c = a[static_cast<std::size_t>(da)] * fl_inv % p;
        for (int i = 0; i <= df; ++i) {
            int k = da - df + i;
            a[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(
                ((a[static_cast<std::size_t>(k)] - c * f[static_cast<std::size_t>(i)]) % p + p) % p);
        }
    }
    ptrim(a);
    return a;
}

FpPoly psub(const FpPoly& a, const FpPoly& b, int p) {
    FpPoly out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int av = i < a.size() ? a[i] : 0;
        int bv = i < b.size() ? b[i] : 0;
        out[i] = static_cast<std::uint8_t>(((av - bv) % p + p) % p);
    }
    ptrim(out);
    return out;
}

FpPoly pgcd(FpPoly a, FpPoly b, int p) {
    while (pdeg(b) >= 0) {
        FpPoly r = pmod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    int da = pdeg(a);
    if (da >= 0) {
        int c = inv_mod(a[static_cast<std::size_t>(da)], p);
        for (auto& v : a) v = static_cast<std::uint8_t>(v * c % p);
    }
    return a;
}

FpPoly ppow_mod(FpPoly base, std::uint64_t n, const FpPoly& f, int p) {
    FpPoly result{1};
    base = pmod(std::move(base), f, p);
    while (n) {
        if (n & 1) result = pmod(pmul(result, base, p), f, p);
        n >>= 1;
        if (n) base = pmod(pmul(base, base, p), f, p);
    }
    return result;
}

bool is_irreducible(const FpPoly& f, int p) {
    int d = pdeg(f);
    if (d <= 0) return false;
    if (d == 1) return true;
    if (f[0] == 0) return false;  // divisible by x
    if (p == 2) {
        int w = std::accumulate(f.begin(), f.end(), 0);
        if (w % 2 == 0) return false;  // divisible by x+1
    }
    std::vector<int> checkpoints;  // d/l for each prime l | d
    int n = d;
    for (int l = 2; l * l <= n; ++l) {
        if (n % l == 0) {
            checkpoints.push_back(d / l);
            while (n % l == 0) n /= l;
        }
    }
    if (n > 1) checkpoints.push_back(d / n);

    const FpPoly xpoly{0, 1};
    FpPoly t = xpoly;  // iterated p-power of x mod f
    for (int k = 1; k <= d; ++k) {
        t = ppow_mod(t, static_cast<std::uint64_t>(p), f, p);
        if (k < d && std::find(checkpoints.begin(), checkpoints.end(), k) != checkpoints.end()) {
            FpPoly g = pgcd(psub(t, xpoly, p), f, p);
            if (pdeg(g) != 0) return false;
        }
    }
    return pdeg(psub(t, xpoly, p)) < 0;
}

// Lexicographically smallest monic irreducible of degree d over F_p,
// coefficient tuples (c_0,...,c_{d-1}) compared low-degree-first.
FpPoly smallest_irreducible(int p, int d) {
    if (d == 1) return FpPoly{0, 1};  // x itself
    FpPoly c(static_cast<std::size_t>(d) + 1, 0);
    c[static_cast<std::size_t>(d)] = 1;
    c[0] = 1;  // the c_0 = 0 block is divisible by x throughout
    for (;;) {
        if (is_irreducible(c, p)) return c;
        int i = d - 1;  // ascending lex order: last coordinate spins fastest
        while (i >= 0) {
            if (++c[static_cast<std::size_t>(i)] < p) break;
            c[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) throw InvariantViolation("irreducible search exhausted");
    }
}

}  // namespace

// ---------------------------------------------------------------- FieldTower

FieldTower FieldTower::build(int p, int s, int m, int e, int aux_factor) {
    return FieldTower(p, s, m, e, aux_factor);
}

std::unique_ptr<FieldTower> FieldTower::build_ptr(int p, int s, int m, int e, int aux_factor) {
    return std::unique_ptr<FieldTower>(new FieldTower(p, s, m, e, aux_factor));
}

FieldTower::FieldTower(int p, int s, int m, int e, int aux_factor)
    : p_(p), s_(s), m_(m), e_(e), aux_(aux_factor) {
    if (!small_prime(p)) throw NonPrimeP("p = " + std::to_string(p));
    if (p > 250) throw DegreeCapExceeded("prime too large for byte coordinates");
    if (s < 1 || m < 1 || e < 1 || aux_factor < 1)
        throw DegreeCapExceeded("level degrees must be positive");
    long long d = static_cast<long long>(s) * m * e * aux_factor;
    if (d > kMaxAmbientDegree)
        throw DegreeCapExceeded("ambient degree " + std::to_string(d));
    d_ = static_cast<int>(d);

    modulus_ = smallest_irreducible(p_, d_);

    // reduction rows: x^(d+k) mod modulus for k = 0..d-2
    if (d_ >= 2) {
        red_.assign(static_cast<std::size_t>(d_ - 1) * d_, 0);
        std::vector<std::uint8_t> rem(static_cast<std::size_t>(d_), 0);
        for (int i = 0; i < d_; ++i)
            rem[static_cast<std::size_t>(i)] =
                static_cast<std::uint8_t>((p_ - modulus_[static_cast<std::size_t>(i)]) % p_);
        for (int k = 0; k < d_ - 1; ++k) {
            std::memcpy(red_.data() + static_cast<std::size_t>(k) * d_, rem.data(),
                        static_cast<std::size_t>(d_));
            if (k == d_ - 2) break;
            int carry = rem[static_cast<std::size_t>(d_ - 1)];
            for (int i = d_ - 1; i > 0; --i) rem[static_cast<std::size_t>(i)] = rem[static_cast<std::size_t>(i - 1)];
            rem[0] = 0;
            if (carry) {
                const std::uint8_t* row0 = red_.data();
                for (int i = 0; i < d_; ++i)
                    rem[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(
                        (rem[static_cast<std::size_t>(i)] + carry * row0[i]) % p_);
            }
        }
    }

    // Frobenius power matrices: frob_[k] maps v to v^(p^k)
    std::size_t dd = static_cast<std::size_t>(d_) * d_;
    frob_.assign(static_cast<std::size_t>(d_) * dd, 0);
    for (int i = 0; i < d_; ++i) frob_[static_cast<std::size_t>(i) * d_ + i] = 1;
    if (d_ > 1) {
        FpPoly xp = ppow_mod(FpPoly{0, 1}, static_cast<std::uint64_t>(p_), modulus_, p_);
        FpPoly cur{1};
        std::uint8_t* m1 = frob_.data() + dd;
        for (int col = 0; col < d_; ++col) {
            for (std::size_t row = 0; row < cur.size(); ++row)
                m1[row * static_cast<std::size_t>(d_) + static_cast<std::size_t>(col)] = cur[row];
            if (col + 1 < d_) cur = pmod(pmul(cur, xp, p_), modulus_, p_);
        }
        for (int k = 2; k < d_; ++k) {
            const std::uint8_t* a = frob_.data() + dd;                          // M_1
            const std::uint8_t* b = frob_.data() + static_cast<std::size_t>(k - 1) * dd;
            std::uint8_t* c = frob_.data() + static_cast<std::size_t>(k) * dd;
            for (int r = 0; r < d_; ++r)
                for (int j = 0; j < d_; ++j) {
                    std::uint32_t acc = 0;
                    for (int t = 0; t < d_; ++t)
                        acc += static_cast<std::uint32_t>(a[static_cast<std::size_t>(r) * d_ + t]) *
                               b[static_cast<std::size_t>(t) * d_ + j];
                    c[static_cast<std::size_t>(r) * d_ + j] = static_cast<std::uint8_t>(acc % p_);
                }
        }
    }
}

std::uint64_t FieldTower::r() const {
    unsigned __int128 v = 1;
    for (int i = 0; i < s_; ++i) {
        v *= static_cast<unsigned>(p_);
        if (v > static_cast<unsigned __int128>(UINT64_MAX)) throw CapExceeded("r overflows");
    }
    return static_cast<std::uint64_t>(v);
}

std::uint64_t FieldTower::q() const {
    unsigned __int128 v = 1;
    for (int i = 0; i < s_ * m_; ++i) {
        v *= static_cast<unsigned>(p_);
        if (v > static_cast<unsigned __int128>(UINT64_MAX)) throw CapExceeded("q overflows");
    }
    return static_cast<std::uint64_t>(v);
}

Subfield FieldTower::r_level(int j) const {
    long long deg = static_cast<long long>(s_) * j;
    if (j < 1 || deg > d_ || d_ % deg != 0)
        throw NonDividingDegrees("r^" + std::to_string(j) + " is not a tower level");
    return {static_cast<int>(deg)};
}

Subfield FieldTower::q_level(int j) const {
    long long deg = static_cast<long long>(s_) * m_ * j;
    if (j < 1 || deg > d_ || d_ % deg != 0)
        throw NonDividingDegrees("q^" + std::to_string(j) + " is not a tower level");
    return {static_cast<int>(deg)};
}

std::uint64_t FieldTower::level_order(Subfield level) const {
    if (level.deg < 1 || d_ % level.deg != 0)
        throw NonDividingDegrees("degree " + std::to_string(level.deg));
    unsigned __int128 v = 1;
    for (int i = 0; i < level.deg; ++i) {
        v *= static_cast<unsigned>(p_);
        if (v > static_cast<unsigned __int128>(UINT64_MAX) / 2)
            throw DegreeCapExceeded("subfield order overflows");
    }
    return static_cast<std::uint64_t>(v);
}

FieldElem FieldTower::zero() const {
    FieldElem x;
    x.tw_ = this;
    return x;
}

FieldElem FieldTower::one() const { return from_int(1); }

FieldElem FieldTower::from_int(long long v) const {
    FieldElem x;
    x.tw_ = this;
    x.c_[0] = static_cast<std::uint8_t>(((v % p_) + p_) % p_);
    return x;
}

FieldElem FieldTower::gen() const {
    FieldElem x;
    x.tw_ = this;
    if (d_ == 1)
        x.c_[0] = static_cast<std::uint8_t>((p_ - modulus_[0]) % p_);
    else
        x.c_[1] = 1;
    return x;
}

FieldElem FieldTower::make(const std::vector<std::uint8_t>& coords) const {
    if (static_cast<int>(coords.size()) > d_)
        throw DegreeCapExceeded("coordinate vector longer than ambient degree");
    FieldElem x;
    x.tw_ = this;
    for (std::size_t i = 0; i < coords.size(); ++i)
        x.c_[i] = static_cast<std::uint8_t>(coords[i] % p_);
    return x;
}

bool FieldTower::pack_fits() const {
    unsigned __int128 v = 1;
    for (int i = 0; i < d_; ++i) {
        v *= static_cast<unsigned>(p_);
        if (v >> 120) return false;
    }
    return true;
}

unsigned __int128 FieldTower::pack(const FieldElem& x) const {
    unsigned __int128 key = 0;
    for (int i = d_ - 1; i >= 0; --i) key = key * static_cast<unsigned>(p_) + x.coord(i);
    return key;
}

// ------------------------------------------------------------------- kernels

void FieldTower::k_add(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b) const {
    for (int i = 0; i < d_; ++i) dst[i] = static_cast<std::uint8_t>((a[i] + b[i]) % p_);
}

void FieldTower::k_sub(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b) const {
    for (int i = 0; i < d_; ++i) dst[i] = static_cast<std::uint8_t>((a[i] - b[i] + p_) % p_);
}

void FieldTower::k_neg(std::uint8_t* dst, const std::uint8_t* a) const {
    for (int i = 0; i < d_; ++i) dst[i] = static_cast<std::uint8_t>((p_ - a[i]) % p_);
}

void FieldTower::k_scal(std::uint8_t* dst, const std::uint8_t* a, int scalar) const {
    scalar = ((scalar % p_) + p_) % p_;
    for (int i = 0; i < d_; ++i)
        dst[i] = static_cast<std::uint8_t>(a[i] * scalar % p_);
}

void FieldTower::k_mul(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b) const {
    const int d = d_;
    if (d == 1) {
        dst[0] = static_cast<std::uint8_t>(a[0] * b[0] % p_);
        return;
    }
    std::uint32_t conv[2 * kMaxAmbientDegree] = {0};
    for (int i = 0; i < d; ++i) {
        std::uint32_t ai = a[i];
        if (!ai) continue;
        for (int j = 0; j < d; ++j) conv[i + j] += ai * b[j];
    }
    std::uint32_t acc[kMaxAmbientDegree];
    for (int j = 0; j < d; ++j) acc[j] = conv[j];
    for (int k = 0; k < d - 1; ++k) {
        std::uint32_t hi = conv[d + k] % static_cast<std::uint32_t>(p_);
        if (!hi) continue;
        const std::uint8_t* row = red_.data() + static_cast<std::size_t>(k) * d;
        for (int j = 0; j < d; ++j) acc[j] += hi * row[j];
    }
    for (int j = 0; j < d; ++j) dst[j] = static_cast<std::uint8_t>(acc[j] % p_);
}

void FieldTower::k_frob(std::uint8_t* dst, const std::uint8_t* a, int k) const {
    const int d = d_;
    k %= d;
    if (k < 0) k += d;
    if (k == 0) {
        if (dst != a) std::memcpy(dst, a, static_cast<std::size_t>(d));
        return;
    }
    const std::uint8_t* M = frob_.data() + static_cast<std::size_t>(k) * d * d;
    std::uint32_t acc[kMaxAmbientDegree];
    for (int r = 0; r < d; ++r) {
        const std::uint8_t* row = M + static_cast<std::size_t>(r) * d;
        std::uint32_t t = 0;
        for (int c = 0; c < d; ++c) t += static_cast<std::uint32_t>(row[c]) * a[c];
        acc[r] = t;
    }
    for (int r = 0; r < d; ++r) dst[r] = static_cast<std::uint8_t>(acc[r] % p_);
}

void FieldTower::k_inv(std::uint8_t* dst, const std::uint8_t* a) const {
    if (k_is_zero(a)) throw DivisionByZero("inverse of zero");
    FpPoly r0 = modulus_;
    FpPoly r1(a, a + d_);
    ptrim(r1);
    FpPoly t0{}, t1{1};
    while (pdeg(r1) >= 0) {
        // one division step: r0 = q*r1 + rem
        FpPoly rem = r0;
        FpPoly qpoly(static_cast<std::size_t>(std::max(pdeg(r0) - pdeg(r1) + 1, 1)), 0);
        int d1 = pdeg(r1);
        int l_inv = inv_mod(r1[static_cast<std::size_t>(d1)], p_);
        for (int dr = pdeg(rem); dr >= d1; dr = pdeg(rem)) {
            int c = rem[static_cast<std::size_t>(dr)] * l_inv % p_;
            qpoly[static_cast<std::size_t>(dr - d1)] = static_cast<std::uint8_t>(c);
            for (int i = 0; i <= d1; ++i) {
                int kidx = dr - d1 + i;
                rem[static_cast<std::size_t>(kidx)] = static_cast<std::uint8_t>(
                    ((rem[static_cast<std::size_t>(kidx)] - c * r1[static_cast<std::size_t>(i)]) % p_ + p_) % p_);
            }
        }
        ptrim(rem);
        FpPoly tn = psub(t0, pmul(qpoly, t1, p_), p_);
        r0 = std::move(r1);
        r1 = std::move(rem);
        t0 = std::move(t1);
        t1 = std::move(tn);
    }
    // r0 = gcd = nonzero constant; inverse = t0 / r0
    int c = inv_mod(r0[0], p_);
    FpPoly res = pmod(std::move(t0), modulus_, p_);
    std::memset(dst, 0, static_cast<std::size_t>(d_));
    for (std::size_t i = 0; i < res.size(); ++i)
        dst[i] = static_cast<std::uint8_t>(res[i] * c % p_);
}

void FieldTower::k_pow(std::uint8_t* dst, const std::uint8_t* a, std::uint64_t n) const {
    std::uint8_t base[kMaxAmbientDegree], res[kMaxAmbientDegree];
    std::memcpy(base, a, static_cast<std::size_t>(d_));
    std::memset(res, 0, static_cast<std::size_t>(d_));
    res[0] = 1;
    while (n) {
        if (n & 1) k_mul(res, res, base);
        n >>= 1;
        if (n) {
            if (p_ == 2)
                k_frob(base, base, 1);  // squaring is the Frobenius in char 2
            else
                k_mul(base, base, base);
        }
    }
    std::memcpy(dst, res, static_cast<std::size_t>(d_));
}

bool FieldTower::k_is_zero(const std::uint8_t* a) const {
    for (int i = 0; i < d_; ++i)
        if (a[i]) return false;
    return true;
}

bool FieldTower::k_eq(const std::uint8_t* a, const std::uint8_t* b) const {
    return std::memcmp(a, b, static_cast<std::size_t>(d_)) == 0;
}

// ----------------------------------------------------------------- FieldElem

namespace {
const FieldTower& same_tower(const FieldElem& a, const FieldElem& b) {
    if (!a.has_tower() || !b.has_tower()) throw TowerMismatch("element has no tower");
    if (&a.tower() != &b.tower()) throw TowerMismatch("elements from different towers");
    return a.tower();
}

std::uint8_t* mut_coords(FieldElem& x) {
    // FieldElem exposes const coords; arithmetic lives here with friend access
    return const_cast<std::uint8_t*>(x.coords());
}
}  // namespace

bool FieldElem::is_zero() const {
    if (!tw_) return true;
    return tw_->k_is_zero(c_.data());
}

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    const FieldTower& t = same_tower(a, b);
    FieldElem out = t.zero();
    t.k_add(mut_coords(out), a.coords(), b.coords());
    return out;
}

FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    const FieldTower& t = same_tower(a, b);
    FieldElem out = t.zero();
    t.k_sub(mut_coords(out), a.coords(), b.coords());
    return out;
}

FieldElem operator-(const FieldElem& a) {
    if (!a.has_tower()) throw TowerMismatch("element has no tower");
    FieldElem out = a.tower().zero();
    a.tower().k_neg(mut_coords(out), a.coords());
    return out;
}

FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    const FieldTower& t = same_tower(a, b);
    FieldElem out = t.zero();
    t.k_mul(mut_coords(out), a.coords(), b.coords());
    return out;
}

FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * inv(b); }

bool operator==(const FieldElem& a, const FieldElem& b) {
    if (!a.has_tower() || !b.has_tower()) return a.is_zero() && b.is_zero();
    if (&a.tower() != &b.tower()) return false;
    return a.tower().k_eq(a.coords(), b.coords());
}

FieldElem& FieldElem::operator+=(const FieldElem& o) { return *this = *this + o; }
FieldElem& FieldElem::operator-=(const FieldElem& o) { return *this = *this - o; }
FieldElem& FieldElem::operator*=(const FieldElem& o) { return *this = *this * o; }

FieldElem inv(const FieldElem& x) {
    if (!x.has_tower()) throw TowerMismatch("element has no tower");
    const FieldTower& t = x.tower();
    FieldElem out = t.zero();
    t.k_inv(mut_coords(out), x.coords());
    return out;
}

FieldElem pow(const FieldElem& x, std::uint64_t n) {
    if (!x.has_tower()) throw TowerMismatch("element has no tower");
    const FieldTower& t = x.tower();
    FieldElem out = t.zero();
    t.k_pow(mut_coords(out), x.coords(), n);
    return out;
}

FieldElem frobenius(const FieldElem& x, std::uint64_t base, std::uint64_t k) {
    if (!x.has_tower()) throw TowerMismatch("element has no tower");
    const FieldTower& t = x.tower();
    std::uint64_t step;
    if (base == static_cast<std::uint64_t>(t.p()))
        step = 1;
    else if (base == t.r())
        step = static_cast<std::uint64_t>(t.s());
    else if (base == t.q())
        step = static_cast<std::uint64_t>(t.s()) * t.m();
    else
        throw TowerMismatch("frobenius base must be p, r or q of the tower");
    std::uint64_t d = static_cast<std::uint64_t>(t.degree());
    int keff = static_cast<int>((step % d) * (k % d) % d);
    FieldElem out = t.zero();
    t.k_frob(mut_coords(out), x.coords(), keff);
    return out;
}

bool in_subfield(const FieldElem& x, Subfield level) {
    if (!x.has_tower()) throw TowerMismatch("element has no tower");
    const FieldTower& t = x.tower();
    if (level.deg < 1 || t.degree() % level.deg != 0)
        throw NonDividingDegrees("degree " + std::to_string(level.deg));
    FieldElem y = t.zero();
    t.k_frob(mut_coords(y), x.coords(), level.deg % t.degree());
    return y == x;
}

std::pair<FieldElem, FieldElem> norm_trace(const FieldElem& x, Subfield top, Subfield bottom) {
    if (!x.has_tower()) throw TowerMismatch("element has no tower");
    const FieldTower& t = x.tower();
    if (top.deg % t.s() != 0 || bottom.deg % t.s() != 0)
        throw NonDividingDegrees("norm/trace levels must be powers of r");
    if (top.deg < 1 || bottom.deg < 1 || top.deg % bottom.deg != 0 || t.degree() % top.deg != 0)
        throw NonDividingDegrees("bottom must divide top inside the tower");
    if (!in_subfield(x, top)) throw NotInTopField(to_string(x));
    int k = top.deg / bottom.deg;
    FieldElem n = t.one(), tr = t.zero();
    for (int i = 0; i < k; ++i) {
        FieldElem conj = t.zero();
        t.k_frob(mut_coords(conj), x.coords(), (bottom.deg * i) % t.degree());
        n *= conj;
        tr += conj;
    }
    if (!in_subfield(n, bottom) || !in_subfield(tr, bottom))
        throw InvariantViolation("norm/trace landed outside the bottom field");
    return {n, tr};
}

// ------------------------------------------------------------- SubfieldEnum

namespace {
// F_p-basis of the fixed field of the (p^deg)-power Frobenius.
std::vector<FieldElem> subfield_basis(const FieldTower& t, int deg) {
    int d = t.degree();
    // columns of (Frob^deg - I)
    std::vector<std::uint8_t> A(static_cast<std::size_t>(d) * d, 0);
    std::vector<std::uint8_t> unit(static_cast<std::size_t>(d), 0);
    std::vector<std::uint8_t> img(static_cast<std::size_t>(d), 0);
    for (int c = 0; c < d; ++c) {
        std::fill(unit.begin(), unit.end(), 0);
        unit[static_cast<std::size_t>(c)] = 1;
        t.k_frob(img.data(), unit.data(), deg % d);
        for (int r = 0; r < d; ++r) {
            int v = img[static_cast<std::size_t>(r)] - (r == c ? 1 : 0);
            A[static_cast<std::size_t>(r) * d + c] = static_cast<std::uint8_t>(((v % t.p()) + t.p()) % t.p());
        }
    }
    // row reduce to RREF
    int p = t.p();
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < d && row < d; ++col) {
        int pr = -1;
        for (int r2 = row; r2 < d; ++r2)
            if (A[static_cast<std::size_t>(r2) * d + col]) { pr = r2; break; }
        if (pr < 0) continue;
        for (int j = 0; j < d; ++j)
            std::swap(A[static_cast<std::size_t>(row) * d + j], A[static_cast<std::size_t>(pr) * d + j]);
        int piv_inv = inv_mod(A[static_cast<std::size_t>(row) * d + col], p);
        for (int j = 0; j < d; ++j)
            A[static_cast<std::size_t>(row) * d + j] =
                static_cast<std::uint8_t>(A[static_cast<std::size_t>(row) * d + j] * piv_inv % p);
        for (int r2 = 0; r2 < d; ++r2) {
            if (r2 == row) continue;
            int f = A[static_cast<std::size_t>(r2) * d + col];
            if (!f) continue;
            for (int j = 0; j < d; ++j)
                A[static_cast<std::size_t>(r2) * d + j] = static_cast<std::uint8_t>(
                    ((A[static_cast<std::size_t>(r2) * d + j] - f * A[static_cast<std::size_t>(row) * d + j]) % p + p) % p);
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<FieldElem> basis;
    for (int col = 0; col < d; ++col) {
        if (std::find(pivot_col.begin(), pivot_col.end(), col) != pivot_col.end()) continue;
        std::vector<std::uint8_t> v(static_cast<std::size_t>(d), 0);
        v[static_cast<std::size_t>(col)] = 1;
        for (std::size_t r2 = 0; r2 < pivot_col.size(); ++r2) {
            int val = A[r2 * static_cast<std::size_t>(d) + static_cast<std::size_t>(col)];
            v[static_cast<std::size_t>(pivot_col[r2])] =
                static_cast<std::uint8_t>(((-val) % p + p) % p);
        }
        basis.push_back(t.make(v));
    }
    if (static_cast<int>(basis.size()) != deg)
        throw InvariantViolation("subfield basis has wrong dimension");
    return basis;
}
}  // namespace

SubfieldEnum::SubfieldEnum(const FieldTower& t, Subfield level) : tw_(&t) {
    if (level.deg < 1 || t.degree() % level.deg != 0)
        throw NonDividingDegrees("degree " + std::to_string(level.deg));
    unsigned __int128 order = 1;
    for (int i = 0; i < level.deg; ++i) {
        order *= static_cast<unsigned>(t.p());
        if (order > (static_cast<unsigned __int128>(1) << 24))
            throw DegreeCapExceeded("subfield too large to enumerate");
    }
    size_ = static_cast<std::uint64_t>(order);
    basis_ = subfield_basis(t, level.deg);
}

SubfieldEnum::iterator SubfieldEnum::begin() const {
    iterator it;
    it.en_ = this;
    it.idx_ = 0;
    it.digits_.assign(basis_.size(), 0);
    it.cur_ = tw_->zero();
    return it;
}

SubfieldEnum::iterator SubfieldEnum::end() const {
    iterator it;
    it.en_ = this;
    it.idx_ = size_;
    return it;
}

SubfieldEnum::iterator& SubfieldEnum::iterator::operator++() {
    ++idx_;
    if (idx_ >= en_->size_) return *this;
    // mixed-radix odometer; adding a basis vector p times returns to start,
    // so a carry only needs the next basis vector added once
    const int p = en_->tw_->p();
    std::size_t pos = 0;
    cur_ += en_->basis_[0];
    ++digits_[0];
    while (digits_[pos] == p) {
        digits_[pos] = 0;
        ++pos;
        ++digits_[pos];
        cur_ += en_->basis_[pos];
    }
    return *this;
}

SubfieldEnum enumerate_subfield(const FieldTower& t, Subfield level) {
    return SubfieldEnum(t, level);
}

std::string to_string(const FieldElem& x) {
    if (!x.has_tower()) return "(null)";
    std::string out = "(";
    for (int i = 0; i < x.tower().degree(); ++i) {
        if (i) out += ",";
        out += std::to_string(static_cast<int>(x.coord(i)));
    }
    out += ")";
    return out;
}

}  // namespace qlin::gf
