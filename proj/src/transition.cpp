#include "qlin/transition.hpp"

#include <algorithm>
#include <numeric>

#include "qlin/errors.hpp"

namespace qlin::trans {

namespace {

constexpr int kMaxDim = 7;
constexpr std::uint64_t kMaxDomain = std::uint64_t{1} << 20;

void check_mu(const std::vector<int>& mu) {
    int m = static_cast<int>(mu.size());
    if (m < 1) throw NotInFrakM("empty multiplicity vector");
    if (m > kMaxDim) throw CapExceeded("multiplicity vector longer than 7");
    long long total = 0, weighted = 0;
    for (int i = 0; i < m; ++i) {
        if (mu[i] < 0) throw NotInFrakM("negative multiplicity");
        total += mu[i];
        weighted += static_cast<long long>(i) * mu[i];
    }
    if (total != m) throw NotInFrakM("multiplicities do not sum to the length");
    if (weighted % m != 0) throw NotInFrakM("weighted index sum not divisible by the length");
}

std::vector<int> diff_counts(const std::vector<int>& sigma) {
    int m = static_cast<int>(sigma.size());
    std::vector<int> cnt(m, 0);
    for (int i = 0; i < m; ++i) cnt[((sigma[i] - i) % m + m) % m]++;
    return cnt;
}

}  // namespace

TransitionInput make_input(const gf::FieldTower& t, std::vector<gf::FieldElem> a,
                           std::vector<lin::LinPoly> f) {
    TransitionInput in{&t, std::move(a), std::move(f)};
    validate_input(in);
    return in;
}

void validate_input(const TransitionInput& in) {
    if (in.tower == nullptr) throw InvariantViolation("input has no tower");
    const gf::FieldTower& t = *in.tower;
    auto m = static_cast<std::size_t>(t.m());
    if (in.a.size() != m || in.f.size() != m)
        throw InvariantViolation("need exactly m scalars and m polynomials");
    for (const auto& ai : in.a) {
        if (!ai.has_tower() || &ai.tower() != &t)
            throw TowerMismatch("scalar from a different tower");
        if (!gf::in_subfield(ai, t.q_level(1)))
            throw InvariantViolation("scalar outside F_q");
    }
    for (const auto& fi : in.f) {
        if (!fi.has_tower() || &fi.tower() != &t)
            throw TowerMismatch("polynomial from a different tower");
        if (fi.base_pexp() != t.s() * t.m())
            throw InvariantViolation("polynomial not written in base q");
        if (!lin::coeffs_in(fi, t.r_level(1)))
            throw InvariantViolation("polynomial coefficients outside F_r");
    }
}

TransitionMatrix build_M(const TransitionInput& in) {
    validate_input(in);
    const gf::FieldTower& t = *in.tower;
    int m = t.m();
    auto shift = lin::LinPoly::frob_monomial(t, t.q(), 1);
    TransitionMatrix M;
    M.entries.assign(m, {});
    for (int i = 0; i < m; ++i) {
        M.entries[i].reserve(m);
        for (int j = 0; j < m; ++j) {
            int k = ((j - i) % m + m) % m;
            lin::LinPoly cell = i > j ? lin_compose(in.f[k], shift) : in.f[k];
            M.entries[i].push_back(gf::frobenius(in.a[k], t.r(), i) * cell);
        }
    }
    return M;
}

lin::LinPoly det_M(const TransitionInput& in) {
    validate_input(in);
    const gf::FieldTower& t = *in.tower;
    int m = t.m();
    if (m > kMaxDim) throw DeterminantCapExceeded("matrix side exceeds 7");
    TransitionMatrix M = build_M(in);
    std::vector<std::vector<poly::OrdPoly>> A(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) A[i].push_back(lin::associate(M.entries[i][j]));
    lin::LinPoly d = lin::lift(poly::ord_det(A), t.q());
    if (!lin::coeffs_in(d, t.r_level(1)))
        throw InvariantViolation("determinant has a coefficient outside F_r");
    return d;
}

lin::LinPoly det_M_direct(const TransitionInput& in) {
    validate_input(in);
    const gf::FieldTower& t = *in.tower;
    int m = t.m();
    if (m > 3) throw CapExceeded("direct determinant limited to side 3");
    TransitionMatrix M = build_M(in);
    const auto& E = M.entries;
    if (m == 1) return E[0][0];
    if (m == 2) return lin_compose(E[0][0], E[1][1]) - lin_compose(E[0][1], E[1][0]);
    auto minor = [&](int r0, int r1, int c0, int c1) {
        return lin_compose(E[r0][c0], E[r1][c1]) - lin_compose(E[r0][c1], E[r1][c0]);
    };
    return lin_compose(E[0][0], minor(1, 2, 1, 2)) - lin_compose(E[0][1], minor(1, 2, 0, 2)) +
           lin_compose(E[0][2], minor(1, 2, 0, 1));
}

lin::LinPoly lhs_r_linearized(const TransitionInput& in) {
    validate_input(in);
    const gf::FieldTower& t = *in.tower;
    int m = t.m();
    lin::LinPoly acc = lin::LinPoly::zero(t, t.r());
    for (int i = 0; i < m; ++i) {
        lin::LinPoly part = lin::twist(lin::rebase(in.f[i], t.r()), i);
        part = lin_compose(part, lin::LinPoly::frob_monomial(t, t.r(), i));
        acc = acc + in.a[i] * part;
    }
    return acc;
}

RootTransferReport verify_root_transfer(const TransitionInput& in, gf::Subfield search_level) {
    validate_input(in);
    const gf::FieldTower& t = *in.tower;
    if (t.level_order(search_level) > kMaxDomain)
        throw CapExceeded("search domain larger than 2^20");
    lin::LinPoly lhs = lhs_r_linearized(in);
    lin::LinPoly det = det_M(in);
    RootTransferReport rep;
    for (const auto& z : gf::enumerate_subfield(t, search_level)) {
        ++rep.domain_size;
        if (!lin_eval(lhs, z).is_zero()) continue;
        ++rep.roots_found;
        if (lin_eval(det, z).is_zero())
            ++rep.transfers_verified;
        else
            ++rep.violations;
    }
    return rep;
}

std::vector<std::vector<int>> enumerate_frakM(int m) {
    if (m < 1) throw CapExceeded("length must be positive");
    if (m > kMaxDim) throw CapExceeded("length exceeds 7");
    std::vector<std::vector<int>> out;
    std::vector<int> tuple(m, 0);
    // nondecreasing index tuples over 0..m-1, lex ascending
    auto rec = [&](auto&& self, int pos, int low, int sum) -> void {
        if (pos == m) {
            if (sum % m == 0) {
                std::vector<int> mu(m, 0);
                for (int v : tuple) mu[v]++;
                out.push_back(std::move(mu));
            }
            return;
        }
        for (int v = low; v < m; ++v) {
            tuple[pos] = v;
            self(self, pos + 1, v, sum + v);
        }
    };
    rec(rec, 0, 0, 0);
    return out;
}

DiffClass frakS_and_coeff(const std::vector<int>& mu, const std::vector<gf::FieldElem>& a) {
    check_mu(mu);
    int m = static_cast<int>(mu.size());
    if (a.size() != mu.size()) throw InvariantViolation("scalar count differs from length");
    for (const auto& ai : a)
        if (!ai.has_tower()) throw InvariantViolation("scalar without a tower");
    const gf::FieldTower& t = a[0].tower();
    for (const auto& ai : a) {
        if (&ai.tower() != &t) throw TowerMismatch("scalars from different towers");
        if (!gf::in_subfield(ai, t.q_level(1))) throw InvariantViolation("scalar outside F_q");
    }

    DiffClass dc;
    dc.mu = mu;
    dc.coeff = t.zero();
    std::vector<int> sigma(m);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        if (diff_counts(sigma) != mu) continue;
        dc.perms.push_back(sigma);
        gf::FieldElem term = t.one();
        for (int j = 0; j < m; ++j)
            term *= gf::frobenius(a[((sigma[j] - j) % m + m) % m], t.r(), j);
        if (perm_sign(sigma) > 0)
            dc.coeff += term;
        else
            dc.coeff -= term;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    if (!gf::in_subfield(dc.coeff, t.r_level(1)))
        throw InvariantViolation("class coefficient outside F_r");
    return dc;
}

lin::LinPoly expansion_det(const TransitionInput& in) {
    validate_input(in);
    const gf::FieldTower& t = *in.tower;
    int m = t.m();
    if (m > kMaxDim) throw CapExceeded("length exceeds 7");
    lin::LinPoly acc = lin::LinPoly::zero(t, t.q());
    for (const auto& mu : enumerate_frakM(m)) {
        DiffClass dc = frakS_and_coeff(mu, in.a);
        if (dc.coeff.is_zero()) continue;
        lin::LinPoly chain = lin::LinPoly::identity(t, t.q());
        long long weighted = 0;
        for (int k = 0; k < m; ++k) {
            weighted += static_cast<long long>(k) * mu[k];
            if (mu[k] > 0) chain = lin_compose(chain, lin_compose_power(in.f[k], mu[k]));
        }
        if (weighted % m != 0) throw InvariantViolation("weighted sum not divisible");
        if (weighted > 0)
            chain = lin_compose(chain, lin::LinPoly::frob_monomial(
                                           t, t.q(), static_cast<int>(weighted / m)));
        acc = acc + dc.coeff * chain;
    }
    return acc;
}

std::vector<int> hall_witness(const std::vector<int>& mu) {
    check_mu(mu);
    int m = static_cast<int>(mu.size());
    std::vector<int> sigma(m);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        if (diff_counts(sigma) == mu) return sigma;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    throw WitnessNotFound("no permutation realizes the multiset");
}

int perm_sign(const std::vector<int>& sigma) {
    int inv = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        for (std::size_t j = i + 1; j < sigma.size(); ++j)
            if (sigma[i] > sigma[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

std::vector<int> index_tuple(const std::vector<int>& mu) {
    std::vector<int> word;
    for (std::size_t i = 0; i < mu.size(); ++i)
        word.insert(word.end(), static_cast<std::size_t>(mu[i]), static_cast<int>(i));
    return word;
}

}  // namespace qlin::trans
