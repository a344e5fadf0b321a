#pragma once

#include <array>
#include <cstdint>
#include <iterator>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qlin/errors.hpp"

namespace qlin::gf {

// Every field in a tower F_p < F_r < F_q = F_{r^m} < F_{q^e} (< one auxiliary
// extension) lives inside a single ambient field F_{p^D}, D = s*m*e*aux.
// Subfields are never represented by separate element types; membership is a
// Frobenius fixed-point property of ambient elements.
inline constexpr int kMaxAmbientDegree = 64;

// A subfield of the ambient field, identified by its degree over F_p.
struct Subfield {
    int deg = 1;
};

class FieldTower;

// Element of the ambient field, as coordinates over F_p in the power basis
// 1, x, ..., x^(D-1) of F_p[x]/(modulus).  Coordinates beyond D-1 stay zero.
class FieldElem {
  public:
    FieldElem() = default;

    const FieldTower& tower() const { return *tw_; }
    bool has_tower() const { return tw_ != nullptr; }
    const std::uint8_t* coords() const { return c_.data(); }
    std::uint8_t coord(int i) const { return c_[static_cast<std::size_t>(i)]; }
    bool is_zero() const;

    friend FieldElem operator+(const FieldElem&, const FieldElem&);
    friend FieldElem operator-(const FieldElem&, const FieldElem&);
    friend FieldElem operator-(const FieldElem&);
    friend FieldElem operator*(const FieldElem&, const FieldElem&);
    friend FieldElem operator/(const FieldElem&, const FieldElem&);
    friend bool operator==(const FieldElem&, const FieldElem&);
    FieldElem& operator+=(const FieldElem& o);
    FieldElem& operator-=(const FieldElem& o);
    FieldElem& operator*=(const FieldElem& o);

  private:
    friend class FieldTower;
    std::array<std::uint8_t, kMaxAmbientDegree> c_{};
    const FieldTower* tw_ = nullptr;
};

// Immutable after construction; safe to share between threads.
class FieldTower {
  public:
    // F_p-degrees of the levels: s*m*e*aux_factor <= 64.  The modulus is the
    // lexicographically smallest monic irreducible of that degree over F_p,
    // coefficients compared low-degree-first.
    static FieldTower build(int p, int s, int m, int e, int aux_factor = 1);
    // heap variant for callers that keep towers in containers (the class is
    // neither copyable nor movable)
    static std::unique_ptr<FieldTower> build_ptr(int p, int s, int m, int e,
                                                 int aux_factor = 1);

    FieldTower(const FieldTower&) = delete;
    FieldTower& operator=(const FieldTower&) = delete;
    FieldTower(FieldTower&&) = delete;
    FieldTower& operator=(FieldTower&&) = delete;

    int p() const { return p_; }
    int s() const { return s_; }
    int m() const { return m_; }
    int e() const { return e_; }
    int aux_factor() const { return aux_; }
    int degree() const { return d_; }

    std::uint64_t r() const;  // p^s
    std::uint64_t q() const;  // p^(s*m)

    // modulus coefficients over F_p, lowest degree first, length degree()+1
    const std::vector<std::uint8_t>& modulus() const { return modulus_; }

    Subfield prime_level() const { return {1}; }
    Subfield r_level(int j = 1) const;   // F_{r^j}
    Subfield q_level(int j = 1) const;   // F_{q^j}
    Subfield qe_level() const { return q_level(e_); }
    Subfield ambient_level() const { return {d_}; }
    std::uint64_t level_order(Subfield level) const;  // p^deg, guarded

    FieldElem zero() const;
    FieldElem one() const;
    FieldElem from_int(long long v) const;
    FieldElem gen() const;  // class of x
    FieldElem make(const std::vector<std::uint8_t>& coords) const;

    // Exact packing of an element's coordinate vector into an integer key
    // (base-p digits).  Requires p^degree() to fit; true for every tower at
    // the scale this library targets.
    bool pack_fits() const;
    unsigned __int128 pack(const FieldElem& x) const;

    // ---- low-level kernels on raw coordinate arrays (length degree()) ----
    void k_add(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b) const;
    void k_sub(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b) const;
    void k_neg(std::uint8_t* dst, const std::uint8_t* a) const;
    void k_mul(std::uint8_t* dst, const std::uint8_t* a, const std::uint8_t* b) const;
    void k_scal(std::uint8_t* dst, const std::uint8_t* a, int scalar) const;
    // dst = a^(p^k), k reduced mod degree()
    void k_frob(std::uint8_t* dst, const std::uint8_t* a, int k) const;
    void k_inv(std::uint8_t* dst, const std::uint8_t* a) const;  // DivisionByZero on 0
    void k_pow(std::uint8_t* dst, const std::uint8_t* a, std::uint64_t n) const;
    bool k_is_zero(const std::uint8_t* a) const;
    bool k_eq(const std::uint8_t* a, const std::uint8_t* b) const;

  private:
    FieldTower(int p, int s, int m, int e, int aux_factor);

    int p_, s_, m_, e_, aux_, d_;
    std::vector<std::uint8_t> modulus_;   // length d_+1, monic
    std::vector<std::uint8_t> red_;       // x^(d_+k) mod modulus, k = 0..d_-2, row-major d_ wide
    std::vector<std::uint8_t> frob_;      // d_ matrices of d_ x d_: v -> v^(p^k), k = 0..d_-1
};

FieldElem inv(const FieldElem& x);
FieldElem pow(const FieldElem& x, std::uint64_t n);

// x^(base^k); base must be the tower's p, r or q.
FieldElem frobenius(const FieldElem& x, std::uint64_t base, std::uint64_t k);

bool in_subfield(const FieldElem& x, Subfield level);

// (N, Tr) of x from F_top down to F_bottom; both levels must be powers of r.
std::pair<FieldElem, FieldElem> norm_trace(const FieldElem& x, Subfield top, Subfield bottom);

// Streams the p^deg elements of a subfield in a fixed deterministic order
// (odometer over a reduced-echelon F_p-basis).  Cardinality cap 2^24.
class SubfieldEnum {
  public:
    SubfieldEnum(const FieldTower& t, Subfield level);
    std::uint64_t size() const { return size_; }

    class iterator {
      public:
        using iterator_category = std::input_iterator_tag;
        using value_type = FieldElem;
        using difference_type = std::ptrdiff_t;
        using pointer = const FieldElem*;
        using reference = const FieldElem&;

        reference operator*() const { return cur_; }
        pointer operator->() const { return &cur_; }
        iterator& operator++();
        bool operator==(const iterator& o) const { return idx_ == o.idx_; }
        bool operator!=(const iterator& o) const { return idx_ != o.idx_; }

      private:
        friend class SubfieldEnum;
        const SubfieldEnum* en_ = nullptr;
        std::uint64_t idx_ = 0;
        std::vector<std::uint8_t> digits_;
        FieldElem cur_;
    };

    iterator begin() const;
    iterator end() const;

  private:
    const FieldTower* tw_;
    std::vector<FieldElem> basis_;
    std::uint64_t size_;
};

SubfieldEnum enumerate_subfield(const FieldTower& t, Subfield level);

// "(c0,c1,...,c{D-1})" power-basis coordinate tuple
std::string to_string(const FieldElem& x);

}  // namespace qlin::gf
