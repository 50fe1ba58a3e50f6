#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "pgz/error.hpp"

namespace pgz {

using Z = mpz_class;
using Q = mpq_class;

// Hard cap on the cyclotomic order of any intermediate value (per thread).
uint64_t cyclo_order_cap();
void set_cyclo_order_cap(uint64_t cap);

uint64_t euler_phi(uint64_t n);
// Coefficients of the n-th cyclotomic polynomial, constant term first.
const std::vector<int64_t>& cyclotomic_poly(uint64_t n);
// Conductor of Q(sqrt q) for squarefree q: |q| if q = 1 mod 4, else 4|q|.
uint64_t sqrt_conductor(int64_t q);

// Exact element of Q(zeta_n), optionally with one formal sqrt(q) adjoined:
//   value = (sum a_i zeta^i + sqrt(q) * sum b_i zeta^i) / den
class CycNum {
public:
    CycNum();
    CycNum(long v);
    CycNum(const Q& v);

    static CycNum zeta(int64_t n, int64_t k = 1);
    // exp(2 pi i num / den)
    static CycNum root_of_unity(int64_t num, int64_t den);
    // sum_k coeffs[k] zeta_n^k, any length
    static CycNum from_coeffs(int64_t n, const std::vector<Q>& coeffs);
    // sum_k counts[k] zeta_L^k
    static CycNum from_exponent_counts(uint64_t L, const std::vector<int64_t>& counts);
    static CycNum sqrt_of(const Q& q);
    // a + b sqrt(q) given as power-basis rationals of order n (used by JSON)
    static CycNum from_parts(uint64_t n, const std::vector<Q>& a, int64_t q, const std::vector<Q>& b);

    uint64_t order() const { return n_; }
    int64_t sqrt_q() const { return q_; }
    bool has_sqrt() const { return q_ != 0; }
    std::vector<Q> coeffs() const;
    std::vector<Q> sqrt_coeffs() const;

    bool is_zero() const;
    bool is_rational() const;
    Q rational_value() const;  // throws unless is_rational()
    bool is_one() const { return is_rational() && rational_value() == 1; }

    CycNum operator-() const;
    CycNum operator+(const CycNum& o) const;
    CycNum operator-(const CycNum& o) const;
    CycNum operator*(const CycNum& o) const;
    CycNum operator/(const CycNum& o) const;
    CycNum& operator+=(const CycNum& o) { return *this = *this + o; }
    CycNum& operator-=(const CycNum& o) { return *this = *this - o; }
    CycNum& operator*=(const CycNum& o) { return *this = *this * o; }
    CycNum& operator/=(const CycNum& o) { return *this = *this / o; }
    CycNum scaled(const Q& r) const;

    CycNum inv() const;
    CycNum conj() const;
    CycNum pow(int64_t k) const;
    // Same value with sqrt(q) folded into the cyclotomic part (order may grow).
    CycNum flattened() const;
    // Lift the cyclotomic part to order m (m a multiple of order()); not canonical.
    CycNum lifted_to(uint64_t m) const;

    bool operator==(const CycNum& o) const;
    bool operator!=(const CycNum& o) const { return !(*this == o); }
    // identical stored representation
    bool same_repr(const CycNum& o) const;

    std::complex<double> approx() const;
    std::string str() const;

private:
    uint64_t n_ = 1;
    std::vector<Z> a_;
    std::vector<Z> b_;
    Z den_ = 1;
    int64_t q_ = 0;

    void normalize();
    void absorb_sqrt();
    void descend();
    void lift_inplace(uint64_t m);
    friend CycNum combine_add(const CycNum&, const CycNum&, bool);
    friend CycNum make_cyc(uint64_t, std::vector<Z>, std::vector<Z>, Z, int64_t);
};

CycNum cyc_add(const CycNum& a, const CycNum& b);
CycNum cyc_mul(const CycNum& a, const CycNum& b);
CycNum cyc_neg(const CycNum& a);
CycNum cyc_inv(const CycNum& a);
CycNum cyc_conj(const CycNum& a);
bool cyc_is_zero(const CycNum& a);
bool cyc_eq(const CycNum& a, const CycNum& b);

// Exact rational times root of unity; the value type of character evaluations.
struct Mono {
    Q r = 0;        // rational factor
    Q e = 0;        // exponent fraction in [0, 1): value = r * exp(2 pi i e)
    Mono() = default;
    Mono(const Q& rr, const Q& ee = 0);
    static Mono one() { return Mono(1, 0); }
    static Mono root(int64_t num, int64_t den) { return Mono(1, Q(num, den)); }
    bool is_zero() const { return r == 0; }
    Mono operator*(const Mono& o) const;
    Mono inv() const;
    Mono pow(int64_t k) const;
    Mono conj() const;
    bool operator==(const Mono& o) const;
    bool operator!=(const Mono& o) const { return !(*this == o); }
    // order of the root-of-unity part
    uint64_t root_order() const;
    CycNum to_cyc() const;
    std::string str() const;
};

// sum_{j >= 0} m^j = 1 / (1 - m) for a Mono ratio; RatioOne when m = 1, not convergent otherwise handled by caller
CycNum inv_one_minus(const Mono& m);

}  // namespace pgz
