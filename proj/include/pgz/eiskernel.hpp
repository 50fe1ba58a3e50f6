#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pgz/integrate.hpp"
#include "pgz/json_io.hpp"
#include "pgz/local.hpp"

namespace pgz {

// Finite Laurent polynomial in X = chi_F(varpi); no stored zero coefficients.
class LaurentPoly {
public:
    LaurentPoly() = default;
    static LaurentPoly monomial(int k, const CycNum& c);
    static LaurentPoly constant(const CycNum& c) { return monomial(0, c); }

    const std::map<int, CycNum>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    CycNum coeff(int k) const;
    int min_degree() const;
    int max_degree() const;

    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly scaled(const CycNum& s) const;
    bool operator==(const LaurentPoly& o) const;

    CycNum eval(const CycNum& x) const;
    CycNum eval_at_one() const;
    // P / (1 - cX) when exact
    std::optional<LaurentPoly> divide_one_minus(const CycNum& c) const;
    std::string str() const;
    json to_json() const;

private:
    void add_term(int k, const CycNum& v);
    std::map<int, CycNum> c_;
};

// d/dX at X = 1: sum k c_k
CycNum derivative_at_one(const LaurentPoly& p);

// Binary quadratic space (V_2, scale * (A x1^2 + B x1 x2 + C x2^2)) over Q_p with the lattice Z_p^2.
struct QuadSpaceLocal {
    int64_t p = 0;
    int64_t A = 0, B = 1, C = 0;
    Q scale = 1;
    int eta = 1;  // eta_v(varpi): 1 split, -1 inert, 0 ramified
    std::string name;

    // E_v with the form u c N for a local datum (u, c units)
    static QuadSpaceLocal from_datum(const LocalDatum& d, const Q& u, const Q& c = 1);
    // maximal order Z[(D + sqrt D)/2] of Q(sqrt D) at p, scaled
    static QuadSpaceLocal from_discriminant(int64_t disc, int64_t p, const Q& scale);
    int64_t form_disc() const { return B * B - 4 * A * C; }
    std::string str() const;
};

// #{x in (Z/p^n)^2 : scale N(x) = a mod p^n}
Z count_solutions(const QuadSpaceLocal& s, const Q& a, int n);
// same by scanning all of (Z/p^n)^2
Z count_solutions_bruteforce(const QuadSpaceLocal& s, const Q& a, int n);
// volume of D_n(a) cap Z_p^2 with vol(Z_p^2) = 1
Q dn_volume(const QuadSpaceLocal& s, const Q& a, int n);

struct WhittakerPoly {
    LaurentPoly series;       // (1 - X) sum_n X^n q^n vol(D_n(a)) after the tail cancellation
    LaurentPoly poly;         // series * L(1, eta chi_F) when the division is exact
    bool l_factor_divided = true;
    int tail_start = 0;       // n0 where q^n vol(D_n(a)) becomes constant
    Q tail_constant = 0;
};

// normalized |d|^{-3/2}|D|^{-1/2} W-circ_{a,v}(1, u, chi_F) for the standard Schwartz function
WhittakerPoly whittaker_poly(const QuadSpaceLocal& s, const Q& a);

// v | p, standard data: chi_F(-1) if v(a) >= 0 and v(u) = 0, else 0 (|d| = |D| = 1)
CycNum whittaker_p_standard(int64_t p, const Q& a, const Q& u, const CycNum& chi_F_minus1);

struct ArchEntry {
    std::string key;
    std::string value;
};
std::vector<ArchEntry> archimedean_constants();

// local Siegel-Weil: integral over E^1 of the standard function at x_a, vol(E^1) = 1 (split: per unit layer)
std::optional<Q> siegel_weil_rhs(const QuadSpaceLocal& s, const Q& a);

// k-natural(1, x, u) at a good inert place for x2 with v(q(x2)) = val
Q derivative_kernel_k_natural(int64_t p, int val, const Q& u = 1);
// -W'(1) / vol(E^1) for a = p^val on the coherent inert space, without the representability guard
Q derivative_kernel_raw(int64_t p, int val, const Q& u = 1);

// ---- global toy data over F = Q, E = Q(sqrt disc) ----

struct ThetaLattice {
    int64_t disc = -4;
    // coset weight: indicator of x0 + m O (m = 1: the order)
    int64_t m = 1;
    int64_t x0_1 = 0, x0_2 = 0;
    int64_t norm(int64_t x1, int64_t x2) const;
};

// sum over x in the lattice with u N(x) = a of phi_1(x)
Z theta_rep_number(const ThetaLattice& lat, const Q& a, const Q& u, Budget* budget = nullptr);
// independent enumeration (different traversal) used as an oracle
Z theta_rep_number_oracle(const ThetaLattice& lat, const Q& a, const Q& u);

struct KernelScenario {
    int64_t disc = -4;
    int64_t p = 5;                 // the prime above which the p-adic family lives (must split)
    std::vector<Q> u_range = {Q(1)};
    Q c_const = 1;
    int64_t class_number = 1;
    bool coherent = false;         // flip the local invariant at flip_prime
    int64_t flip_prime = 2;
    std::map<int64_t, CycNum> X;   // chi_F(varpi_v), default 1
    int chi_F_minus1 = 1;
    ThetaLattice lattice;
    CycNum X_at(int64_t v) const;
};

// -c_v u N at v: c_v = 1 (incoherent), or a local non-norm at flip_prime (coherent)
QuadSpaceLocal kernel_space(const KernelScenario& sc, int64_t v, const Q& u);
bool locally_represented(const KernelScenario& sc, int64_t v, const Q& a, const Q& u);

struct Witness {
    bool archimedean = false;
    int64_t prime = 0;
};
// a place where a is not represented by (V_2, u q)
std::optional<Witness> incoherence_witness(const KernelScenario& sc, const Q& a, const Q& u, int64_t prime_bound);

struct KernelTerm {
    Q u, a1, a2;
    Z theta;
    CycNum eis;
    std::string note;
};

struct KernelCoefficient {
    CycNum value;
    std::vector<KernelTerm> terms;
    bool constant_term_flagged = false;
};

// Eisenstein coefficient at index a2 > 0 (product of local Whittaker values, archimedean factor 2)
CycNum eisenstein_coefficient(const KernelScenario& sc, const Q& a2, const Q& u);
KernelCoefficient kernel_coefficient(const KernelScenario& sc, const Q& a, Budget* budget = nullptr);

std::vector<int64_t> prime_factors(Z n);

}  // namespace pgz
