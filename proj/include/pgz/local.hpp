#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pgz/cyclo.hpp"

namespace pgz {

// ---- integer helpers ----
bool is_prime(int64_t n);
int64_t ipow(int64_t b, int e);  // throws on overflow
int64_t mod_pow(int64_t b, int64_t e, int64_t m);
int64_t mod_inv(int64_t a, int64_t m);
int64_t pmod(int64_t a, int64_t m);
int vp(const Z& x, int64_t p);
int vp(const Q& x, int64_t p);  // x != 0
Z unit_part(const Q& x, int64_t p, int64_t modulus);  // x / p^{v(x)} mod modulus
int legendre(int64_t a, int64_t p);
// Hilbert symbol (a, b)_p over Q_p; p = 0 means the real place.
int hilbert_symbol(const Q& a, const Q& b, int64_t p);
int64_t smallest_primitive_root(int64_t p);

enum class QuadType { split, inert, ramified };
enum class FieldKind { Qp, Unram, Ram };

const char* quad_type_name(QuadType t);
QuadType quad_type_from(const std::string& s);

// Q_p, its unramified quadratic extension, or Q_p(sqrt(p u0)); elements a + b theta.
struct LocalField {
    int64_t p = 0;
    FieldKind kind = FieldKind::Qp;
    int64_t s = 0, t = 0;  // theta^2 = s + t theta
    int64_t u0 = 0;        // Ram: theta^2 = p u0
    int f = 1, e = 1;
    int delta = 0;  // exponent of the different

    static LocalField Qp(int64_t p);
    static LocalField unram(int64_t p);
    static LocalField ram(int64_t p, int64_t u0);

    int64_t q() const { return f == 2 ? p * p : p; }
    int64_t modA(int m) const;
    int64_t modB(int m) const;
    int64_t residue_count(int m) const { return modA(m) * modB(m); }
    std::string name() const;
    bool operator==(const LocalField& o) const {
        return p == o.p && kind == o.kind && s == o.s && t == o.t && u0 == o.u0;
    }
};

struct Residue {
    int64_t a = 0, b = 0;
    bool operator==(const Residue& o) const { return a == o.a && b == o.b; }
};

Residue res_reduce(const LocalField& K, int m, Residue x);
Residue res_mul(const LocalField& K, int m, Residue x, Residue y);
Residue res_pow(const LocalField& K, int m, Residue x, uint64_t k);
bool res_is_unit(const LocalField& K, Residue x);
// 1 + varpi^k residue (k >= 1), in a + b theta form
Residue res_one_plus_unif(const LocalField& K, int m, int k);
// theta-adic (or p-adic) valuation of a residue known mod varpi^m; m if zero
int res_valuation(const LocalField& K, int m, Residue x);
// N_{K/Q_p}(x) as integer mod p^k (x a unit residue at precision m)
int64_t res_norm(const LocalField& K, Residue x, int64_t modulus);

// The set varpi^n u (1 + varpi^N O).
struct PAdicCoset {
    int n = 0;
    Residue u;
    int N = 1;
};

PAdicCoset coset_of_rational(const LocalField& K, const Q& x, int N);
PAdicCoset coset_mul(const LocalField& K, const PAdicCoset& x, const PAdicCoset& y);

// (O_K / varpi^m)^x with a canonical basis and discrete-log table.
class UnitGroup {
public:
    static std::shared_ptr<const UnitGroup> get(const LocalField& K, int m);

    const LocalField& field() const { return K_; }
    int level() const { return m_; }
    std::size_t size() const { return units_.size(); }
    int64_t modA() const { return A_; }
    int64_t modB() const { return B_; }
    Residue elem(std::size_t pos) const { return units_[pos]; }
    int32_t pos_of(Residue r) const;  // r reduced; -1 if not a unit
    const std::vector<Residue>& basis() const { return basis_; }
    const std::vector<uint64_t>& orders() const { return orders_; }
    const uint32_t* exps(std::size_t pos) const { return &exps_[pos * rank()]; }
    std::size_t rank() const { return basis_.size(); }
    uint64_t exponent() const;
    // positions whose residue is 1 mod varpi^k
    bool is_one_mod(std::size_t pos, int k) const;

    UnitGroup(const LocalField& K, int m);

private:
    LocalField K_;
    int m_;
    int64_t A_, B_;
    std::vector<Residue> units_;
    std::vector<int32_t> index_;
    std::vector<Residue> basis_;
    std::vector<uint64_t> orders_;
    std::vector<uint32_t> exps_;
};

// Multiplicative character of K^x with finite conductor.
class MulChar {
public:
    MulChar() = default;
    static MulChar trivial(const LocalField& K);
    static MulChar unramified(const LocalField& K, const Mono& at_unif);
    // gen_values: exponent fractions (mod 1) on the canonical basis at level c
    static MulChar from_gen_values(const LocalField& K, int c, const std::vector<Q>& gen_values, const Mono& at_unif);

    const LocalField& field() const { return K_; }
    int conductor() const { return c_; }
    const Mono& at_uniformizer() const { return at_unif_; }
    const std::vector<Q>& gen_values() const { return gen_; }
    bool is_unramified() const { return c_ == 0; }
    bool is_trivial() const { return c_ == 0 && at_unif_ == Mono::one(); }

    // value on a unit residue known to precision >= conductor, as fraction mod 1
    Q unit_value(Residue u, int N) const;
    // same, scaled to exponent mod L (L a multiple of unit_order())
    uint32_t unit_exp(Residue u, int N, uint64_t L) const;
    uint64_t unit_order() const { return M_; }
    Mono eval(const PAdicCoset& x) const;
    CycNum eval_cyc(const PAdicCoset& x) const { return eval(x).to_cyc(); }

    MulChar operator*(const MulChar& o) const;
    MulChar inv() const;
    MulChar with_uniformizer(const Mono& m) const;
    // chi(-1) as +-1
    int sign() const;
    bool operator==(const MulChar& o) const;
    std::string str() const;

private:
    LocalField K_;
    int c_ = 0;
    std::vector<Q> gen_;
    Mono at_unif_ = Mono::one();
    uint64_t M_ = 1;
    std::shared_ptr<const UnitGroup> G_;
    std::vector<uint32_t> table_;  // exponent mod M_ per unit position
    void build_table();
};

// Character of conductor c from a seed; deterministic. Returns false when none exists.
bool sample_character(const LocalField& K, int c, uint64_t seed, const Mono& at_unif, MulChar& out);
// All characters of conductor exactly c (at_unif fixed); capped by max_count.
std::vector<MulChar> all_characters(const LocalField& K, int c, const Mono& at_unif, std::size_t max_count);

// Additive character psi_s(x) = psi(s x) of level 0 on Q_p; on K via the trace.
struct AddChar {
    int64_t s = 1;  // unit twist
    // exponent fraction of psi_s(Tr x) for a coset of K
    Q eval_exponent(const LocalField& K, const PAdicCoset& x) const;
    CycNum eval(const LocalField& K, const PAdicCoset& x) const;
    // exponent of psi_s(Tr(varpi^n u)) as integer mod p^k, with k = needed level (0 if trivial)
    int64_t exponent_mod(const LocalField& K, int n, Residue u, int N, int& k) const;
};

// Quadratic algebra E_v / Q_p.
struct LocalDatum {
    int64_t p = 0;
    QuadType type = QuadType::split;
    int64_t u0 = 1;  // ramified: E = Q_p(sqrt(p u0))
    int f = 1, e = 1, v_D = 0, v_d = 0;

    static LocalDatum make(int64_t p, QuadType type, int64_t u0 = 1);
    LocalField F() const { return LocalField::Qp(p); }
    LocalField Ew() const;
    int64_t qF() const { return p; }
    int64_t qw() const { return f == 2 ? p * p : p; }
    std::string str() const;
};

std::vector<std::pair<PAdicCoset, Q>> annulus_cosets(const LocalField& K, int n, int N, bool additive);

enum class Measure { multiplicative, additive_unit, additive_self_dual, additive_discriminant };
const char* measure_name(Measure m);
// vol(O_K) under the measure (additive variants), 1 for multiplicative
CycNum haar_normalization(const LocalField& K, Measure m);

CycNum eval_add(const AddChar& psi, const LocalField& K, const PAdicCoset& x);
CycNum eval_mul(const MulChar& chi, const PAdicCoset& x);
int eta_sign(const LocalDatum& d, const PAdicCoset& x);
CycNum eta_value(const LocalDatum& d, const PAdicCoset& x);

enum class LKind { zeta_F, zeta_E, eta, eta_chiF, adhoc };
// L(s, xi) with s = s_twice / 2; xi_at_unif used for eta_chiF (the value chi_F(varpi)) and adhoc
CycNum euler_L(const LocalDatum& d, LKind which, int s_twice, const Mono& xi_at_unif = Mono::one(),
               bool xi_ramified = false);

}  // namespace pgz
