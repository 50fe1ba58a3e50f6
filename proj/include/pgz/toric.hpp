#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pgz/zeta.hpp"

namespace pgz {

// Split place v | p: chi = (chi_w, chi_w*) on E_v^x = F^x x F^x with chi_w chi_w* = omega^{-1}.
struct ToricTuple {
    int64_t p = 0;
    Mono alpha;
    MulChar chi_w, chi_ws, omega;
    AddChar psi;
    std::string str() const;
};

// chi_w* is determined by chi_w and omega
ToricTuple make_toric_tuple(int64_t p, const Mono& alpha, const MulChar& chi_w, const MulChar& omega, const AddChar& psi);

// q(U) = 1 + p^n Z_p
int qU_level(const ToricTuple& t);
// r0 = max conductor + additive level + n + 1
int level_threshold(const ToricTuple& t);
// smallest r at which the brute-force routes are defined
int min_level(const ToricTuple& t);

struct ToricValue {
    CycNum value;
    bool stabilized = false;
};

// zeta_F(1)^{-1} int_{v(q(t)) >= -r} |q(t)| alpha(q(t)) chi(t) psi_E(t) d^x t by pair enumeration
ToricValue R_circ_bruteforce(const ToricTuple& t, int r, Budget* budget = nullptr);
// the toric-at-p double integral over (t, y) before any substitution
ToricValue toric_double_integral(const ToricTuple& t, int r, Budget* budget = nullptr);
// its two single-variable factors after t' = t y
std::pair<CycNum, CycNum> toric_factors(const ToricTuple& t, int r, Budget* budget = nullptr);
CycNum R_circ_product(const ToricTuple& t);

struct QSharpTerm {
    int i = 0;
    int64_t c = 0;
    CycNum value;
};

struct QSharpResult {
    std::vector<QSharpTerm> terms;  // (0,1) and (1,c)
    std::vector<CycNum> sum_by_i;   // index i = 0..r
    CycNum total;
    bool stabilized = false;
};

QSharpResult iwahori_terms_Q_sharp(const ToricTuple& t, int r, Budget* budget = nullptr);

struct QSharpReport {
    bool ok = true;
    CycNum total, r_circ_brute, r_circ_product, q01;
    std::vector<std::string> mismatches;
};

QSharpReport verify_Q_sharp_identity(const ToricTuple& t, int r, Budget* budget = nullptr);

// Kirillov-model vectors on Q_p^x
struct KirillovVector {
    std::string descriptor;
    std::function<int(int n)> precision;
    std::function<Mono(const PAdicCoset&)> eval;
};

KirillovVector f_alpha_plus(int64_t p, const Mono& alpha);
KirillovVector f_alpha_minus(int64_t p, const Mono& alpha, const MulChar& omega);
// |varpi|^{-r} alpha(varpi)^{-r} s_r f^+ : y -> psi(-y) |y| alpha(y) 1[v(y) >= -r]
KirillovVector f_alpha_r_plus(int64_t p, const Mono& alpha, const AddChar& psi, int r);
// y -> psi(y) |y| alpha(y) omega^{-1}(y) 1[v(y) >= -r]
KirillovVector f_alpha_r_minus(int64_t p, const Mono& alpha, const MulChar& omega, const AddChar& psi, int r);

// norm * int f1 f2 d^x y, over v(y) >= n_lo with geometric continuation from tail_start
CycNum kirillov_pairing(const KirillovVector& f1, const KirillovVector& f2, const CycNum& norm, int64_t p, int n_lo,
                        int tail_start, const Mono& ratio);

// average over V_r / V_{r+1} of the level r+1 vector equals the level r vector
bool norm_relation_check(const KirillovVector& fr, const KirillovVector& fr1, int64_t p, int r, int n_lo, int n_hi);
bool norm_relation_check(int64_t p, const Mono& alpha, const AddChar& psi, int r);

}  // namespace pgz
