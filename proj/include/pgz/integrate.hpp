#pragma once

#include <functional>
#include <string>

#include "pgz/local.hpp"

namespace pgz {

// Per-integral coset budget (default 1e7).
struct Budget {
    uint64_t max_cosets = 10000000;
    uint64_t used = 0;
    void charge(uint64_t k);
};

// Generic integrand: one Mono per coset of precision N(n).
struct IntegrandSpec {
    LocalField K;
    Measure measure = Measure::multiplicative;
    std::function<int(int n)> precision;
    std::function<Mono(const PAdicCoset&)> evaluator;
};

// Structured integrand: annulus factor times a root of unity zeta_L^{e(u)} per unit class.
struct StructuredIntegrand {
    LocalField K;
    Measure measure = Measure::multiplicative;
    uint64_t L = 1;
    std::function<int(int n)> precision;
    std::function<Mono(int n)> factor;
    // fill out[i] = exponent mod L for every unit i of G (level N)
    std::function<void(int n, const UnitGroup& G, uint32_t* out)> unit_exps;
};

// weight of one coset of precision N on annulus n
CycNum coset_weight(const LocalField& K, Measure m, int n, int N, std::size_t units);

CycNum integrate_annuli(const IntegrandSpec& spec, int n_min, int n_max, Budget* budget = nullptr);
CycNum integrate_annuli(const StructuredIntegrand& spec, int n_min, int n_max, Budget* budget = nullptr);
CycNum annulus_value(const StructuredIntegrand& spec, int n, Budget* budget = nullptr);

struct TailInfo {
    Mono ratio;          // per-annulus ratio beyond tail_start
    std::string reason;  // why the caller knows the structure
    bool check = true;   // verify the ratio at tail_start + 1 by enumeration
};

// sum over [n_min, tail_start) plus c / (1 - r), c the annulus value at tail_start
CycNum integrate_with_tail(const StructuredIntegrand& spec, int n_min, int tail_start, const TailInfo& tail,
                           Budget* budget = nullptr);
CycNum integrate_with_tail(const IntegrandSpec& spec, int n_min, int tail_start, const TailInfo& tail,
                           Budget* budget = nullptr);
// geometric tail from an explicit constant
CycNum geometric_tail(const CycNum& c, const Mono& r);

// True iff the evaluator agrees on two random refinements (precision N+1) of random cosets.
bool verify_local_constancy(const IntegrandSpec& spec, int n_lo, int n_hi, int samples, uint64_t seed = 1);

// exponent helpers for structured integrands
void fill_char_exps(const MulChar& chi, const UnitGroup& G, uint64_t L, uint32_t* out);
void fill_psi_exps(const AddChar& psi, int n, const UnitGroup& G, uint64_t L, uint32_t* out);
// out = (out + add) mod L
void add_exps(uint32_t* out, const uint32_t* add, uint64_t L, std::size_t count);
uint64_t lcm_u64(uint64_t a, uint64_t b);

}  // namespace pgz
