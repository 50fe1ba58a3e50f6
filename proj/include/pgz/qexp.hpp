#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pgz/cyclo.hpp"
#include "pgz/json_io.hpp"

namespace pgz {

// W_{base p^s} = coeff * ratio^(s - s0) for every s >= s0; base > 0 prime to p.
struct Comb {
    Q base = 1;
    int s0 = 0;
    CycNum coeff;
    CycNum ratio;
};

// Reduced q-expansion over F = Q: positive rational indices, a finite part plus geometric combs.
struct ReducedQExpansion {
    int64_t p = 0;
    int64_t tame_level = 1;
    std::map<int64_t, CycNum> omega;  // omega(varpi_v), default 1
    CycNum constant;
    std::map<Q, CycNum> coeffs;
    std::vector<Comb> combs;

    CycNum omega_at(int64_t v) const;
    CycNum coefficient(const Q& a) const;
    // drop zeros, merge combs with equal (base, s0, ratio), sort
    void canonicalize();
    bool operator==(const ReducedQExpansion& o) const;
    bool is_zero() const;
};

ReducedQExpansion operator+(const ReducedQExpansion& a, const ReducedQExpansion& b);
ReducedQExpansion scaled(const ReducedQExpansion& w, const CycNum& s);

// p-adic valuation of x (content valuation in the power basis; needs p prime to the order), nullopt for 0
std::optional<int64_t> cyc_valuation(const CycNum& x, int64_t p);

// sup |W_a|_p; nullopt when unbounded. Exact when each base carries at most one comb.
std::optional<Q> qexp_norm(const ReducedQExpansion& w);
// minimal valuation over the stored coefficients (nullopt: zero or unbounded below)
std::optional<int64_t> qexp_min_valuation(const ReducedQExpansion& w);

ReducedQExpansion hecke_T(const ReducedQExpansion& w, int64_t ell);
// form_mode drops indices with v_p(a) < 0
ReducedQExpansion U_v_star(const ReducedQExpansion& w, int64_t v, bool form_mode = false);
ReducedQExpansion U_power(const ReducedQExpansion& w, int64_t v, int64_t m, bool form_mode = true);

struct ProjectorResult {
    ReducedQExpansion image;
    std::vector<Q> residual_norms;  // |U^{n!} W - image| for n = 1, 2, ...; 0 once exact
    int iterations = 0;
};

constexpr int kProjectorValuationBound = 50;

// e_v = lim U^{n!}; stops when the residual norm is 0 or below p^{-50}
ProjectorResult ordinary_projector(const ReducedQExpansion& w, int64_t v, int max_iter = 12);

struct CriticalityResult {
    std::optional<int64_t> c;
    bool window_limited = false;
};
CriticalityResult is_v_critical(const ReducedQExpansion& w, int64_t v);

bool in_kept_set(const Q& a, const std::vector<int64_t>& S);
ReducedQExpansion s_quotient(const ReducedQExpansion& w, const std::vector<int64_t>& S);

json qexp_to_json(const ReducedQExpansion& w);
ReducedQExpansion qexp_from_json(const json& j);

// [{"op":"U","v":3},{"op":"T","v":2},{"op":"e","v":3}]
ReducedQExpansion apply_pipeline(const ReducedQExpansion& w, const json& ops, json* log = nullptr);

}  // namespace pgz
