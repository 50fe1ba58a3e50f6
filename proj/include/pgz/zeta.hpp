#pragma once

#include <vector>

#include "pgz/integrate.hpp"

namespace pgz {

// Input to the basic local integral over one place w of E above p.
struct ZwInput {
    LocalDatum datum;
    int place_w = 0;  // which factor for split data
    Mono alpha;       // alpha(varpi), alpha unramified
    MulChar chi_w;    // character of E_w^x
    AddChar psi;      // level-0 character of F; psi_E = psi o Tr
};

// chi_w * (alpha o q_w)
MulChar twisted_character(const ZwInput& in);
// (alpha o q_w) chi_w at varpi_w
Mono beta_w(const ZwInput& in);

CycNum zw_closed(const ZwInput& in);
CycNum zw_bruteforce(const ZwInput& in, Budget* budget = nullptr);
// per-annulus oracle values from the first vanishing annulus through the tail start + 1
std::vector<std::pair<int, CycNum>> zw_annulus_table(const ZwInput& in, Budget* budget = nullptr);

// Gauss sum over the conductor annulus, discriminant-normalized measure on E_w.
CycNum gauss_sum(const MulChar& chi_tilde, const AddChar& psi, Budget* budget = nullptr);
// tau divided by N(f)
CycNum gauss_sum_normalized(const MulChar& chi_tilde, const AddChar& psi, Budget* budget = nullptr);
// N(f) = q_w^c
Q conductor_norm(const MulChar& chi);

bool is_exceptional(const ZwInput& in);

// (|.|alpha)(varpi) and beta(varpi) of the principal series
struct SatakeInput {
    Mono alpha_abs;
    Mono beta;
};

// restriction of chi_w (or chi_w1 chi_w2 for split data) to F^x, compared to omega^{-1}
bool central_character_consistent(const LocalDatum& d, const std::vector<MulChar>& chi_pair, const MulChar& omega);

// L(1/2, sigma_E x chi') with the declared Satake placement
CycNum L_half(const LocalDatum& d, const std::vector<MulChar>& chi_pair, const SatakeInput& s);

CycNum interpolation_factor_Zv(const LocalDatum& d, const Mono& alpha, const std::vector<MulChar>& chi_pair,
                               const AddChar& psi, const MulChar& omega, const SatakeInput& satake);

// |D|^{1/2} |d|^2 L(1, eta) prod_w Z_w
CycNum R_circ_product(const LocalDatum& d, const Mono& alpha, const std::vector<MulChar>& chi_pair, const AddChar& psi);

// number of places w | v (2 for split)
int places_above(const LocalDatum& d);
ZwInput zw_input(const LocalDatum& d, int w, const Mono& alpha, const MulChar& chi_w, const AddChar& psi);

}  // namespace pgz
