#include "pgz/zeta.hpp"

#include <algorithm>

namespace pgz {

namespace {

// level k of psi_E on annulus n (exponent denominators p^k)
int additive_level(const LocalField& K, int n) {
    if (K.kind == FieldKind::Ram) {
        int j = n >= 0 ? n / 2 : -((-n + 1) / 2);
        return std::max(0, -j);
    }
    return std::max(0, -n);
}

StructuredIntegrand char_times_psi(const MulChar& chit, const AddChar& psi, int n_lo) {
    const LocalField K = chit.field();
    const int c = chit.conductor();
    StructuredIntegrand s;
    s.K = K;
    s.measure = Measure::additive_discriminant;
    uint64_t pk = static_cast<uint64_t>(ipow(K.p, additive_level(K, n_lo)));
    s.L = lcm_u64(chit.unit_order(), pk);
    s.precision = [c, K](int n) { return std::max({c, -n - K.delta, 1}); };
    Mono b = chit.at_uniformizer();
    s.factor = [b](int n) { return b.pow(n); };
    uint64_t L = s.L;
    s.unit_exps = [chit, psi, L](int n, const UnitGroup& G, uint32_t* out) {
        fill_char_exps(chit, G, L, out);
        std::vector<uint32_t> add(G.size());
        fill_psi_exps(psi, n, G, L, add.data());
        add_exps(out, add.data(), L, G.size());
    };
    return s;
}

Mono scale(const Mono& m, const Q& r) { return Mono(m.r * r, m.e); }

}  // namespace

MulChar twisted_character(const ZwInput& in) {
    if (in.alpha.is_zero() || vp(in.alpha.r, in.datum.p) != 0)
        fail(ErrorKind::InvalidInput, "alpha(varpi) must be a p-adic unit");
    if (in.psi.s % in.datum.p == 0) fail(ErrorKind::InvalidInput, "psi twist must be a unit");
    return in.chi_w.with_uniformizer(in.chi_w.at_uniformizer() * in.alpha.pow(in.datum.f));
}

Mono beta_w(const ZwInput& in) { return in.chi_w.at_uniformizer() * in.alpha.pow(in.datum.f); }

CycNum zw_closed(const ZwInput& in) {
    MulChar chit = twisted_character(in);
    if (chit.conductor() > 0) return gauss_sum(chit, in.psi);
    Mono b = chit.at_uniformizer();
    Q qw(static_cast<long>(in.datum.qw()));
    Mono pref = (in.alpha * in.chi_w.at_uniformizer()).pow(-in.datum.v_D);
    CycNum num = CycNum(1) - b.inv().to_cyc();
    CycNum den = CycNum(1) - scale(b, 1 / qw).to_cyc();
    if (den.is_zero()) fail(ErrorKind::PoleAtEvaluationPoint, "1 - alpha^f chi(varpi_w) q^-f vanishes");
    return pref.to_cyc() * num / den;
}

CycNum zw_bruteforce(const ZwInput& in, Budget* budget) {
    MulChar chit = twisted_character(in);
    const LocalField K = chit.field();
    const int c = chit.conductor();
    const int n_lo = -(std::max(c, 1) + K.delta) - 1;
    const int T = -K.delta;
    StructuredIntegrand s = char_times_psi(chit, in.psi, n_lo);
    // below the conductor annulus everything cancels; checked on the first such annulus
    if (!annulus_value(s, n_lo, budget).is_zero())
        fail(ErrorKind::Internal, "annulus below the conductor depth does not vanish");
    Q qw(static_cast<long>(K.q()));
    TailInfo tail{scale(chit.at_uniformizer(), 1 / qw), "unramified beyond the additive level", true};
    return integrate_with_tail(s, n_lo + 1, T, tail, budget);
}

std::vector<std::pair<int, CycNum>> zw_annulus_table(const ZwInput& in, Budget* budget) {
    MulChar chit = twisted_character(in);
    const LocalField K = chit.field();
    const int n_lo = -(std::max(chit.conductor(), 1) + K.delta) - 1;
    StructuredIntegrand s = char_times_psi(chit, in.psi, n_lo);
    std::vector<std::pair<int, CycNum>> out;
    for (int n = n_lo; n <= -K.delta + 1; ++n) out.emplace_back(n, annulus_value(s, n, budget));
    return out;
}

Q conductor_norm(const MulChar& chi) {
    Q r = 1;
    for (int i = 0; i < chi.conductor(); ++i) r *= static_cast<long>(chi.field().q());
    return r;
}

CycNum gauss_sum(const MulChar& chit, const AddChar& psi, Budget* budget) {
    if (chit.conductor() < 1) fail(ErrorKind::InvalidInput, "gauss_sum needs a ramified character");
    const int m = chit.conductor() + chit.field().delta;
    StructuredIntegrand s = char_times_psi(chit, psi, -m);
    return annulus_value(s, -m, budget);
}

CycNum gauss_sum_normalized(const MulChar& chit, const AddChar& psi, Budget* budget) {
    return gauss_sum(chit, psi, budget).scaled(1 / conductor_norm(chit));
}

bool is_exceptional(const ZwInput& in) {
    MulChar chit = twisted_character(in);
    return chit.is_unramified() && chit.at_uniformizer() == Mono::one();
}

int places_above(const LocalDatum& d) { return d.type == QuadType::split ? 2 : 1; }

ZwInput zw_input(const LocalDatum& d, int w, const Mono& alpha, const MulChar& chi_w, const AddChar& psi) {
    ZwInput in;
    in.datum = d;
    in.place_w = w;
    in.alpha = alpha;
    in.chi_w = chi_w;
    in.psi = psi;
    return in;
}

bool central_character_consistent(const LocalDatum& d, const std::vector<MulChar>& chi_pair, const MulChar& omega) {
    if (static_cast<int>(chi_pair.size()) != places_above(d))
        fail(ErrorKind::InvalidInput, "need one character per place above p");
    const LocalField F = d.F();
    int M = std::max(1, omega.conductor());
    for (auto& ch : chi_pair) {
        int c = ch.conductor();
        M = std::max(M, d.type == QuadType::ramified ? (c + 1) / 2 : c);
    }
    MulChar winv = omega.inv();
    auto G = UnitGroup::get(F, M);
    for (std::size_t i = 0; i < G->size(); ++i) {
        Residue a = G->elem(i);
        Q v = 0;
        for (auto& ch : chi_pair) {
            int N = d.type == QuadType::ramified ? 2 * M : M;
            v += ch.unit_value(Residue{a.a, 0}, N);
        }
        Mono lhs(1, v);
        Mono rhs(1, winv.unit_value(a, M));
        if (lhs != rhs) return false;
    }
    // value at p
    Mono at_p = Mono::one();
    for (auto& ch : chi_pair) {
        if (d.type == QuadType::ramified) {
            // p = theta^2 / u0
            Mono u0v(1, ch.unit_value(Residue{pmod(d.u0, ipow(d.p, M)), 0}, 2 * M));
            at_p = at_p * ch.at_uniformizer().pow(2) * u0v.inv();
        } else {
            at_p = at_p * ch.at_uniformizer();
        }
    }
    return at_p == winv.at_uniformizer();
}

CycNum L_half(const LocalDatum& d, const std::vector<MulChar>& chi_pair, const SatakeInput& s) {
    // normalized parameters gamma1 = alpha_abs q^{1/2}, gamma2 = beta q^{-1/2};
    // base change to E_w raises them to the f-th power, and s = 1/2 contributes q_w^{-1/2}
    const Q p(static_cast<long>(d.p));
    CycNum L(1);
    for (auto& ch : chi_pair) {
        if (!ch.is_unramified()) continue;
        Mono x1, x2;
        if (d.f == 2) {
            x1 = s.alpha_abs.pow(2) * ch.at_uniformizer();
            x2 = scale(s.beta.pow(2) * ch.at_uniformizer(), 1 / (p * p));
        } else {
            x1 = s.alpha_abs * ch.at_uniformizer();
            x2 = scale(s.beta * ch.at_uniformizer(), 1 / p);
        }
        for (const Mono& x : {x1, x2}) {
            if (x == Mono::one()) fail(ErrorKind::PoleAtEvaluationPoint, "L(1/2) factor has a pole");
            L = L * inv_one_minus(x);
        }
    }
    return L;
}

CycNum interpolation_factor_Zv(const LocalDatum& d, const Mono& alpha, const std::vector<MulChar>& chi_pair,
                               const AddChar& psi, const MulChar& omega, const SatakeInput& satake) {
    if (!central_character_consistent(d, chi_pair, omega))
        fail(ErrorKind::InconsistentCentralCharacter, "chi' restricted to F^x is not omega^-1");
    CycNum prod(1);
    for (std::size_t w = 0; w < chi_pair.size(); ++w)
        prod = prod * zw_closed(zw_input(d, static_cast<int>(w), alpha, chi_pair[w], psi));
    if (prod.is_zero()) return prod;
    CycNum lead = euler_L(d, LKind::zeta_F, 4) * euler_L(d, LKind::eta, 2) * euler_L(d, LKind::eta, 2);
    return lead * prod / L_half(d, chi_pair, satake);
}

CycNum R_circ_product(const LocalDatum& d, const Mono& alpha, const std::vector<MulChar>& chi_pair, const AddChar& psi) {
    if (static_cast<int>(chi_pair.size()) != places_above(d))
        fail(ErrorKind::InvalidInput, "need one character per place above p");
    CycNum prod(1);
    for (std::size_t w = 0; w < chi_pair.size(); ++w)
        prod = prod * zw_closed(zw_input(d, static_cast<int>(w), alpha, chi_pair[w], psi));
    Q absD = 1;
    for (int i = 0; i < d.v_D; ++i) absD /= static_cast<long>(d.p);
    return CycNum::sqrt_of(absD) * euler_L(d, LKind::eta, 2) * prod;
}

}  // namespace pgz
