#include "pgz/integrate.hpp"

#include <map>
#include <numeric>
#include <random>

#include "pgz/simd.hpp"

namespace pgz {

void Budget::charge(uint64_t k) {
    used += k;
    if (used > max_cosets)
        fail(ErrorKind::BudgetExceeded, "coset budget " + std::to_string(max_cosets) + " exceeded");
}

uint64_t lcm_u64(uint64_t a, uint64_t b) {
    uint64_t l = std::lcm(a, b);
    if (l > cyclo_order_cap()) fail(ErrorKind::OrderTooLarge, "root order " + std::to_string(l));
    return l;
}

CycNum coset_weight(const LocalField& K, Measure m, int n, int N, std::size_t units) {
    if (m == Measure::multiplicative) return CycNum(Q(1, static_cast<unsigned long>(units)));
    Q w = 1;
    Q q(static_cast<long>(K.q()));
    int e = -n - N;
    for (int i = 0; i < std::abs(e); ++i) {
        if (e > 0) w *= q;
        else w /= q;
    }
    return haar_normalization(K, m).scaled(w);
}

namespace {

CycNum annulus_generic(const IntegrandSpec& spec, int n, Budget* budget) {
    int N = spec.precision(n);
    auto G = UnitGroup::get(spec.K, N);
    if (budget) budget->charge(G->size());
    std::map<Q, Q> acc;  // exponent -> summed rational
    for (std::size_t i = 0; i < G->size(); ++i) {
        Mono v = spec.evaluator(PAdicCoset{n, G->elem(i), N});
        if (v.is_zero()) continue;
        acc[v.e] += v.r;
    }
    if (acc.empty()) return CycNum(0);
    uint64_t L = 1;
    for (auto& [e, r] : acc) L = lcm_u64(L, e.get_den().get_ui());
    std::vector<Q> coeffs(L, 0);
    for (auto& [e, r] : acc) coeffs[Q(e * Q(static_cast<unsigned long>(L))).get_num().get_ui()] += r;
    return CycNum::from_coeffs(static_cast<int64_t>(L), coeffs) * coset_weight(spec.K, spec.measure, n, N, G->size());
}

}  // namespace

CycNum annulus_value(const StructuredIntegrand& spec, int n, Budget* budget) {
    Mono f = spec.factor(n);
    if (f.is_zero()) return CycNum(0);
    int N = spec.precision(n);
    auto G = UnitGroup::get(spec.K, N);
    if (budget) budget->charge(G->size());
    std::vector<uint32_t> ex(G->size(), 0);
    spec.unit_exps(n, *G, ex.data());
    std::vector<int64_t> counts(spec.L, 0);
    for (uint32_t e : ex) counts[e] += 1;
    CycNum s = CycNum::from_exponent_counts(spec.L, counts);
    return s * f.to_cyc() * coset_weight(spec.K, spec.measure, n, N, G->size());
}

CycNum integrate_annuli(const IntegrandSpec& spec, int n_min, int n_max, Budget* budget) {
    if (n_min > n_max) fail(ErrorKind::InvalidInput, "n_min > n_max");
    CycNum s(0);
    for (int n = n_min; n <= n_max; ++n) s += annulus_generic(spec, n, budget);
    return s;
}

CycNum integrate_annuli(const StructuredIntegrand& spec, int n_min, int n_max, Budget* budget) {
    if (n_min > n_max) fail(ErrorKind::InvalidInput, "n_min > n_max");
    CycNum s(0);
    for (int n = n_min; n <= n_max; ++n) s += annulus_value(spec, n, budget);
    return s;
}

CycNum geometric_tail(const CycNum& c, const Mono& r) {
    if (c.is_zero()) return CycNum(0);
    return c * inv_one_minus(r);
}

CycNum integrate_with_tail(const StructuredIntegrand& spec, int n_min, int tail_start, const TailInfo& tail,
                           Budget* budget) {
    CycNum head = n_min < tail_start ? integrate_annuli(spec, n_min, tail_start - 1, budget) : CycNum(0);
    CycNum c = annulus_value(spec, tail_start, budget);
    if (tail.check) {
        CycNum next = annulus_value(spec, tail_start + 1, budget);
        if (next != c * tail.ratio.to_cyc())
            fail(ErrorKind::NotLocallyConstant, "tail ratio check failed (" + tail.reason + ")");
    }
    return head + geometric_tail(c, tail.ratio);
}

CycNum integrate_with_tail(const IntegrandSpec& spec, int n_min, int tail_start, const TailInfo& tail, Budget* budget) {
    CycNum head = n_min < tail_start ? integrate_annuli(spec, n_min, tail_start - 1, budget) : CycNum(0);
    CycNum c = annulus_generic(spec, tail_start, budget);
    if (tail.check) {
        CycNum next = annulus_generic(spec, tail_start + 1, budget);
        if (next != c * tail.ratio.to_cyc())
            fail(ErrorKind::NotLocallyConstant, "tail ratio check failed (" + tail.reason + ")");
    }
    return head + geometric_tail(c, tail.ratio);
}

bool verify_local_constancy(const IntegrandSpec& spec, int n_lo, int n_hi, int samples, uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        int n = n_lo + static_cast<int>(rng() % static_cast<uint64_t>(n_hi - n_lo + 1));
        int N = spec.precision(n);
        auto Gf = UnitGroup::get(spec.K, N + 1);
        Residue u = Gf->elem(rng() % Gf->size());
        // second refinement of the same precision-N coset: u (1 + varpi^N x)
        Residue x{static_cast<int64_t>(rng() % static_cast<uint64_t>(spec.K.p)),
                  spec.K.kind == FieldKind::Unram ? static_cast<int64_t>(rng() % static_cast<uint64_t>(spec.K.p)) : 0};
        Residue d = res_one_plus_unif(spec.K, N + 1, N);
        d.a -= 1;
        Residue prod = res_mul(spec.K, N + 1, d, x);
        Residue shift{1 + prod.a, prod.b};
        Residue u2 = res_mul(spec.K, N + 1, u, res_reduce(spec.K, N + 1, shift));
        try {
            Mono a = spec.evaluator(PAdicCoset{n, u, N + 1});
            Mono b = spec.evaluator(PAdicCoset{n, u2, N + 1});
            if (a != b) return false;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::InsufficientPrecision) return false;
            throw;
        }
    }
    return true;
}

void fill_char_exps(const MulChar& chi, const UnitGroup& G, uint64_t L, uint32_t* out) {
    if (chi.conductor() == 0) {
        std::fill(out, out + G.size(), 0u);
        return;
    }
    if (L % chi.unit_order() != 0) fail(ErrorKind::Internal, "root order does not cover character");
    for (std::size_t i = 0; i < G.size(); ++i) out[i] = chi.unit_exp(G.elem(i), G.level(), L);
}

void fill_psi_exps(const AddChar& psi, int n, const UnitGroup& G, uint64_t L, uint32_t* out) {
    const LocalField& K = G.field();
    for (std::size_t i = 0; i < G.size(); ++i) {
        int k = 0;
        int64_t w = psi.exponent_mod(K, n, G.elem(i), G.level(), k);
        if (k == 0) {
            out[i] = 0;
            continue;
        }
        uint64_t pk = static_cast<uint64_t>(ipow(K.p, k));
        if (L % pk != 0) fail(ErrorKind::Internal, "root order does not cover additive level");
        out[i] = static_cast<uint32_t>(static_cast<uint64_t>(w) * (L / pk));
    }
}

void add_exps(uint32_t* out, const uint32_t* add, uint64_t L, std::size_t count) {
    simd::add_mod_u32(out, out, add, static_cast<uint32_t>(L), count);
}

}  // namespace pgz
