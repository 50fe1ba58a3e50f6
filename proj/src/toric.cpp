#include "pgz/toric.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace pgz {

namespace {

Mono abs_p(int64_t p, int n) {
    // |p^n| = p^{-n}
    Q r = 1;
    for (int i = 0; i < std::abs(n); ++i) r *= static_cast<long>(p);
    return n >= 0 ? Mono(1 / r) : Mono(r);
}

int depth(const MulChar& c) { return std::max(c.conductor(), 1); }

std::vector<uint32_t> char_exps(const MulChar& chi, const UnitGroup& G, uint64_t L) {
    std::vector<uint32_t> e(G.size(), 0);
    fill_char_exps(chi, G, L, e.data());
    return e;
}

std::vector<int64_t> unit_reps(const UnitGroup& G) {
    std::vector<int64_t> a(G.size());
    for (std::size_t i = 0; i < G.size(); ++i) a[i] = G.elem(i).a;
    return a;
}

void charge(Budget* b, uint64_t k) {
    if (b) b->charge(k);
}

// Sum over a quadrant region {a >= L1, b >= L2} (intersected with dom) of V, where V is geometric
// with ratio r1 in a beyond T1 and ratio r2 in b beyond T2.
class Quadrant {
public:
    using CellFn = std::function<CycNum(int, int)>;
    Quadrant(CellFn V, std::function<bool(int, int)> dom) : V_(std::move(V)), dom_(std::move(dom)) {}

    const CycNum& at(int a, int b) {
        auto it = cache_.find({a, b});
        if (it != cache_.end()) return it->second;
        return cache_.emplace(std::make_pair(a, b), V_(a, b)).first->second;
    }

    CycNum sum(int L1, int T1, int L2, int T2, const Mono& r1, const Mono& r2) {
        if (!dom_(T1 + 1, L2) || !dom_(L1, T2 + 1))
            fail(ErrorKind::InvalidInput, "level too small: the domain cut reaches the geometric region");
        CycNum box(0), e1(0), e2(0);
        for (int a = L1; a <= T1; ++a)
            for (int b = L2; b <= T2; ++b)
                if (dom_(a, b)) box += at(a, b);
        for (int b = L2; b <= T2; ++b) e1 += at(T1 + 1, b);
        for (int a = L1; a <= T1; ++a) e2 += at(a, T2 + 1);
        CycNum corner = at(T1 + 1, T2 + 1);
        // ratio checks one step further out
        check(at(T1 + 2, T2 + 1), at(T1 + 1, T2 + 1), r1);
        check(at(T1 + 1, T2 + 2), at(T1 + 1, T2 + 1), r2);
        check(at(T1 + 2, L2 + 1), at(T1 + 1, L2 + 1), r1);
        check(at(L1 + 1, T2 + 2), at(L1 + 1, T2 + 1), r2);
        CycNum s = box;
        if (!e1.is_zero()) s += e1 * inv_one_minus(r1);
        if (!e2.is_zero()) s += e2 * inv_one_minus(r2);
        if (!corner.is_zero()) s += corner * inv_one_minus(r1) * inv_one_minus(r2);
        return s;
    }

private:
    static void check(const CycNum& next, const CycNum& cur, const Mono& r) {
        if (next != cur * r.to_cyc()) fail(ErrorKind::NotLocallyConstant, "geometric ratio check failed");
    }
    CellFn V_;
    std::function<bool(int, int)> dom_;
    std::map<std::pair<int, int>, CycNum> cache_;
};

// zeta_F(1) for Q_p
CycNum zeta1(int64_t p) { return CycNum(Q(static_cast<long>(p), static_cast<long>(p - 1))); }

// One (n1, n2) cell of the R-circ integrand, psi evaluated on t1 + t2.
CycNum rcirc_cell(const ToricTuple& t, int n1, int n2, int r, bool useU, Budget* budget) {
    const int64_t p = t.p;
    const LocalField F = LocalField::Qp(p);
    if (useU) {
        // psi_{E,U}(t) = avg over U = (1 + varpi^r O)^2 of psi_E(t u); the average of z -> psi(t_i varpi^r z)
        // over O is 1 exactly when that character is trivial, which is decided on z = 1
        for (int ni : {n1, n2}) {
            int k = 0;
            (void)t.psi.exponent_mod(F, ni + r, Residue{1, 0}, std::max(1, -(ni + r)), k);
            if (k > 0) return CycNum(0);
        }
    }
    const int N1 = std::max({t.chi_w.conductor(), -n1, 1});
    const int N2 = std::max({t.chi_ws.conductor(), -n2, 1});
    const int K = std::max({0, -n1, -n2});
    const int64_t pK = ipow(p, K);
    uint64_t L = lcm_u64(lcm_u64(t.chi_w.unit_order(), t.chi_ws.unit_order()), static_cast<uint64_t>(pK));
    auto G1 = UnitGroup::get(F, N1);
    auto G2 = UnitGroup::get(F, N2);
    charge(budget, G1->size() * G2->size());
    auto e1 = char_exps(t.chi_w, *G1, L), e2 = char_exps(t.chi_ws, *G2, L);
    auto a1 = unit_reps(*G1), a2 = unit_reps(*G2);
    const int64_t m1 = ipow(p, n1 + K), m2 = ipow(p, n2 + K);
    const uint64_t scale = L / static_cast<uint64_t>(pK);
    const int64_t s = pmod(t.psi.s, pK);
    std::vector<int64_t> hist(L, 0);
    for (std::size_t i = 0; i < G1->size(); ++i) {
        const __int128 x1 = static_cast<__int128>(a1[i]) * m1;
        for (std::size_t j = 0; j < G2->size(); ++j) {
            __int128 x = (x1 + static_cast<__int128>(a2[j]) * m2) % pK;
            uint64_t w = static_cast<uint64_t>(x * s % pK);
            hist[(e1[i] + e2[j] + w * scale) % L] += 1;
        }
    }
    Mono f = abs_p(p, n1 + n2) * t.alpha.pow(n1 + n2) * t.chi_w.at_uniformizer().pow(n1) *
             t.chi_ws.at_uniformizer().pow(n2);
    Q w(1, static_cast<unsigned long>(G1->size() * G2->size()));
    return CycNum::from_exponent_counts(L, hist) * f.to_cyc().scaled(w);
}

CycNum rcirc_integral(const ToricTuple& t, int r, bool useU, Budget* budget) {
    const int m1 = depth(t.chi_w), m2 = depth(t.chi_ws);
    if (r < min_level(t)) fail(ErrorKind::InvalidInput, "r below " + std::to_string(min_level(t)));
    const int L1 = -m1 - 1, L2 = -m2 - 1;
    Quadrant Qd([&](int a, int b) { return rcirc_cell(t, a, b, r, useU, budget); },
                [r](int a, int b) { return a + b >= -r; });
    Mono unif = Mono(Q(1, static_cast<unsigned long>(t.p))) * t.alpha;
    CycNum s = Qd.sum(L1, 0, L2, 0, unif * t.chi_w.at_uniformizer(), unif * t.chi_ws.at_uniformizer());
    // the first row and column below the conductor depth must vanish
    for (int b = L2; b <= 1; ++b)
        if (L1 + b >= -r && !Qd.at(L1, b).is_zero()) fail(ErrorKind::Internal, "row below conductor depth");
    for (int a = L1; a <= 1; ++a)
        if (a + L2 >= -r && !Qd.at(a, L2).is_zero()) fail(ErrorKind::Internal, "column below conductor depth");
    return s / zeta1(t.p);
}

}  // namespace

std::string ToricTuple::str() const {
    std::ostringstream o;
    o << "p=" << p << " alpha=" << alpha.str() << " chi_w=" << chi_w.str() << " chi_w*=" << chi_ws.str()
      << " omega=" << omega.str() << " psi_s=" << psi.s;
    return o.str();
}

ToricTuple make_toric_tuple(int64_t p, const Mono& alpha, const MulChar& chi_w, const MulChar& omega, const AddChar& psi) {
    if (alpha.is_zero() || vp(alpha.r, p) != 0) fail(ErrorKind::InvalidInput, "alpha(varpi) must be a p-adic unit");
    if (psi.s % p == 0) fail(ErrorKind::InvalidInput, "psi twist must be a unit");
    ToricTuple t;
    t.p = p;
    t.alpha = alpha;
    t.chi_w = chi_w;
    t.omega = omega;
    t.chi_ws = (chi_w * omega).inv();
    t.psi = psi;
    return t;
}

int qU_level(const ToricTuple& t) { return std::max(t.omega.conductor(), 1); }

int level_threshold(const ToricTuple& t) {
    int c = std::max({t.chi_w.conductor(), t.chi_ws.conductor(), t.omega.conductor(), 1});
    return c + 0 + qU_level(t) + 1;  // psi has level 0
}

int min_level(const ToricTuple& t) { return std::max(depth(t.chi_w), depth(t.chi_ws)); }

ToricValue R_circ_bruteforce(const ToricTuple& t, int r, Budget* budget) {
    return {rcirc_integral(t, r, false, budget), r >= level_threshold(t)};
}

ToricValue toric_double_integral(const ToricTuple& t, int r, Budget* budget) {
    if (r < 1) fail(ErrorKind::InvalidInput, "r must be at least 1");
    const int64_t p = t.p;
    const LocalField F = LocalField::Qp(p);
    const MulChar winv = t.omega.inv();
    auto cell = [&](int a, int n) {
        // t = varpi^{a-n} u_t, y = varpi^n u_y, ty = varpi^a u_t u_y
        const int Nt = std::max({t.chi_w.conductor(), -a, 1});
        const int Ny = std::max({winv.conductor(), -a, -n, 1});
        const int K1 = std::max(0, -a), K2 = std::max(0, -n);
        const int64_t p1 = ipow(p, K1), p2 = ipow(p, K2);
        uint64_t L = lcm_u64(lcm_u64(t.chi_w.unit_order(), winv.unit_order()),
                             static_cast<uint64_t>(std::max(p1, p2)));
        auto Gt = UnitGroup::get(F, Nt);
        auto Gy = UnitGroup::get(F, Ny);
        charge(budget, Gt->size() * Gy->size());
        auto et = char_exps(t.chi_w, *Gt, L), ey = char_exps(winv, *Gy, L);
        auto at = unit_reps(*Gt), ay = unit_reps(*Gy);
        const int64_t s1 = pmod(-t.psi.s, p1), s2 = pmod(t.psi.s, p2);
        const uint64_t sc1 = L / static_cast<uint64_t>(p1), sc2 = L / static_cast<uint64_t>(p2);
        std::vector<int64_t> hist(L, 0);
        for (std::size_t j = 0; j < Gy->size(); ++j) {
            const uint64_t wy = static_cast<uint64_t>(static_cast<__int128>(ay[j]) * s2 % p2) * sc2;
            for (std::size_t i = 0; i < Gt->size(); ++i) {
                __int128 prod = static_cast<__int128>(at[i]) * ay[j] % p1;
                uint64_t w1 = static_cast<uint64_t>(prod * s1 % p1) * sc1;
                hist[(et[i] + ey[j] + w1 + wy) % L] += 1;
            }
        }
        Mono f = abs_p(p, a) * t.alpha.pow(a) * abs_p(p, n) * t.alpha.pow(n) * winv.at_uniformizer().pow(n) *
                 t.chi_w.at_uniformizer().pow(a - n);
        Q w(1, static_cast<unsigned long>(Gt->size() * Gy->size()));
        return CycNum::from_exponent_counts(L, hist) * f.to_cyc().scaled(w);
    };
    Quadrant Qd(cell, [r](int a, int n) { return a >= -r && n >= -r; });
    Mono unif = Mono(Q(1, static_cast<unsigned long>(p))) * t.alpha;
    Mono ra = unif * t.chi_w.at_uniformizer();
    Mono rn = unif * winv.at_uniformizer() * t.chi_w.at_uniformizer().inv();
    return {Qd.sum(-r, 0, -r, 0, ra, rn), r >= level_threshold(t)};
}

std::pair<CycNum, CycNum> toric_factors(const ToricTuple& t, int r, Budget* budget) {
    auto single = [&](const MulChar& chi, const AddChar& psi) {
        StructuredIntegrand s;
        s.K = LocalField::Qp(t.p);
        s.measure = Measure::multiplicative;
        const int c = chi.conductor();
        s.precision = [c](int n) { return std::max({c, -n, 1}); };
        s.L = lcm_u64(chi.unit_order(), static_cast<uint64_t>(ipow(t.p, r)));
        Mono rho = Mono(Q(1, static_cast<unsigned long>(t.p))) * t.alpha * chi.at_uniformizer();
        s.factor = [rho](int n) { return rho.pow(n); };
        uint64_t L = s.L;
        s.unit_exps = [chi, psi, L](int n, const UnitGroup& G, uint32_t* out) {
            fill_char_exps(chi, G, L, out);
            std::vector<uint32_t> add(G.size());
            fill_psi_exps(psi, n, G, L, add.data());
            add_exps(out, add.data(), L, G.size());
        };
        return integrate_with_tail(s, -r, 0, TailInfo{rho, "psi trivial on integers"}, budget);
    };
    return {single(t.chi_w, AddChar{-t.psi.s}), single(t.chi_ws, t.psi)};
}

CycNum R_circ_product(const ToricTuple& t) {
    return R_circ_product(LocalDatum::make(t.p, QuadType::split), t.alpha, {t.chi_w, t.chi_ws}, t.psi);
}

QSharpResult iwahori_terms_Q_sharp(const ToricTuple& t, int r, Budget* budget) {
    const int64_t p = t.p;
    const LocalField F = LocalField::Qp(p);
    const int n = qU_level(t);
    QSharpResult res;
    res.stabilized = r >= level_threshold(t);
    CycNum J = rcirc_integral(t, r, true, budget);
    res.sum_by_i.assign(r + 1, CycNum(0));
    res.sum_by_i[0] = J;
    res.terms.push_back({0, 1, J});
    for (int i = 1; i <= r; ++i) {
        const int64_t pi = ipow(p, i);
        if (static_cast<uint64_t>(pi) > cyclo_order_cap()) fail(ErrorKind::OrderTooLarge, "p^i too large");
        charge(budget, static_cast<uint64_t>(pi));
        // S_i = sum_c psi_{q(U)}(-c varpi^{-i}); psi_{q(U)}(x) = psi(x) avg_z psi(x varpi^n z), the
        // average being 1 or 0 according to whether z -> psi(x varpi^n z) is trivial (decided at z = 1)
        std::vector<int64_t> hist(static_cast<std::size_t>(pi), 0);
        for (int64_t c = 1; c < pi; ++c) {
            if (c % p == 0) continue;
            Residue u{pmod(-c, pi), 0};
            int k = 0;
            (void)t.psi.exponent_mod(F, n - i, u, std::max(1, i - n), k);
            if (k > 0) continue;
            int kk = 0;
            int64_t w = t.psi.exponent_mod(F, -i, u, i, kk);
            int64_t idx = kk == 0 ? 0 : w * (pi / ipow(p, kk));
            hist[static_cast<std::size_t>(idx)] += 1;
            if (i == 1) {
                CycNum term = CycNum::zeta(pi, idx).scaled(Q(1, static_cast<unsigned long>(p))) * J;
                res.terms.push_back({1, c, term});
            }
        }
        CycNum S = CycNum::from_exponent_counts(static_cast<uint64_t>(pi), hist);
        if (i == r && !S.is_zero())
            fail(ErrorKind::InsufficientPrecision, "level r too small: the i = r terms need W off the Iwahori subgroup");
        res.sum_by_i[i] = S * J * abs_p(p, i).to_cyc();
    }
    res.total = CycNum(0);
    for (auto& x : res.sum_by_i) res.total += x;
    return res;
}

QSharpReport verify_Q_sharp_identity(const ToricTuple& t, int r, Budget* budget) {
    QSharpReport rep;
    QSharpResult q = iwahori_terms_Q_sharp(t, r, budget);
    rep.total = q.total;
    rep.q01 = q.sum_by_i[0];
    rep.r_circ_brute = R_circ_bruteforce(t, r, budget).value;
    rep.r_circ_product = R_circ_product(t);
    const Q ip(1, static_cast<unsigned long>(t.p));
    auto expect = [&](bool ok, const std::string& what, const CycNum& a, const CycNum& b) {
        if (!ok) {
            rep.ok = false;
            rep.mismatches.push_back(what + ": " + a.str() + " vs " + b.str());
        }
    };
    for (std::size_t i = 2; i < q.sum_by_i.size(); ++i)
        expect(q.sum_by_i[i].is_zero(), "sum_c Q(" + std::to_string(i) + ",c)", q.sum_by_i[i], CycNum(0));
    CycNum c1 = rep.q01.scaled(-ip);
    expect(q.sum_by_i.size() > 1 && q.sum_by_i[1] == c1, "sum_c Q(1,c)", q.sum_by_i.size() > 1 ? q.sum_by_i[1] : CycNum(0), c1);
    CycNum tot = rep.q01.scaled(1 - ip);
    expect(rep.total == tot, "total vs (1-|varpi|) Q(0,1)", rep.total, tot);
    CycNum viaL = rep.r_circ_brute / euler_L(LocalDatum::make(t.p, QuadType::split), LKind::eta, 2);
    expect(rep.total == viaL, "total vs L(1,eta)^-1 R-circ", rep.total, viaL);
    expect(rep.q01 == rep.r_circ_brute, "Q(0,1) vs R-circ", rep.q01, rep.r_circ_brute);
    if (q.stabilized)
        expect(rep.r_circ_brute == rep.r_circ_product, "R-circ vs product formula", rep.r_circ_brute, rep.r_circ_product);
    return rep;
}

// ---- Kirillov vectors ----

KirillovVector f_alpha_plus(int64_t p, const Mono& alpha) {
    KirillovVector f;
    f.descriptor = "f_alpha_plus(alpha=" + alpha.str() + ")";
    f.precision = [](int) { return 1; };
    f.eval = [p, alpha](const PAdicCoset& x) { return x.n >= 0 ? abs_p(p, x.n) * alpha.pow(x.n) : Mono(0); };
    return f;
}

KirillovVector f_alpha_minus(int64_t p, const Mono& alpha, const MulChar& omega) {
    KirillovVector f;
    f.descriptor = "f_alpha_minus(alpha=" + alpha.str() + ", omega=" + omega.str() + ")";
    const int c = std::max(omega.conductor(), 1);
    f.precision = [c](int) { return c; };
    MulChar winv = omega.inv();
    f.eval = [p, alpha, winv](const PAdicCoset& x) {
        return x.n >= 0 ? abs_p(p, x.n) * alpha.pow(x.n) * winv.eval(x) : Mono(0);
    };
    return f;
}

KirillovVector f_alpha_r_plus(int64_t p, const Mono& alpha, const AddChar& psi, int r) {
    KirillovVector f;
    f.descriptor = "f_alpha_r_plus(alpha=" + alpha.str() + ", r=" + std::to_string(r) + ")";
    f.precision = [](int n) { return std::max(1, -n); };
    AddChar neg{-psi.s};
    LocalField F = LocalField::Qp(p);
    f.eval = [p, alpha, neg, F, r](const PAdicCoset& x) {
        if (x.n < -r) return Mono(0);
        return Mono(1, neg.eval_exponent(F, x)) * abs_p(p, x.n) * alpha.pow(x.n);
    };
    return f;
}

KirillovVector f_alpha_r_minus(int64_t p, const Mono& alpha, const MulChar& omega, const AddChar& psi, int r) {
    KirillovVector f;
    f.descriptor = "f_alpha_r_minus(alpha=" + alpha.str() + ", omega=" + omega.str() + ", r=" + std::to_string(r) + ")";
    const int c = std::max(omega.conductor(), 1);
    f.precision = [c](int n) { return std::max(c, -n); };
    MulChar winv = omega.inv();
    LocalField F = LocalField::Qp(p);
    f.eval = [p, alpha, winv, psi, F, r](const PAdicCoset& x) {
        if (x.n < -r) return Mono(0);
        return Mono(1, psi.eval_exponent(F, x)) * abs_p(p, x.n) * alpha.pow(x.n) * winv.eval(x);
    };
    return f;
}

CycNum kirillov_pairing(const KirillovVector& f1, const KirillovVector& f2, const CycNum& norm, int64_t p, int n_lo,
                        int tail_start, const Mono& ratio) {
    IntegrandSpec s;
    s.K = LocalField::Qp(p);
    s.measure = Measure::multiplicative;
    auto p1 = f1.precision, p2 = f2.precision;
    s.precision = [p1, p2](int n) { return std::max(p1(n), p2(n)); };
    auto e1 = f1.eval, e2 = f2.eval;
    s.evaluator = [e1, e2](const PAdicCoset& x) { return e1(x) * e2(x); };
    return norm * integrate_with_tail(s, n_lo, tail_start, TailInfo{ratio, "declared continuation ratio"});
}

bool norm_relation_check(const KirillovVector& fr, const KirillovVector& fr1, int64_t p, int r, int n_lo, int n_hi) {
    const LocalField F = LocalField::Qp(p);
    for (int n = n_lo; n <= n_hi; ++n) {
        const int N = std::max({fr.precision(n), fr1.precision(n), r + 1});
        auto G = UnitGroup::get(F, N);
        const int64_t pN = ipow(p, N), pr = ipow(p, r);
        for (std::size_t i = 0; i < G->size(); ++i) {
            Residue u = G->elem(i);
            CycNum avg(0);
            for (int64_t j = 0; j < p; ++j) {
                int64_t v = static_cast<int64_t>(static_cast<__int128>(u.a) * (1 + j * pr) % pN);
                avg += fr1.eval(PAdicCoset{n, Residue{v, 0}, N}).to_cyc();
            }
            if (avg.scaled(Q(1, static_cast<unsigned long>(p))) != fr.eval(PAdicCoset{n, u, N}).to_cyc()) return false;
        }
    }
    return true;
}

bool norm_relation_check(int64_t p, const Mono& alpha, const AddChar& psi, int r) {
    if (r < 1) fail(ErrorKind::InvalidInput, "r must be at least 1");
    return norm_relation_check(f_alpha_r_plus(p, alpha, psi, r), f_alpha_r_plus(p, alpha, psi, r + 1), p, r, -r - 3, 3);
}

}  // namespace pgz
