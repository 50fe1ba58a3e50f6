#include "pgz/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "pgz/descriptors.hpp"
#include "pgz/eiskernel.hpp"
#include "pgz/qexp.hpp"
#include "pgz/toric.hpp"

namespace pgz {

const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> s = {"zw",           "gauss-norm", "rcirc",     "qsharp",          "toric-factor",
                                               "eis-dichotomy", "dkernel",    "qexp-laws", "kernel-vanishing"};
    return s;
}

namespace {

template <class T>
void read_field(const json& j, const char* k, T& out) {
    if (j.contains(k)) out = j.at(k).get<T>();
}

json cj(const CycNum& x) { return json{{"value", cyc_to_json(x)}, {"str", x.str()}}; }
json qj(const Q& x) { return json{{"value", rational_to_json(x)}, {"str", x.get_str()}}; }

std::string join_key(std::initializer_list<std::string> parts) {
    std::string s;
    for (const auto& p : parts) {
        if (!s.empty()) s += "/";
        s += p;
    }
    return s;
}

// fixed-width numbers keep the lexicographic order natural
std::string pad(int64_t v, int w = 3) {
    std::string s = std::to_string(v < 0 ? -v : v);
    while (static_cast<int>(s.size()) < w) s = "0" + s;
    return (v < 0 ? "m" : "") + s;
}

bool has(const std::vector<std::string>& v, const std::string& x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::vector<MulChar> spread_characters(const LocalField& K, int c, const Mono& at, int count) {
    if (c == 0) return {MulChar::unramified(K, at)};
    auto all = all_characters(K, c, at, 64);
    if (static_cast<int>(all.size()) <= count) return all;
    std::vector<MulChar> out;
    for (int i = 0; i < count; ++i) out.push_back(all[static_cast<std::size_t>(i) * all.size() / count]);
    return out;
}

struct FieldChoice {
    LocalDatum d;
    std::string label;
};

std::vector<FieldChoice> fields_of(const SweepSpec& s) {
    std::vector<FieldChoice> out;
    for (int64_t p : s.primes) {
        if (!is_prime(p)) fail(ErrorKind::InvalidInput, "not a prime: " + std::to_string(p));
        for (const auto& t : s.quad_types) {
            QuadType qt = quad_type_from(t);
            if (qt == QuadType::ramified &&
                (p == 2 || std::find(s.ramified_primes.begin(), s.ramified_primes.end(), p) == s.ramified_primes.end()))
                continue;
            out.push_back({LocalDatum::make(p, qt, 1), "p" + std::to_string(p) + "/" + t});
        }
    }
    return out;
}

std::vector<ToricTuple> toric_tuples(const SweepSpec& s, std::vector<json>& inputs, std::vector<std::string>& labels) {
    std::vector<ToricTuple> out;
    if (!has(s.quad_types, "split")) return out;
    for (int64_t p : s.primes) {
        LocalField F = LocalField::Qp(p);
        LocalDatum d = LocalDatum::make(p, QuadType::split);
        for (int cc = 0; cc <= std::min(s.toric_conductor_max, s.conductor_max); ++cc) {
            MulChar chi;
            if (cc == 0)
                chi = MulChar::unramified(F, Mono::one());
            else if (!sample_character(F, cc, s.seed + static_cast<uint64_t>(cc), Mono::one(), chi))
                continue;
            for (int co = 0; co <= s.toric_omega_max; ++co) {
                MulChar om = MulChar::trivial(F);
                if (co > 0 && !sample_character(F, co, s.seed + 7 + static_cast<uint64_t>(co), Mono::one(), om)) continue;
                for (const auto& a : s.alpha_values) {
                    int64_t tw = twist_for_prime(s.psi_twists.empty() ? json(1) : s.psi_twists.front(), p);
                    out.push_back(make_toric_tuple(p, alpha_for_prime(a, p), chi, om, AddChar{tw}));
                    inputs.push_back(json{{"p", p},
                                          {"alpha", a},
                                          {"chi", character_to_json(chi, d)},
                                          {"omega", character_to_json(om, d)},
                                          {"psi", tw}});
                    labels.push_back(join_key({"p" + std::to_string(p), "chi" + std::to_string(cc),
                                               "om" + std::to_string(co), "a=" + label_of(a)}));
                }
            }
        }
    }
    return out;
}

ToricTuple tuple_from_inputs(const json& in) {
    int64_t p = in.at("p").get<int64_t>();
    return make_toric_tuple(p, alpha_for_prime(in.at("alpha"), p), character_from_json(in.at("chi")),
                            character_from_json(in.at("omega")), AddChar{in.at("psi").get<int64_t>()});
}

using Runner = std::function<void(const json&, CaseRecord&, Budget&, std::ostream*)>;

// ---- zw ----
void run_zw(const json& in, CaseRecord& r, Budget& b, std::ostream* ex) {
    MulChar chi = character_from_json(in.at("chi"));
    LocalDatum d = datum_from_json(in.at("chi"));
    ZwInput z = zw_input(d, 0, alpha_for_prime(in.at("alpha"), d.p), chi, AddChar{in.at("psi").get<int64_t>()});
    CycNum closed = zw_closed(z);
    CycNum brute = zw_bruteforce(z, &b);
    bool exc = is_exceptional(z);
    r.lhs = cj(closed);
    r.rhs = cj(brute);
    r.flags["oracle_equal"] = closed == brute;
    r.flags["exceptional"] = exc;
    r.flags["dichotomy"] = exc == closed.is_zero();
    r.pass = closed == brute && exc == closed.is_zero();
    if (!ex) return;
    MulChar chit = twisted_character(z);
    *ex << "datum " << d.str() << ", chi_w " << chi.str() << ", alpha(varpi) " << z.alpha.str() << ", psi twist "
        << z.psi.s << "\n";
    *ex << "twisted character chi_w (alpha o q_w): conductor " << chit.conductor() << "\n";
    if (chit.conductor() > 0) {
        *ex << "branch: ramified, Z_w = Gauss sum of the twisted character over w(t) = -c - delta\n";
    } else {
        *ex << "branch: unramified, Z_w = (alpha chi_w)(varpi)^{-v(D)} (1 - beta^{-1}) / (1 - beta q_w^{-1})\n";
        *ex << "  beta = " << beta_w(z).str() << ", q_w = " << d.qw() << ", v(D) = " << d.v_D << "\n";
    }
    *ex << "closed form: " << closed.str() << "\n";
    *ex << "oracle, annulus by annulus (w(t) = n):\n";
    for (const auto& [n, v] : zw_annulus_table(z, &b)) *ex << "  n = " << n << ": " << v.str() << "\n";
    *ex << "  geometric tail beyond n = " << -chit.field().delta << " with ratio beta / q_w\n";
    *ex << "oracle total: " << brute.str() << "\n";
    *ex << "exceptional: " << (exc ? "yes" : "no") << "\n";
}

// ---- gauss-norm ----
void run_gauss(const json& in, CaseRecord& r, Budget& b, std::ostream* ex) {
    MulChar chi = character_from_json(in.at("chi"));
    LocalDatum d = datum_from_json(in.at("chi"));
    AddChar psi{in.at("psi").get<int64_t>()};
    Q Nf = conductor_norm(chi);
    CycNum t = gauss_sum_normalized(chi, psi, &b);
    CycNum tb = gauss_sum_normalized(chi.inv(), psi, &b);
    CycNum lhs = t * tb;
    CycNum rhs(Q(chi.sign()) / Nf);
    // torsor: psi_{a s} multiplies tau by chi(a)^{-1}
    int64_t a = twist_for_prime("gen", d.p);
    Mono chia(1, chi.unit_value(Residue{pmod(a, ipow(d.p, chi.conductor() + 1)), 0}, chi.conductor()));
    CycNum g1 = gauss_sum(chi, psi, &b);
    CycNum g2 = gauss_sum(chi, AddChar{psi.s * a}, &b);
    bool torsor = g2 == chia.inv().to_cyc() * g1;
    r.lhs = cj(lhs);
    r.rhs = cj(rhs);
    r.flags["torsor"] = torsor;
    r.flags["abs_square"] = g1 * g1.conj() == CycNum(Nf);
    r.pass = lhs == rhs && torsor;
    if (!ex) return;
    *ex << "character " << chi.str() << " on " << chi.field().name() << ", N(f) = " << Nf.get_str() << "\n";
    *ex << "tau(chi, psi) = " << g1.str() << "\n";
    *ex << "normalized tau(chi) = tau / N(f) = " << t.str() << "\n";
    *ex << "normalized tau(chi^-1) = " << tb.str() << "\n";
    *ex << "product = " << lhs.str() << ", expected chi(-1) / N(f) = " << rhs.str() << "\n";
    *ex << "tau(chi, psi_" << psi.s * a << ") = " << g2.str() << ", chi(" << a << ")^-1 tau = "
        << (chia.inv().to_cyc() * g1).str() << "\n";
}

// ---- toric suites ----
CycNum any_zw_product(const ToricTuple& t, bool& exceptional) {
    LocalDatum d = LocalDatum::make(t.p, QuadType::split);
    ZwInput z0 = zw_input(d, 0, t.alpha, t.chi_w, t.psi);
    ZwInput z1 = zw_input(d, 1, t.alpha, t.chi_ws, t.psi);
    exceptional = is_exceptional(z0) || is_exceptional(z1);
    return zw_closed(z0) * zw_closed(z1);
}

void run_rcirc(const json& in, CaseRecord& r, Budget& b, std::ostream* ex) {
    ToricTuple t = tuple_from_inputs(in);
    int r0 = level_threshold(t);
    ToricValue v0 = R_circ_bruteforce(t, r0, &b);
    ToricValue v1 = R_circ_bruteforce(t, r0 + 1, &b);
    CycNum prod = R_circ_product(t);
    bool exc = false;
    CycNum zz = any_zw_product(t, exc);
    r.lhs = cj(v0.value);
    r.rhs = cj(prod);
    r.flags["r0"] = r0;
    r.flags["stable"] = v0.value == v1.value;
    r.flags["product_equal"] = v0.value == prod;
    r.flags["exceptional"] = exc;
    r.flags["dichotomy"] = exc == v0.value.is_zero() && exc == zz.is_zero();
    r.pass = v0.value == prod && v0.value == v1.value && exc == v0.value.is_zero() && exc == zz.is_zero();
    if (!ex) return;
    *ex << "tuple " << t.str() << "\n";
    *ex << "level threshold r0 = " << r0 << "\n";
    *ex << "toric integral at r0: " << v0.value.str() << "\n";
    *ex << "toric integral at r0 + 1: " << v1.value.str() << "\n";
    *ex << "|D|^{1/2} |d|^2 L(1, eta) prod_w Z_w = " << prod.str() << "\n";
    *ex << "prod_w Z_w = " << zz.str() << ", exceptional: " << (exc ? "yes" : "no") << "\n";
}

void run_qsharp(const json& in, CaseRecord& r, Budget& b, std::ostream* ex) {
    ToricTuple t = tuple_from_inputs(in);
    int r0 = level_threshold(t);
    QSharpReport rep = verify_Q_sharp_identity(t, r0, &b);
    CycNum expect = rep.r_circ_product.scaled(Q(t.p - 1, t.p));
    r.lhs = cj(rep.total);
    r.rhs = cj(expect);
    r.flags["r0"] = r0;
    r.flags["mismatches"] = rep.mismatches;
    r.pass = rep.ok && rep.total == expect;
    if (!ex) return;
    QSharpResult q = iwahori_terms_Q_sharp(t, r0, &b);
    *ex << "tuple " << t.str() << ", r = " << r0 << "\n";
    *ex << "terms Q#(i, c):\n";
    for (const auto& term : q.terms) *ex << "  (" << term.i << ", " << term.c << "): " << term.value.str() << "\n";
    for (std::size_t i = 0; i < q.sum_by_i.size(); ++i) *ex << "  sum over c at i = " << i << ": " << q.sum_by_i[i].str() << "\n";
    *ex << "Q#(0, 1) = " << rep.q01.str() << "\n";
    *ex << "total = " << rep.total.str() << "\n";
    *ex << "L(1, eta)^{-1} R-circ = (1 - 1/p) R-circ = " << expect.str() << "\n";
    *ex << "R-circ by enumeration = " << rep.r_circ_brute.str() << ", by the product formula = " << rep.r_circ_product.str()
        << "\n";
    for (const auto& m : rep.mismatches) *ex << "mismatch: " << m << "\n";
}

void run_toric_factor(const json& in, CaseRecord& r, Budget& b, std::ostream* ex) {
    ToricTuple t = tuple_from_inputs(in);
    int lvl = std::max(3, min_level(t));
    CycNum d = toric_double_integral(t, lvl, &b).value;
    auto [f1, f2] = toric_factors(t, lvl, &b);
    CycNum rel = R_circ_product(t) * CycNum(Q(t.p, t.p - 1)).scaled(Q(t.chi_w.sign()));
    r.lhs = cj(d);
    r.rhs = cj(f1 * f2);
    r.flags["r"] = lvl;
    r.flags["relation"] = d == rel;
    r.pass = d == f1 * f2 && d == rel;
    if (!ex) return;
    *ex << "tuple " << t.str() << ", r = " << lvl << "\n";
    *ex << "double integral over (t, y): " << d.str() << "\n";
    *ex << "factor in t: " << f1.str() << "\nfactor in y: " << f2.str() << "\n";
    *ex << "zeta_F(1) chi_w(-1) R-circ = " << rel.str() << "\n";
}

// ---- eis-dichotomy ----
int64_t smallest_nonresidue(int64_t p) {
    for (int64_t a = 2; a < p; ++a)
        if (legendre(a, p) == -1) return a;
    return 1;
}

void run_eis(const json& in, CaseRecord& r, Budget&, std::ostream* ex) {
    LocalDatum d = datum_from_json(in);
    int k = in.at("k").get<int>();
    int64_t ua = in.at("unit").get<int64_t>();
    Q a = Q(ua);
    for (int i = 0; i < std::abs(k); ++i) a = k > 0 ? Q(a * d.p) : Q(a / d.p);
    QuadSpaceLocal s = QuadSpaceLocal::from_datum(d, 1);
    WhittakerPoly w = whittaker_poly(s, a);
    CycNum at1 = w.l_factor_divided ? w.poly.eval_at_one() : w.series.eval_at_one();
    // independent representability: a in N(E_v^x) via the Hilbert symbol, a integral
    LocalField E = d.Ew();
    Q disc = d.type == QuadType::split ? Q(1) : Q(E.t * E.t + 4 * E.s);
    bool rep = hilbert_symbol(a, disc, d.p) == 1;
    bool ind = k >= 0 && rep;
    auto sw = siegel_weil_rhs(s, a);
    r.lhs = cj(at1);
    r.rhs = cj(CycNum(ind ? 1 : 0));
    r.flags["represented"] = rep;
    r.flags["nonrep_zero"] = rep || at1.is_zero();
    r.flags["siegel_weil"] = sw ? json(CycNum(*sw) == at1) : json(nullptr);
    r.flags["poly"] = w.poly.str();
    r.pass = at1 == CycNum(ind ? 1 : 0);
    if (!ex) return;
    *ex << "space " << s.str() << ", a = " << a.get_str() << " (v(a) = " << k << ")\n";
    *ex << "q^n vol(D_n(a)) stabilizes from n = " << w.tail_start << " at " << w.tail_constant.get_str() << "\n";
    *ex << "series after the tail cancellation: " << w.series.str() << "\n";
    *ex << "divided by the L-factor: " << w.poly.str() << (w.l_factor_divided ? "" : " (not divisible)") << "\n";
    *ex << "value at X = 1: " << at1.str() << "\n";
    *ex << "a locally a norm: " << (rep ? "yes" : "no") << ", indicator [v(a) >= 0 and represented] = " << ind << "\n";
    if (sw) *ex << "local Siegel-Weil value: " << sw->get_str() << "\n";
}

// ---- dkernel ----
void run_dkernel(const json& in, CaseRecord& r, Budget&, std::ostream* ex) {
    int64_t p = in.at("p").get<int64_t>();
    int v = in.at("v").get<int>();
    Q expect = Q(v + 1, 2);
    expect.canonicalize();
    Q raw = derivative_kernel_raw(p, v);
    r.rhs = qj(expect);
    r.flags["raw_minus_W_prime"] = qj(raw);
    if (ex) {
        QuadSpaceLocal s = QuadSpaceLocal::from_datum(LocalDatum::make(p, QuadType::inert), 1);
        Q a(ipow(p, v));
        WhittakerPoly w = whittaker_poly(s, a);
        *ex << "inert p = " << p << ", v(q(x2)) = " << v << "\n";
        *ex << "W(X) = " << w.poly.str() << ", W'(1) = " << derivative_at_one(w.poly).str() << "\n";
        *ex << "-W'(1) / vol(E^1) = " << raw.get_str() << ", expected (v + 1)/2 = " << expect.get_str() << "\n";
    }
    Q k = derivative_kernel_k_natural(p, v);
    r.lhs = qj(k);
    r.pass = k == expect;
}

// ---- qexp-laws ----
CycNum unit_root(std::mt19937_64& rng, int64_t p) {
    const int64_t n = p == 3 ? 4 : 3;
    return CycNum::zeta(n, static_cast<int64_t>(rng() % static_cast<uint64_t>(n)));
}

Q small_rational(std::mt19937_64& rng) {
    Q q(static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 4) + 1);
    q.canonicalize();
    return q;
}

Q base_prime_to(std::mt19937_64& rng, int64_t p) {
    static const int64_t bases[] = {1, 2, 3, 5, 7, 11, 13};
    for (;;) {
        int64_t b = bases[rng() % 7];
        if (b % p) return Q(b);
    }
}

Q times_ppow(Q a, int64_t p, int s) {
    for (int i = 0; i < std::abs(s); ++i) a = s > 0 ? Q(a * p) : Q(a / p);
    return a;
}

void add_finite(ReducedQExpansion& w, std::mt19937_64& rng, int s_lo) {
    int nf = static_cast<int>(rng() % 5);
    for (int i = 0; i < nf; ++i) {
        Q a = times_ppow(base_prime_to(rng, w.p), w.p, s_lo + static_cast<int>(rng() % 4));
        w.coeffs[a] += CycNum(small_rational(rng));
    }
}

ReducedQExpansion law_input(int law, int64_t p, uint64_t seed) {
    std::mt19937_64 rng(seed);
    ReducedQExpansion w;
    w.p = p;
    switch (law) {
        case 0:
            add_finite(w, rng, -1);
            if (rng() % 2) w.combs.push_back(Comb{base_prime_to(rng, p), static_cast<int>(rng() % 3), CycNum(2), unit_root(rng, p)});
            if (rng() % 2) w.combs.push_back(Comb{base_prime_to(rng, p), 0, CycNum(1), CycNum(Q(2 * p))});
            w.omega[p] = unit_root(rng, p);
            break;
        case 1:
            add_finite(w, rng, 0);
            w.combs.push_back(Comb{base_prime_to(rng, p), static_cast<int>(rng() % 3), CycNum(small_rational(rng) + 10),
                                   unit_root(rng, p)});
            if (rng() % 2) w.combs.push_back(Comb{base_prime_to(rng, p), 0, CycNum(1), CycNum(Q(p))});
            break;
        case 2:
            add_finite(w, rng, 0);
            if (rng() % 2) {
                int64_t m = static_cast<int64_t>(rng() % 3) + 1;
                w.combs.push_back(Comb{base_prime_to(rng, p), static_cast<int>(rng() % 2), CycNum(small_rational(rng) + 10),
                                       CycNum(Q(p * m))});
            }
            if (w.coeffs.empty() && w.combs.empty()) w.coeffs[Q(1)] = CycNum(1);
            break;
        default: {
            int nc = 1 + static_cast<int>(rng() % 3);
            for (int i = 0; i < nc; ++i)
                w.combs.push_back(Comb{base_prime_to(rng, p), 0, CycNum(small_rational(rng) + 10), unit_root(rng, p)});
            break;
        }
    }
    w.canonicalize();
    return w;
}

const char* law_name(int law) {
    static const char* names[] = {"commute", "idempotent", "critical-kill", "eigen-fixed"};
    return names[law];
}

void run_qexp_law(const json& in, CaseRecord& r, Budget&, std::ostream* ex) {
    const int law = in.at("law").get<int>();
    const int64_t p = in.at("p").get<int64_t>();
    ReducedQExpansion w = qexp_from_json(in.at("expansion"));
    if (ex) *ex << "law " << law_name(law) << " at p = " << p << "\ninput " << qexp_to_json(w).dump() << "\n";
    switch (law) {
        case 0: {
            int64_t ell = in.at("ell").get<int64_t>();
            w.omega[ell] = CycNum(-1);
            ReducedQExpansion a = U_v_star(hecke_T(w, ell), p);
            ReducedQExpansion b = hecke_T(U_v_star(w, p), ell);
            bool rt = qexp_from_json(json::parse(qexp_to_json(w).dump())) == w;
            r.lhs = qexp_to_json(a);
            r.rhs = qexp_to_json(b);
            r.flags["json_round_trip"] = rt;
            r.pass = a == b && rt;
            if (ex) *ex << "U T W = " << r.lhs.dump() << "\nT U W = " << r.rhs.dump() << "\n";
            break;
        }
        case 1: {
            ProjectorResult e1 = ordinary_projector(w, p);
            ProjectorResult e2 = ordinary_projector(e1.image, p);
            r.lhs = qexp_to_json(e2.image);
            r.rhs = qexp_to_json(e1.image);
            r.flags["iterations"] = e1.iterations;
            r.pass = e1.image == e2.image;
            if (ex) *ex << "e W = " << r.rhs.dump() << "\ne e W = " << r.lhs.dump() << "\n";
            break;
        }
        case 2: {
            CriticalityResult cr = is_v_critical(w, p);
            r.flags["critical"] = cr.c.has_value();
            if (!cr.c) {
                r.pass = false;
                r.error = "input is not critical";
                break;
            }
            r.flags["c"] = *cr.c;
            ProjectorResult e = ordinary_projector(w, p);
            Q bound = 1;
            for (int i = 0; i < kProjectorValuationBound; ++i) bound /= static_cast<long>(p);
            bool small = !e.residual_norms.empty() && e.residual_norms.back() < bound;
            bool decay = true;
            json norms = json::array();
            for (int64_t m = 1; m <= 4; ++m) {
                Q nb = 1;
                for (int64_t i = 0; i < m - *cr.c; ++i) nb /= static_cast<long>(p);
                for (int64_t i = m - *cr.c; i < 0; ++i) nb *= static_cast<long>(p);
                auto nm = qexp_norm(U_power(w, p, m));
                decay = decay && nm && *nm <= nb;
                norms.push_back(nm ? nm->get_str() : "unbounded");
            }
            json res = json::array();
            for (const Q& q : e.residual_norms) res.push_back(q.get_str());
            r.lhs = qexp_to_json(e.image);
            ReducedQExpansion zero;
            zero.p = p;
            r.rhs = qexp_to_json(zero);
            r.flags["residual_norms"] = res;
            r.flags["norms_U_m"] = norms;
            r.flags["decay"] = decay;
            r.flags["below_bound"] = small;
            r.pass = e.image.is_zero() && small && decay;
            if (ex) {
                *ex << "critical with c = " << *cr.c << (cr.window_limited ? " (window-limited)" : "") << "\n";
                *ex << "|U^m W| for m = 1..4: " << norms.dump() << "\n";
                *ex << "residual norms of U^{n!} W: " << res.dump() << "\n";
                *ex << "e W = " << r.lhs.dump() << "\n";
            }
            break;
        }
        default: {
            ProjectorResult e = ordinary_projector(w, p);
            ReducedQExpansion uw = U_v_star(w, p, true);
            ReducedQExpansion expect = w;
            for (auto& c : expect.combs) c.coeff = c.coeff * c.ratio;
            expect.canonicalize();
            r.lhs = qexp_to_json(e.image);
            r.rhs = qexp_to_json(w);
            r.flags["U_eigen"] = uw == expect;
            r.pass = e.image == w && uw == expect;
            if (ex) *ex << "e W = " << r.lhs.dump() << "\nU W = " << qexp_to_json(uw).dump() << "\n";
            break;
        }
    }
}

// ---- kernel-vanishing ----
void run_kernel(const json& in, CaseRecord& r, Budget& b, std::ostream* ex) {
    KernelScenario sc;
    sc.disc = in.at("disc").get<int64_t>();
    sc.p = in.at("p").get<int64_t>();
    sc.lattice.disc = sc.disc;
    Q a(in.at("a").get<int64_t>());
    auto w = incoherence_witness(sc, a, 1, 1000);
    KernelCoefficient kc = kernel_coefficient(sc, a, &b);
    r.lhs = cj(kc.value);
    r.rhs = cj(CycNum());
    r.flags["witness"] = w ? (w->archimedean ? json("infinity") : json(w->prime)) : json(nullptr);
    r.pass = w && !w->archimedean && kc.value.is_zero();
    if (!ex) return;
    *ex << "E = Q(sqrt " << sc.disc << "), p = " << sc.p << ", a = " << a.get_str() << "\n";
    if (w) *ex << "vanishing place: " << (w->archimedean ? std::string("infinity") : std::to_string(w->prime)) << "\n";
    for (const auto& t : kc.terms)
        *ex << "  a1 = " << t.a1.get_str() << ", a2 = " << t.a2.get_str() << ", theta = " << t.theta.get_str()
            << ", E(a2) = " << t.eis.str() << (t.note.empty() ? "" : " (" + t.note + ")") << "\n";
    *ex << "coefficient = " << kc.value.str() << "\n";
}

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> m = {
        {"zw", run_zw},         {"gauss-norm", run_gauss},       {"rcirc", run_rcirc},
        {"qsharp", run_qsharp}, {"toric-factor", run_toric_factor}, {"eis-dichotomy", run_eis},
        {"dkernel", run_dkernel}, {"qexp-laws", run_qexp_law},   {"kernel-vanishing", run_kernel}};
    return m;
}

}  // namespace

Mono alpha_for_prime(const json& a, int64_t p) {
    if (a.is_string() && a.get<std::string>() == "unit") {
        if (p == 2) return Mono(Q(3, 5));
        if (p == 3) return Mono(Q(2, 5));
        return Mono(Q(2, 3));
    }
    return mono_from_json(a);
}

int64_t twist_for_prime(const json& s, int64_t p) {
    if (s.is_string()) {
        if (s.get<std::string>() != "gen") fail(ErrorKind::InvalidInput, "psi twist must be an integer or \"gen\"");
        return p == 2 ? 3 : smallest_primitive_root(p);
    }
    return s.get<int64_t>();
}

std::string label_of(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

SweepSpec spec_from_json(const json& j) {
    if (!j.is_object()) fail(ErrorKind::InvalidInput, "sweep spec must be an object");
    static const std::vector<std::string> keys = {
        "primes",       "quad_types",  "ramified_primes", "conductor_max", "alpha_values", "psi_twists",
        "suites",       "budget",      "chars_per_conductor", "toric_conductor_max", "toric_omega_max",
        "kappa_min",    "kappa_max",   "dkernel_max",     "qexp_cases",    "a_max",        "seed"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!has(keys, it.key())) fail(ErrorKind::InvalidInput, "unknown spec key: " + it.key());
    SweepSpec s;
    try {
        read_field(j, "primes", s.primes);
        read_field(j, "quad_types", s.quad_types);
        read_field(j, "ramified_primes", s.ramified_primes);
        read_field(j, "conductor_max", s.conductor_max);
        read_field(j, "alpha_values", s.alpha_values);
        read_field(j, "psi_twists", s.psi_twists);
        read_field(j, "suites", s.suites);
        read_field(j, "budget", s.budget);
        read_field(j, "chars_per_conductor", s.chars_per_conductor);
        read_field(j, "toric_conductor_max", s.toric_conductor_max);
        read_field(j, "toric_omega_max", s.toric_omega_max);
        read_field(j, "kappa_min", s.kappa_min);
        read_field(j, "kappa_max", s.kappa_max);
        read_field(j, "dkernel_max", s.dkernel_max);
        read_field(j, "qexp_cases", s.qexp_cases);
        read_field(j, "a_max", s.a_max);
        read_field(j, "seed", s.seed);
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("sweep spec: ") + e.what());
    }
    for (const auto& n : s.suites)
        if (!has(known_suites(), n)) fail(ErrorKind::InvalidInput, "unknown suite: " + n);
    for (const auto& t : s.quad_types) (void)quad_type_from(t);
    if (s.conductor_max < 0 || s.conductor_max > 4) fail(ErrorKind::InvalidInput, "conductor_max must be in 0..4");
    for (int64_t p : s.primes)
        if (!is_prime(p)) fail(ErrorKind::InvalidInput, "not a prime: " + std::to_string(p));
    return s;
}

json spec_to_json(const SweepSpec& s) {
    return json{{"primes", s.primes},
                {"quad_types", s.quad_types},
                {"ramified_primes", s.ramified_primes},
                {"conductor_max", s.conductor_max},
                {"alpha_values", s.alpha_values},
                {"psi_twists", s.psi_twists},
                {"suites", s.suites},
                {"budget", s.budget},
                {"chars_per_conductor", s.chars_per_conductor},
                {"toric_conductor_max", s.toric_conductor_max},
                {"toric_omega_max", s.toric_omega_max},
                {"kappa_min", s.kappa_min},
                {"kappa_max", s.kappa_max},
                {"dkernel_max", s.dkernel_max},
                {"qexp_cases", s.qexp_cases},
                {"a_max", s.a_max},
                {"seed", s.seed}};
}

json parse_kv_text(const std::string& text) {
    json out = json::object();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t\r";
        s.erase(0, s.find_first_not_of(ws));
        s.erase(s.find_last_not_of(ws) + 1);
        return s;
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == '[') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::InvalidInput, "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        json v = json::parse(val, nullptr, false);
        out[key] = v.is_discarded() ? json(val) : v;
    }
    return out;
}

SweepSpec spec_from_text(const std::string& text) {
    std::string t = text;
    t.erase(0, t.find_first_not_of(" \t\r\n"));
    if (!t.empty() && t[0] == '{') {
        json j = json::parse(t, nullptr, false);
        if (j.is_discarded()) fail(ErrorKind::InvalidInput, "spec file is not valid JSON");
        return spec_from_json(j);
    }
    return spec_from_json(parse_kv_text(text));
}

json record_to_json(const CaseRecord& r) {
    json j{{"key", r.key},   {"suite", r.suite}, {"inputs", r.inputs},  {"lhs", r.lhs},
           {"rhs", r.rhs},   {"pass", r.pass},   {"flags", r.flags},    {"timing_ms", r.timing_ms}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

std::vector<SweepCase> enumerate_cases(const SweepSpec& spec) {
    std::vector<SweepCase> out;
    auto want = [&](const char* s) { return has(spec.suites, s); };
    if (want("zw") || want("gauss-norm")) {
        for (const auto& f : fields_of(spec)) {
            LocalField K = character_field(f.d);
            for (int c = 0; c <= spec.conductor_max; ++c) {
                auto chars = spread_characters(K, c, Mono::one(), spec.chars_per_conductor);
                for (std::size_t ci = 0; ci < chars.size(); ++ci) {
                    json cd = character_to_json(chars[ci], f.d);
                    std::string cl = "c" + std::to_string(c) + "." + std::to_string(ci);
                    for (const auto& s : spec.psi_twists) {
                        int64_t tw = twist_for_prime(s, f.d.p);
                        std::string sl = "s=" + label_of(s);
                        if (want("zw"))
                            for (const auto& a : spec.alpha_values)
                                out.push_back({join_key({"zw", f.label, cl, "a=" + label_of(a), sl}), "zw",
                                               json{{"chi", cd}, {"alpha", a}, {"psi", tw}}});
                        if (want("gauss-norm") && c > 0)
                            out.push_back({join_key({"gauss-norm", f.label, cl, sl}), "gauss-norm",
                                           json{{"chi", cd}, {"psi", tw}}});
                    }
                }
            }
        }
    }
    if (want("rcirc") || want("qsharp") || want("toric-factor")) {
        std::vector<json> inputs;
        std::vector<std::string> labels;
        toric_tuples(spec, inputs, labels);
        for (const char* s : {"rcirc", "qsharp", "toric-factor"})
            if (want(s))
                for (std::size_t i = 0; i < inputs.size(); ++i) out.push_back({join_key({s, labels[i]}), s, inputs[i]});
    }
    if (want("eis-dichotomy")) {
        for (int64_t p : spec.primes) {
            if (p == 2) continue;
            for (const char* t : {"split", "inert"}) {
                if (!has(spec.quad_types, t)) continue;
                for (int k = spec.kappa_min; k <= spec.kappa_max; ++k)
                    for (int64_t u : {int64_t(1), smallest_nonresidue(p)})
                        out.push_back({join_key({"eis-dichotomy", "p" + std::to_string(p), t, "k" + pad(k, 2),
                                                 "u" + std::to_string(u)}),
                                       "eis-dichotomy", json{{"p", p}, {"quad_type", t}, {"k", k}, {"unit", u}}});
            }
        }
    }
    if (want("dkernel") && has(spec.quad_types, "inert")) {
        for (int64_t p : spec.primes) {
            if (p == 2) continue;
            for (int v = 0; v <= spec.dkernel_max; ++v)
                out.push_back({join_key({"dkernel", "p" + std::to_string(p), "v" + pad(v, 2)}), "dkernel",
                               json{{"p", p}, {"v", v}}});
        }
    }
    if (want("qexp-laws")) {
        std::vector<int64_t> ps;
        for (int64_t p : spec.primes)
            if (p != 2) ps.push_back(p);
        if (!ps.empty()) {
            for (int i = 0; i < spec.qexp_cases; ++i) {
                const int law = i % 4;
                const int64_t p = ps[static_cast<std::size_t>(i / 4) % ps.size()];
                const uint64_t seed = spec.seed * 1000003ULL + static_cast<uint64_t>(i);
                json in{{"law", law}, {"p", p}, {"seed", seed}, {"expansion", qexp_to_json(law_input(law, p, seed))}};
                if (law == 0) {
                    int64_t ell = 2;
                    for (int64_t l : {2, 3, 11, 13})
                        if (l != p) {
                            ell = l;
                            break;
                        }
                    in["ell"] = ell;
                }
                out.push_back({join_key({"qexp-laws", pad(i, 4), law_name(law)}), "qexp-laws", in});
            }
        }
    }
    if (want("kernel-vanishing")) {
        // E = Q(i); the p-adic family needs p split in E
        for (int64_t p : spec.primes) {
            if (p % 4 != 1) continue;
            for (int a = 1; a <= spec.a_max; ++a)
                out.push_back({join_key({"kernel-vanishing", "p" + std::to_string(p), "a" + pad(a, 4)}), "kernel-vanishing",
                               json{{"disc", -4}, {"p", p}, {"a", a}}});
        }
    }
    std::sort(out.begin(), out.end(), [](const SweepCase& a, const SweepCase& b) { return a.key < b.key; });
    return out;
}

CaseRecord run_case(const SweepCase& c, uint64_t budget, std::ostream* explain) {
    CaseRecord r;
    r.key = c.key;
    r.suite = c.suite;
    r.inputs = c.inputs;
    auto it = runners().find(c.suite);
    if (it == runners().end()) fail(ErrorKind::InvalidInput, "unknown suite: " + c.suite);
    Budget b;
    b.max_cosets = budget;
    auto t0 = std::chrono::steady_clock::now();
    try {
        it->second(c.inputs, r, b, explain);
    } catch (const Error& e) {
        r.pass = false;
        r.error = e.what();
        r.flags["error_kind"] = error_kind_name(e.kind());
        if (explain) *explain << "error: " << e.what() << "\n";
    }
    r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (explain) *explain << "result: " << (r.pass ? "pass" : "FAIL") << "\n";
    return r;
}

Report run_suite(const SweepSpec& spec, int threads) {
    std::vector<SweepCase> cases = enumerate_cases(spec);
    Report rep;
    rep.cases.resize(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) rep.cases[i] = run_case(cases[i], spec.budget);
    };
    const int n = std::max(1, std::min<int>(threads, static_cast<int>(cases.size())));
    std::vector<std::thread> pool;
    for (int i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rep;
}

bool Report::all_pass() const {
    return std::all_of(cases.begin(), cases.end(), [](const CaseRecord& c) { return c.pass; });
}

json Report::to_json(const SweepSpec& spec) const {
    json cs = json::array();
    std::map<std::string, std::pair<int, int>> by_suite;
    int passed = 0;
    for (const auto& c : cases) {
        cs.push_back(record_to_json(c));
        auto& s = by_suite[c.suite];
        ++s.first;
        if (c.pass) {
            ++s.second;
            ++passed;
        }
    }
    json suites = json::object();
    for (const auto& [name, v] : by_suite)
        suites[name] = json{{"total", v.first}, {"passed", v.second}, {"failed", v.first - v.second}};
    const int total = static_cast<int>(cases.size());
    return json{{"artifact", "pgz"},
                {"version", kVersion},
                {"spec", spec_to_json(spec)},
                {"cases", cs},
                {"summary", json{{"total", total}, {"passed", passed}, {"failed", total - passed}, {"suites", suites}}},
                {"all_pass", passed == total}};
}

std::string explain(const SweepSpec& spec, const std::string& case_id) {
    for (const auto& c : enumerate_cases(spec)) {
        if (c.key != case_id) continue;
        std::ostringstream os;
        os << "case " << c.key << "\ninputs " << c.inputs.dump() << "\n";
        run_case(c, spec.budget, &os);
        return os.str();
    }
    fail(ErrorKind::UnknownCase, "no case with id " + case_id + " in this sweep");
}

}  // namespace pgz
