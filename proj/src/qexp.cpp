#include "pgz/qexp.hpp"

#include <algorithm>
#include <sstream>

#include "pgz/local.hpp"

namespace pgz {

CycNum ReducedQExpansion::omega_at(int64_t v) const {
    auto it = omega.find(v);
    return it == omega.end() ? CycNum(1) : it->second;
}

namespace {

// p^k as a rational, k of either sign
Q qpow(int64_t p, int64_t k) {
    Z m;
    mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::abs(k)));
    return k >= 0 ? Q(m) : Q(Z(1), m);
}

// base and exponent of a = base p^s with base prime to p
std::pair<Q, int> split_index(const Q& a, int64_t p) {
    int s = vp(a, p);
    Q base = a / qpow(p, s);
    base.canonicalize();
    return {base, s};
}

Q index_of(const Q& base, int s, int64_t p) {
    Q a = base * qpow(p, s);
    a.canonicalize();
    return a;
}

bool comb_less(const Comb& x, const Comb& y) {
    if (x.base != y.base) return x.base < y.base;
    if (x.s0 != y.s0) return x.s0 < y.s0;
    return x.ratio.str() < y.ratio.str();
}

void require_p(const ReducedQExpansion& w) {
    if (w.p < 2 || !is_prime(w.p)) fail(ErrorKind::InvalidInput, "q-expansion needs a prime p");
}

}  // namespace

CycNum ReducedQExpansion::coefficient(const Q& a) const {
    CycNum r;
    auto it = coeffs.find(a);
    if (it != coeffs.end()) r = it->second;
    if (a > 0 && !combs.empty()) {
        auto [base, s] = split_index(a, p);
        for (const auto& c : combs)
            if (c.base == base && s >= c.s0) r += c.coeff * c.ratio.pow(s - c.s0);
    }
    return r;
}

void ReducedQExpansion::canonicalize() {
    for (auto it = coeffs.begin(); it != coeffs.end();) {
        if (it->second.is_zero())
            it = coeffs.erase(it);
        else
            ++it;
    }
    for (auto& c : combs) {
        if (c.base <= 0) fail(ErrorKind::InvalidInput, "comb base must be positive");
        auto [b, sh] = split_index(c.base, p);
        c.base = b;
        c.s0 += sh;
    }
    std::sort(combs.begin(), combs.end(), comb_less);
    std::vector<Comb> out;
    for (const auto& c : combs) {
        if (!out.empty() && out.back().base == c.base && out.back().s0 == c.s0 && out.back().ratio == c.ratio)
            out.back().coeff += c.coeff;
        else
            out.push_back(c);
    }
    combs.clear();
    for (auto& c : out)
        if (!c.coeff.is_zero()) combs.push_back(c);
}

bool ReducedQExpansion::operator==(const ReducedQExpansion& o) const {
    ReducedQExpansion a = *this, b = o;
    a.canonicalize();
    b.canonicalize();
    if (a.p != b.p || a.constant != b.constant || a.coeffs.size() != b.coeffs.size() ||
        a.combs.size() != b.combs.size())
        return false;
    for (auto i = a.coeffs.begin(), j = b.coeffs.begin(); i != a.coeffs.end(); ++i, ++j)
        if (i->first != j->first || i->second != j->second) return false;
    for (std::size_t k = 0; k < a.combs.size(); ++k) {
        const Comb &x = a.combs[k], &y = b.combs[k];
        if (x.base != y.base || x.s0 != y.s0 || x.ratio != y.ratio || x.coeff != y.coeff) return false;
    }
    return true;
}

bool ReducedQExpansion::is_zero() const {
    ReducedQExpansion a = *this;
    a.canonicalize();
    return a.constant.is_zero() && a.coeffs.empty() && a.combs.empty();
}

ReducedQExpansion operator+(const ReducedQExpansion& a, const ReducedQExpansion& b) {
    if (a.p != b.p) fail(ErrorKind::InvalidInput, "adding q-expansions for different p");
    ReducedQExpansion r = a;
    r.constant += b.constant;
    for (const auto& [k, v] : b.coeffs) r.coeffs[k] += v;
    for (const auto& c : b.combs) r.combs.push_back(c);
    r.canonicalize();
    return r;
}

ReducedQExpansion scaled(const ReducedQExpansion& w, const CycNum& s) {
    ReducedQExpansion r = w;
    r.constant *= s;
    for (auto& kv : r.coeffs) kv.second *= s;
    for (auto& c : r.combs) c.coeff *= s;
    r.canonicalize();
    return r;
}

std::optional<int64_t> cyc_valuation(const CycNum& x, int64_t p) {
    if (x.is_zero()) return std::nullopt;
    if (x.order() % static_cast<uint64_t>(p) == 0)
        fail(ErrorKind::NotImplemented, "valuation needs p prime to the cyclotomic order");
    if (x.has_sqrt() && (x.sqrt_q() % p == 0 || p == 2))
        fail(ErrorKind::NotImplemented, "valuation needs p prime to 2q for sqrt(q) values");
    std::optional<int64_t> v;
    auto scan = [&](const std::vector<Q>& cs) {
        for (const Q& c : cs) {
            if (c == 0) continue;
            int64_t w = vp(c, p);
            if (!v || w < *v) v = w;
        }
    };
    scan(x.coeffs());
    if (x.has_sqrt()) scan(x.sqrt_coeffs());
    return v;
}

namespace {

std::optional<int64_t> vmin(std::optional<int64_t> a, std::optional<int64_t> b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

// ratio valuation, failing on divergent combs
int64_t ratio_valuation(const Comb& c, int64_t p) {
    auto v = cyc_valuation(c.ratio, p);
    if (!v) fail(ErrorKind::InvalidInput, "comb ratio must be nonzero");
    return *v;
}

}  // namespace

std::optional<int64_t> qexp_min_valuation(const ReducedQExpansion& w0) {
    ReducedQExpansion w = w0;
    w.canonicalize();
    std::optional<int64_t> v = cyc_valuation(w.constant, w.p);
    // exact coefficients wherever a finite entry or comb head sits
    for (const auto& kv : w.coeffs) v = vmin(v, cyc_valuation(w.coefficient(kv.first), w.p));
    std::map<Q, int> per_base;
    for (const auto& c : w.combs) {
        int64_t rv = ratio_valuation(c, w.p);
        if (rv < 0) fail(ErrorKind::InvalidInput, "unbounded comb");
        per_base[c.base]++;
        v = vmin(v, cyc_valuation(w.coefficient(index_of(c.base, c.s0, w.p)), w.p));
    }
    // several combs on one base: evaluate a window past the last head, then the ultrametric tail bound
    for (const auto& [base, n] : per_base) {
        if (n < 2) continue;
        int hi = 0;
        for (const auto& c : w.combs)
            if (c.base == base) hi = std::max(hi, c.s0);
        for (int s = hi; s <= hi + 2 * n; ++s) v = vmin(v, cyc_valuation(w.coefficient(index_of(base, s, w.p)), w.p));
        for (const auto& c : w.combs)
            if (c.base == base) v = vmin(v, cyc_valuation(c.coeff, w.p));
    }
    return v;
}

std::optional<Q> qexp_norm(const ReducedQExpansion& w) {
    require_p(w);
    for (const auto& c : w.combs)
        if (ratio_valuation(c, w.p) < 0 && !c.coeff.is_zero()) return std::nullopt;
    auto v = qexp_min_valuation(w);
    if (!v) return Q(0);
    return qpow(w.p, -*v);
}

ReducedQExpansion hecke_T(const ReducedQExpansion& w, int64_t ell) {
    require_p(w);
    if (!is_prime(ell) || ell == w.p || w.tame_level % ell == 0)
        fail(ErrorKind::BadPlace, "T_" + std::to_string(ell) + " needs a prime away from p and the tame level");
    const CycNum wi = w.omega_at(ell).inv();
    ReducedQExpansion r = w;
    r.coeffs.clear();
    r.combs.clear();
    // W'_a = W_{a ell} + omega^{-1}(ell) W_{a / ell}; the constant term follows the same rule at a = 0
    r.constant = w.constant + wi * w.constant;
    for (const auto& [a, v] : w.coeffs) {
        r.coeffs[a / ell] += v;
        r.coeffs[a * ell] += wi * v;
    }
    for (const auto& c : w.combs) {
        Comb lo = c, hi = c;
        lo.base = c.base / ell;
        hi.base = c.base * ell;
        hi.coeff = wi * c.coeff;
        r.combs.push_back(lo);
        r.combs.push_back(hi);
    }
    r.canonicalize();
    return r;
}

ReducedQExpansion U_v_star(const ReducedQExpansion& w, int64_t v, bool form_mode) {
    return U_power(w, v, 1, form_mode);
}

ReducedQExpansion U_power(const ReducedQExpansion& w, int64_t v, int64_t m, bool form_mode) {
    require_p(w);
    if (v != w.p) fail(ErrorKind::BadPlace, "U_{v,*} is defined at the prime p of the expansion");
    if (m < 0) fail(ErrorKind::InvalidInput, "negative power");
    if (m > 100000) fail(ErrorKind::BudgetExceeded, "explicit U power too large");
    const CycNum wi = w.omega_at(v).inv().pow(m);
    ReducedQExpansion r = w;
    r.coeffs.clear();
    r.combs.clear();
    r.constant = wi * w.constant;
    const int mi = static_cast<int>(m);
    for (const auto& [a, val] : w.coeffs) {
        Q b = index_of(a, -mi, v);
        if (form_mode && vp(b, v) < 0) continue;
        r.coeffs[b] += wi * val;
    }
    for (const auto& c : w.combs) {
        Comb d = c;
        d.s0 = c.s0 - mi;
        d.coeff = wi * c.coeff;
        if (form_mode && d.s0 < 0) {
            d.coeff = d.coeff * c.ratio.pow(-d.s0);
            d.s0 = 0;
        }
        r.combs.push_back(d);
    }
    r.canonicalize();
    return r;
}

namespace {

// order of x as a root of unity, 0 if it is not one
uint64_t root_of_unity_order(const CycNum& x0) {
    CycNum x = x0.has_sqrt() ? x0.flattened() : x0;
    uint64_t n = x.order();
    uint64_t L = (n % 2 == 0) ? n : 2 * n;
    if (x.pow(static_cast<int64_t>(L)) != CycNum(1)) return 0;
    for (uint64_t d = 1; d <= L; ++d)
        if (L % d == 0 && x.pow(static_cast<int64_t>(d)) == CycNum(1)) return d;
    return 0;
}

// m = n! handled through its residues and p-adic valuation; exact only while it fits
struct Factorial {
    int n;
    std::optional<int64_t> exact() const {
        if (n > 20) return std::nullopt;
        int64_t f = 1;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    }
    int64_t mod(int64_t d) const {
        int64_t r = 1 % d;
        for (int i = 2; i <= n && r != 0; ++i) r = r * (i % d) % d;
        return r;
    }
    int64_t vp(int64_t p) const {
        int64_t v = 0;
        for (int64_t q = p; q <= n; q *= p) v += n / q;
        return v;
    }
    bool at_least(int64_t k) const {
        auto e = exact();
        return !e || *e >= k;
    }
};

// v_p(x^{n!} - 1) for a p-adic unit x; nullopt when exactly zero
std::optional<int64_t> val_pow_minus_one(const CycNum& x, const Factorial& m, int64_t p) {
    if (uint64_t d = root_of_unity_order(x)) {
        int64_t k = m.mod(static_cast<int64_t>(d));
        if (k == 0) return std::nullopt;
        return cyc_valuation(x.pow(k) - CycNum(1), p);
    }
    if (!x.is_rational()) fail(ErrorKind::NotImplemented, "unit comb ratio must be a root of unity or rational");
    Q r = x.rational_value();
    auto vminus = [&](int64_t e) {
        Q y = 1;
        for (int64_t i = 0; i < e; ++i) y *= r;
        y -= 1;
        return static_cast<int64_t>(pgz::vp(y, p));
    };
    if (p == 2) {
        if (m.n <= 1) return vminus(1);
        return vminus(2) + m.vp(2) - 1;
    }
    // lifting the exponent: d = order of r mod p
    int64_t rm = unit_part(r, p, p).get_si();
    int64_t d = 1, t = rm % p;
    while (t != 1) t = t * rm % p, ++d;
    if (m.mod(d) != 0) return 0;
    return vminus(d) + m.vp(p);  // d | p - 1 is prime to p
}

}  // namespace

ProjectorResult ordinary_projector(const ReducedQExpansion& w0, int64_t v, int max_iter) {
    require_p(w0);
    if (v != w0.p) fail(ErrorKind::BadPlace, "e_v is defined at the prime p of the expansion");
    if (max_iter < 1 || max_iter > 5000) fail(ErrorKind::InvalidInput, "max_iter must be in [1, 5000]");
    ReducedQExpansion w = w0;
    w.canonicalize();
    const int64_t p = w.p;
    const CycNum om = w.omega_at(p);
    if (cyc_valuation(om, p).value_or(1) != 0) fail(ErrorKind::InvalidInput, "omega(varpi) must be a p-adic unit");

    ProjectorResult res;
    res.image = w;
    res.image.coeffs.clear();
    res.image.combs.clear();
    // limit of U^{n!}: unit combs extended down to s = 0 (the unit ratio^{n!} tends to 1), the rest dies
    std::vector<const Comb*> unit, crit;
    for (const auto& c : w.combs) {
        int64_t rv = ratio_valuation(c, p);
        if (rv < 0) fail(ErrorKind::NoConvergence, "comb ratio of negative valuation: U^{n!} diverges");
        (rv == 0 ? unit : crit).push_back(&c);
        if (rv == 0) {
            Comb e = c;
            e.coeff = c.coeff * c.ratio.pow(-c.s0);
            e.s0 = 0;
            res.image.combs.push_back(e);
        }
    }
    res.image.canonicalize();

    ReducedQExpansion finite = w;
    finite.combs.clear();
    finite.constant = CycNum();
    int max_s = 0;
    for (const auto& kv : finite.coeffs) max_s = std::max(max_s, vp(kv.first, p));

    std::vector<std::string> traj;
    for (int n = 1; n <= max_iter; ++n) {
        const Factorial m{n};
        std::optional<int64_t> val;
        if (!m.at_least(max_s + 1)) val = vmin(val, qexp_min_valuation(U_power(finite, p, *m.exact(), true)));
        if (!w.constant.is_zero()) {
            auto e = val_pow_minus_one(om.inv(), m, p);
            if (e) val = vmin(val, *cyc_valuation(w.constant, p) + *e);
        }
        for (const Comb* c : crit) {
            // the head of U^m comb sits at s = max(0, s0 - m), i.e. at depth max(m, s0) of the original comb
            const int64_t vc = *cyc_valuation(c->coeff, p);
            if (!m.at_least(c->s0 + kProjectorValuationBound + std::abs(vc) + 1)) {
                const int64_t mm = *m.exact();
                val = vmin(val, vc + (std::max<int64_t>(mm, c->s0) - c->s0) * ratio_valuation(*c, p));
            } else {
                val = vmin(val, int64_t(kProjectorValuationBound) + 1);
            }
        }
        for (const Comb* c : unit) {
            const int64_t vc = *cyc_valuation(c->coeff, p);
            if (!m.at_least(c->s0)) {
                val = vmin(val, vc);
                continue;
            }
            auto e = val_pow_minus_one(c->ratio / om, m, p);
            if (e) val = vmin(val, vc + *e);
        }
        res.iterations = n;
        if (!val) {
            res.residual_norms.push_back(0);
            return res;
        }
        Q norm = qpow(p, -*val);
        res.residual_norms.push_back(norm);
        traj.push_back(norm.get_str());
        if (*val > kProjectorValuationBound) return res;
    }
    std::ostringstream os;
    os << "residual norms:";
    for (const auto& s : traj) os << " " << s;
    fail(ErrorKind::NoConvergence, os.str());
}

CriticalityResult is_v_critical(const ReducedQExpansion& w, int64_t v) {
    require_p(w);
    if (v != w.p) fail(ErrorKind::BadPlace, "criticality is tested at the prime p of the expansion");
    CriticalityResult r;
    if (!w.constant.is_zero()) return r;  // defined for expansions without constant term
    int64_t c = 0;
    bool any = false;
    for (const auto& [a, val] : w.coeffs) {
        auto vv = cyc_valuation(val, v);
        if (!vv) continue;
        int64_t need = vp(a, v) - *vv;
        c = any ? std::max(c, need) : need;
        any = true;
        r.window_limited = true;
    }
    for (const auto& cb : w.combs) {
        if (cb.coeff.is_zero()) continue;
        if (ratio_valuation(cb, v) < 1) return CriticalityResult{};
        int64_t need = cb.s0 - *cyc_valuation(cb.coeff, v);
        c = any ? std::max(c, need) : need;
        any = true;
    }
    r.c = any ? c : 0;
    return r;
}

bool in_kept_set(const Q& a, const std::vector<int64_t>& S) {
    (void)S;
    // a positive rational index is the diagonal idele of an element of F^x, hence in F^x A^{S infty, x}
    return a > 0;
}

ReducedQExpansion s_quotient(const ReducedQExpansion& w, const std::vector<int64_t>& S) {
    for (int64_t v : S)
        if (v == w.p) fail(ErrorKind::InvalidInput, "S must not contain p");
    ReducedQExpansion r = w;
    for (auto it = r.coeffs.begin(); it != r.coeffs.end();) {
        if (!in_kept_set(it->first, S))
            it = r.coeffs.erase(it);
        else
            ++it;
    }
    r.canonicalize();
    return r;
}

json qexp_to_json(const ReducedQExpansion& w0) {
    ReducedQExpansion w = w0;
    w.canonicalize();
    json j;
    j["p"] = w.p;
    j["tame_level"] = w.tame_level;
    json om = json::object();
    for (const auto& [v, x] : w.omega) om[std::to_string(v)] = cyc_to_json(x);
    j["omega"] = om;
    j["constant"] = cyc_to_json(w.constant);
    json cs = json::array();
    for (const auto& [a, x] : w.coeffs) cs.push_back({rational_to_json(a), cyc_to_json(x)});
    j["coeffs"] = cs;
    json cb = json::array();
    for (const auto& c : w.combs)
        cb.push_back({{"base", rational_to_json(c.base)},
                      {"s0", c.s0},
                      {"coeff", cyc_to_json(c.coeff)},
                      {"ratio", cyc_to_json(c.ratio)}});
    j["combs"] = cb;
    return j;
}

ReducedQExpansion qexp_from_json(const json& j) {
    ReducedQExpansion w;
    try {
        w.p = j.at("p").get<int64_t>();
        w.tame_level = j.value("tame_level", int64_t(1));
        if (j.contains("omega"))
            for (const auto& [k, x] : j.at("omega").items()) w.omega[std::stoll(k)] = cyc_from_json(x);
        if (j.contains("constant")) w.constant = cyc_from_json(j.at("constant"));
        if (j.contains("coeffs"))
            for (const auto& e : j.at("coeffs")) {
                Q a = rational_from_json(e.at(0));
                if (a <= 0) fail(ErrorKind::InvalidInput, "indices must be positive rationals");
                w.coeffs[a] += cyc_from_json(e.at(1));
            }
        if (j.contains("combs"))
            for (const auto& e : j.at("combs")) {
                Comb c;
                c.base = rational_from_json(e.at("base"));
                c.s0 = e.value("s0", 0);
                c.coeff = cyc_from_json(e.at("coeff"));
                c.ratio = cyc_from_json(e.at("ratio"));
                w.combs.push_back(c);
            }
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("q-expansion JSON: ") + e.what());
    }
    require_p(w);
    w.canonicalize();
    return w;
}

ReducedQExpansion apply_pipeline(const ReducedQExpansion& w0, const json& ops, json* log) {
    if (!ops.is_array()) fail(ErrorKind::InvalidInput, "pipeline must be a JSON array");
    ReducedQExpansion w = w0;
    for (const auto& op : ops) {
        std::string name = op.value("op", "");
        json entry{{"op", name}};
        if (name == "U") {
            w = U_v_star(w, op.at("v").get<int64_t>(), op.value("form_mode", false));
        } else if (name == "T") {
            w = hecke_T(w, op.at("v").get<int64_t>());
        } else if (name == "e") {
            ProjectorResult pr = ordinary_projector(w, op.at("v").get<int64_t>(), op.value("max_iter", 12));
            json tr = json::array();
            for (const Q& q : pr.residual_norms) tr.push_back(rational_to_json(q));
            entry["residual_norms"] = tr;
            w = pr.image;
        } else if (name == "s_quotient") {
            w = s_quotient(w, op.value("S", std::vector<int64_t>{}));
        } else {
            fail(ErrorKind::InvalidInput, "unknown pipeline op '" + name + "'");
        }
        if (log) log->push_back(entry);
    }
    return w;
}

}  // namespace pgz
