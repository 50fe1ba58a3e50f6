#include "pgz/eiskernel.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <tuple>

#include "pgz/error.hpp"

namespace pgz {

// ---- LaurentPoly ----

LaurentPoly LaurentPoly::monomial(int k, const CycNum& c) {
    LaurentPoly r;
    r.add_term(k, c);
    return r;
}

void LaurentPoly::add_term(int k, const CycNum& v) {
    if (v.is_zero()) return;
    auto it = c_.find(k);
    if (it == c_.end()) {
        c_.emplace(k, v);
        return;
    }
    it->second += v;
    if (it->second.is_zero()) c_.erase(it);
}

CycNum LaurentPoly::coeff(int k) const {
    auto it = c_.find(k);
    return it == c_.end() ? CycNum() : it->second;
}

int LaurentPoly::min_degree() const { return c_.empty() ? 0 : c_.begin()->first; }
int LaurentPoly::max_degree() const { return c_.empty() ? 0 : c_.rbegin()->first; }

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [k, v] : o.c_) r.add_term(k, v);
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
    LaurentPoly r = *this;
    for (const auto& [k, v] : o.c_) r.add_term(k, -v);
    return r;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    LaurentPoly r;
    for (const auto& [i, a] : c_)
        for (const auto& [j, b] : o.c_) r.add_term(i + j, a * b);
    return r;
}

LaurentPoly LaurentPoly::scaled(const CycNum& s) const {
    LaurentPoly r;
    for (const auto& [k, v] : c_) r.add_term(k, v * s);
    return r;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
    if (c_.size() != o.c_.size()) return false;
    auto it = o.c_.begin();
    for (const auto& [k, v] : c_) {
        if (it->first != k || it->second != v) return false;
        ++it;
    }
    return true;
}

CycNum LaurentPoly::eval(const CycNum& x) const {
    CycNum r;
    for (const auto& [k, v] : c_) r += v * x.pow(k);
    return r;
}

CycNum LaurentPoly::eval_at_one() const {
    CycNum r;
    for (const auto& kv : c_) r += kv.second;
    return r;
}

std::optional<LaurentPoly> LaurentPoly::divide_one_minus(const CycNum& c) const {
    if (c_.empty()) return LaurentPoly();
    if (c.is_zero()) return *this;
    // P = (1 - cX) Q: q_k = p_k + c q_{k-1}, from the lowest degree up
    const int lo = min_degree(), hi = max_degree();
    LaurentPoly q;
    CycNum prev;
    for (int k = lo; k <= hi - 1; ++k) {
        CycNum qk = coeff(k) + c * prev;
        q.add_term(k, qk);
        prev = qk;
    }
    // the top coefficient must equal -c q_{hi-1}
    if (coeff(hi) + c * prev != CycNum()) return std::nullopt;
    return q;
}

std::string LaurentPoly::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : c_) {
        std::string cs = v.str();
        bool simple = v.is_rational();
        if (!first) os << " + ";
        first = false;
        if (k == 0) {
            os << (simple ? cs : "(" + cs + ")");
            continue;
        }
        if (!(v.is_rational() && v.rational_value() == 1)) os << (simple ? cs : "(" + cs + ")") << "*";
        os << "X";
        if (k != 1) os << "^" << k;
    }
    return os.str();
}

json LaurentPoly::to_json() const {
    json arr = json::array();
    for (const auto& [k, v] : c_) arr.push_back({{"exp", k}, {"coeff", cyc_to_json(v)}});
    return arr;
}

CycNum derivative_at_one(const LaurentPoly& p) {
    CycNum r;
    for (const auto& [k, v] : p.coeffs()) r += v.scaled(Q(k));
    return r;
}

// ---- local quadratic spaces ----

QuadSpaceLocal QuadSpaceLocal::from_datum(const LocalDatum& d, const Q& u, const Q& c) {
    QuadSpaceLocal s;
    s.p = d.p;
    s.scale = u * c;
    if (s.scale == 0 || vp(s.scale, d.p) != 0) fail(ErrorKind::InvalidInput, "u c must be a p-adic unit");
    switch (d.type) {
    case QuadType::split:
        s.A = 0, s.B = 1, s.C = 0, s.eta = 1;
        break;
    case QuadType::inert: {
        LocalField K = LocalField::unram(d.p);
        // N(a + b theta) = a^2 + t ab - s b^2
        s.A = 1, s.B = K.t, s.C = -K.s, s.eta = -1;
        break;
    }
    case QuadType::ramified:
        s.A = 1, s.B = 0, s.C = -d.p * d.u0, s.eta = 0;
        break;
    }
    s.name = std::string(quad_type_name(d.type)) + " Q" + std::to_string(d.p);
    return s;
}

QuadSpaceLocal QuadSpaceLocal::from_discriminant(int64_t disc, int64_t p, const Q& scale) {
    if (disc >= 0 || (pmod(disc, 4) != 0 && pmod(disc, 4) != 1))
        fail(ErrorKind::InvalidInput, "discriminant must be a negative discriminant");
    if (scale == 0 || vp(scale, p) != 0) fail(ErrorKind::InvalidInput, "scale must be a p-adic unit");
    QuadSpaceLocal s;
    s.p = p;
    s.A = 1, s.B = disc, s.C = (disc * disc - disc) / 4;
    s.scale = scale;
    if (disc % p == 0)
        s.eta = 0;
    else if (p == 2)
        s.eta = pmod(disc, 8) == 1 ? 1 : -1;
    else
        s.eta = legendre(pmod(disc, p), p);
    s.name = "Q(sqrt " + std::to_string(disc) + ") at " + std::to_string(p);
    return s;
}

std::string QuadSpaceLocal::str() const {
    std::ostringstream os;
    os << name << ": " << scale.get_str() << "*(" << A << " x1^2 + " << B << " x1 x2 + " << C << " x2^2)";
    return os.str();
}

namespace {

constexpr int64_t kMaxModulus = 50000000;

int64_t modulus_of(int64_t p, int n) {
    int64_t m = 1;
    for (int i = 0; i < n; ++i) {
        if (m > kMaxModulus / p) fail(ErrorKind::InsufficientPrecision, "residue modulus too large to count");
        m *= p;
    }
    return m;
}

// a mod p^n for v(a) >= 0
int64_t rational_mod(const Q& a, int64_t p, int64_t mod) {
    if (a == 0) return 0;
    Z num = a.get_num(), den = a.get_den();
    Z dm = den % mod;
    if (dm < 0) dm += mod;
    int64_t di = mod_inv(dm.get_si(), mod);
    Z nm = num % mod;
    if (nm < 0) nm += mod;
    Z r = (nm * di) % mod;
    (void)p;
    return r.get_si();
}

int64_t mulmod(int64_t a, int64_t b, int64_t m) {
    return static_cast<int64_t>((static_cast<__int128>(a) * b) % m);
}

// #{y mod p^n : y^2 = b}, p odd
int64_t sqrt_count(int64_t b, int64_t p, int n, int64_t mod) {
    b = pmod(b, mod);
    if (b == 0) return ipow(p, n / 2);
    int j = 0;
    while (b % p == 0) b /= p, ++j;
    if (j & 1) return 0;
    if (legendre(b % p, p) != 1) return 0;
    return 2 * ipow(p, j / 2);
}

int64_t form_value(const QuadSpaceLocal& s, int64_t x1, int64_t x2, int64_t mod) {
    int64_t v = mulmod(pmod(s.A, mod), mulmod(x1, x1, mod), mod);
    v += mulmod(pmod(s.B, mod), mulmod(x1, x2, mod), mod);
    v += mulmod(pmod(s.C, mod), mulmod(x2, x2, mod), mod);
    return v % mod;
}

// target residue of N(x) and whether it is integral
bool target_of(const QuadSpaceLocal& s, const Q& a, int64_t mod, int64_t& t) {
    Q ap = a / s.scale;
    if (ap != 0 && vp(ap, s.p) < 0) return false;
    t = rational_mod(ap, s.p, mod);
    return true;
}

}  // namespace

Z count_solutions_bruteforce(const QuadSpaceLocal& s, const Q& a, int n) {
    if (n < 0) fail(ErrorKind::InvalidInput, "negative depth");
    const int64_t mod = modulus_of(s.p, n);
    if (mod > 6000) fail(ErrorKind::BudgetExceeded, "brute-force count too large");
    int64_t t;
    if (!target_of(s, a, mod, t)) return 0;
    Z cnt = 0;
    for (int64_t x1 = 0; x1 < mod; ++x1)
        for (int64_t x2 = 0; x2 < mod; ++x2)
            if (form_value(s, x1, x2, mod) == t) ++cnt;
    return cnt;
}

Z count_solutions(const QuadSpaceLocal& s, const Q& a, int n) {
    if (n < 0) fail(ErrorKind::InvalidInput, "negative depth");
    if (s.scale == 0 || vp(s.scale, s.p) != 0) fail(ErrorKind::InvalidInput, "scale must be a unit");
    const int64_t p = s.p;
    const int64_t mod = modulus_of(p, n);
    int64_t t;
    if (!target_of(s, a, mod, t)) return 0;
    if (n == 0) return 1;
    if (s.A == 0 && s.C == 0 && pmod(s.B, p) != 0) {
        // B x1 x2 = t: x1 of valuation j < n needs p^j | t, then x2 is fixed mod p^{n-j}
        t = mulmod(t, mod_inv(pmod(s.B, mod), mod), mod);
        Z cnt = 0;
        int vt = n;
        if (t != 0) {
            vt = 0;
            for (int64_t w = t; w % p == 0; w /= p) ++vt;
        }
        for (int j = 0; j < n && j <= vt; ++j) cnt += Z(ipow(p, n - j) - ipow(p, n - j - 1)) * ipow(p, j);
        if (t == 0) cnt += Z(mod);
        return cnt;
    }
    if (p != 2 && pmod(s.A, p) != 0) {
        // 4A N = (2A x1 + B x2)^2 - D x2^2 and x1 -> 2A x1 + B x2 is a bijection
        const int64_t D = pmod(s.form_disc(), mod);
        const int64_t base = mulmod(pmod(4 * s.A, mod), t, mod);
        Z cnt = 0;
        for (int64_t x2 = 0; x2 < mod; ++x2) {
            int64_t b = (base + mulmod(D, mulmod(x2, x2, mod), mod)) % mod;
            cnt += sqrt_count(b, p, n, mod);
        }
        return cnt;
    }
    // p = 2: solve in x1 for each x2 by scanning
    if (mod > 8192) fail(ErrorKind::InsufficientPrecision, "2-adic count depth too large");
    Z cnt = 0;
    for (int64_t x2 = 0; x2 < mod; ++x2) {
        int64_t c0 = mulmod(pmod(s.C, mod), mulmod(x2, x2, mod), mod);
        int64_t b0 = mulmod(pmod(s.B, mod), x2, mod);
        int64_t a0 = pmod(s.A, mod);
        for (int64_t x1 = 0; x1 < mod; ++x1) {
            int64_t v = (mulmod(a0, mulmod(x1, x1, mod), mod) + mulmod(b0, x1, mod) + c0) % mod;
            if (v == t) ++cnt;
        }
    }
    return cnt;
}

Q dn_volume(const QuadSpaceLocal& s, const Q& a, int n) {
    Z cnt = count_solutions(s, a, n);
    Q r(cnt, Z(1));
    for (int i = 0; i < 2 * n; ++i) r /= s.p;
    r.canonicalize();
    return r;
}

WhittakerPoly whittaker_poly(const QuadSpaceLocal& s, const Q& a) {
    if (a == 0) fail(ErrorKind::InvalidInput, "a = 0 is the constant term, which is not assembled");
    WhittakerPoly w;
    const int k = vp(a, s.p);
    if (k < 0) return w;  // D_n(a) misses the lattice for every n
    const int n_hi = k + (s.p == 2 ? 6 : 3);
    std::vector<Q> t(n_hi + 1);
    for (int n = 0; n <= n_hi; ++n) {
        Q v(count_solutions(s, a, n), Z(1));
        for (int i = 0; i < n; ++i) v /= s.p;
        v.canonicalize();
        t[n] = v;
    }
    int n0 = n_hi;
    while (n0 > 0 && t[n0 - 1] == t[n_hi]) --n0;
    if (n0 > n_hi - 2) fail(ErrorKind::InsufficientPrecision, "q^n vol(D_n(a)) did not stabilize");
    w.tail_start = n0;
    w.tail_constant = t[n0];
    // (1 - X) (sum_{n < n0} t_n X^n + t_{n0} X^{n0} / (1 - X))
    LaurentPoly series;
    for (int n = 0; n < n0; ++n) {
        series = series + LaurentPoly::monomial(n, CycNum(t[n]));
        series = series - LaurentPoly::monomial(n + 1, CycNum(t[n]));
    }
    series = series + LaurentPoly::monomial(n0, CycNum(t[n0]));
    w.series = series;
    if (s.eta == 0) {
        w.poly = series;
        return w;
    }
    auto q = series.divide_one_minus(CycNum(Q(s.eta, s.p)));
    if (q) {
        w.poly = *q;
    } else {
        w.poly = series;
        w.l_factor_divided = false;
    }
    return w;
}

CycNum whittaker_p_standard(int64_t p, const Q& a, const Q& u, const CycNum& chi_F_minus1) {
    if (u == 0) fail(ErrorKind::InvalidInput, "u must be nonzero");
    bool a_ok = (a == 0) || vp(a, p) >= 0;
    if (a_ok && vp(u, p) == 0) return chi_F_minus1;
    return CycNum();
}

std::vector<ArchEntry> archimedean_constants() {
    return {{"W_a(1,u), ua > 0", "2 exp(-2 pi a)"},
            {"W_0(1,u)", "1"},
            {"W_a(1,u), ua < 0", "0"},
            {"R_inf", "1/2"},
            {"reduced q-expansion factor, ua > 0", "2"}};
}

std::optional<Q> siegel_weil_rhs(const QuadSpaceLocal& s, const Q& a) {
    if (a == 0) return std::nullopt;
    Q ap = a / s.scale;
    int k = vp(ap, s.p);
    if (s.eta == -1) return Q((k >= 0 && k % 2 == 0) ? 1 : 0);
    if (s.eta == 1) return Q(k >= 0 ? k + 1 : 0);
    return std::nullopt;
}

Q derivative_kernel_raw(int64_t p, int val, const Q& u) {
    if (val < 0) fail(ErrorKind::InvalidInput, "valuation must be non-negative");
    LocalDatum d = LocalDatum::make(p, QuadType::inert);
    QuadSpaceLocal s = QuadSpaceLocal::from_datum(d, u);
    Q a = u;
    for (int i = 0; i < val; ++i) a *= p;
    WhittakerPoly w = whittaker_poly(s, a);
    if (!w.l_factor_divided) fail(ErrorKind::Internal, "inert Whittaker series not divisible by its L-factor");
    // vol(E_v^1) = 1 (the value pinned by the local Siegel-Weil check)
    const Q vol_E1 = 1;
    CycNum dv = derivative_at_one(w.poly);
    return -dv.rational_value() / vol_E1;
}

Q derivative_kernel_k_natural(int64_t p, int val, const Q& u) {
    if (val < 0) fail(ErrorKind::InvalidInput, "valuation must be non-negative");
    // x2 lies in the j-part of the ramified quaternion algebra: q(x2) = -eps N(y), v(eps) odd
    if (val % 2 == 0)
        fail(ErrorKind::NotRepresented,
             "v(q(x2)) = " + std::to_string(val) + " is even, but q on the j-part has odd valuation at an inert place");
    return derivative_kernel_raw(p, val, u);
}

// ---- global toy data ----

int64_t ThetaLattice::norm(int64_t x1, int64_t x2) const {
    return x1 * x1 + disc * x1 * x2 + (disc * disc - disc) / 4 * x2 * x2;
}

namespace {

bool coset_ok(const ThetaLattice& lat, int64_t x1, int64_t x2) {
    if (lat.m <= 1) return true;
    return pmod(x1 - lat.x0_1, lat.m) == 0 && pmod(x2 - lat.x0_2, lat.m) == 0;
}

bool integral_target(const Q& a, const Q& u, int64_t& T) {
    if (u <= 0) fail(ErrorKind::InvalidInput, "theta scale u must be positive");
    if (a < 0) fail(ErrorKind::InvalidInput, "a must be non-negative");
    Q t = a / u;
    t.canonicalize();
    if (t.get_den() != 1) return false;
    if (!t.get_num().fits_slong_p()) fail(ErrorKind::BudgetExceeded, "target too large");
    T = t.get_num().get_si();
    return true;
}

int64_t isqrt(int64_t n) {
    if (n < 0) return -1;
    Z r;
    mpz_sqrt(r.get_mpz_t(), Z(n).get_mpz_t());
    return r.get_si();
}

}  // namespace

Z theta_rep_number(const ThetaLattice& lat, const Q& a, const Q& u, Budget* budget) {
    if (lat.disc >= 0) fail(ErrorKind::InvalidInput, "lattice must be positive definite");
    int64_t T;
    if (!integral_target(a, u, T)) return 0;
    const int64_t ad = -lat.disc;
    // (2 x1 + D x2)^2 + |D| x2^2 = 4 T
    const int64_t b2 = isqrt(4 * T / ad);
    if (budget) budget->charge(static_cast<uint64_t>(2 * b2 + 1));
    Z cnt = 0;
    for (int64_t x2 = -b2; x2 <= b2; ++x2) {
        int64_t R = 4 * T - ad * x2 * x2;
        if (R < 0) continue;
        int64_t s = isqrt(R);
        if (s * s != R) continue;
        for (int64_t sg : {int64_t(1), int64_t(-1)}) {
            if (s == 0 && sg < 0) continue;
            int64_t y = sg * s - lat.disc * x2;
            if (y % 2 != 0) continue;
            int64_t x1 = y / 2;
            if (coset_ok(lat, x1, x2)) ++cnt;
        }
    }
    return cnt;
}

Z theta_rep_number_oracle(const ThetaLattice& lat, const Q& a, const Q& u) {
    int64_t T;
    if (!integral_target(a, u, T)) return 0;
    const int64_t ad = -lat.disc;
    const int64_t r = isqrt(T) + 1;
    const int64_t b1 = r + (ad * (isqrt(4 * T / ad) + 1)) / 2 + 1;
    const int64_t b2 = isqrt(4 * T / ad) + 1;
    Z cnt = 0;
    for (int64_t x1 = b1; x1 >= -b1; --x1)
        for (int64_t x2 = b2; x2 >= -b2; --x2)
            if (lat.norm(x1, x2) == T && coset_ok(lat, x1, x2)) ++cnt;
    return cnt;
}

CycNum KernelScenario::X_at(int64_t v) const {
    auto it = X.find(v);
    return it == X.end() ? CycNum(1) : it->second;
}

std::vector<int64_t> prime_factors(Z n) {
    if (n < 0) n = -n;
    std::vector<int64_t> out;
    for (int64_t d = 2; Z(d) * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) {
        if (!n.fits_slong_p()) fail(ErrorKind::InvalidInput, "prime factor too large");
        out.push_back(n.get_si());
    }
    return out;
}

namespace {

Q local_invariant_c(const KernelScenario& sc, int64_t v) {
    if (!sc.coherent || v != sc.flip_prime) return 1;
    if (sc.disc % v != 0 && !(v == 2 && pmod(sc.disc, 4) == 0))
        fail(ErrorKind::InvalidInput, "the flip prime must ramify in E");
    for (int64_t c : {-1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7}) {
        if (c % v == 0) continue;
        if (hilbert_symbol(Q(c), Q(sc.disc), v) == -1) return Q(c);
    }
    fail(ErrorKind::InvalidInput, "no unit non-norm found at the flip prime");
}

std::vector<int64_t> support_primes(const KernelScenario& sc, const Q& a2, const Q& u) {
    std::vector<int64_t> ps = {2, sc.p};
    for (const Z& z : {Z(sc.disc), Z(a2.get_num()), Z(a2.get_den()), Z(u.get_num()), Z(u.get_den())})
        for (int64_t q : prime_factors(z)) ps.push_back(q);
    if (sc.coherent) ps.push_back(sc.flip_prime);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return ps;
}

std::mutex g_whit_mu;
std::map<std::tuple<int64_t, int64_t, int64_t, int64_t, std::string, std::string>, WhittakerPoly> g_whit_cache;

WhittakerPoly cached_whittaker(const QuadSpaceLocal& s, const Q& a) {
    auto key = std::make_tuple(s.p, s.A, s.B, s.C, s.scale.get_str(), a.get_str());
    {
        std::lock_guard<std::mutex> lk(g_whit_mu);
        auto it = g_whit_cache.find(key);
        if (it != g_whit_cache.end()) return it->second;
    }
    WhittakerPoly w = whittaker_poly(s, a);
    std::lock_guard<std::mutex> lk(g_whit_mu);
    g_whit_cache.emplace(key, w);
    return w;
}

}  // namespace

QuadSpaceLocal kernel_space(const KernelScenario& sc, int64_t v, const Q& u) {
    return QuadSpaceLocal::from_discriminant(sc.disc, v, -local_invariant_c(sc, v) * u);
}

bool locally_represented(const KernelScenario& sc, int64_t v, const Q& a, const Q& u) {
    if (a == 0 || u == 0) fail(ErrorKind::InvalidInput, "a and u must be nonzero");
    return hilbert_symbol(-a / (local_invariant_c(sc, v) * u), Q(sc.disc), v) == 1;
}

std::optional<Witness> incoherence_witness(const KernelScenario& sc, const Q& a, const Q& u, int64_t prime_bound) {
    if (a == 0 || u == 0) fail(ErrorKind::InvalidInput, "a and u must be nonzero");
    std::vector<int64_t> ps = support_primes(sc, a, u);
    if (ps.back() > prime_bound)
        fail(ErrorKind::InvalidInput, "BoundTooSmall: prime bound must cover " + std::to_string(ps.back()));
    for (int64_t v : ps)
        if (!locally_represented(sc, v, a, u)) return Witness{false, v};
    if (a / u < 0) return Witness{true, 0};
    return std::nullopt;
}

CycNum eisenstein_coefficient(const KernelScenario& sc, const Q& a2, const Q& u) {
    if (a2 <= 0) fail(ErrorKind::InvalidInput, "Eisenstein coefficient index must be positive");
    if (u * a2 < 0) return CycNum();
    CycNum val(2);
    for (int64_t v : support_primes(sc, a2, u)) {
        if (v == sc.p) {
            val *= whittaker_p_standard(v, a2, u, CycNum(sc.chi_F_minus1));
            continue;
        }
        QuadSpaceLocal s = kernel_space(sc, v, u);
        WhittakerPoly w = cached_whittaker(s, a2);
        const CycNum X = sc.X_at(v);
        if (w.l_factor_divided)
            val *= w.poly.eval(X);
        else
            val *= w.series.eval(X) / (CycNum(1) - X.scaled(Q(s.eta, v)));
        if (val.is_zero()) break;
    }
    return val;
}

KernelCoefficient kernel_coefficient(const KernelScenario& sc, const Q& a, Budget* budget) {
    KernelCoefficient out;
    if (sc.class_number < 1) fail(ErrorKind::InvalidInput, "class number must be positive");
    if (!is_prime(sc.p)) fail(ErrorKind::InvalidInput, "p must be prime");
    if (a == 0) {
        out.constant_term_flagged = true;
        return out;
    }
    if (a < 0 || a.get_den() != 1) fail(ErrorKind::InvalidInput, "kernel index must be a positive integer");
    const bool p_splits = sc.disc % sc.p != 0 &&
                          (sc.p != 2 ? legendre(pmod(sc.disc, sc.p), sc.p) == 1 : pmod(sc.disc, 8) == 1);
    const Q c_U = sc.c_const / Q(sc.class_number);
    const int64_t A = a.get_num().get_si();
    for (const Q& u : sc.u_range) {
        for (int64_t a1 = 0; a1 <= A; ++a1) {
            Z th = theta_rep_number(sc.lattice, Q(a1), u, budget);
            if (th == 0) continue;
            KernelTerm t{u, Q(a1), Q(A - a1), th, CycNum(), ""};
            if (a1 == A) {
                // constant term of the Eisenstein series carries L^(p)(0, eta) = 0 at the split p
                if (!p_splits) fail(ErrorKind::NotImplemented, "constant term needs p split in E");
                t.note = "constant term: L^(p)(0, eta) = 0";
            } else {
                t.eis = eisenstein_coefficient(sc, Q(A - a1), u);
            }
            out.value += t.eis * CycNum(Q(th, Z(1)) * c_U);
            out.terms.push_back(t);
        }
    }
    return out;
}

}  // namespace pgz
