#include "pgz/local.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>

namespace pgz {

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

int64_t ipow(int64_t b, int e) {
    if (e < 0) fail(ErrorKind::InvalidInput, "negative exponent in ipow");
    int64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (__builtin_mul_overflow(r, b, &r)) fail(ErrorKind::OrderTooLarge, "integer power overflow");
    }
    return r;
}

int64_t pmod(int64_t a, int64_t m) {
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

int64_t mod_pow(int64_t b, int64_t e, int64_t m) {
    if (m == 1) return 0;
    __int128 r = 1, x = pmod(b, m);
    while (e > 0) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<int64_t>(r);
}

int64_t mod_inv(int64_t a, int64_t m) {
    if (m == 1) return 0;
    int64_t old_r = pmod(a, m), r = m, old_s = 1, s = 0;
    while (r != 0) {
        int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    }
    if (old_r != 1) fail(ErrorKind::DivisionByZero, "not invertible mod " + std::to_string(m));
    return pmod(old_s, m);
}

int vp(const Z& x, int64_t p) {
    if (x == 0) fail(ErrorKind::InvalidInput, "valuation of zero");
    Z y = x;
    int v = 0;
    while (mpz_divisible_ui_p(y.get_mpz_t(), static_cast<unsigned long>(p))) {
        y /= p;
        ++v;
    }
    return v;
}

int vp(const Q& x0, int64_t p) {
    Q x = x0;
    x.canonicalize();
    return vp(Z(x.get_num()), p) - vp(Z(x.get_den()), p);
}

Z unit_part(const Q& x0, int64_t p, int64_t modulus) {
    Q x = x0;
    x.canonicalize();
    int v = vp(x, p);
    Z num = x.get_num(), den = x.get_den();
    for (int i = 0; i < v; ++i) num /= p;
    for (int i = 0; i < -v; ++i) den /= p;
    Z m(static_cast<long>(modulus));
    Z dinv;
    if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0 && modulus != 1)
        fail(ErrorKind::Internal, "unit part not invertible");
    Z r = (num * dinv) % m;
    if (r < 0) r += m;
    return r;
}

int legendre(int64_t a, int64_t p) {
    int64_t r = mod_pow(pmod(a, p), (p - 1) / 2, p);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

int hilbert_symbol(const Q& a, const Q& b, int64_t p) {
    if (a == 0 || b == 0) fail(ErrorKind::InvalidInput, "Hilbert symbol of zero");
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
    int al = vp(a, p), be = vp(b, p);
    if (p == 2) {
        int64_t u = unit_part(a, 2, 8).get_si(), v = unit_part(b, 2, 8).get_si();
        auto eps = [](int64_t w) { return ((w - 1) / 2) & 1; };
        auto om = [](int64_t w) { return ((w * w - 1) / 8) & 1; };
        int e = static_cast<int>(eps(u) * eps(v) + al * om(v) + be * om(u));
        return (e & 1) ? -1 : 1;
    }
    int64_t u = unit_part(a, p, p).get_si(), v = unit_part(b, p, p).get_si();
    int sign = ((static_cast<int64_t>(al) * be * ((p - 1) / 2)) & 1) ? -1 : 1;
    int lu = (be & 1) ? legendre(u, p) : 1;
    int lv = (al & 1) ? legendre(v, p) : 1;
    return sign * lu * lv;
}

int64_t smallest_primitive_root(int64_t p) {
    if (p == 2) return 1;
    std::vector<int64_t> fs;
    int64_t m = p - 1;
    for (int64_t d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            fs.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) fs.push_back(m);
    for (int64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (int64_t f : fs)
            if (mod_pow(g, (p - 1) / f, p) == 1) ok = false;
        if (ok) return g;
    }
    fail(ErrorKind::Internal, "no primitive root");
}

const char* quad_type_name(QuadType t) {
    switch (t) {
    case QuadType::split: return "split";
    case QuadType::inert: return "inert";
    case QuadType::ramified: return "ramified";
    }
    return "?";
}

QuadType quad_type_from(const std::string& s) {
    if (s == "split") return QuadType::split;
    if (s == "inert") return QuadType::inert;
    if (s == "ramified") return QuadType::ramified;
    fail(ErrorKind::InvalidInput, "unknown quad_type " + s);
}

// ---- LocalField ----

LocalField LocalField::Qp(int64_t p) {
    if (!is_prime(p)) fail(ErrorKind::InvalidInput, std::to_string(p) + " is not prime");
    LocalField K;
    K.p = p;
    K.kind = FieldKind::Qp;
    return K;
}

LocalField LocalField::unram(int64_t p) {
    if (!is_prime(p)) fail(ErrorKind::InvalidInput, std::to_string(p) + " is not prime");
    LocalField K;
    K.p = p;
    K.kind = FieldKind::Unram;
    K.f = 2;
    if (p == 2) {
        K.s = -1;
        K.t = -1;
    } else {
        int64_t n = 2;
        while (legendre(n, p) != -1) ++n;
        K.s = n;
        K.t = 0;
    }
    return K;
}

LocalField LocalField::ram(int64_t p, int64_t u0) {
    if (!is_prime(p) || p == 2) fail(ErrorKind::InvalidInput, "ramified field needs an odd prime");
    if (pmod(u0, p) == 0) fail(ErrorKind::InvalidInput, "u0 must be a p-adic unit");
    LocalField K;
    K.p = p;
    K.kind = FieldKind::Ram;
    K.u0 = u0;
    K.s = p * u0;
    K.t = 0;
    K.e = 2;
    K.delta = 1;
    return K;
}

int64_t LocalField::modA(int m) const {
    if (kind == FieldKind::Ram) return ipow(p, (m + 1) / 2);
    return ipow(p, m);
}

int64_t LocalField::modB(int m) const {
    switch (kind) {
    case FieldKind::Qp: return 1;
    case FieldKind::Unram: return ipow(p, m);
    case FieldKind::Ram: return ipow(p, m / 2);
    }
    return 1;
}

std::string LocalField::name() const {
    std::ostringstream os;
    switch (kind) {
    case FieldKind::Qp: os << "Q" << p; break;
    case FieldKind::Unram: os << "Q" << p << "^2"; break;
    case FieldKind::Ram: os << "Q" << p << "(sqrt(" << p * u0 << "))"; break;
    }
    return os.str();
}

Residue res_reduce(const LocalField& K, int m, Residue x) { return {pmod(x.a, K.modA(m)), pmod(x.b, K.modB(m))}; }

Residue res_mul(const LocalField& K, int m, Residue x, Residue y) {
    int64_t A = K.modA(m), B = K.modB(m);
    if (K.kind == FieldKind::Qp) return {static_cast<int64_t>(static_cast<__int128>(x.a) * y.a % A), 0};
    __int128 bb = static_cast<__int128>(x.b) * y.b;
    __int128 a = static_cast<__int128>(x.a) * y.a + bb * K.s;
    __int128 b = static_cast<__int128>(x.a) * y.b + static_cast<__int128>(x.b) * y.a + bb * K.t;
    int64_t ra = static_cast<int64_t>(a % A), rb = static_cast<int64_t>(b % B);
    return {ra < 0 ? ra + A : ra, rb < 0 ? rb + B : rb};
}

Residue res_pow(const LocalField& K, int m, Residue x, uint64_t k) {
    Residue r = res_reduce(K, m, {1, 0});
    Residue b = res_reduce(K, m, x);
    while (k) {
        if (k & 1) r = res_mul(K, m, r, b);
        k >>= 1;
        if (k) b = res_mul(K, m, b, b);
    }
    return r;
}

bool res_is_unit(const LocalField& K, Residue x) {
    if (K.kind == FieldKind::Unram) return pmod(x.a, K.p) != 0 || pmod(x.b, K.p) != 0;
    return pmod(x.a, K.p) != 0;
}

Residue res_one_plus_unif(const LocalField& K, int m, int k) {
    if (K.kind != FieldKind::Ram) return res_reduce(K, m, {1 + ipow(K.p, k), 0});
    int64_t pu = K.p * K.u0;
    if (k % 2 == 0) {
        int64_t A = K.modA(m);
        return res_reduce(K, m, {1 + mod_pow(pu, k / 2, A), 0});
    }
    int64_t B = K.modB(m);
    return res_reduce(K, m, {1, B == 1 ? 0 : mod_pow(pu, (k - 1) / 2, B)});
}

namespace {
int v_int(int64_t x, int64_t p, int cap) {
    if (x == 0) return cap;
    int v = 0;
    while (x % p == 0 && v < cap) {
        x /= p;
        ++v;
    }
    return v;
}
}  // namespace

int res_valuation(const LocalField& K, int m, Residue x) {
    x = res_reduce(K, m, x);
    switch (K.kind) {
    case FieldKind::Qp: return v_int(x.a, K.p, m);
    case FieldKind::Unram: return std::min(v_int(x.a, K.p, m), v_int(x.b, K.p, m));
    case FieldKind::Ram: {
        int va = x.a == 0 ? m : 2 * v_int(x.a, K.p, m);
        int vb = x.b == 0 ? m : 2 * v_int(x.b, K.p, m) + 1;
        return std::min({va, vb, m});
    }
    }
    return m;
}

int64_t res_norm(const LocalField& K, Residue x, int64_t modulus) {
    __int128 a = x.a, b = x.b;
    __int128 r;
    switch (K.kind) {
    case FieldKind::Qp: r = a; break;
    case FieldKind::Unram: r = a * a + a * b * K.t - b * b * K.s; break;
    default: r = a * a - b * b * K.s; break;
    }
    int64_t v = static_cast<int64_t>(r % modulus);
    return v < 0 ? v + modulus : v;
}

PAdicCoset coset_of_rational(const LocalField& K, const Q& x, int N) {
    if (x == 0) fail(ErrorKind::InvalidInput, "zero has no coset");
    PAdicCoset c;
    c.N = N;
    int v = vp(x, K.p);
    if (K.kind == FieldKind::Ram) {
        // p^v = theta^{2v} u0^{-v}
        int64_t A = K.modA(N);
        int64_t w = unit_part(x, K.p, A).get_si();
        int64_t u0i = mod_pow(mod_inv(K.u0, A), v >= 0 ? v : 0, A);
        if (v < 0) u0i = mod_pow(K.u0, -v, A);
        c.n = 2 * v;
        c.u = res_reduce(K, N, {static_cast<int64_t>(static_cast<__int128>(w) * u0i % A), 0});
        return c;
    }
    c.n = v;
    c.u = res_reduce(K, N, {unit_part(x, K.p, K.modA(N)).get_si(), 0});
    return c;
}

PAdicCoset coset_mul(const LocalField& K, const PAdicCoset& x, const PAdicCoset& y) {
    PAdicCoset r;
    r.N = std::min(x.N, y.N);
    r.n = x.n + y.n;
    r.u = res_mul(K, r.N, res_reduce(K, r.N, x.u), res_reduce(K, r.N, y.u));
    return r;
}

// ---- UnitGroup ----

std::shared_ptr<const UnitGroup> UnitGroup::get(const LocalField& K, int m) {
    static std::mutex mu;
    static std::map<std::tuple<int64_t, int, int64_t, int64_t, int>, std::shared_ptr<const UnitGroup>> cache;
    auto key = std::make_tuple(K.p, static_cast<int>(K.kind), K.s, K.t, m);
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto g = std::make_shared<const UnitGroup>(K, m);
    std::lock_guard<std::mutex> lk(mu);
    return cache.emplace(key, g).first->second;
}

int32_t UnitGroup::pos_of(Residue r) const {
    if (r.a < 0 || r.a >= A_ || r.b < 0 || r.b >= B_) r = res_reduce(K_, m_, r);
    return index_[static_cast<std::size_t>(r.a + A_ * r.b)];
}

uint64_t UnitGroup::exponent() const {
    uint64_t e = 1;
    for (uint64_t o : orders_) e = std::lcm(e, o);
    return e;
}

bool UnitGroup::is_one_mod(std::size_t pos, int k) const {
    if (k <= 0) return true;
    Residue r = units_[pos];
    Residue d{r.a - 1, r.b};
    return res_valuation(K_, m_, d) >= k;
}

UnitGroup::UnitGroup(const LocalField& K, int m) : K_(K), m_(m) {
    if (m < 1) fail(ErrorKind::InvalidInput, "unit group level must be >= 1");
    A_ = K.modA(m);
    B_ = K.modB(m);
    if (A_ * B_ > (int64_t(1) << 26)) fail(ErrorKind::BudgetExceeded, "unit group too large at level " + std::to_string(m));
    index_.assign(static_cast<std::size_t>(A_ * B_), -1);
    for (int64_t b = 0; b < B_; ++b)
        for (int64_t a = 0; a < A_; ++a) {
            Residue r{a, b};
            if (res_is_unit(K, r)) {
                index_[static_cast<std::size_t>(a + A_ * b)] = static_cast<int32_t>(units_.size());
                units_.push_back(r);
            }
        }
    const int64_t p = K.p;
    const int64_t q = K.q();
    auto mul = [&](std::size_t i, std::size_t j) {
        return static_cast<std::size_t>(pos_of(res_mul(K, m, units_[i], units_[j])));
    };
    auto powp = [&](std::size_t i, uint64_t k) {
        return static_cast<std::size_t>(pos_of(res_pow(K, m, units_[i], k)));
    };
    auto red1 = [&](Residue r) { return pmod(r.a, p) + p * (K.kind == FieldKind::Unram ? pmod(r.b, p) : 0); };
    const std::size_t one = static_cast<std::size_t>(pos_of({1, 0}));

    // Teichmuller part
    std::vector<int64_t> tmap(static_cast<std::size_t>(p * p), -1);
    std::vector<std::size_t> tpows;
    if (q > 2) {
        Residue g{0, 0};
        if (K.kind == FieldKind::Unram) {
            LocalField k1 = K;
            bool found = false;
            for (int64_t b = 0; b < p && !found; ++b)
                for (int64_t a = 0; a < p && !found; ++a) {
                    Residue r{a, b};
                    if (!res_is_unit(K, r)) continue;
                    int64_t ord = 1;
                    Residue x = r;
                    while (!(res_reduce(k1, 1, x) == Residue{1, 0})) {
                        x = res_mul(k1, 1, x, r);
                        ++ord;
                    }
                    if (ord == q - 1) {
                        g = r;
                        found = true;
                    }
                }
        } else {
            g = {smallest_primitive_root(p), 0};
        }
        uint64_t qm = 1;
        for (int i = 0; i < m; ++i) qm *= static_cast<uint64_t>(q);
        Residue w = res_pow(K, m, g, qm);
        std::size_t wp = static_cast<std::size_t>(pos_of(w));
        std::size_t cur = one;
        for (int64_t j = 0; j < q - 1; ++j) {
            tpows.push_back(cur);
            tmap[static_cast<std::size_t>(red1(units_[cur]))] = j;
            cur = mul(cur, wp);
        }
        if (cur != one) fail(ErrorKind::Internal, "Teichmuller lift has wrong order");
        basis_.push_back(w);
        orders_.push_back(static_cast<uint64_t>(q - 1));
    } else {
        tmap[1] = 0;
        tpows.push_back(one);
    }

    // one-units: list and a greedy basis
    std::vector<std::size_t> P;
    for (std::size_t i = 0; i < units_.size(); ++i)
        if (red1(units_[i]) == 1) P.push_back(i);
    constexpr std::size_t S = 8;
    std::vector<int32_t> hidx(units_.size(), -1);
    std::vector<std::size_t> hpos{one};
    std::vector<uint32_t> hexp(S, 0);
    hidx[one] = 0;
    std::vector<std::size_t> pbasis;
    std::vector<uint64_t> porders;
    auto add_generator = [&](std::size_t x, uint64_t o) {
        std::size_t r = pbasis.size();
        if (r >= S) fail(ErrorKind::Internal, "one-unit rank too large");
        std::size_t before = hpos.size();
        std::vector<std::size_t> xp{one};
        for (uint64_t j = 1; j < o; ++j) xp.push_back(mul(xp.back(), x));
        for (uint64_t j = 1; j < o; ++j)
            for (std::size_t h = 0; h < before; ++h) {
                std::size_t y = mul(hpos[h], xp[j]);
                if (hidx[y] >= 0) fail(ErrorKind::Internal, "one-unit basis not independent");
                hidx[y] = static_cast<int32_t>(hpos.size());
                hpos.push_back(y);
                for (std::size_t k = 0; k < S; ++k) hexp.push_back(hexp[h * S + k]);
                hexp[(hpos.size() - 1) * S + r] = static_cast<uint32_t>(j);
            }
        pbasis.push_back(x);
        porders.push_back(o);
    };
    std::vector<std::pair<Residue, uint64_t>> preset;
    if (K.kind == FieldKind::Qp) {
        if (p == 2) {
            if (m >= 2) preset.push_back({res_reduce(K, m, {-1, 0}), 2});
            if (m >= 3) preset.push_back({res_reduce(K, m, {5, 0}), static_cast<uint64_t>(ipow(2, m - 2))});
        } else if (m >= 2) {
            preset.push_back({res_reduce(K, m, {1 + p, 0}), static_cast<uint64_t>(ipow(p, m - 1))});
        }
    }
    if (!preset.empty()) {
        for (auto& [r, o] : preset) add_generator(static_cast<std::size_t>(pos_of(r)), o);
    } else {
        while (hpos.size() < P.size()) {
            std::size_t best = 0;
            uint64_t best_o = 0;
            for (std::size_t x : P) {
                if (hidx[x] >= 0) continue;
                uint64_t o = 1;
                std::size_t y = x;
                while (hidx[y] < 0) {
                    y = powp(y, static_cast<uint64_t>(p));
                    o *= static_cast<uint64_t>(p);
                }
                if (o > best_o) {
                    best_o = o;
                    best = x;
                }
            }
            // adjust so that the order equals the image order
            std::size_t y = powp(best, best_o);
            const uint32_t* ke = &hexp[static_cast<std::size_t>(hidx[y]) * S];
            std::size_t x = best;
            for (std::size_t i = 0; i < pbasis.size(); ++i) {
                if (ke[i] % best_o != 0) fail(ErrorKind::Internal, "greedy basis divisibility");
                uint64_t k = ke[i] / best_o;
                if (k) x = mul(x, powp(pbasis[i], porders[i] - k % porders[i]));
            }
            if (powp(x, best_o) != one) fail(ErrorKind::Internal, "adjusted generator has wrong order");
            add_generator(x, best_o);
        }
    }
    if (hpos.size() != P.size()) fail(ErrorKind::Internal, "one-unit basis does not span");
    for (std::size_t i = 0; i < pbasis.size(); ++i) {
        basis_.push_back(units_[pbasis[i]]);
        orders_.push_back(porders[i]);
    }
    // full discrete-log table
    const std::size_t R = basis_.size();
    const bool has_t = q > 2;
    exps_.assign(units_.size() * R, 0);
    for (std::size_t i = 0; i < units_.size(); ++i) {
        int64_t j = tmap[static_cast<std::size_t>(red1(units_[i]))];
        if (j < 0) fail(ErrorKind::Internal, "residue outside Teichmuller table");
        std::size_t inv_t = tpows[static_cast<std::size_t>((q - 1 - j) % (q - 1 > 0 ? q - 1 : 1))];
        std::size_t u = mul(i, inv_t);
        int32_t h = hidx[u];
        if (h < 0) fail(ErrorKind::Internal, "one-unit outside span");
        std::size_t off = 0;
        if (has_t) {
            exps_[i * R] = static_cast<uint32_t>(j);
            off = 1;
        }
        for (std::size_t k = 0; k < pbasis.size(); ++k) exps_[i * R + off + k] = hexp[static_cast<std::size_t>(h) * S + k];
    }
}

// ---- MulChar ----

MulChar MulChar::trivial(const LocalField& K) { return unramified(K, Mono::one()); }

MulChar MulChar::unramified(const LocalField& K, const Mono& at_unif) {
    MulChar c;
    c.K_ = K;
    c.c_ = 0;
    c.at_unif_ = at_unif;
    if (at_unif.is_zero()) fail(ErrorKind::InvalidCharacter, "character value at uniformizer is zero");
    return c;
}

void MulChar::build_table() {
    M_ = 1;
    for (const auto& g : gen_) M_ = std::lcm(M_, static_cast<uint64_t>(g.get_den().get_ui()));
    table_.assign(G_->size(), 0);
    const std::size_t R = G_->rank();
    std::vector<uint64_t> w(R);
    for (std::size_t i = 0; i < R; ++i) w[i] = (Q(gen_[i] * Q(static_cast<unsigned long>(M_)))).get_num().get_ui();
    for (std::size_t pos = 0; pos < G_->size(); ++pos) {
        const uint32_t* e = G_->exps(pos);
        unsigned __int128 s = 0;
        for (std::size_t i = 0; i < R; ++i) s += static_cast<unsigned __int128>(e[i]) * w[i];
        table_[pos] = static_cast<uint32_t>(s % M_);
    }
}

MulChar MulChar::from_gen_values(const LocalField& K, int c, const std::vector<Q>& gen_values, const Mono& at_unif) {
    if (c == 0) {
        if (!gen_values.empty())
            for (const auto& g : gen_values)
                if (g.get_den() != 1 && g != 0) fail(ErrorKind::InvalidCharacter, "unramified character with unit values");
        return unramified(K, at_unif);
    }
    MulChar ch;
    ch.K_ = K;
    ch.c_ = c;
    ch.at_unif_ = at_unif;
    if (at_unif.is_zero()) fail(ErrorKind::InvalidCharacter, "character value at uniformizer is zero");
    ch.G_ = UnitGroup::get(K, c);
    if (gen_values.size() != ch.G_->rank())
        fail(ErrorKind::InvalidCharacter, "expected " + std::to_string(ch.G_->rank()) + " generator values");
    for (std::size_t i = 0; i < gen_values.size(); ++i) {
        Q g = gen_values[i];
        Z fl;
        mpz_fdiv_q(fl.get_mpz_t(), g.get_num_mpz_t(), g.get_den_mpz_t());
        g -= Q(fl);
        g.canonicalize();
        Q rel = g * Q(static_cast<unsigned long>(ch.G_->orders()[i]));
        if (rel.get_den() != 1) fail(ErrorKind::InvalidCharacter, "generator relation violated");
        ch.gen_.push_back(g);
    }
    ch.build_table();
    // conductor minimality: nontrivial on 1 + varpi^{c-1}
    bool nontrivial = false;
    for (std::size_t pos = 0; pos < ch.G_->size() && !nontrivial; ++pos)
        if (ch.table_[pos] != 0 && ch.G_->is_one_mod(pos, c - 1)) nontrivial = true;
    if (!nontrivial) fail(ErrorKind::InvalidCharacter, "conductor is not minimal");
    return ch;
}

Q MulChar::unit_value(Residue u, int N) const {
    if (c_ == 0) return 0;
    if (N < c_) fail(ErrorKind::InsufficientPrecision, "precision " + std::to_string(N) + " below conductor " + std::to_string(c_));
    int32_t pos = G_->pos_of(res_reduce(K_, c_, u));
    if (pos < 0) fail(ErrorKind::InvalidInput, "not a unit");
    Q r(static_cast<unsigned long>(table_[static_cast<std::size_t>(pos)]), static_cast<unsigned long>(M_));
    r.canonicalize();
    return r;
}

uint32_t MulChar::unit_exp(Residue u, int N, uint64_t L) const {
    if (c_ == 0) return 0;
    if (N < c_) fail(ErrorKind::InsufficientPrecision, "precision below conductor");
    int32_t pos = G_->pos_of(res_reduce(K_, c_, u));
    return static_cast<uint32_t>(static_cast<uint64_t>(table_[static_cast<std::size_t>(pos)]) * (L / M_));
}

Mono MulChar::eval(const PAdicCoset& x) const { return at_unif_.pow(x.n) * Mono(1, unit_value(x.u, x.N)); }

namespace {

MulChar from_function(const LocalField& K, int cmax, const std::function<Q(Residue)>& fn, const Mono& at_unif) {
    if (cmax == 0) return MulChar::unramified(K, at_unif);
    auto G = UnitGroup::get(K, cmax);
    int c = 0;
    for (int k = cmax; k >= 1; --k) {
        bool nontriv = false;
        for (std::size_t pos = 0; pos < G->size() && !nontriv; ++pos)
            if (G->is_one_mod(pos, k - 1) && fn(G->elem(pos)) != 0) nontriv = true;
        if (nontriv) {
            c = k;
            break;
        }
    }
    if (c == 0) return MulChar::unramified(K, at_unif);
    auto Gc = UnitGroup::get(K, c);
    std::vector<Q> gens;
    for (const auto& b : Gc->basis()) gens.push_back(fn(b));
    return MulChar::from_gen_values(K, c, gens, at_unif);
}

}  // namespace

MulChar MulChar::operator*(const MulChar& o) const {
    if (!(K_ == o.K_)) fail(ErrorKind::InvalidInput, "characters on different fields");
    int cm = std::max(c_, o.c_);
    auto fn = [&](Residue r) {
        Q v = unit_value(r, cm) + o.unit_value(r, cm);
        Z fl;
        mpz_fdiv_q(fl.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
        v -= Q(fl);
        v.canonicalize();
        return v;
    };
    return from_function(K_, cm, fn, at_unif_ * o.at_unif_);
}

MulChar MulChar::inv() const {
    if (c_ == 0) return unramified(K_, at_unif_.inv());
    std::vector<Q> g;
    for (const auto& x : gen_) g.push_back(-x);
    return from_gen_values(K_, c_, g, at_unif_.inv());
}

MulChar MulChar::with_uniformizer(const Mono& m) const {
    MulChar r = *this;
    r.at_unif_ = m;
    return r;
}

int MulChar::sign() const {
    Q v = unit_value(res_reduce(K_, std::max(c_, 1), {-1, 0}), std::max(c_, 1));
    if (v == 0) return 1;
    if (v == Q(1, 2)) return -1;
    fail(ErrorKind::Internal, "chi(-1) is not a sign");
}

bool MulChar::operator==(const MulChar& o) const {
    return K_ == o.K_ && c_ == o.c_ && at_unif_ == o.at_unif_ && gen_ == o.gen_;
}

std::string MulChar::str() const {
    std::ostringstream os;
    os << "chi[" << K_.name() << ", c=" << c_ << ", unif=" << at_unif_.str();
    if (!gen_.empty()) {
        os << ", gens=(";
        for (std::size_t i = 0; i < gen_.size(); ++i) os << (i ? "," : "") << gen_[i];
        os << ")";
    }
    os << "]";
    return os.str();
}

bool sample_character(const LocalField& K, int c, uint64_t seed, const Mono& at_unif, MulChar& out) {
    if (c == 0) {
        out = MulChar::unramified(K, at_unif);
        return true;
    }
    auto G = UnitGroup::get(K, c);
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 400; ++attempt) {
        std::vector<Q> g;
        for (uint64_t o : G->orders()) {
            Q v(static_cast<unsigned long>(rng() % o), static_cast<unsigned long>(o));
            v.canonicalize();
            g.push_back(v);
        }
        try {
            out = MulChar::from_gen_values(K, c, g, at_unif);
            return true;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::InvalidCharacter) throw;
        }
    }
    return false;
}

std::vector<MulChar> all_characters(const LocalField& K, int c, const Mono& at_unif, std::size_t max_count) {
    std::vector<MulChar> out;
    if (c == 0) {
        out.push_back(MulChar::unramified(K, at_unif));
        return out;
    }
    auto G = UnitGroup::get(K, c);
    const auto& ord = G->orders();
    std::vector<uint64_t> idx(ord.size(), 0);
    while (out.size() < max_count) {
        std::vector<Q> g;
        for (std::size_t i = 0; i < ord.size(); ++i) {
            Q v(static_cast<unsigned long>(idx[i]), static_cast<unsigned long>(ord[i]));
            v.canonicalize();
            g.push_back(v);
        }
        try {
            out.push_back(MulChar::from_gen_values(K, c, g, at_unif));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::InvalidCharacter) throw;
        }
        std::size_t i = 0;
        while (i < ord.size()) {
            if (++idx[i] < ord[i]) break;
            idx[i] = 0;
            ++i;
        }
        if (i == ord.size()) break;
    }
    return out;
}

// ---- AddChar ----

int64_t AddChar::exponent_mod(const LocalField& K, int n, Residue u, int N, int& k) const {
    if (n + N < -K.delta)
        fail(ErrorKind::InsufficientPrecision, "additive character needs precision " + std::to_string(-K.delta - n));
    const int64_t p = K.p;
    switch (K.kind) {
    case FieldKind::Qp:
    case FieldKind::Unram: {
        if (n >= 0) {
            k = 0;
            return 0;
        }
        k = -n;
        int64_t mod = ipow(p, k);
        __int128 tr = static_cast<__int128>(2) * u.a + static_cast<__int128>(K.t) * u.b;
        if (K.kind == FieldKind::Qp) tr = u.a;
        __int128 w = (tr % mod) * pmod(s, mod) % mod;
        int64_t r = static_cast<int64_t>(w);
        return r < 0 ? r + mod : r;
    }
    case FieldKind::Ram: {
        int j = n >= 0 ? n / 2 : -((-n + 1) / 2);
        int eps = n - 2 * j;
        if (j >= 0) {
            k = 0;
            return 0;
        }
        k = -j;
        int64_t mod = ipow(p, k);
        __int128 A = eps == 0 ? static_cast<__int128>(u.a) : static_cast<__int128>(u.b) * p % mod * pmod(K.u0, mod);
        int64_t u0j = mod_pow(mod_inv(K.u0, mod), k, mod);
        __int128 w = (A % mod) * 2 % mod * u0j % mod * pmod(s, mod) % mod;
        int64_t r = static_cast<int64_t>(w);
        return r < 0 ? r + mod : r;
    }
    }
    return 0;
}

Q AddChar::eval_exponent(const LocalField& K, const PAdicCoset& x) const {
    int k = 0;
    int64_t w = exponent_mod(K, x.n, x.u, x.N, k);
    if (k == 0) return 0;
    Q r(static_cast<long>(w), static_cast<long>(ipow(K.p, k)));
    r.canonicalize();
    return r;
}

CycNum AddChar::eval(const LocalField& K, const PAdicCoset& x) const { return Mono(1, eval_exponent(K, x)).to_cyc(); }

// ---- LocalDatum ----

LocalDatum LocalDatum::make(int64_t p, QuadType type, int64_t u0) {
    if (!is_prime(p)) fail(ErrorKind::InvalidInput, std::to_string(p) + " is not prime");
    LocalDatum d;
    d.p = p;
    d.type = type;
    d.u0 = u0;
    switch (type) {
    case QuadType::split: break;
    case QuadType::inert: d.f = 2; break;
    case QuadType::ramified:
        if (p == 2) fail(ErrorKind::InvalidInput, "ramified p = 2 is not supported");
        if (pmod(u0, p) == 0) fail(ErrorKind::InvalidInput, "u0 must be a unit");
        d.e = 2;
        d.v_D = 1;
        break;
    }
    return d;
}

LocalField LocalDatum::Ew() const {
    switch (type) {
    case QuadType::split: return LocalField::Qp(p);
    case QuadType::inert: return LocalField::unram(p);
    case QuadType::ramified: return LocalField::ram(p, u0);
    }
    return LocalField::Qp(p);
}

std::string LocalDatum::str() const {
    std::ostringstream os;
    os << "p=" << p << " " << quad_type_name(type);
    if (type == QuadType::ramified) os << " u0=" << u0;
    return os.str();
}

std::vector<std::pair<PAdicCoset, Q>> annulus_cosets(const LocalField& K, int n, int N, bool additive) {
    if (N < 1) fail(ErrorKind::InvalidInput, "precision must be >= 1");
    auto G = UnitGroup::get(K, N);
    std::vector<std::pair<PAdicCoset, Q>> out;
    Q w;
    if (additive) {
        // q^{-n} q^{-N}
        Q qn = 1;
        for (int i = 0; i < std::abs(n) + 0; ++i) qn *= K.q();
        if (n >= 0) qn = Q(1) / qn;
        Q qN = 1;
        for (int i = 0; i < N; ++i) qN *= K.q();
        w = qn / qN;
    } else {
        w = Q(1, static_cast<unsigned long>(G->size()));
    }
    w.canonicalize();
    for (std::size_t i = 0; i < G->size(); ++i) out.push_back({PAdicCoset{n, G->elem(i), N}, w});
    return out;
}

const char* measure_name(Measure m) {
    switch (m) {
    case Measure::multiplicative: return "multiplicative";
    case Measure::additive_unit: return "additive_unit";
    case Measure::additive_self_dual: return "additive_self_dual";
    case Measure::additive_discriminant: return "additive_discriminant";
    }
    return "?";
}

CycNum haar_normalization(const LocalField& K, Measure m) {
    if (K.kind != FieldKind::Ram) return CycNum(1);
    switch (m) {
    case Measure::additive_self_dual: return CycNum::sqrt_of(Q(1, static_cast<unsigned long>(K.p)));
    case Measure::additive_discriminant: return CycNum(Q(1, static_cast<unsigned long>(K.p)));
    default: return CycNum(1);
    }
}

CycNum eval_add(const AddChar& psi, const LocalField& K, const PAdicCoset& x) { return psi.eval(K, x); }
CycNum eval_mul(const MulChar& chi, const PAdicCoset& x) { return chi.eval_cyc(x); }

int eta_sign(const LocalDatum& d, const PAdicCoset& x) {
    switch (d.type) {
    case QuadType::split: return 1;
    case QuadType::inert: return (x.n % 2 == 0) ? 1 : -1;
    case QuadType::ramified: {
        if (x.N < 1) fail(ErrorKind::InsufficientPrecision, "eta needs precision 1");
        int64_t p = d.p;
        int64_t w = pmod(x.u.a, p);
        int sign = ((static_cast<int64_t>(x.n) * ((p - 1) / 2)) & 1) ? -1 : 1;
        int lw = legendre(w, p);
        int lu = (x.n % 2 != 0) ? legendre(d.u0, p) : 1;
        return sign * lw * lu;
    }
    }
    return 1;
}

CycNum eta_value(const LocalDatum& d, const PAdicCoset& x) { return CycNum(static_cast<long>(eta_sign(d, x))); }

CycNum euler_L(const LocalDatum& d, LKind which, int s_twice, const Mono& xi, bool xi_ramified) {
    // p^{-s} for s = s_twice/2, as a CycNum
    auto qpow = [](int64_t qq, int st) {
        // qq^{-st/2}
        Q base = 1;
        int a = std::abs(st);
        for (int i = 0; i < a; ++i) base *= qq;
        if (st > 0) base = Q(1) / base;
        return CycNum::sqrt_of(base);
    };
    auto factor = [&](const CycNum& xiv, int64_t qq, int st) {
        CycNum den = CycNum(1) - xiv * qpow(qq, st);
        if (den.is_zero()) fail(ErrorKind::PoleAtEvaluationPoint, "Euler factor has a pole at s");
        return den.inv();
    };
    const int64_t p = d.p;
    int eta_unif = d.type == QuadType::split ? 1 : (d.type == QuadType::inert ? -1 : 0);
    switch (which) {
    case LKind::zeta_F: return factor(CycNum(1), p, s_twice);
    case LKind::zeta_E:
        switch (d.type) {
        case QuadType::split: return factor(CycNum(1), p, s_twice) * factor(CycNum(1), p, s_twice);
        case QuadType::inert: return factor(CycNum(1), p * p, s_twice);
        case QuadType::ramified: return factor(CycNum(1), p, s_twice);
        }
        break;
    case LKind::eta:
        if (eta_unif == 0) return CycNum(1);
        return factor(CycNum(static_cast<long>(eta_unif)), p, s_twice);
    case LKind::eta_chiF:
        if (eta_unif == 0 || xi_ramified) return CycNum(1);
        return factor(xi.to_cyc().scaled(eta_unif), p, s_twice);
    case LKind::adhoc:
        if (xi_ramified) return CycNum(1);
        return factor(xi.to_cyc(), p, s_twice);
    }
    return CycNum(1);
}

}  // namespace pgz
