#include "pgz/cyclo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "pgz/simd.hpp"

namespace pgz {

namespace {

thread_local uint64_t g_order_cap = 1000000;

constexpr int64_t kSafe = int64_t(1) << 62;

std::vector<uint64_t> prime_factors(uint64_t n) {
    std::vector<uint64_t> ps;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            ps.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

int mobius(uint64_t n) {
    int mu = 1;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

uint64_t lcm_checked(uint64_t a, uint64_t b) {
    uint64_t l = std::lcm(a, b);
    if (l > g_order_cap) fail(ErrorKind::OrderTooLarge, "lcm order " + std::to_string(l));
    return l;
}

bool fits(const Z& z) { return mpz_fits_slong_p(z.get_mpz_t()) && std::abs(z.get_si()) < kSafe; }

// Reduce an int64 polynomial of degree < n modulo Phi_n in place; false on possible overflow.
bool reduce_i64(uint64_t n, std::vector<int64_t>& P) {
    const auto& phi_poly = cyclotomic_poly(n);
    const std::size_t ph = phi_poly.size() - 1;
    if (P.size() <= ph) {
        P.resize(ph, 0);
        return true;
    }
    __int128 H = static_cast<__int128>(simd::max_abs_i64(phi_poly.data(), ph));
    __int128 B = static_cast<__int128>(simd::max_abs_i64(P.data(), P.size()));
    for (std::size_t i = P.size() - 1; i >= ph; --i) {
        int64_t c = P[i];
        if (c != 0) {
            __int128 ac = c < 0 ? -static_cast<__int128>(c) : c;
            B += ac * H;
            if (B >= kSafe) return false;
            simd::axpy_i64(P.data() + (i - ph), phi_poly.data(), -c, ph);
            P[i] = 0;
        }
        if (i == ph) break;
    }
    P.resize(ph);
    return true;
}

void reduce_z(uint64_t n, std::vector<Z>& P) {
    const auto& phi_poly = cyclotomic_poly(n);
    const std::size_t ph = phi_poly.size() - 1;
    if (P.size() > ph) {
        for (std::size_t i = P.size() - 1; i >= ph; --i) {
            if (P[i] != 0) {
                Z c = P[i];
                for (std::size_t k = 0; k < ph; ++k)
                    if (phi_poly[k] != 0) P[i - ph + k] -= c * phi_poly[k];
                P[i] = 0;
            }
            if (i == ph) break;
        }
    }
    P.resize(ph, 0);
}

// Reduce a polynomial of degree < n (already folded) modulo Phi_n.
std::vector<Z> reduce_poly(uint64_t n, std::vector<Z> P) {
    if (P.size() > n) {
        std::vector<Z> F(n, 0);
        for (std::size_t i = 0; i < P.size(); ++i) F[i % n] += P[i];
        P.swap(F);
    }
    bool small = std::all_of(P.begin(), P.end(), fits);
    if (small) {
        std::vector<int64_t> Pi(P.size());
        for (std::size_t i = 0; i < P.size(); ++i) Pi[i] = P[i].get_si();
        if (reduce_i64(n, Pi)) {
            std::vector<Z> out(Pi.size());
            for (std::size_t i = 0; i < Pi.size(); ++i) out[i] = Z(static_cast<long>(Pi[i]));
            return out;
        }
    }
    reduce_z(n, P);
    return P;
}

bool all_zero(const std::vector<Z>& v) {
    return std::all_of(v.begin(), v.end(), [](const Z& z) { return z == 0; });
}

// Convolution of two reduced vectors, then reduction.
std::vector<Z> mul_vec(uint64_t n, const std::vector<Z>& x, const std::vector<Z>& y) {
    if (all_zero(x) || all_zero(y)) return std::vector<Z>(euler_phi(n), 0);
    const std::size_t m = x.size();
    bool small = std::all_of(x.begin(), x.end(), fits) && std::all_of(y.begin(), y.end(), fits);
    if (small && m > 0) {
        std::vector<int64_t> xi(m), yi(m);
        for (std::size_t i = 0; i < m; ++i) {
            xi[i] = x[i].get_si();
            yi[i] = y[i].get_si();
        }
        __int128 bound = static_cast<__int128>(simd::max_abs_i64(xi.data(), m)) *
                         static_cast<__int128>(simd::max_abs_i64(yi.data(), m)) * static_cast<__int128>(m);
        if (bound < kSafe) {
            std::vector<int64_t> out(2 * m - 1, 0);
            for (std::size_t i = 0; i < m; ++i)
                if (xi[i] != 0) simd::axpy_i64(out.data() + i, yi.data(), xi[i], m);
            if (reduce_i64(n, out)) {
                std::vector<Z> r(out.size());
                for (std::size_t i = 0; i < out.size(); ++i) r[i] = Z(static_cast<long>(out[i]));
                return r;
            }
            std::vector<Z> r(out.size());
            for (std::size_t i = 0; i < out.size(); ++i) r[i] = Z(static_cast<long>(out[i]));
            reduce_z(n, r);
            return r;
        }
    }
    std::vector<Z> out(m == 0 ? 0 : 2 * m - 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < m; ++j)
            if (y[j] != 0) out[i + j] += x[i] * y[j];
    }
    reduce_z(n, out);
    return out;
}

std::vector<Z> lift_vec(const std::vector<Z>& v, uint64_t n, uint64_t m) {
    if (n == m) return v;
    uint64_t k = m / n;
    std::vector<Z> P(m, 0);
    for (std::size_t i = 0; i < v.size(); ++i) P[i * k] = v[i];
    return reduce_poly(m, std::move(P));
}

// zeta_{2m}^k for odd m as (sign, exponent mod m)
std::pair<int, uint64_t> halve_order(uint64_t k, uint64_t m) {
    uint64_t half = (m + 1) / 2;
    int sign = (k % 2 == 0) ? 1 : -1;
    return {sign, static_cast<uint64_t>((static_cast<unsigned __int128>(k) * half) % m)};
}

uint64_t canonical_order(uint64_t n) { return (n % 4 == 2) ? n / 2 : n; }

std::vector<Z> sqrt_flat(int64_t q, uint64_t& order_out);

}  // namespace

uint64_t cyclo_order_cap() { return g_order_cap; }
void set_cyclo_order_cap(uint64_t cap) { g_order_cap = cap; }

uint64_t euler_phi(uint64_t n) {
    uint64_t r = n;
    for (uint64_t p : prime_factors(n)) r = r / p * (p - 1);
    return r;
}

const std::vector<int64_t>& cyclotomic_poly(uint64_t n) {
    thread_local std::map<uint64_t, std::vector<int64_t>> memo;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    // Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}: multiply first, then divide exactly.
    std::vector<int64_t> P{1};
    std::vector<uint64_t> divs;
    for (uint64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            divs.push_back(d);
            if (d * d != n) divs.push_back(n / d);
        }
    }
    std::sort(divs.begin(), divs.end());
    for (uint64_t d : divs) {
        if (mobius(n / d) != 1) continue;
        std::vector<int64_t> R(P.size() + d, 0);
        for (std::size_t i = 0; i < P.size(); ++i) {
            R[i + d] += P[i];
            R[i] -= P[i];
        }
        P.swap(R);
    }
    for (uint64_t d : divs) {
        if (mobius(n / d) != -1) continue;
        // divide by x^d - 1 (exact): Q[i] = Q[i+d]... from the top
        std::size_t deg = P.size() - 1;
        std::vector<int64_t> Qp(deg - d + 1, 0);
        std::vector<int64_t> R = P;
        for (std::size_t i = deg; i >= d; --i) {
            int64_t c = R[i];
            Qp[i - d] = c;
            R[i] -= c;
            R[i - d] += c;
            if (i == d) break;
        }
        P.swap(Qp);
    }
    if (n == 1) P = {-1, 1};
    return memo.emplace(n, std::move(P)).first->second;
}

uint64_t sqrt_conductor(int64_t q) {
    uint64_t a = static_cast<uint64_t>(q < 0 ? -q : q);
    int64_t r = ((q % 4) + 4) % 4;
    return r == 1 ? a : 4 * a;
}

namespace {

int64_t squarefree_part(const Z& n, Z& square_root_out) {
    // n = s^2 * f with f squarefree; returns f, sets s
    Z m = abs(n);
    Z s = 1, f = 1;
    for (unsigned long p = 2; Z(p) * Z(p) <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) s *= p;
        if (e % 2) f *= p;
    }
    f *= m;
    if (n < 0) f = -f;
    square_root_out = s;
    if (!f.fits_slong_p()) fail(ErrorKind::InvalidInput, "sqrt argument too large");
    return f.get_si();
}

// Gauss-sum realization of sqrt(q) in Q(zeta_N), N = sqrt_conductor(q)
std::vector<Z> sqrt_flat(int64_t q, uint64_t& order_out) {
    uint64_t N = sqrt_conductor(q);
    if (N > g_order_cap) fail(ErrorKind::OrderTooLarge, "sqrt flattening");
    order_out = N;
    std::vector<Z> acc(N, 0);
    acc[0] = 1;
    uint64_t a = static_cast<uint64_t>(q < 0 ? -q : q);
    auto mult = [&](const std::vector<Z>& f) {
        std::vector<Z> out(N, 0);
        for (uint64_t i = 0; i < N; ++i) {
            if (acc[i] == 0) continue;
            for (uint64_t j = 0; j < N; ++j)
                if (f[j] != 0) out[(i + j) % N] += acc[i] * f[j];
        }
        acc.swap(out);
    };
    for (uint64_t p : prime_factors(a)) {
        std::vector<Z> f(N, 0);
        if (p == 2) {
            // sqrt 2 = zeta_8 + zeta_8^7
            uint64_t s = N / 8;
            f[s] += 1;
            f[7 * s] += 1;
        } else {
            uint64_t s = N / p;
            for (uint64_t t = 1; t < p; ++t) {
                // Legendre symbol by Euler criterion
                uint64_t e = (p - 1) / 2, b = t % p, r = 1;
                while (e) {
                    if (e & 1) r = r * b % p;
                    b = b * b % p;
                    e >>= 1;
                }
                f[(t * s) % N] += (r == 1) ? 1 : -1;
            }
        }
        mult(f);
    }
    // prod g_p = i^{#(p = 3 mod 4)} sqrt|q|; fix the power of i
    int ipow = (q < 0 ? 1 : 0);
    for (uint64_t p : prime_factors(a))
        if (p != 2 && p % 4 == 3) ipow -= 1;
    ipow = ((ipow % 4) + 4) % 4;
    if (ipow == 2) {
        for (auto& z : acc) z = -z;
    } else if (ipow != 0) {
        std::vector<Z> f(N, 0);
        f[(N / 4) * static_cast<uint64_t>(ipow)] = 1;
        mult(f);
    }
    return reduce_poly(N, std::move(acc));
}

}  // namespace

CycNum make_cyc(uint64_t n, std::vector<Z> a, std::vector<Z> b, Z den, int64_t q) {
    CycNum x;
    x.n_ = n;
    x.a_ = std::move(a);
    x.b_ = std::move(b);
    x.den_ = std::move(den);
    x.q_ = q;
    if (x.b_.empty()) x.b_.assign(x.a_.size(), 0);
    x.normalize();
    return x;
}

CycNum::CycNum() : n_(1), a_{0}, b_{0}, den_(1), q_(0) {}
CycNum::CycNum(long v) : n_(1), a_{Z(v)}, b_{0}, den_(1), q_(0) {}
CycNum::CycNum(const Q& v) : n_(1), a_{0}, b_{0}, den_(1), q_(0) {
    Q c = v;
    c.canonicalize();
    a_[0] = c.get_num();
    den_ = c.get_den();
}

CycNum CycNum::zeta(int64_t n, int64_t k) {
    if (n <= 0) fail(ErrorKind::InvalidInput, "zeta order must be positive");
    uint64_t un = static_cast<uint64_t>(n);
    if (un > g_order_cap) fail(ErrorKind::OrderTooLarge, "zeta order " + std::to_string(un));
    uint64_t kk = static_cast<uint64_t>(((k % n) + n) % n);
    int sign = 1;
    if (un % 4 == 2) {
        auto [s, e] = halve_order(kk, un / 2);
        sign = s;
        un /= 2;
        kk = e;
    }
    std::vector<Z> P(un, 0);
    P[kk] = sign;
    std::vector<Z> a = reduce_poly(un, std::move(P));
    return make_cyc(un, std::move(a), {}, 1, 0);
}

CycNum CycNum::root_of_unity(int64_t num, int64_t den) {
    int64_t g = std::gcd(num, den);
    if (g == 0) return CycNum(1);
    return zeta(den / g, num / g);
}

CycNum CycNum::from_coeffs(int64_t n, const std::vector<Q>& coeffs) {
    if (n <= 0) fail(ErrorKind::InvalidInput, "order must be positive");
    uint64_t un = static_cast<uint64_t>(n);
    if (un > g_order_cap) fail(ErrorKind::OrderTooLarge, "order " + std::to_string(un));
    Z den = 1;
    for (const auto& c : coeffs) den = lcm(den, Z(c.get_den()));
    uint64_t cn = canonical_order(un);
    std::vector<Z> P(cn, 0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        Z v = coeffs[k].get_num() * (den / coeffs[k].get_den());
        uint64_t kk = k % un;
        if (cn != un) {
            auto [s, e] = halve_order(kk, cn);
            P[e] += s > 0 ? v : Z(-v);
        } else {
            P[kk] += v;
        }
    }
    return make_cyc(cn, reduce_poly(cn, std::move(P)), {}, den, 0);
}

CycNum CycNum::from_exponent_counts(uint64_t L, const std::vector<int64_t>& counts) {
    if (L == 0) fail(ErrorKind::InvalidInput, "order must be positive");
    if (L > g_order_cap) fail(ErrorKind::OrderTooLarge, "order " + std::to_string(L));
    uint64_t cn = canonical_order(L);
    std::vector<int64_t> P(cn, 0);
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] == 0) continue;
        uint64_t kk = k % L;
        int64_t v = counts[k];
        if (cn != L) {
            auto [s, e] = halve_order(kk, cn);
            P[e] += s * v;
        } else {
            P[kk] += v;
        }
    }
    std::vector<Z> out;
    if (simd::max_abs_i64(P.data(), P.size()) < static_cast<uint64_t>(kSafe) && reduce_i64(cn, P)) {
        out.resize(P.size());
        for (std::size_t i = 0; i < P.size(); ++i) out[i] = Z(static_cast<long>(P[i]));
    } else {
        std::vector<Z> Pz(cn, 0);
        for (std::size_t k = 0; k < counts.size(); ++k) {
            if (counts[k] == 0) continue;
            uint64_t kk = k % L;
            Z v(static_cast<long>(counts[k]));
            if (cn != L) {
                auto [s, e] = halve_order(kk, cn);
                Pz[e] += s > 0 ? v : Z(-v);
            } else {
                Pz[kk] += v;
            }
        }
        out = reduce_poly(cn, std::move(Pz));
    }
    return make_cyc(cn, std::move(out), {}, 1, 0);
}

CycNum CycNum::sqrt_of(const Q& q) {
    if (q == 0) return CycNum(0);
    // sqrt(n/d) = sqrt(n d) / d
    Z nd = q.get_num() * q.get_den();
    Z s;
    int64_t f = squarefree_part(nd, s);
    Q factor(s, q.get_den());
    factor.canonicalize();
    if (f == 1) return CycNum(factor);
    CycNum x;
    x.n_ = 1;
    x.a_ = {0};
    x.b_ = {factor.get_num()};
    x.den_ = factor.get_den();
    x.q_ = f;
    x.normalize();
    return x;
}

CycNum CycNum::from_parts(uint64_t n, const std::vector<Q>& a, int64_t q, const std::vector<Q>& b) {
    CycNum x = from_coeffs(static_cast<int64_t>(n), a);
    if (q != 0 && !b.empty()) {
        CycNum y = from_coeffs(static_cast<int64_t>(n), b);
        x = x + y * sqrt_of(Q(q));
    }
    return x;
}

std::vector<Q> CycNum::coeffs() const {
    std::vector<Q> out(a_.size());
    for (std::size_t i = 0; i < a_.size(); ++i) {
        out[i] = Q(a_[i], den_);
        out[i].canonicalize();
    }
    return out;
}

std::vector<Q> CycNum::sqrt_coeffs() const {
    if (!q_) return {};
    std::vector<Q> out(b_.size());
    for (std::size_t i = 0; i < b_.size(); ++i) {
        out[i] = Q(b_[i], den_);
        out[i].canonicalize();
    }
    return out;
}

void CycNum::lift_inplace(uint64_t m) {
    if (m == n_) return;
    a_ = lift_vec(a_, n_, m);
    b_ = lift_vec(b_, n_, m);
    n_ = m;
}

void CycNum::absorb_sqrt() {
    if (!q_) return;
    if (all_zero(b_)) {
        q_ = 0;
        return;
    }
    uint64_t N = sqrt_conductor(q_);
    if (n_ % N != 0) return;
    uint64_t No = 1;
    std::vector<Z> s = lift_vec(sqrt_flat(q_, No), No, n_);
    std::vector<Z> prod = mul_vec(n_, b_, s);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += prod[i];
    std::fill(b_.begin(), b_.end(), Z(0));
    q_ = 0;
}

namespace {

// Try to write v (order n, reduced) in Q(zeta_{n/l}); returns false when impossible.
bool descend_vec(const std::vector<Z>& v, uint64_t n, uint64_t l, std::vector<Z>& out) {
    uint64_t m = n / l;
    if (m % l == 0) {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (i % l != 0 && v[i] != 0) return false;
        uint64_t cm = canonical_order(m);
        std::vector<Z> r(euler_phi(m), 0);
        for (std::size_t i = 0; i < v.size(); i += l) r[i / l] = v[i];
        if (cm != m) {
            std::vector<Z> P(cm, 0);
            for (std::size_t j = 0; j < r.size(); ++j) {
                if (r[j] == 0) continue;
                auto [s, e] = halve_order(j, cm);
                P[e] += s > 0 ? r[j] : Z(-r[j]);
            }
            out = reduce_poly(cm, std::move(P));
        } else {
            out = std::move(r);
        }
        return true;
    }
    // l exactly divides n: zeta_n = zeta_m^u zeta_l^w with u l + w m = 1
    int64_t u = 0, w = 0;
    {
        int64_t g, x, y;
        int64_t a = static_cast<int64_t>(l), b = static_cast<int64_t>(m);
        // extended gcd
        int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
        while (r != 0) {
            int64_t qq = old_r / r;
            std::tie(old_r, r) = std::make_pair(r, old_r - qq * r);
            std::tie(old_s, s) = std::make_pair(s, old_s - qq * s);
            std::tie(old_t, t) = std::make_pair(t, old_t - qq * t);
        }
        g = old_r;
        x = old_s;
        y = old_t;
        (void)g;
        u = ((x % b) + b) % b;
        w = ((y % a) + a) % a;
    }
    std::vector<std::vector<Z>> Y(l, std::vector<Z>(m, 0));
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] == 0) continue;
        uint64_t em = static_cast<uint64_t>((static_cast<unsigned __int128>(u) * j) % m);
        uint64_t el = static_cast<uint64_t>((static_cast<unsigned __int128>(w) * j) % l);
        Y[el][em] += v[j];
    }
    uint64_t cm = canonical_order(m);
    auto red = [&](std::vector<Z> P) {
        if (cm != m) {
            std::vector<Z> R(cm, 0);
            for (std::size_t j = 0; j < P.size(); ++j) {
                if (P[j] == 0) continue;
                auto [s, e] = halve_order(j, cm);
                R[e] += s > 0 ? P[j] : Z(-P[j]);
            }
            return reduce_poly(cm, std::move(R));
        }
        return reduce_poly(m, std::move(P));
    };
    std::vector<Z> last = red(Y[l - 1]);
    for (uint64_t r = 1; r + 1 < l; ++r)
        if (red(Y[r]) != last) return false;
    std::vector<Z> y0 = red(Y[0]);
    for (std::size_t i = 0; i < y0.size(); ++i) y0[i] -= last[i];
    out = std::move(y0);
    return true;
}

}  // namespace

void CycNum::descend() {
    bool changed = true;
    while (changed && n_ > 1) {
        changed = false;
        for (uint64_t l : prime_factors(n_)) {
            std::vector<Z> na, nb;
            if (!descend_vec(a_, n_, l, na)) continue;
            if (!descend_vec(b_, n_, l, nb)) continue;
            uint64_t m = n_ / l;
            n_ = canonical_order(m);
            a_ = std::move(na);
            b_ = std::move(nb);
            changed = true;
            break;
        }
    }
}

void CycNum::normalize() {
    if (den_ < 0) {
        den_ = -den_;
        for (auto& z : a_) z = -z;
        for (auto& z : b_) z = -z;
    }
    if (b_.size() != a_.size()) b_.resize(a_.size(), 0);
    absorb_sqrt();
    if (all_zero(a_) && all_zero(b_)) {
        n_ = 1;
        a_ = {0};
        b_ = {0};
        den_ = 1;
        q_ = 0;
        return;
    }
    descend();
    Z g = den_;
    for (const auto& z : a_)
        if (z != 0) g = gcd(g, z);
    for (const auto& z : b_)
        if (z != 0) g = gcd(g, z);
    if (g != 1) {
        den_ /= g;
        for (auto& z : a_) z /= g;
        for (auto& z : b_) z /= g;
    }
    if (all_zero(b_)) q_ = 0;
}

bool CycNum::is_zero() const { return n_ == 1 && a_[0] == 0 && q_ == 0; }

bool CycNum::is_rational() const { return n_ == 1 && q_ == 0; }

Q CycNum::rational_value() const {
    if (!is_rational()) fail(ErrorKind::InvalidInput, "value is not rational: " + str());
    Q r(a_[0], den_);
    r.canonicalize();
    return r;
}

CycNum CycNum::operator-() const {
    CycNum x = *this;
    for (auto& z : x.a_) z = -z;
    for (auto& z : x.b_) z = -z;
    return x;
}

CycNum combine_add(const CycNum& x0, const CycNum& y0, bool subtract) {
    if (y0.is_zero()) return x0;
    if (x0.is_zero()) return subtract ? -y0 : y0;
    CycNum x = x0, y = y0;
    uint64_t L = lcm_checked(x.n_, y.n_);
    int64_t q = 0;
    if (x.q_ && y.q_ && x.q_ != y.q_) {
        // try to absorb into the common field
        x.lift_inplace(L);
        y.lift_inplace(L);
        x.absorb_sqrt();
        y.absorb_sqrt();
        if (x.q_ && y.q_ && x.q_ != y.q_) fail(ErrorKind::MixedRadicals, "sqrt " + std::to_string(x.q_) + " and sqrt " + std::to_string(y.q_));
    }
    q = x.q_ ? x.q_ : y.q_;
    x.lift_inplace(L);
    y.lift_inplace(L);
    Z den = lcm(x.den_, y.den_);
    Z fx = den / x.den_, fy = den / y.den_;
    std::vector<Z> a(x.a_.size()), b(x.a_.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (subtract) {
            a[i] = x.a_[i] * fx - y.a_[i] * fy;
            b[i] = x.b_[i] * fx - y.b_[i] * fy;
        } else {
            a[i] = x.a_[i] * fx + y.a_[i] * fy;
            b[i] = x.b_[i] * fx + y.b_[i] * fy;
        }
    }
    return make_cyc(L, std::move(a), std::move(b), den, q);
}

CycNum CycNum::operator+(const CycNum& o) const { return combine_add(*this, o, false); }
CycNum CycNum::operator-(const CycNum& o) const { return combine_add(*this, o, true); }

CycNum CycNum::scaled(const Q& r) const {
    if (r == 0) return CycNum(0);
    CycNum x = *this;
    for (auto& z : x.a_) z *= r.get_num();
    for (auto& z : x.b_) z *= r.get_num();
    x.den_ *= r.get_den();
    Z g = x.den_;
    for (const auto& z : x.a_)
        if (z != 0) g = gcd(g, z);
    for (const auto& z : x.b_)
        if (z != 0) g = gcd(g, z);
    if (g != 1) {
        x.den_ /= g;
        for (auto& z : x.a_) z /= g;
        for (auto& z : x.b_) z /= g;
    }
    if (x.den_ < 0) {
        x.den_ = -x.den_;
        for (auto& z : x.a_) z = -z;
        for (auto& z : x.b_) z = -z;
    }
    return x;
}

CycNum CycNum::operator*(const CycNum& o) const {
    if (is_zero() || o.is_zero()) return CycNum(0);
    if (o.is_rational()) return scaled(o.rational_value());
    if (is_rational()) return o.scaled(rational_value());
    CycNum x = *this, y = o;
    uint64_t L = lcm_checked(x.n_, y.n_);
    x.lift_inplace(L);
    y.lift_inplace(L);
    if (x.q_ && y.q_ && x.q_ != y.q_) {
        x.absorb_sqrt();
        y.absorb_sqrt();
        if (x.q_ && y.q_ && x.q_ != y.q_) fail(ErrorKind::MixedRadicals, "sqrt " + std::to_string(x.q_) + " and sqrt " + std::to_string(y.q_));
    }
    int64_t q = x.q_ ? x.q_ : y.q_;
    std::vector<Z> aa = mul_vec(L, x.a_, y.a_);
    std::vector<Z> a = aa;
    std::vector<Z> b(aa.size(), 0);
    if (q) {
        std::vector<Z> bb = mul_vec(L, x.b_, y.b_);
        std::vector<Z> ab = mul_vec(L, x.a_, y.b_);
        std::vector<Z> ba = mul_vec(L, x.b_, y.a_);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] += bb[i] * q;
            b[i] = ab[i] + ba[i];
        }
    }
    return make_cyc(L, std::move(a), std::move(b), x.den_ * y.den_, q);
}

namespace {

// Polynomial helpers over Q for the extended Euclid inverse.
using QPoly = std::vector<Q>;

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly poly_sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

QPoly poly_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (b[j] != 0) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

void poly_divmod(const QPoly& a, const QPoly& b, QPoly& qo, QPoly& ro) {
    ro = a;
    trim(ro);
    qo.assign(ro.size() >= b.size() ? ro.size() - b.size() + 1 : 0, 0);
    Q lead = b.back();
    while (!ro.empty() && ro.size() >= b.size()) {
        std::size_t shift = ro.size() - b.size();
        Q c = ro.back() / lead;
        qo[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) ro[shift + j] -= c * b[j];
        ro.pop_back();
        trim(ro);
    }
    trim(qo);
}

// inverse of a cyclotomic-part-only element of order n
CycNum cyc_part_inverse(uint64_t n, const std::vector<Z>& a, const Z& den) {
    QPoly A(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) A[i] = Q(a[i]);
    trim(A);
    if (A.empty()) fail(ErrorKind::DivisionByZero, "inverse of zero");
    const auto& ph = cyclotomic_poly(n);
    QPoly M(ph.size());
    for (std::size_t i = 0; i < ph.size(); ++i) M[i] = Q(static_cast<long>(ph[i]));
    // invariant: s_i * A = r_i mod M
    QPoly r0 = M, r1 = A, s0 = {}, s1 = {Q(1)};
    while (r1.size() > 1) {
        QPoly qq, rr;
        poly_divmod(r0, r1, qq, rr);
        QPoly s2 = poly_sub(s0, poly_mul(qq, s1));
        r0 = std::move(r1);
        r1 = std::move(rr);
        s0 = std::move(s1);
        s1 = std::move(s2);
        if (r1.empty()) fail(ErrorKind::DivisionByZero, "non-invertible cyclotomic element");
    }
    Q c = r1[0];
    std::vector<Q> inv(s1.size());
    for (std::size_t i = 0; i < s1.size(); ++i) inv[i] = s1[i] / c * Q(den);
    return CycNum::from_coeffs(static_cast<int64_t>(n), inv);
}

}  // namespace

CycNum CycNum::inv() const {
    if (is_zero()) fail(ErrorKind::DivisionByZero, "inverse of zero");
    if (is_rational()) return CycNum(Q(1) / rational_value());
    if (q_) {
        // (a + b sqrt q)^{-1} = (a - b sqrt q) / (a^2 - q b^2)
        CycNum A = make_cyc(n_, a_, std::vector<Z>(a_.size(), 0), den_, 0);
        CycNum B = make_cyc(n_, b_, std::vector<Z>(a_.size(), 0), den_, 0);
        CycNum norm = A * A - B * B * CycNum(static_cast<long>(q_));
        if (norm.is_zero()) fail(ErrorKind::DivisionByZero, "zero divisor in sqrt adjunction");
        CycNum conj = A - B * sqrt_of(Q(q_));
        return conj * norm.inv();
    }
    return cyc_part_inverse(n_, a_, den_);
}

CycNum CycNum::operator/(const CycNum& o) const {
    if (o.is_rational()) {
        Q r = o.rational_value();
        if (r == 0) fail(ErrorKind::DivisionByZero, "division by zero");
        return scaled(Q(1) / r);
    }
    return *this * o.inv();
}

CycNum CycNum::conj() const {
    if (n_ == 1 && (q_ == 0 || q_ > 0)) return *this;
    std::vector<Z> Pa(n_, 0), Pb(n_, 0);
    for (std::size_t i = 0; i < a_.size(); ++i) {
        std::size_t j = (n_ - i) % n_;
        Pa[j] += a_[i];
        Pb[j] += q_ < 0 ? Z(-b_[i]) : b_[i];
    }
    return make_cyc(n_, reduce_poly(n_, std::move(Pa)), reduce_poly(n_, std::move(Pb)), den_, q_);
}

CycNum CycNum::pow(int64_t k) const {
    if (k < 0) return inv().pow(-k);
    CycNum result(1), base = *this;
    while (k) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

CycNum CycNum::flattened() const {
    if (!q_) return *this;
    uint64_t No = 1;
    std::vector<Z> s = sqrt_flat(q_, No);
    uint64_t L = lcm_checked(n_, No);
    CycNum x = *this;
    x.lift_inplace(L);
    std::vector<Z> sl = lift_vec(s, No, L);
    std::vector<Z> prod = mul_vec(L, x.b_, sl);
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] += prod[i];
    return make_cyc(L, std::move(x.a_), {}, x.den_, 0);
}

CycNum CycNum::lifted_to(uint64_t m) const {
    if (m % n_ != 0) fail(ErrorKind::InvalidInput, "lift target must be a multiple of the order");
    CycNum x = *this;
    x.lift_inplace(m);
    return x;
}

bool CycNum::same_repr(const CycNum& o) const {
    return n_ == o.n_ && q_ == o.q_ && den_ == o.den_ && a_ == o.a_ && b_ == o.b_;
}

bool CycNum::operator==(const CycNum& o) const {
    if (same_repr(o)) return true;
    if (q_ == o.q_) return (*this - o).is_zero();
    return (flattened() - o.flattened()).is_zero();
}

std::complex<double> CycNum::approx() const {
    std::complex<double> s = 0, t = 0;
    const double two_pi = 6.283185307179586476925286766559;
    for (std::size_t i = 0; i < a_.size(); ++i) {
        std::complex<double> z = std::polar(1.0, two_pi * static_cast<double>(i) / static_cast<double>(n_));
        s += a_[i].get_d() * z;
        t += b_[i].get_d() * z;
    }
    std::complex<double> r = q_ > 0 ? std::complex<double>(std::sqrt(static_cast<double>(q_)), 0)
                                    : std::complex<double>(0, std::sqrt(static_cast<double>(-q_)));
    return (s + (q_ ? r * t : std::complex<double>(0))) / den_.get_d();
}

std::string CycNum::str() const {
    std::ostringstream os;
    auto part = [&](const std::vector<Z>& v) {
        bool first = true;
        std::ostringstream ps;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            Q c(v[i], den_);
            c.canonicalize();
            if (!first) ps << (c > 0 ? " + " : " - ");
            else if (c < 0) ps << "-";
            Q ac = abs(c);
            if (i == 0) ps << ac;
            else {
                if (ac != 1) ps << ac << "*";
                ps << "z" << n_;
                if (i != 1) ps << "^" << i;
            }
            first = false;
        }
        return first ? std::string("0") : ps.str();
    };
    os << part(a_);
    if (q_) os << " + sqrt(" << q_ << ")*(" << part(b_) << ")";
    return os.str();
}

CycNum cyc_add(const CycNum& a, const CycNum& b) { return a + b; }
CycNum cyc_mul(const CycNum& a, const CycNum& b) { return a * b; }
CycNum cyc_neg(const CycNum& a) { return -a; }
CycNum cyc_inv(const CycNum& a) { return a.inv(); }
CycNum cyc_conj(const CycNum& a) { return a.conj(); }
bool cyc_is_zero(const CycNum& a) { return a.is_zero(); }
bool cyc_eq(const CycNum& a, const CycNum& b) { return a == b; }

// ---- Mono ----

namespace {
Q frac_part(const Q& e) {
    Z fl;
    mpz_fdiv_q(fl.get_mpz_t(), e.get_num_mpz_t(), e.get_den_mpz_t());
    Q r = e - Q(fl);
    r.canonicalize();
    return r;
}
}  // namespace

Mono::Mono(const Q& rr, const Q& ee) : r(rr), e(frac_part(ee)) {
    if (r < 0) {
        r = -r;
        e = frac_part(e + Q(1, 2));
    }
    if (r == 0) e = 0;
}

Mono Mono::operator*(const Mono& o) const { return Mono(r * o.r, e + o.e); }

Mono Mono::inv() const {
    if (r == 0) fail(ErrorKind::DivisionByZero, "inverse of zero Mono");
    return Mono(Q(1) / r, -e);
}

Mono Mono::pow(int64_t k) const {
    if (k < 0) return inv().pow(-k);
    Q rr = 1;
    Q base = r;
    int64_t kk = k;
    while (kk) {
        if (kk & 1) rr *= base;
        kk >>= 1;
        if (kk) base *= base;
    }
    return Mono(rr, e * Q(k));
}

Mono Mono::conj() const { return Mono(r, -e); }

bool Mono::operator==(const Mono& o) const { return r == o.r && (r == 0 || e == o.e); }

uint64_t Mono::root_order() const { return e.get_den().get_ui(); }

CycNum Mono::to_cyc() const {
    if (r == 0) return CycNum(0);
    CycNum z = CycNum::root_of_unity(e.get_num().get_si(), e.get_den().get_si());
    return z.scaled(r);
}

std::string Mono::str() const {
    std::ostringstream os;
    os << r;
    if (e != 0) os << "*e(" << e << ")";
    return os.str();
}

CycNum inv_one_minus(const Mono& m) {
    if (m.r == 1 && m.e == 0) fail(ErrorKind::RatioOne, "geometric ratio equal to 1");
    uint64_t d = m.root_order();
    Q rd = 1;
    for (uint64_t i = 0; i < d; ++i) rd *= m.r;
    if (rd == 1) return (CycNum(1) - m.to_cyc()).inv();
    // (1 - m)^{-1} = sum_{j<d} m^j / (1 - r^d)
    uint64_t num = m.e.get_num().get_ui();
    std::vector<Q> coeffs(d, 0);
    Q rj = 1;
    for (uint64_t j = 0; j < d; ++j) {
        coeffs[(j * num) % d] += rj;
        rj *= m.r;
    }
    return CycNum::from_coeffs(static_cast<int64_t>(d), coeffs).scaled(Q(1) / (Q(1) - rd));
}

}  // namespace pgz
