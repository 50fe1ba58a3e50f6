#include <random>

#include "doctest.h"
#include "pgz/cyclo.hpp"

using namespace pgz;

namespace {

CycNum random_cyc(std::mt19937_64& rng, int64_t n) {
    std::vector<Q> c(static_cast<std::size_t>(n));
    for (auto& x : c) x = Q(static_cast<long>(rng() % 11) - 5, static_cast<long>(rng() % 4) + 1);
    return CycNum::from_coeffs(n, c);
}

}  // namespace

TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_poly(1) == std::vector<int64_t>{-1, 1});
    CHECK(cyclotomic_poly(4) == std::vector<int64_t>{1, 0, 1});
    CHECK(cyclotomic_poly(6) == std::vector<int64_t>{1, -1, 1});
    CHECK(cyclotomic_poly(12) == std::vector<int64_t>{1, 0, -1, 0, 1});
    CHECK(cyclotomic_poly(105).size() == 49);
    CHECK(cyclotomic_poly(105)[7] == -2);
}

TEST_CASE("basic identities") {
    CHECK(CycNum::zeta(4) * CycNum::zeta(4) == CycNum(-1));
    CHECK((CycNum(1) + CycNum::zeta(3) + CycNum::zeta(3, 2)).is_zero());
    CycNum s5 = CycNum::sqrt_of(5);
    CHECK((CycNum(1) + s5) * (CycNum(1) - s5) == CycNum(-4));
    CHECK(CycNum::zeta(5).conj() == CycNum::zeta(5, 4));
    CHECK(CycNum(Q(3, 7)).conj() == CycNum(Q(3, 7)));
    CycNum r8 = CycNum::zeta(8) + CycNum::zeta(8, -1);
    CHECK(r8.conj() == r8);
    CHECK(CycNum::zeta(6) == -CycNum::zeta(3, 2));
    CHECK(CycNum::zeta(5) != CycNum::zeta(5, 2));
    CycNum s(0);
    for (int k = 0; k < 7; ++k) s += CycNum::zeta(7, k);
    CHECK(s.is_zero());
}

TEST_CASE("canonical descent") {
    // zeta_12^4 = zeta_3
    CycNum z = CycNum::zeta(12, 4);
    CHECK(z.order() == 3);
    CHECK(z.same_repr(CycNum::zeta(3)));
    // zeta_15^5 + zeta_15^10 = -1
    CycNum w = CycNum::zeta(15, 5) + CycNum::zeta(15, 10);
    CHECK(w.same_repr(CycNum(-1)));
    // sqrt 2 from zeta_8 is real-quadratic, stays at order 8
    CHECK((CycNum::zeta(8) + CycNum::zeta(8, 7)).order() == 8);
    // Gauss sum g_5 squared is 5
    CycNum g(0);
    for (int a = 1; a < 5; ++a) g += CycNum::zeta(5, a).scaled((a == 1 || a == 4) ? 1 : -1);
    CHECK((g * g).same_repr(CycNum(5)));
    CHECK(g == CycNum::sqrt_of(5));
    // element equal after lifting through a product of two primes
    CycNum x = CycNum::zeta(7) * CycNum::zeta(3);
    CHECK(x == CycNum::zeta(21, 3 * 1 * 1 + 7 * 1));
}

TEST_CASE("sqrt adjunction") {
    CycNum s3 = CycNum::sqrt_of(3);
    CHECK(s3 * s3 == CycNum(3));
    CHECK(s3 == CycNum::sqrt_of(3).flattened());
    CycNum sm3 = CycNum::sqrt_of(-3);
    CHECK(sm3 * sm3 == CycNum(-3));
    CHECK(sm3 == CycNum::zeta(3) - CycNum::zeta(3, 2));
    CHECK(CycNum::sqrt_of(Q(1, 5)) * CycNum(5) == CycNum::sqrt_of(5));
    CHECK(CycNum::sqrt_of(8) == CycNum::sqrt_of(2).scaled(2));
    CHECK(CycNum::sqrt_of(2) == CycNum::zeta(8) + CycNum::zeta(8, 7));
    CHECK(CycNum::sqrt_of(-1) == CycNum::zeta(4));
    CHECK(CycNum::sqrt_of(-7) * CycNum::sqrt_of(-7) == CycNum(-7));
    CHECK_THROWS_AS((void)(CycNum::sqrt_of(2) + CycNum::sqrt_of(3)), Error);
    CycNum inv = (CycNum(1) + s3).inv();
    CHECK(inv * (CycNum(1) + s3) == CycNum(1));
    CHECK(sm3.conj() == -sm3);
    CHECK(s3.conj() == s3);
}

TEST_CASE("randomized field laws") {
    std::mt19937_64 rng(11);
    const int64_t orders[] = {1, 3, 4, 5, 7, 8, 9, 12, 15, 16, 20, 21};
    int inverses = 0;
    for (int it = 0; it < 1000; ++it) {
        int64_t n1 = orders[rng() % 12], n2 = orders[rng() % 12];
        CycNum a = random_cyc(rng, n1), b = random_cyc(rng, n2);
        CHECK((a * b).conj() == a.conj() * b.conj());
        CHECK(a + b == b + a);
        if (!a.is_zero()) {
            CHECK(a * a.inv() == CycNum(1));
            ++inverses;
        }
    }
    CHECK(inverses > 900);
}

TEST_CASE("lift coherence") {
    std::mt19937_64 rng(3);
    for (int it = 0; it < 50; ++it) {
        CycNum a = random_cyc(rng, 5);
        CycNum via = a.lifted_to(15).lifted_to(45);
        CycNum direct = a.lifted_to(45);
        CHECK(via.same_repr(direct));
    }
}

TEST_CASE("order cap") {
    set_cyclo_order_cap(1000);
    CHECK_THROWS_AS((void)CycNum::zeta(1009), Error);
    CHECK_THROWS_AS((void)(CycNum::zeta(31) * CycNum::zeta(37)), Error);
    set_cyclo_order_cap(1000000);
}

TEST_CASE("exponent counts and geometric inverse") {
    std::vector<int64_t> c(6, 1);
    CHECK(CycNum::from_exponent_counts(6, c).is_zero());
    std::vector<int64_t> d{0, 2, 0, 0};
    CHECK(CycNum::from_exponent_counts(4, d) == CycNum::zeta(4).scaled(2));
    Mono m(Q(2, 3), Q(1, 3));
    CycNum lhs = inv_one_minus(m);
    CHECK(lhs * (CycNum(1) - m.to_cyc()) == CycNum(1));
    Mono u(1, Q(1, 4));
    CHECK(inv_one_minus(u) * (CycNum(1) - u.to_cyc()) == CycNum(1));
    CHECK_THROWS_AS((void)inv_one_minus(Mono::one()), Error);
}

#include "pgz/json_io.hpp"

TEST_CASE("json round trip is bit exact") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 100; ++it) {
        CycNum a = random_cyc(rng, 12);
        if (it % 3 == 0) a = a + CycNum::sqrt_of(7).scaled(Q(it + 1, 3));
        CycNum b = cyc_from_json(json::parse(cyc_to_json(a).dump()));
        CHECK(a.same_repr(b));
    }
    CycNum big = CycNum(Q(Z("123456789012345678901234567890"), Z(7)));
    CHECK(cyc_from_json(cyc_to_json(big)).same_repr(big));
}
