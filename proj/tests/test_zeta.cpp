#include "doctest.h"
#include "pgz/zeta.hpp"

using namespace pgz;

namespace {

ZwInput unram_input(int64_t p, QuadType t, const Mono& alpha, int64_t u0 = 1) {
    LocalDatum d = LocalDatum::make(p, t, u0);
    return zw_input(d, 0, alpha, MulChar::trivial(d.Ew()), AddChar{1});
}

CycNum classical_gauss(const MulChar& chi, int64_t p) {
    // sum_a chi(a) zeta_p^a for conductor 1 over Q_p
    CycNum s(0);
    for (int64_t a = 1; a < p; ++a)
        s += Mono(1, chi.unit_value(Residue{a, 0}, 1)).to_cyc() * CycNum::zeta(p, a);
    return s;
}

}  // namespace

TEST_CASE("Z_w closed form examples") {
    CHECK(zw_closed(unram_input(5, QuadType::split, Mono::one())).is_zero());
    auto a = unram_input(3, QuadType::split, Mono(1, Q(1, 2)));
    CHECK(zw_closed(a) == CycNum(Q(3, 2)));
    CHECK(zw_bruteforce(a) == CycNum(Q(3, 2)));
    auto b = unram_input(3, QuadType::inert, Mono(1, Q(1, 4)));
    CHECK(zw_closed(b) == CycNum(Q(9, 5)));
    CHECK(zw_bruteforce(b) == CycNum(Q(9, 5)));
    auto c = unram_input(5, QuadType::split, Mono(Q(2, 3)));
    CHECK(zw_closed(c) == CycNum(Q(-15, 26)));
    CHECK(zw_bruteforce(c) == CycNum(Q(-15, 26)));
    CHECK(zw_bruteforce(unram_input(5, QuadType::split, Mono::one())).is_zero());
}

TEST_CASE("Z_w brute force matches closed form on small sweep") {
    std::vector<LocalDatum> data = {LocalDatum::make(2, QuadType::split), LocalDatum::make(3, QuadType::inert),
                                    LocalDatum::make(3, QuadType::ramified, 1), LocalDatum::make(5, QuadType::ramified, 2),
                                    LocalDatum::make(7, QuadType::split)};
    std::vector<Mono> alphas = {Mono::one(), Mono(1, Q(1, 2)), Mono(1, Q(1, 3)), Mono(Q(3, 2))};
    for (auto& d : data) {
        for (int c = 0; c <= 2; ++c) {
            for (auto& al : alphas) {
                if (vp(al.r, d.p) != 0) continue;
                MulChar chi;
                if (c == 0) chi = MulChar::unramified(d.Ew(), Mono(1, Q(1, 6)));
                else if (!sample_character(d.Ew(), c, 11 * c, Mono(1, Q(1, 5)), chi)) continue;
                for (int64_t s : {int64_t(1), d.p == 2 ? int64_t(3) : int64_t(2)}) {
                    ZwInput in = zw_input(d, 0, al, chi, AddChar{s});
                    CAPTURE(d.str());
                    CAPTURE(chi.str());
                    CHECK(zw_closed(in) == zw_bruteforce(in));
                }
            }
        }
    }
}

TEST_CASE("Gauss sums") {
    LocalField K = LocalField::Qp(5);
    MulChar quad = MulChar::from_gen_values(K, 1, {Q(1, 2)}, Mono::one());
    CycNum g = gauss_sum(quad, AddChar{1});
    CHECK(g == classical_gauss(quad, 5));
    CHECK(g == CycNum::sqrt_of(5));
    CHECK(g * g.conj() == CycNum(5));

    for (auto Kf : {LocalField::Qp(2), LocalField::Qp(3), LocalField::Qp(7), LocalField::unram(3), LocalField::ram(5, 2)}) {
        for (int c = 1; c <= 2; ++c) {
            for (auto& chi : all_characters(Kf, c, Mono::one(), 6)) {
                CAPTURE(chi.str());
                Q Nf = conductor_norm(chi);
                CycNum t = gauss_sum(chi, AddChar{1});
                CHECK(t * t.conj() == CycNum(Nf));
                CHECK(t * gauss_sum(chi.inv(), AddChar{1}) == CycNum(Nf * chi.sign()));
                CycNum tn = gauss_sum_normalized(chi, AddChar{1});
                CHECK(tn * gauss_sum_normalized(chi.inv(), AddChar{1}) == CycNum(Q(chi.sign()) / Nf));
                // torsor: psi_a gives chi(a)^{-1} tau
                int64_t a = Kf.p == 2 ? 3 : 2;
                Mono chia(1, chi.unit_value(Residue{a, 0}, c));
                CHECK(gauss_sum(chi, AddChar{a}) == chia.inv().to_cyc() * t);
            }
        }
    }
    CHECK_THROWS_AS((void)gauss_sum(MulChar::trivial(K), AddChar{1}), Error);
}

TEST_CASE("exceptional characters") {
    CHECK(is_exceptional(unram_input(3, QuadType::split, Mono::one())));
    CHECK_FALSE(is_exceptional(unram_input(3, QuadType::split, Mono(1, Q(1, 2)))));
    LocalDatum d = LocalDatum::make(5, QuadType::split);
    MulChar chi;
    REQUIRE(sample_character(d.Ew(), 1, 2, Mono::one(), chi));
    CHECK_FALSE(is_exceptional(zw_input(d, 0, Mono::one(), chi, AddChar{1})));
    // inert: alpha^2 chi(p) = 1 with alpha = -1
    CHECK(is_exceptional(unram_input(3, QuadType::inert, Mono(1, Q(1, 2)))));
}

TEST_CASE("R-circ product and interpolation factor") {
    LocalDatum d = LocalDatum::make(3, QuadType::split);
    MulChar t = MulChar::trivial(d.F());
    Mono alpha(1, Q(1, 2));
    CHECK(R_circ_product(d, alpha, {t, t}, AddChar{1}) == CycNum(Q(27, 8)));
    CHECK(R_circ_product(d, Mono::one(), {t, t}, AddChar{1}).is_zero());

    // omega trivial; chi' = (chi, chi^{-1}) is consistent
    d = LocalDatum::make(7, QuadType::split);
    t = MulChar::trivial(d.F());
    MulChar chi = MulChar::from_gen_values(d.F(), 1, {Q(1, 3)}, Mono::one());
    SatakeInput s{Mono(Q(1, 7)), Mono(1)};
    CHECK(central_character_consistent(d, {chi, chi.inv()}, t));
    CHECK_FALSE(central_character_consistent(d, {chi, chi}, t));
    CHECK_THROWS_AS((void)interpolation_factor_Zv(d, alpha, {chi, chi}, AddChar{1}, t, s), Error);
    CycNum z = interpolation_factor_Zv(d, alpha, {chi, chi.inv()}, AddChar{1}, t, s);
    CycNum expect = euler_L(d, LKind::zeta_F, 4) * euler_L(d, LKind::eta, 2) * euler_L(d, LKind::eta, 2) *
                    gauss_sum(chi, AddChar{1}) * gauss_sum(chi.inv(), AddChar{1});
    CHECK(z == expect);
    CHECK(interpolation_factor_Zv(d, Mono::one(), {t, t}, AddChar{1}, t, s).is_zero());

    // inert, unramified: value lies in Q
    LocalDatum di = LocalDatum::make(5, QuadType::inert);
    MulChar ti = MulChar::trivial(di.Ew());
    CycNum zi = interpolation_factor_Zv(di, Mono(1, Q(1, 2)), {ti}, AddChar{1}, MulChar::trivial(di.F()),
                                        SatakeInput{Mono(Q(1, 5), Q(1, 2)), Mono(1, Q(1, 2))});
    CHECK(zi.is_rational());
}
