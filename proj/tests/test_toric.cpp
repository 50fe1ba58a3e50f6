#include "doctest.h"
#include "pgz/toric.hpp"

using namespace pgz;

namespace {

ToricTuple tuple(int64_t p, const Mono& alpha, int c_chi, int c_omega, uint64_t seed, int64_t s = 1) {
    LocalField F = LocalField::Qp(p);
    MulChar chi = MulChar::unramified(F, Mono(1, Q(1, 4)));
    if (c_chi > 0) REQUIRE(sample_character(F, c_chi, seed, Mono(1, Q(1, 3)), chi));
    MulChar om = MulChar::trivial(F);
    if (c_omega > 0) REQUIRE(sample_character(F, c_omega, seed + 1, Mono::one(), om));
    return make_toric_tuple(p, alpha, chi, om, AddChar{s});
}

}  // namespace

TEST_CASE("R-circ brute force matches the product formula") {
    LocalField F3 = LocalField::Qp(3);
    MulChar t3 = MulChar::trivial(F3);
    // alpha chi_w(varpi) = -1 on both components: alpha = -1, chi trivial
    ToricTuple a = make_toric_tuple(3, Mono(1, Q(1, 2)), t3, t3, AddChar{1});
    CHECK(R_circ_bruteforce(a, level_threshold(a)).value == CycNum(Q(27, 8)));
    ToricTuple ex = make_toric_tuple(3, Mono::one(), t3, t3, AddChar{1});
    CHECK(R_circ_bruteforce(ex, 3).value.is_zero());

    for (int64_t p : {3, 5}) {
        for (int cc = 0; cc <= 2; ++cc) {
            for (int co = 0; co <= 1; ++co) {
                ToricTuple t = tuple(p, Mono(1, Q(1, 3)), cc, co, 3 + cc);
                CAPTURE(t.str());
                int r0 = level_threshold(t);
                CycNum v0 = R_circ_bruteforce(t, r0).value;
                CHECK(v0 == R_circ_bruteforce(t, r0 + 1).value);
                CHECK(v0 == R_circ_product(t));
            }
        }
    }
}

TEST_CASE("toric double integral: Fubini and relation to R-circ") {
    LocalField F3 = LocalField::Qp(3);
    MulChar t3 = MulChar::trivial(F3);
    ToricTuple ex = make_toric_tuple(3, Mono::one(), t3, t3, AddChar{1});
    CHECK(toric_double_integral(ex, 2).value.is_zero());

    std::vector<ToricTuple> ts = {make_toric_tuple(3, Mono(1, Q(1, 2)), t3, t3, AddChar{1}), tuple(5, Mono(Q(2, 3)), 1, 0, 9),
                                  tuple(5, Mono(1, Q(1, 2)), 1, 1, 4, 2), tuple(3, Mono(1, Q(1, 4)), 2, 0, 2)};
    for (auto& t : ts) {
        CAPTURE(t.str());
        for (int r = 1; r <= 3; ++r) {
            CycNum d = toric_double_integral(t, r).value;
            auto [f1, f2] = toric_factors(t, r);
            CHECK(d == f1 * f2);
        }
        int r = std::max(3, min_level(t));
        CycNum d = toric_double_integral(t, r).value;
        CycNum rc = R_circ_product(t);
        CHECK(d == rc * CycNum(Q(t.p, t.p - 1)).scaled(Q(t.chi_w.sign())));
    }
}

TEST_CASE("Iwahori decomposition identity") {
    for (int64_t p : {3, 5, 7}) {
        for (int cc = 0; cc <= 1; ++cc) {
            for (int co = 0; co <= 1; ++co) {
                ToricTuple t = tuple(p, Mono(1, Q(1, 2)), cc, co, 7);
                CAPTURE(t.str());
                int r0 = level_threshold(t);
                QSharpReport rep = verify_Q_sharp_identity(t, r0);
                for (auto& m : rep.mismatches) MESSAGE(m);
                CHECK(rep.ok);
                QSharpResult q = iwahori_terms_Q_sharp(t, r0);
                CHECK(q.terms.size() == static_cast<std::size_t>(p));
            }
        }
    }
}

TEST_CASE("Kirillov vectors") {
    const int64_t p = 3;
    auto fp = f_alpha_plus(p, Mono(1, Q(1, 2)));
    CHECK(f_alpha_plus(p, Mono::one()).eval(PAdicCoset{0, Residue{1, 0}, 1}) == Mono::one());
    CHECK(fp.eval(PAdicCoset{2, Residue{2, 0}, 1}) == Mono(Q(1, 9)));
    CHECK(fp.eval(PAdicCoset{-1, Residue{1, 0}, 1}).is_zero());

    LocalField F = LocalField::Qp(p);
    auto fm = f_alpha_minus(p, Mono(1, Q(1, 2)), MulChar::trivial(F));
    for (int n = 0; n < 3; ++n) CHECK(fm.eval(PAdicCoset{n, Residue{2, 0}, 1}) == fp.eval(PAdicCoset{n, Residue{2, 0}, 1}));
    MulChar om = MulChar::unramified(F, Mono(1, Q(1, 4)));
    auto fm2 = f_alpha_minus(p, Mono(1, Q(1, 2)), om);
    CHECK(fm2.eval(PAdicCoset{1, Residue{1, 0}, 1}) == Mono(Q(1, 3), Q(1, 4)));
    CHECK(fm2.eval(PAdicCoset{-2, Residue{1, 0}, 1}).is_zero());
}

TEST_CASE("Kirillov pairing") {
    const int64_t p = 5;
    KirillovVector units;
    units.descriptor = "1_units";
    units.precision = [](int) { return 1; };
    units.eval = [](const PAdicCoset& x) { return x.n == 0 ? Mono::one() : Mono(0); };
    CHECK(kirillov_pairing(units, units, CycNum(1), p, 0, 1, Mono(Q(1, 5))) == CycNum(1));

    // f_mu(y) = 1_O |y| mu(y) against 1_O
    auto fmu = [p](const Mono& mu) {
        KirillovVector f;
        f.precision = [](int) { return 1; };
        f.eval = [p, mu](const PAdicCoset& x) {
            if (x.n < 0) return Mono(0);
            return mu.pow(x.n) * Mono(Q(1, static_cast<unsigned long>(p))).pow(x.n);
        };
        return f;
    };
    Mono c(1, Q(1, 3));
    KirillovVector ind = units;
    ind.eval = [](const PAdicCoset& x) { return x.n >= 0 ? Mono::one() : Mono(0); };
    CHECK(kirillov_pairing(fmu(c), ind, CycNum(1), p, 0, 0, Mono(Q(1, 5)) * c) ==
          inv_one_minus(Mono(Q(1, 5)) * c));

    KirillovVector neg = units;
    neg.eval = [](const PAdicCoset& x) { return x.n == -1 ? Mono::one() : Mono(0); };
    CHECK(kirillov_pairing(units, neg, CycNum(1), p, -2, 1, Mono(Q(1, 5))).is_zero());
}

TEST_CASE("norm relation of the ordinary vectors") {
    CHECK(norm_relation_check(3, Mono::one(), AddChar{1}, 1));
    CHECK(norm_relation_check(3, Mono(1, Q(1, 2)), AddChar{1}, 2));
    CHECK(norm_relation_check(5, Mono(Q(2, 3)), AddChar{2}, 1));
    // levels two apart do not satisfy the relation
    auto f2 = f_alpha_r_plus(3, Mono::one(), AddChar{1}, 2);
    CHECK_FALSE(norm_relation_check(f2, f_alpha_r_plus(3, Mono::one(), AddChar{1}, 4), 3, 2, -6, 2));
}
