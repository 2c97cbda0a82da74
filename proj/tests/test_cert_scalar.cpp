#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <silver/cert_scalar.hpp>
#include <silver/interval.hpp>

#include <random>
#include <vector>

using namespace silver;

namespace {

std::mt19937_64 rng(77001);

CertScalar random_cert() {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 5);
    std::uniform_int_distribution<int> pick(0, 1);
    const std::vector<CertScalar> basis = {CertScalar(1), CertScalar::C(1), CertScalar::C(2),
                                           CertScalar::C(1) * CertScalar::C(2), CertScalar::C(3)};
    CertScalar out;
    for (const CertScalar& b : basis) {
        if (pick(rng)) {
            out += RadicalScalar(make_rational(num(rng), den(rng)),
                                 make_rational(num(rng), den(rng))) *
                   b;
        }
    }
    return out;
}

RadicalScalar rho_pow(long e) { return RadicalScalar::rho_pow(e); }

}  // namespace

TEST_CASE("symbol products reduce by the defining quadratic relation") {
    // C1^2 = C1 + rho^2 - 1 = C1 + (2 + 2*sqrt2).
    const CertScalar c1 = CertScalar::C(1);
    const CertScalar expect = c1 + CertScalar(RadicalScalar(Rational(2), Rational(2)));
    CHECK(c1 * c1 == expect);
    CHECK((c1 * c1).to_string() == "(2/1 + 2/1*sqrt2) + C1");

    // Distinct symbols do not reduce; the product is a single monomial.
    const CertScalar mixed = CertScalar::C(1) * CertScalar::C(2);
    CHECK(mixed.terms().size() == 1);
    CHECK(mixed == CertScalar::C(2) * CertScalar::C(1));
    CHECK(mixed.to_string() == "C1*C2");

    // Reduction inside longer products is associative.
    CHECK((c1 * c1) * c1 == c1 * (c1 * c1));
    CHECK((c1 * c1) * CertScalar::C(2) == c1 * (c1 * CertScalar::C(2)));
}

TEST_CASE("the defining relation holds canonically and numerically for all levels") {
    for (int k = 1; k <= 10; ++k) {
        const CertScalar ck = CertScalar::C(k);
        const CertScalar relation = ck * ck - ck - CertScalar(rho_pow(2 * k) - RadicalScalar(1));
        CHECK(relation.is_zero());

        const MpfrInterval iv = eval_c_symbol(k, 256);
        const MpfrInterval numeric =
            iv * iv - iv - eval_radical(rho_pow(2 * k) - RadicalScalar(1), 256);
        const double scale = eval_radical(rho_pow(2 * k), 256).hi_double_up();
        CHECK(numeric.abs_enclosure().hi_double_up() <= 1e-30 * scale);
    }
}

TEST_CASE("ring axioms on random elements") {
    for (int i = 0; i < 120; ++i) {
        const CertScalar x = random_cert();
        const CertScalar y = random_cert();
        const CertScalar z = random_cert();
        CHECK(x + y == y + x);
        CHECK(x * y == y * x);
        CHECK((x + y) + z == x + (y + z));
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        CHECK((x - x).is_zero());
        CHECK(x * CertScalar(1) == x);
        CHECK((x * CertScalar(0)).is_zero());
    }
}

TEST_CASE("numeric embedding is a ring homomorphism") {
    for (int i = 0; i < 40; ++i) {
        const CertScalar x = random_cert();
        const CertScalar y = random_cert();
        const MpfrInterval direct = eval_cert(x * y, 256);
        const MpfrInterval split = eval_cert(x, 256) * eval_cert(y, 256);
        // Both enclose the same real number, so they must overlap.
        CHECK((direct - split).contains_zero());
    }
}

TEST_CASE("frozen numeric values of the first symbols") {
    CHECK(eval_cert(CertScalar::C(1), 256).midpoint_double() ==
          doctest::Approx(2.7535365816303471).epsilon(1e-15));
    CHECK(eval_cert(CertScalar::C(2), 256).midpoint_double() ==
          doctest::Approx(6.2637281987).epsilon(1e-10));
    const MpfrInterval coarse = eval_cert(CertScalar::C(3), 64);
    const MpfrInterval fine = eval_cert(CertScalar::C(3), 256);
    CHECK(fine.subset_of(coarse));
}

TEST_CASE("sign oracle: structural zero, certified positives and negatives") {
    const CertScalar zero = CertScalar::C(1) - CertScalar::C(1);
    CHECK(ring_sign(zero).verdict == SignVerdict::Zero);
    CHECK(ring_sign(zero).certified_precision == 0);

    CHECK(ring_sign(CertScalar::C(1)).verdict == SignVerdict::Positive);
    CHECK(ring_sign(-CertScalar::C(1)).verdict == SignVerdict::Negative);
    CHECK(ring_sign(CertScalar::C(1) - CertScalar(2)).verdict == SignVerdict::Positive);

    // c_2 - (1 + 2 rho) c_1 is strictly negative: the glue scaling (1 + 2 rho)
    // overshoots the next-level constant.
    const CertScalar drop =
        CertScalar::C(2) - (RadicalScalar(Rational(3), Rational(2)) * CertScalar::C(1));
    const SignVerdict v = ring_sign(drop, 64);
    CHECK(v.verdict == SignVerdict::Negative);
    CHECK(v.certified_precision >= 64);

    CHECK_THROWS_AS(ring_sign(CertScalar::C(1), 32), std::invalid_argument);
}

TEST_CASE("sign oracle refuses to guess past the precision cap") {
    // Build C1 minus a 500-bit rational undercut of its value: the difference
    // is positive but ~2^-500, so a 256-bit cap must throw rather than guess.
    const MpfrInterval c1 = eval_c_symbol(1, 700);
    mpfr_t scaled;
    mpfr_init2(scaled, 700);
    mpfr_mul_2si(scaled, c1.lo(), 500, MPFR_RNDD);
    mpz_class numerator;
    mpfr_get_z(numerator.get_mpz_t(), scaled, MPFR_RNDD);
    mpfr_clear(scaled);
    mpz_class denominator;
    mpz_ui_pow_ui(denominator.get_mpz_t(), 2, 500);
    Rational undercut(numerator, denominator);
    undercut.canonicalize();

    const CertScalar tiny = CertScalar::C(1) - CertScalar(RadicalScalar(undercut));
    CHECK(!tiny.is_zero());
    CHECK_THROWS_AS(ring_sign(tiny, 256), PrecisionExhausted);
    CHECK(ring_sign(tiny, 2048).verdict == SignVerdict::Positive);
}

TEST_CASE("serialization round-trips bit-exactly with sorted terms") {
    CHECK(CertScalar::from_string("C1") == CertScalar::C(1));
    CHECK(CertScalar::from_string("(2/1 + 2/1*sqrt2) + C1") == CertScalar::C(1) * CertScalar::C(1));

    const CertScalar poly = CertScalar(1) + CertScalar::C(2) + CertScalar::C(1) +
                            CertScalar::C(1) * CertScalar::C(2);
    const std::string s = poly.to_string();
    // Terms are ordered by monomial: constant, C1, C1*C2, C2.
    CHECK(s.find("C1") != std::string::npos);
    CHECK(s.find("C1") < s.find("C1*C2"));
    CHECK(s.find("C1*C2") < s.rfind("C2"));
    CHECK(CertScalar::from_string(s) == poly);

    for (int i = 0; i < 150; ++i) {
        const CertScalar x = random_cert();
        CHECK(CertScalar::from_string(x.to_string()) == x);
    }
    CHECK_THROWS_AS(CertScalar::from_string("C0"), std::invalid_argument);
}

TEST_CASE("constant extraction and level bookkeeping") {
    const CertScalar plain(RadicalScalar(Rational(5), Rational(-1)));
    CHECK(plain.is_radical());
    CHECK(plain.constant_part() == RadicalScalar(Rational(5), Rational(-1)));
    CHECK(CertScalar::C(4).max_level() == 4);
    CHECK((CertScalar::C(2) * CertScalar::C(4)).max_level() == 4);
    CHECK_THROWS_AS(CertScalar::C(0), std::invalid_argument);
}
