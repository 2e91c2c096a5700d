#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "boxroot/dyadic.hpp"

using namespace boxroot;

namespace {
Dyadic random_dyadic(std::mt19937& rng) {
    std::uniform_int_distribution<long> mant(-(1L << 30), 1L << 30);
    std::uniform_int_distribution<long> expo(-20, 20);
    return Dyadic(mpz_class(mant(rng)), expo(rng));
}
} // namespace

TEST_CASE("dyadic canonical form") {
    Dyadic d(mpz_class(12), 0); // 12 = 3 * 2^2
    CHECK(d.mantissa() == 3);
    CHECK(d.exponent() == 2);
    CHECK(Dyadic(0).is_zero());
    CHECK(Dyadic(mpz_class(0), 17).exponent() == 0);
}

TEST_CASE("exact ring operations") {
    Dyadic half(mpz_class(1), -1), quarter(mpz_class(1), -2);
    CHECK(half + quarter == Dyadic(mpz_class(3), -2)); // 1/2 + 1/4 = 3/4
    CHECK(Dyadic(mpz_class(3), -2) * Dyadic(mpz_class(5), -1) == Dyadic(mpz_class(15), -3));

    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        Dyadic x = random_dyadic(rng);
        CHECK((x - x).is_zero());
        Dyadic y = random_dyadic(rng);
        CHECK(x + y == y + x);
        CHECK(x * y == y * x);
    }
}

TEST_CASE("comparisons") {
    CHECK(Dyadic(mpz_class(1), -1) < Dyadic(1));
    CHECK(Dyadic(-3) < Dyadic(mpz_class(-1), -4));
    CHECK(Dyadic(mpz_class(1), 40) > Dyadic(mpz_class(3), 30));
    std::mt19937 rng(11);
    for (int i = 0; i < 200; ++i) {
        Dyadic x = random_dyadic(rng), y = random_dyadic(rng);
        double xd = x.to_double(), yd = y.to_double();
        if (xd != yd) CHECK((x < y) == (xd < yd));
    }
}

TEST_CASE("directed rounding") {
    // 0.1 is not dyadic; round 13107 * 2^-17 (~0.09999...) both ways to 4 bits.
    Dyadic v(mpz_class(13107), -17);
    Dyadic down = round_down(v, 4);
    Dyadic up = round_up(v, 4);
    CHECK(down <= v);
    CHECK(v <= up);
    CHECK(down.bit_length() <= 4);
    CHECK(up.bit_length() <= 4);

    std::mt19937 rng(23);
    for (int i = 0; i < 500; ++i) {
        Dyadic x = random_dyadic(rng);
        for (long bits : {4L, 12L, 53L}) {
            Dyadic lo = round_down(x, bits), hi = round_up(x, bits);
            CHECK(lo <= x);
            CHECK(x <= hi);
            // error bound covers the actual error
            Dyadic eb = round_error_bound(x, bits);
            CHECK((x - lo) <= eb);
            CHECK((hi - x) <= eb);
            // refining the precision tightens both sides
            CHECK(round_down(x, bits + 8) >= lo);
            CHECK(round_up(x, bits + 8) <= hi);
        }
    }
}

TEST_CASE("directed division") {
    std::mt19937 rng(5);
    for (int i = 0; i < 300; ++i) {
        Dyadic a = random_dyadic(rng);
        Dyadic b = random_dyadic(rng);
        if (b.is_zero()) continue;
        Dyadic lo = div_dir(a, b, 53, RoundDir::Down);
        Dyadic hi = div_dir(a, b, 53, RoundDir::Up);
        CHECK(lo <= hi);
        // verify the quotient brackets by multiplying back (exact)
        if (b.sign() > 0) {
            CHECK(lo * b <= a);
            CHECK(a <= hi * b);
        } else {
            CHECK(a <= lo * b);
            CHECK(hi * b <= a);
        }
    }
    CHECK(div_dir(Dyadic(1), Dyadic(2), 10, RoundDir::Down) == Dyadic(mpz_class(1), -1));
    CHECK_THROWS_AS(div_dir(Dyadic(1), Dyadic(0), 10, RoundDir::Down), DomainError);
}

TEST_CASE("sqrt upper bound") {
    std::mt19937 rng(99);
    for (int i = 0; i < 200; ++i) {
        Dyadic x = random_dyadic(rng).abs();
        Dyadic r = sqrt_up(x, 40);
        CHECK(x <= r * r);
    }
    CHECK(sqrt_up(Dyadic(4), 40) * sqrt_up(Dyadic(4), 40) >= Dyadic(4));
}

TEST_CASE("hex serialization round trip") {
    CHECK(Dyadic(mpz_class(3), -2).to_hex_string() == "+0x3p-2");
    CHECK(Dyadic(0).to_hex_string() == "+0x0p+0");
    std::mt19937 rng(31);
    for (int i = 0; i < 500; ++i) {
        Dyadic x = random_dyadic(rng);
        auto back = Dyadic::from_hex_string(x.to_hex_string());
        REQUIRE(back.has_value());
        CHECK(*back == x);
    }
    CHECK_FALSE(Dyadic::from_hex_string("0x3p-2").has_value()); // sign required
    CHECK_FALSE(Dyadic::from_hex_string("+0x3").has_value());
}

TEST_CASE("decimal rendering") {
    CHECK(Dyadic(mpz_class(3), -2).to_decimal_string() == "0.75");
    CHECK(Dyadic(5).to_decimal_string() == "5");
    CHECK(Dyadic(-12).to_decimal_string() == "-12");
    CHECK(Dyadic(mpz_class(1), -1).to_decimal_string() == "0.5");
}
