#include <doctest.h>

#include <cstdint>
#include <limits>

#include "padlex/zint.hpp"

using namespace padlex;

TEST_CASE("small arithmetic stays on the fast path") {
    Zint a(7), b(-3);
    CHECK((a + b).to_int64() == 4);
    CHECK((a * b).to_int64() == -21);
    CHECK((a - b).to_int64() == 10);
    CHECK((a / b).to_int64() == -2);
    CHECK((a % b).to_int64() == 1);
    CHECK((a + b).is_small());
    CHECK(Zint(0).is_zero());
    CHECK(b.is_negative());
    CHECK(b.sign() == -1);
}

TEST_CASE("overflow promotes and demotion recovers") {
    std::int64_t big = std::numeric_limits<std::int64_t>::max();
    Zint a(big);
    Zint s = a + Zint(1);
    CHECK(!s.is_small());
    CHECK((s - Zint(1)).is_small());
    CHECK((s - Zint(1)) == a);
    Zint prod = a * a;
    CHECK(!prod.is_small());
    CHECK(prod / a == a);
    CHECK(-Zint(std::numeric_limits<std::int64_t>::min()) ==
          Zint(BigInt("9223372036854775808")));
}

TEST_CASE("string round trip") {
    CHECK(Zint::from_string("-123456789012345678901234567890").str() ==
          "-123456789012345678901234567890");
    CHECK(Zint::from_string("42").to_int64() == 42);
}

TEST_CASE("gcd, pos_mod, pow") {
    CHECK(gcd(Zint(12), Zint(-18)) == Zint(6));
    CHECK(gcd(Zint(0), Zint(5)) == Zint(5));
    CHECK(pos_mod(Zint(-7), Zint(5)) == Zint(3));
    CHECK(pos_mod(Zint(7), Zint(5)) == Zint(2));
    CHECK(pow_zi(Zint(3), 0) == Zint(1));
    CHECK(pow_zi(Zint(3), 7) == Zint(2187));
    CHECK(pow_zi(Zint(2), 100) == Zint(BigInt(1) << 100));
}

TEST_CASE("modular helpers") {
    CHECK(mulmod(Zint(-1), Zint(1), Zint(7)) == Zint(6));
    CHECK(powmod(Zint(2), 10, Zint(1000)) == Zint(24));
    CHECK(invmod(Zint(2), Zint(5)) == Zint(3));
    CHECK(invmod(Zint(3), Zint(25)) == Zint(17));
    CHECK(invmod(Zint(-1), Zint(9)) == Zint(8));
    CHECK_THROWS_AS(invmod(Zint(3), Zint(9)), std::invalid_argument);
    // Matches the big-integer path on the same inputs.
    Zint m = pow_zi(Zint(5), 30);
    Zint x(123456789);
    CHECK(mulmod(invmod(x, m), x, m) == Zint(1));
}

TEST_CASE("exact integer roots") {
    CHECK(iroot_exact(Zint(0), 3).value() == Zint(0));
    CHECK(iroot_exact(Zint(27), 3).value() == Zint(3));
    CHECK(iroot_exact(Zint(28), 3) == std::nullopt);
    CHECK(iroot_exact(Zint(1), 5).value() == Zint(1));
    Zint huge = pow_zi(Zint(10), 40);
    CHECK(iroot_exact(huge, 4).value() == pow_zi(Zint(10), 10));
    CHECK(iroot_exact(huge - Zint(1), 4) == std::nullopt);
}

TEST_CASE("ord_in counts prime multiplicity") {
    CHECK(ord_in(Zint(12), 2) == 2);
    CHECK(ord_in(Zint(12), 3) == 1);
    CHECK(ord_in(Zint(-9), 3) == 2);
    CHECK(ord_in(Zint(7), 5) == 0);
}

TEST_CASE("rational floor and ceiling") {
    CHECK(rat_floor(Rat(7, 2)) == Zint(3));
    CHECK(rat_ceil(Rat(7, 2)) == Zint(4));
    CHECK(rat_floor(Rat(-7, 2)) == Zint(-4));
    CHECK(rat_ceil(Rat(-7, 2)) == Zint(-3));
    CHECK(rat_floor(Rat(6, 2)) == Zint(3));
    CHECK(rat_ceil(Rat(6, 2)) == Zint(3));
    CHECK(rat_is_integer(Rat(6, 2)));
    CHECK(!rat_is_integer(Rat(7, 2)));
    CHECK(rat_str(Rat(-3, 7)) == "-3/7");
    CHECK(rat_str(Rat(8, 4)) == "2");
}
