#include "ppw/errors.hpp"
#include "ppw/numerics.hpp"
#include "ppw/special_functions.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace ppw;

TEST_SUITE("special_functions")
{
    TEST_CASE("bessel_j agrees with the standard library")
    {
        double worst = 0.0;
        for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 5.0, 12.5, 30.0})
            for (double x = 0.0; x <= 150.0; x += 0.731)
                worst = std::max(worst, std::abs(bessel_j(nu, x) - std::cyl_bessel_j(nu, x)));
        CHECK(worst < 1e-12);
    }

    TEST_CASE("bessel_j_derivative follows the recurrence J' = (J_{nu-1} - J_{nu+1}) / 2")
    {
        for (double nu : {1.0, 2.5, 7.0})
            for (double x : {0.5, 3.0, 17.0})
                CHECK(bessel_j_derivative(nu, x) ==
                      doctest::Approx(0.5 * (std::cyl_bessel_j(nu - 1, x) - std::cyl_bessel_j(nu + 1, x)))
                          .epsilon(1e-10));
    }

    TEST_CASE("bessel zeros match an independent scan of std::cyl_bessel_j")
    {
        for (double nu : {0.0, 0.5, 1.0, 2.0, 3.5})
            for (int k = 1; k <= 4; ++k) {
                const BesselZero z = bessel_zero(nu, k);
                CHECK(z.value == doctest::Approx(oracle::bessel_zero(nu, k)).epsilon(1e-12));
                CHECK(z.residual < 1e-13);
            }
    }

    TEST_CASE("half-integer zeros have closed forms")
    {
        // J_{1/2}(x) ~ sin(x) / sqrt(x)
        for (int k = 1; k <= 5; ++k)
            CHECK(bessel_zero(0.5, k).value == doctest::Approx(k * pi).epsilon(1e-13));
        // J_{3/2} vanishes where tan x = x
        const double z = oracle::bisect([](double x) { return std::tan(x) - x; }, 4.0, 4.6);
        CHECK(bessel_zero(1.5, 1).value == doctest::Approx(z).epsilon(1e-12));
    }

    TEST_CASE("the two-dimensional constant is about 2.539")
    {
        CHECK(ppw_constant(2) == doctest::Approx(2.539).epsilon(5e-4));
        const double j0 = oracle::bessel_zero(0.0, 1), j1 = oracle::bessel_zero(1.0, 1);
        CHECK(ppw_constant(2) == doctest::Approx(j1 * j1 / (j0 * j0)).epsilon(1e-12));
    }

    TEST_CASE("three-dimensional constant equals (z / pi)^2 with tan z = z")
    {
        const double z = oracle::bisect([](double x) { return std::tan(x) - x; }, 4.0, 4.6);
        CHECK(ppw_constant(3) == doctest::Approx(z * z / (pi * pi)).epsilon(1e-12));
    }

    TEST_CASE("constant decreases with dimension towards 1")
    {
        double prev = ppw_constant(2);
        for (int n = 3; n <= 20; ++n) {
            const double c = ppw_constant(n);
            CHECK(c < prev);
            CHECK(c > 1.0);
            prev = c;
        }
    }

    TEST_CASE("out-of-range requests are rejected")
    {
        CHECK_THROWS_AS(ppw_constant(1), ContractError);
        CHECK_THROWS_AS(ppw_constant(21), ContractError);
        CHECK_THROWS_AS(bessel_j(0.0, 250.0), RangeError);
        CHECK_THROWS(bessel_zero(0.0, 0));
        CHECK_THROWS(bessel_zero(60.0, 1));
    }
}
