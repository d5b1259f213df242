#include "ppw/errors.hpp"
#include "ppw/radial_solver.hpp"
#include "ppw/riccati.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ppw;

TEST_SUITE("riccati")
{
    TEST_CASE("sector constants by direct evaluation")
    {
        const SectorConstants c = sector_constants(2, 0.5, 1.0, 2.0);
        CHECK(c.N == doctest::Approx(-0.75));
        CHECK(c.nu == 0);
        CHECK(c.M == doctest::Approx(0.5625));
        for (int n = 2; n <= 6; ++n)
            CHECK(sector_constants(n, 1.0, 3.0, 7.0).M == doctest::Approx(0.0).epsilon(1e-15));
        // Q_y = 2 y lambda1 + E N / y - 2 E with E = 1
        CHECK(c.Q == doctest::Approx(2 * 0.5 * 1.0 + 1.0 * (-0.75) / 0.5 - 2.0));
    }

    TEST_CASE("factorized identity for y M_y holds across a sweep")
    {
        std::mt19937_64 rng(42);
        std::uniform_real_distribution<double> uy(0.01, 3.0);
        for (int t = 0; t < 2000; ++t) {
            const int n = 2 + t % 6;
            const double y = uy(rng);
            const SectorConstants c = sector_constants(n, y, 1.0, 2.0);
            const double factored = 0.5 * (y * y - 1) * ((y - 1) - (n - 2)) * ((y + 1) + (n - 2));
            CHECK(std::abs(y * c.M - factored) <= 1e-12 * std::max(1.0, std::abs(factored)));
            CHECK(c.identity_residual <= 1e-12 * std::max(1.0, std::abs(factored)));
            if (y < 1.0)
                CHECK(c.M > 0.0);
        }
    }

    TEST_CASE("n = 4, y = 0.5: sign of M from the factorization")
    {
        const SectorConstants c = sector_constants(4, 0.5, 1.0, 2.0);
        const double factored = 0.5 * (0.25 - 1) * ((0.5 - 1) - 2) * ((0.5 + 1) + 2);
        CHECK((c.M > 0) == (factored > 0));
    }

    TEST_CASE("closed-form q''(0) vanishes for lambda = (2, 4), n = 2")
    {
        FirstTwo ft = first_two(2, 1.0, RadialPotential::zero());
        const RiccatiDiagnostics d = diagnostics(ft.z1, ft.z2, RadialPotential::zero());
        const QSecondDerivative q = q_second_derivative_check(2, 2.0, 4.0, d);
        CHECK(q.closed_form == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(q.two_over_n_form == doctest::Approx(0.0).epsilon(1e-15));
    }

    TEST_CASE("the Q_1 form equals the direct form exactly")
    {
        FirstTwo ft = first_two(3, 1.0, RadialPotential::zero());
        const RiccatiDiagnostics d = diagnostics(ft.z1, ft.z2, RadialPotential::zero());
        const QSecondDerivative q = q_second_derivative_check(3, 5.0, 9.0, d);
        CHECK(q.q1_form == doctest::Approx(2.0 / 3.0 * ((1.0 + 2.0 / 3.0) * 5.0 - 9.0)).epsilon(1e-12));
        CHECK(q.identity_gap <= 1e-12);
    }

    TEST_CASE("free disk: boundary values, residuals and the fitted q''(0)")
    {
        FirstTwo ft = first_two(2, 1.0, RadialPotential::zero());
        const RiccatiDiagnostics d = diagnostics(ft.z1, ft.z2, RadialPotential::zero());
        CHECK(d.q0 == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(std::abs(d.qR) <= 1e-3);
        CHECK(d.residual_ric_q <= 1e-4);
        CHECK(d.residual_ric_p <= 1e-4);
        CHECK(d.residual_T_identity <= 1e-4);
        const QSecondDerivative q = q_second_derivative_check(2, ft.lambda1, ft.lambda2, d);
        CHECK(q.closed_form < 0.0);
        CHECK(q.agree);
        CHECK(d.E > 0.0);
    }

    TEST_CASE("monotonicity facts on admissible potentials")
    {
        for (int n : {2, 3})
            for (auto v : {RadialPotential::zero(), RadialPotential::power(1, 2), RadialPotential::power(1, 4)})
                for (double R : {0.5, 1.0, 2.5}) {
                    FirstTwo ft = first_two(n, R, v);
                    const RiccatiDiagnostics d = diagnostics(ft.z1, ft.z2, v);
                    CHECK(d.facts.q_in_01);
                    CHECK(d.facts.q_decreasing);
                    CHECK(d.facts.g_increasing);
                    CHECK(d.facts.B_decreasing);
                    CHECK(d.facts.q_min >= -1e-6);
                }
    }

    TEST_CASE("closed-form q''(0) sign matches lambda2 >= (1 + 2/n) lambda1")
    {
        for (double R : {0.5, 1.0, 2.0, 4.0}) {
            FirstTwo ft = first_two(2, R, RadialPotential::power(1, 2));
            const RiccatiDiagnostics d = diagnostics(ft.z1, ft.z2, RadialPotential::power(1, 2));
            const QSecondDerivative q = q_second_derivative_check(2, ft.lambda1, ft.lambda2, d);
            CHECK((q.closed_form <= 0.0) == (ft.lambda2 >= 2.0 * ft.lambda1));
        }
    }

    TEST_CASE("g extends by its boundary limit and B by g(R)^2 (n-1)/r^2")
    {
        FirstTwo ft = first_two(2, 1.0, RadialPotential::power(1, 2));
        const RiccatiDiagnostics d = diagnostics(ft.z1, ft.z2, RadialPotential::power(1, 2));
        CHECK(d.g_at(1.0 - 1e-6) == doctest::Approx(d.g_limit).epsilon(1e-4));
        CHECK(d.g_at(3.0) == d.g_limit);
        CHECK(d.B_at(2.0) == doctest::Approx(d.g_limit * d.g_limit / 4.0));
        CHECK(d.B_at(1.0 - 1e-9) == doctest::Approx(d.B_at(1.0 + 1e-9)).epsilon(1e-4));
    }

    TEST_CASE("T and Z_y: identity at every zero of T and boundary behaviour")
    {
        FirstTwo ft = first_two(2, 1.0, RadialPotential::zero());
        const RiccatiDiagnostics d = diagnostics(ft.z1, ft.z2, RadialPotential::zero());
        for (double y : {0.5, 0.9, 2.0}) {
            const TZReport r = T_and_Z(ft.z1, d, y);
            CHECK_FALSE(r.zeros.empty());
            CHECK(r.zeros_consistent);
            for (const auto& z : r.zeros)
                CHECK(z.relative_gap <= 1e-3);
        }
        const TZReport half = T_and_Z(ft.z1, d, 0.5);
        CHECK(half.T_near_origin > 0.0);
        CHECK(half.T_near_boundary > 0.0);
        CHECK(half.Z_near_origin > 1e4);
        CHECK_THROWS_AS(T_and_Z(ft.z1, d, 3.5), ContractError);
    }

    TEST_CASE("diagnostics needs a positive ground state on a shared grid")
    {
        FirstTwo a = first_two(2, 1.0, RadialPotential::zero());
        FirstTwo b = first_two(2, 2.0, RadialPotential::zero());
        CHECK_THROWS_AS(diagnostics(a.z1, b.z2, RadialPotential::zero()), ContractError);
        EigenPair bad = a.z1;
        bad.z[10] = -1.0;
        CHECK_THROWS_AS(diagnostics(bad, a.z2, RadialPotential::zero()), ContractError);
    }

    TEST_CASE("ratio lemma worked example")
    {
        const Lemma3Result r = lemma3(2, 1, 5, 2, 1);
        CHECK(r.lhs == doctest::Approx(1.5));
        CHECK(r.rhs == doctest::Approx(2.0));
        CHECK(r.holds);
        CHECK(r.x0 == doctest::Approx(-0.5));
        CHECK(r.x0_negative);
    }

    TEST_CASE("ratio lemma names the violated precondition")
    {
        auto message = [](double a, double b, double c, double d) {
            try {
                lemma3(a, b, c, d, 1.0);
            } catch (const ContractError& e) {
                return std::string(e.what());
            }
            return std::string();
        };
        CHECK(message(0.5, 1, 5, 2).find("a >= b") != std::string::npos);
        CHECK(message(2, 1, 5, 0.5).find("d >= b") != std::string::npos);
        CHECK(message(2, 1, 3, 2).find("a/b < c/d") != std::string::npos);
        CHECK_THROWS_AS(lemma3(2, 1, 5, 2, 0.0), ContractError);
    }

    TEST_CASE("ratio lemma sweep over random admissible quadruples")
    {
        const Lemma3Sweep s = lemma3_sweep(10000, 2024);
        CHECK(s.samples == 10000);
        CHECK(s.failures == 0);
        CHECK(s.nonnegative_x0 == 0);
    }

    TEST_CASE("ratio lemma against the cross-multiplied form")
    {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int t = 0; t < 5000; ++t) {
            const double b = 0.1 + u(rng), a = b * (1 + u(rng)), d = b * (1 + 3 * u(rng));
            const double c = a * d / b * (1 + 0.5 * u(rng) + 1e-9);
            const double x = 100 * (1 - u(rng));
            // (a+x)(d+x) < (c+x)(b+x)
            CHECK(lemma3(a, b, c, d, x).holds == ((a + x) * (d + x) < (c + x) * (b + x)));
        }
    }
}
