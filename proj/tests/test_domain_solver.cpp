#include "ppw/domain_solver.hpp"
#include "ppw/errors.hpp"
#include "ppw/radial_solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace ppw;

TEST_SUITE("domain_solver")
{
    TEST_CASE("square spectrum equals the discrete closed form")
    {
        const DomainGrid g = DomainGrid::rectangle(1.0, 1.0, 1.0 / 32);
        const DomainSpectrum s = solve_domain(g, DomainPotential(RadialPotential::zero()), 4);
        const auto exact = discrete_rectangle_eigenvalues(32, 32, 1.0 / 32, 4);
        for (int i = 0; i < 4; ++i)
            CHECK(s.raw_lambda[i] == doctest::Approx(exact[i]).epsilon(1e-10));
        // lambda2 = lambda3 by symmetry
        CHECK(s.raw_lambda[1] == doctest::Approx(s.raw_lambda[2]).epsilon(1e-9));
    }

    TEST_CASE("rectangle converges to the continuum values at second order")
    {
        const double w = 2.0, ht = 1.0;
        const double exact1 = pi * pi * (1.0 / (w * w) + 1.0 / (ht * ht));
        double prev_err = 0.0;
        for (int m : {16, 32}) {
            const DomainGrid g = DomainGrid::rectangle(w, ht, 1.0 / m);
            const double err = std::abs(solve_domain(g, DomainPotential(RadialPotential::zero()), 1).lambda1() - exact1);
            if (prev_err > 0.0)
                CHECK(prev_err / err == doctest::Approx(4.0).epsilon(0.02));
            prev_err = err;
        }
    }

    TEST_CASE("Richardson on a refined square removes the h^2 term")
    {
        const DomainGrid g = DomainGrid::rectangle(1.0, 1.0, 1.0 / 16);
        const DomainSpectrum s = solve_domain_extrapolated(g, DomainPotential(RadialPotential::zero()), 2);
        CHECK(s.lambda1() == doctest::Approx(2.0 * pi * pi).epsilon(1e-5));
        CHECK(s.lambda2() == doctest::Approx(5.0 * pi * pi).epsilon(1e-4));
        REQUIRE(s.estimated_discretization_error);
        CHECK(s.discretization_errors.size() == 2);
    }

    TEST_CASE("eigenvectors are normalized and satisfy the discrete equation")
    {
        const DomainGrid g = DomainGrid::ellipse(1.0, 0.6, 1.0 / 24);
        const DomainSpectrum s = solve_domain(g, DomainPotential(RadialPotential::power(1, 2)), 2);
        for (int k = 0; k < 2; ++k) {
            double norm = 0.0;
            for (double x : s.u(k))
                norm += x * x * g.h() * g.h();
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(s.residuals[k] < 1e-5);
        }
        double dot = 0.0;
        const auto u1 = s.u1(), u2 = s.u2();
        for (std::size_t i = 0; i < u1.size(); ++i)
            dot += u1[i] * u2[i] * g.h() * g.h();
        CHECK(std::abs(dot) < 1e-8);
        for (double x : u1)
            CHECK(x > -1e-12);
    }

    TEST_CASE("staircase disk approaches the radial eigenvalue")
    {
        const auto v = RadialPotential::power(1, 2);
        const double radial = first_two(2, 1.0, v).lambda1;
        double prev = 1e300;
        for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
            const double err = std::abs(solve_domain(DomainGrid::disk(1.0, h), DomainPotential(v), 1).lambda1() - radial);
            CHECK(err < prev);
            prev = err;
        }
        // geometric error of the staircase is first order in h
        CHECK(prev / radial < 5e-3);
    }

    TEST_CASE("resampled Richardson combines the grids built at h and 2h")
    {
        const auto v = RadialPotential::power(1, 2);
        auto make = [](double h) { return DomainGrid::disk(1.0, h); };
        const DomainSpectrum fine = solve_domain(make(1.0 / 32), DomainPotential(v), 2);
        const DomainSpectrum coarse = solve_domain(make(1.0 / 16), DomainPotential(v), 2);
        const DomainSpectrum rich = solve_domain_resampled(make, 1.0 / 32, DomainPotential(v), 2);
        for (int i = 0; i < 2; ++i) {
            CHECK(rich.lambda[i] ==
                  doctest::Approx((4.0 * fine.raw_lambda[i] - coarse.raw_lambda[i]) / 3.0).epsilon(1e-9));
            CHECK(rich.discretization_errors[i] > 0.0);
        }
        CHECK(rich.grid == fine.grid);
    }

    TEST_CASE("richardson rejects unrelated grids")
    {
        const DomainPotential v(RadialPotential::zero());
        const DomainSpectrum a = solve_domain(DomainGrid::rectangle(1.0, 1.0, 1.0 / 8), v, 1);
        const DomainSpectrum b = solve_domain(DomainGrid::rectangle(2.0, 1.0, 1.0 / 16), v, 1);
        CHECK_THROWS_AS(richardson(a, b), ContractError);
        const DomainSpectrum c = solve_domain(DomainGrid::rectangle(1.0, 1.0, 1.0 / 16), v, 1);
        const RichardsonResult r = richardson(a, c);
        CHECK(r.lambda[0] == doctest::Approx((4.0 * c.raw_lambda[0] - a.raw_lambda[0]) / 3.0));
    }

    TEST_CASE("spectrum is invariant under a quarter turn about a centred potential")
    {
        const DomainGrid g = DomainGrid::l_shape(2.0, 1.0 / 12);
        const DomainPotential v(RadialPotential::power(1, 2));
        const DomainSpectrum a = solve_domain(g, v, 2);
        const DomainSpectrum b = solve_domain(g.rotated90(), v, 2);
        CHECK(b.lambda1() == doctest::Approx(a.lambda1()).epsilon(1e-9));
        CHECK(b.lambda2() == doctest::Approx(a.lambda2()).epsilon(1e-9));
    }

    TEST_CASE("refining keeps the area and coarsening undoes refinement")
    {
        const DomainGrid g = DomainGrid::ellipse(1.0, 0.5, 1.0 / 16);
        const DomainGrid f = g.refined();
        CHECK(f.area() == doctest::Approx(g.area()));
        CHECK(f.h() == doctest::Approx(g.h() / 2));
        CHECK(f.coarsened() == g);
    }

    TEST_CASE("mask text round-trips bit-exactly")
    {
        const DomainGrid g = DomainGrid::l_shape(1.0, 1.0 / 10);
        CHECK(DomainGrid::parse(g.to_string()) == g);
        const std::string path = std::string(PPW_TEST_DATA_DIR) + "/l.mask";
        g.write(path);
        CHECK(DomainGrid::read(path) == g);
    }

    TEST_CASE("malformed masks are rejected")
    {
        CHECK_THROWS_AS(DomainGrid::parse(""), ContractError);
        CHECK_THROWS_AS(DomainGrid::parse("2 2 0.5 1 1\n11\n"), ContractError);
        CHECK_THROWS_AS(DomainGrid::parse("2 2 0.5 1 1\n12\n11\n"), ContractError);
        CHECK_THROWS_AS(DomainGrid::parse("2 2 0.5 1 1\n00\n00\n"), ContractError);
        CHECK_THROWS_AS(DomainGrid::read("/nonexistent/mask"), ContractError);
    }

    TEST_CASE("disconnected masks are flagged")
    {
        const DomainGrid g = DomainGrid::parse("5 3 0.25 2.5 1.5\n00000\n11011\n00000\n");
        CHECK_FALSE(g.connected());
        const DomainSpectrum s = solve_domain(g, DomainPotential(RadialPotential::zero()), 2);
        CHECK(s.disconnected);
        // two identical 2-cell components: a doubled eigenvalue
        CHECK(s.lambda2() == doctest::Approx(s.lambda1()).epsilon(1e-9));
    }

    TEST_CASE("cell-table potentials are sampled in unknown order")
    {
        const DomainGrid g = DomainGrid::rectangle(1.0, 1.0, 0.5);
        std::vector<double> cells(static_cast<std::size_t>(g.nx()) * g.ny(), 0.0);
        for (std::size_t i = 0; i < cells.size(); ++i)
            cells[i] = static_cast<double>(i);
        const auto s = DomainPotential(cells).sample(g);
        CHECK(s.size() == g.interior_count());
        CHECK_THROWS_AS(DomainPotential(std::vector<double>{1.0}).sample(g), ContractError);
    }

    TEST_CASE("constant potential shifts the spectrum")
    {
        const DomainGrid g = DomainGrid::rectangle(1.0, 1.0, 1.0 / 16);
        std::vector<double> cells(static_cast<std::size_t>(g.nx()) * g.ny(), 3.0);
        const DomainSpectrum a = solve_domain(g, DomainPotential(RadialPotential::zero()), 2);
        const DomainSpectrum b = solve_domain(g, DomainPotential(cells), 2);
        CHECK(b.lambda1() == doctest::Approx(a.lambda1() + 3.0).epsilon(1e-10));
        CHECK(b.lambda2() == doctest::Approx(a.lambda2() + 3.0).epsilon(1e-10));
    }

    TEST_CASE("argument checks")
    {
        CHECK_THROWS_AS(DomainGrid::disk(-1.0, 0.1), ContractError);
        CHECK_THROWS_AS(DomainGrid::rectangle(1.0, 1.0, 0.3), ContractError);
        const DomainGrid g = DomainGrid::rectangle(1.0, 1.0, 0.25);
        CHECK_THROWS_AS(solve_domain(g, DomainPotential(RadialPotential::zero()), 5), ContractError);
    }
}
