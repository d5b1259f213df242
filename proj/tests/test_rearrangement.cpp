#include "ppw/domain_solver.hpp"
#include "ppw/errors.hpp"
#include "ppw/rearrangement.hpp"
#include "ppw/verify.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace ppw;

namespace {

std::vector<double> cell_values(const DomainGrid& g, double (*f)(double, double))
{
    std::vector<double> out;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.inside(i, j)) {
                const auto [x, y] = g.centre(i, j);
                out.push_back(f(x, y));
            }
    return out;
}

} // namespace

TEST_SUITE("rearrangement")
{
    TEST_CASE("rearrangement preserves measure, level sets and every L^p norm")
    {
        const DomainGrid g = DomainGrid::ellipse(1.0, 0.4, 1.0 / 32);
        const auto vals = cell_values(g, [](double x, double y) { return std::exp(-x * x - 3 * y * y) + 0.1 * x; });
        const double cell = g.h() * g.h();
        const RadialProfile p = rearrange(vals, cell, 2, Monotone::decreasing);
        CHECK(p.total_measure() == doctest::Approx(g.area()).epsilon(1e-12));
        CHECK(p.outer_radius() == doctest::Approx(std::sqrt(g.area() / pi)).epsilon(1e-12));
        for (double q : {1.0, 2.0, 4.0}) {
            double direct = 0.0;
            for (double v : vals)
                direct += std::pow(std::abs(v), q) * cell;
            CHECK(p.norm(q) == doctest::Approx(std::pow(direct, 1.0 / q)).epsilon(1e-12));
        }
        for (double t : {0.2, 0.5, 0.9}) {
            const double count = static_cast<double>(std::count_if(vals.begin(), vals.end(), [t](double v) { return v > t; }));
            CHECK(p.level_measure(t) == doctest::Approx(count * cell).epsilon(1e-12));
        }
        CHECK(std::is_sorted(p.values().rbegin(), p.values().rend()));
    }

    TEST_CASE("a radial increasing function on a disk rearranges to itself")
    {
        const DomainGrid g = DomainGrid::disk(1.0, 1.0 / 64);
        const auto vals = cell_values(g, [](double x, double y) { return x * x + y * y; });
        const RadialProfile p = rearrange(vals, g.h() * g.h(), 2, Monotone::increasing);
        CHECK(std::is_sorted(p.values().begin(), p.values().end()));
        for (double r : {0.2, 0.5, 0.8})
            CHECK(p.value_at(r) == doctest::Approx(r * r).epsilon(0.05));
        CHECK(p.value_at(5.0) == p.values().back());
    }

    TEST_CASE("decreasing profiles vanish outside the rearranged ball")
    {
        const RadialProfile p = rearrange(std::vector<double>{3.0, 1.0, 2.0}, 1.0, 2, Monotone::decreasing);
        CHECK(p.values().front() == 3.0);
        CHECK(p.value_at(p.outer_radius() * 1.01) == 0.0);
    }

    TEST_CASE("from_samples gives shells summing to the ball measure")
    {
        std::vector<double> r, v;
        for (int i = 0; i <= 50; ++i) {
            r.push_back(0.04 * i);
            v.push_back(1.0);
        }
        const RadialProfile p = RadialProfile::from_samples(3, r, v, Monotone::decreasing);
        CHECK(p.total_measure() == doctest::Approx(4.0 * pi / 3.0 * 8.0).epsilon(1e-12));
    }

    TEST_CASE("sharp transform and its inverse round-trip the radii")
    {
        std::vector<double> r{0.1, 0.4, 0.9}, v{3.0, 2.0, 1.0};
        const RadialProfile p = RadialProfile::from_samples(3, r, v, Monotone::decreasing);
        const SharpSamples s = sharp_transform(p);
        for (std::size_t i = 0; i < r.size(); ++i)
            CHECK(s.s[i] == doctest::Approx(4.0 * pi / 3.0 * std::pow(r[i], 3)));
        const auto back = unsharp_radii(s, 3);
        for (std::size_t i = 0; i < r.size(); ++i)
            CHECK(back[i] == doctest::Approx(r[i]).epsilon(1e-14));
    }

    TEST_CASE("the integral identity for the ball ground state holds")
    {
        for (int n : {2, 3})
            for (auto v : {RadialPotential::zero(), RadialPotential::power(1, 2), RadialPotential::power(1, 4)}) {
                const FirstTwo ft = first_two(n, 1.0, v);
                CHECK(factde_residual(ft.z1, v, ft.lambda1) <= 1e-5);
            }
    }

    TEST_CASE("a wrong eigenvalue breaks the integral identity")
    {
        const FirstTwo ft = first_two(2, 1.0, RadialPotential::zero());
        CHECK(factde_residual(ft.z1, RadialPotential::zero(), 1.1 * ft.lambda1) > 1e-3);
    }

    TEST_CASE("square ground state crosses the comparison ground state once")
    {
        const DomainGrid g = DomainGrid::rectangle(1.0, 1.0, 1.0 / 48);
        const DomainSpectrum s = solve_domain(g, DomainPotential(RadialPotential::zero()), 1);
        const double R1 = comparison_ball(2, s.lambda1(), RadialPotential::zero());
        const FirstTwo ball = first_two(2, R1, RadialPotential::zero());
        const RadialProfile star = rearrange(s.u1(), g.h() * g.h(), 2, Monotone::decreasing);
        const ChitiReport c = chiti_crossings(star, ball.z1);
        CHECK(c.count == 1);
        REQUIRE(c.r0);
        CHECK(*c.r0 > 0.0);
        CHECK(*c.r0 < R1);
        // u1* <= z1 near the centre
        CHECK(star.values().front() <= ball.z1.z.front());
        const Fact1Report f = check_fact1(star, RadialPotential::zero(), s.lambda1(), 1e-2);
        CHECK(f.holds);
    }

    TEST_CASE("argument checks")
    {
        CHECK_THROWS_AS(rearrange(std::vector<double>{}, 1.0, 2, Monotone::decreasing), ContractError);
        CHECK_THROWS_AS(rearrange(std::vector<double>{1.0}, 0.0, 2, Monotone::decreasing), ContractError);
        CHECK_THROWS_AS(rearrange(std::vector<double>{-1.0}, 1.0, 2, Monotone::increasing), ContractError);
        CHECK_THROWS_AS(RadialProfile(2, {0.2, 0.1}, {1, 1}, {1, 1}, Monotone::decreasing), ContractError);
    }
}
