// SPDX-License-Identifier: Apache-2.0

#include "beamalign/arrays.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace beamalign;
using std::numbers::pi;

TEST_CASE("angle_to_spatial end points and interior value")
{
    const ArrayGeometry half{16, 0.5};
    CHECK(angle_to_spatial(0.0, half) == 0.0);
    CHECK(angle_to_spatial(90.0, half) == doctest::Approx(pi).epsilon(1e-15));
    // pi * sin(50 deg), evaluated independently.
    CHECK(angle_to_spatial(50.0, half) == doctest::Approx(2.4065995948258654).epsilon(1e-14));
    CHECK_THROWS_AS(angle_to_spatial(90.5, half), std::domain_error);
    CHECK_THROWS_AS(angle_to_spatial(-91.0, half), std::domain_error);
    CHECK_THROWS_AS(angle_to_spatial(std::nan(""), half), std::domain_error);
}

TEST_CASE("spatial_to_angle inverts angle_to_spatial")
{
    const ArrayGeometry half{16, 0.5};
    CHECK(spatial_to_angle(0.0, half) == 0.0);
    CHECK(spatial_to_angle(pi, half) == doctest::Approx(90.0));
    CHECK(spatial_to_angle(angle_to_spatial(50.0, half), half) == doctest::Approx(50.0).epsilon(1e-13));
    CHECK_THROWS_AS(spatial_to_angle(3.2, half), std::domain_error);
    CHECK(spatial_to_angle_clamped(3.2, half) == 90.0);

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> sf(-pi, pi);
    for (int i = 0; i < 1000; ++i)
    {
        const double s = sf(gen);
        CHECK(std::abs(angle_to_spatial(spatial_to_angle(s, half), half) - s) <= 1e-12);
    }
}

TEST_CASE("angle_to_spatial is odd and increasing")
{
    const ArrayGeometry g{8, 0.5};
    double prev = -1e9;
    for (double a = -90.0; a <= 90.0; a += 0.25)
    {
        const double s = angle_to_spatial(a, g);
        CHECK(s > prev);
        CHECK(angle_to_spatial(-a, g) == -s);
        prev = s;
    }
}

TEST_CASE("steering vectors")
{
    const auto boresight = steering(0.0, 4);
    for (int m = 0; m < 4; ++m)
        CHECK(std::abs(boresight(m) - std::complex<double>(0.5, 0.0)) < 1e-15);

    const auto endfire = steering(pi, 2);
    CHECK(std::abs(endfire(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(endfire(1) + 1.0 / std::sqrt(2.0)) < 1e-15);

    const auto a = steering(pi / 8, 16);
    for (int m = 0; m < 16; ++m)
        CHECK(std::abs(a(m) - std::polar(0.25, m * pi / 8)) < 1e-15);

    SUBCASE("unit norm and float instantiation")
    {
        std::mt19937_64 gen(3);
        std::uniform_real_distribution<double> sf(-10.0, 10.0);
        for (int i = 0; i < 500; ++i)
        {
            const double s = sf(gen);
            const int n = 1 + i % 64;
            CHECK(std::abs(steering(s, n).norm() - 1.0) <= 1e-12);
            CHECK((steering(s, n) - oracle::steering(s, n)).norm() <= 1e-12);
        }
        CHECK(std::abs(steering(0.3f, 8).norm() - 1.0f) < 1e-6f);
    }
}

TEST_CASE("gain_kernel matches the direct inner product")
{
    CHECK(gain_kernel(0.7, 0.7, 16) == 1.0);
    CHECK(gain_kernel(0.2 + 2 * pi, 0.2, 16) == doctest::Approx(1.0));
    CHECK(gain_kernel(2 * pi / 16, 0.0, 16) < 1e-28);
    CHECK(gain_kernel(1.0, 0.0, 1) == 1.0);

    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> sf(-2 * pi, 2 * pi);
    std::uniform_int_distribution<int> size(1, 64);
    for (int i = 0; i < 1000; ++i)
    {
        const double mu = sf(gen), nu = sf(gen);
        const int n = size(gen);
        const double direct = std::norm(steering(nu, n).dot(steering(mu, n)));
        CHECK(std::abs(gain_kernel(mu, nu, n) - direct) <= 1e-10);
        CHECK(std::abs(gain_kernel(mu, nu, n) - oracle::inner_gain(mu, nu, n)) <= 1e-10);
    }
}

TEST_CASE("dirichlet kernel carries the phase-centered inner product beyond one period")
{
    for (int n : {4, 5, 16, 17})
        for (double x : {-9.0, -4.0, -0.3, 0.0, 1e-9, 2.5, 7.0, 12.0})
        {
            const std::complex<double> ip = steering(0.0, n).dot(steering(x, n));
            const std::complex<double> centered = ip * std::polar(1.0, -0.5 * (n - 1) * x);
            CHECK(std::abs(centered.imag()) < 1e-12);
            CHECK(dirichlet(x, n) == doctest::Approx(centered.real()).epsilon(1e-10));
        }
}
