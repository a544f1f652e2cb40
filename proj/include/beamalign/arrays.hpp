// SPDX-License-Identifier: Apache-2.0
//
// Uniform linear array geometry, angle <-> spatial frequency conversion,
// steering vectors and the Dirichlet gain kernel |a(nu)^H a(mu)|^2.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace beamalign {

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using CVector = ComplexVector<double>;
using CMatrix = ComplexMatrix<double>;

// Element spacing is stored in wavelengths (d / lambda).
struct ArrayGeometry
{
    Eigen::Index num_elements = 1;
    double element_spacing = 0.5;

    void validate() const
    {
        if (num_elements < 1)
            throw std::invalid_argument("ArrayGeometry: num_elements must be >= 1");
        if (!(element_spacing > 0.0) || !std::isfinite(element_spacing))
            throw std::invalid_argument("ArrayGeometry: element_spacing must be positive");
    }

    // Largest |spatial frequency| reachable from a physical angle.
    double max_spatial_frequency() const { return 2.0 * std::numbers::pi * element_spacing; }
};

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// mu = 2 pi (d / lambda) sin(theta), theta in degrees on [-90, 90].
inline double angle_to_spatial(double angle_deg, const ArrayGeometry &geom)
{
    if (!(angle_deg >= -90.0 && angle_deg <= 90.0))
        throw std::domain_error("angle_to_spatial: angle " + std::to_string(angle_deg) +
                                " deg outside [-90, 90]");
    return geom.max_spatial_frequency() * std::sin(deg_to_rad(angle_deg));
}

// Inverse of angle_to_spatial. Spatial frequencies outside the visible range
// are rejected; a relative slack of 1e-12 absorbs rounding at the end points.
inline double spatial_to_angle(double sf, const ArrayGeometry &geom)
{
    const double limit = geom.max_spatial_frequency();
    if (!std::isfinite(sf) || std::abs(sf) > limit * (1.0 + 1e-12))
        throw std::domain_error("spatial_to_angle: spatial frequency " + std::to_string(sf) +
                                " outside visible range");
    return rad_to_deg(std::asin(std::clamp(sf / limit, -1.0, 1.0)));
}

// Same as spatial_to_angle but clamps to [-90, 90] instead of throwing.
inline double spatial_to_angle_clamped(double sf, const ArrayGeometry &geom)
{
    const double limit = geom.max_spatial_frequency();
    return rad_to_deg(std::asin(std::clamp(sf / limit, -1.0, 1.0)));
}

// Entry m is exp(j m sf) / sqrt(n), m = 0 .. n-1.
template <typename Scalar>
ComplexVector<Scalar> steering(Scalar sf, Eigen::Index n)
{
    const Scalar amplitude = Scalar(1) / std::sqrt(static_cast<Scalar>(n));
    ComplexVector<Scalar> a(n);
    for (Eigen::Index m = 0; m < n; ++m)
        a(m) = std::polar(amplitude, static_cast<Scalar>(m) * sf);
    return a;
}

// Signed Dirichlet kernel sin(n x / 2) / (n sin(x / 2)) after reducing x to
// (-pi, pi]. Equals exp(-j (n-1) x / 2) a(0)^H a(x) for unit-norm steering
// vectors. Continued to 1 at x = 0.
template <typename Scalar>
Scalar dirichlet(Scalar x, Eigen::Index n)
{
    constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    const Scalar nn = static_cast<Scalar>(n);
    Scalar half = std::remainder(x, two_pi) / Scalar(2);
    // For odd n the kernel is 2 pi periodic; for even n it flips sign every
    // period, so carry the sign of the wrapped periods along.
    Scalar sign = Scalar(1);
    if (n % 2 == 0)
    {
        const Scalar periods = std::round((x / Scalar(2) - half) / std::numbers::pi_v<Scalar>);
        if (std::fmod(std::abs(periods), Scalar(2)) == Scalar(1))
            sign = Scalar(-1);
    }
    if (std::abs(half) < Scalar(1e-8))
        return sign * (Scalar(1) - (nn * nn - Scalar(1)) * half * half / Scalar(6));
    return sign * std::sin(nn * half) / (nn * std::sin(half));
}

// |a(nu)^H a(mu)|^2 = sin^2(n d / 2) / (n^2 sin^2(d / 2)), d = mu - nu.
template <typename Scalar>
Scalar gain_kernel(Scalar mu, Scalar nu, Eigen::Index n)
{
    const Scalar d = dirichlet(mu - nu, n);
    return d * d;
}

} // namespace beamalign
