// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace beamalign {

// Reproducible random stream. Streams are keyed: the same (seed, keys...)
// always yields the same sequence regardless of which thread builds it or
// in which order streams are created. Gaussian draws use an explicit
// Box-Muller transform so the sequence does not depend on the standard
// library's distribution implementations.
class RngStream
{
public:
    explicit RngStream(std::uint64_t seed);

    static RngStream derive(std::uint64_t master_seed, std::initializer_list<std::uint64_t> keys);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard real Gaussian.
    double normal();

    // CN(0, 1): real and imaginary parts independent with variance 1/2 each.
    std::complex<double> complex_normal();

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// FNV-1a, used to turn estimator labels into stream keys.
std::uint64_t fnv1a64(std::string_view text);

} // namespace beamalign
