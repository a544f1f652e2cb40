// SPDX-License-Identifier: Apache-2.0
//
// Single-path and Rician multipath ULA channels. A realization keeps the
// per-path parameters and materializes the M x N matrix only on request.

#pragma once

#include "beamalign/arrays.hpp"
#include "beamalign/rng.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace beamalign {

struct PathParams
{
    std::complex<double> gain; // alpha = g sqrt(N M)
    double aod_deg = 0.0;
    double aoa_deg = 0.0;
    double weight = 1.0;       // Rician amplitude factor applied on top of gain
};

struct AnglePriors
{
    double aod_lo_deg = -50.0;
    double aod_hi_deg = 50.0;
    double aoa_lo_deg = -90.0;
    double aoa_hi_deg = 90.0;

    void validate() const;
};

struct RicianParams
{
    double k_factor_db = 13.5;
    int num_paths = 4;
    // Divide the NLOS power by L - 1. Off by default: the model sums the NLOS
    // terms without extra normalization.
    bool normalize_nlos = false;
};

class ChannelRealization
{
public:
    ChannelRealization(std::vector<PathParams> paths, ArrayGeometry tx, ArrayGeometry rx,
                       std::optional<double> k_factor_db = std::nullopt, std::size_t los_index = 0);

    const std::vector<PathParams> &paths() const { return paths_; }
    const PathParams &los() const { return paths_[los_index_]; }
    std::size_t los_index() const { return los_index_; }
    std::optional<double> k_factor_db() const { return k_factor_db_; }
    const ArrayGeometry &tx_geometry() const { return tx_; }
    const ArrayGeometry &rx_geometry() const { return rx_; }

    // H = sum_i weight_i alpha_i a_r(psi_i) a_t(mu_i)^H, size M x N.
    CMatrix matrix() const;

    // rx^H H tx evaluated path by path without forming H.
    std::complex<double> response(const CVector &rx, const CVector &tx) const;

private:
    std::vector<PathParams> paths_;
    ArrayGeometry tx_;
    ArrayGeometry rx_;
    std::optional<double> k_factor_db_;
    std::size_t los_index_;
    std::vector<CVector> tx_steering_;
    std::vector<CVector> rx_steering_;
};

// H = alpha a_r(phi) a_t(theta)^H with alpha = g sqrt(N M).
ChannelRealization make_single_path(double aod_deg, double aoa_deg, std::complex<double> g,
                                    const ArrayGeometry &tx, const ArrayGeometry &rx);

// Rician channel: the LOS path (index 0) is weighted by sqrt(K / (1 + K)),
// the L - 1 NLOS paths by sqrt(1 / (1 + K)). Draw order per path is
// (aod, aoa, g). K = +inf gives a pure LOS channel.
ChannelRealization make_rician(const RicianParams &params, const AnglePriors &priors,
                               const ArrayGeometry &tx, const ArrayGeometry &rx, RngStream &rng);

// Random single-path channel: the K -> inf, L = 1 case of make_rician.
ChannelRealization draw_single_path(const AnglePriors &priors, const ArrayGeometry &tx,
                                    const ArrayGeometry &rx, RngStream &rng);

} // namespace beamalign
