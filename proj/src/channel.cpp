// SPDX-License-Identifier: Apache-2.0

#include "beamalign/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace beamalign {

void AnglePriors::validate() const
{
    auto check = [](double lo, double hi, const char *what) {
        if (!(lo >= -90.0 && hi <= 90.0 && lo <= hi))
            throw std::domain_error(std::string(what) + " prior must lie within [-90, 90] with lo <= hi");
    };
    check(aod_lo_deg, aod_hi_deg, "AoD");
    check(aoa_lo_deg, aoa_hi_deg, "AoA");
}

ChannelRealization::ChannelRealization(std::vector<PathParams> paths, ArrayGeometry tx,
                                       ArrayGeometry rx, std::optional<double> k_factor_db,
                                       std::size_t los_index)
    : paths_(std::move(paths)), tx_(tx), rx_(rx), k_factor_db_(k_factor_db), los_index_(los_index)
{
    if (paths_.empty())
        throw std::invalid_argument("ChannelRealization: at least one path required");
    if (los_index_ >= paths_.size())
        throw std::invalid_argument("ChannelRealization: los_index out of range");
    tx_.validate();
    rx_.validate();

    tx_steering_.reserve(paths_.size());
    rx_steering_.reserve(paths_.size());
    for (const auto &p : paths_)
    {
        tx_steering_.push_back(steering(angle_to_spatial(p.aod_deg, tx_), tx_.num_elements));
        rx_steering_.push_back(steering(angle_to_spatial(p.aoa_deg, rx_), rx_.num_elements));
    }
}

CMatrix ChannelRealization::matrix() const
{
    CMatrix h = CMatrix::Zero(rx_.num_elements, tx_.num_elements);
    for (std::size_t i = 0; i < paths_.size(); ++i)
        h.noalias() += (paths_[i].weight * paths_[i].gain) * rx_steering_[i] * tx_steering_[i].adjoint();
    return h;
}

std::complex<double> ChannelRealization::response(const CVector &rx, const CVector &tx) const
{
    if (rx.size() != rx_.num_elements || tx.size() != tx_.num_elements)
        throw std::invalid_argument("ChannelRealization::response: dimension mismatch");
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < paths_.size(); ++i)
        acc += paths_[i].weight * paths_[i].gain * rx.dot(rx_steering_[i]) * tx_steering_[i].dot(tx);
    return acc;
}

ChannelRealization make_single_path(double aod_deg, double aoa_deg, std::complex<double> g,
                                    const ArrayGeometry &tx, const ArrayGeometry &rx)
{
    const double scale = std::sqrt(static_cast<double>(tx.num_elements * rx.num_elements));
    return ChannelRealization({PathParams{g * scale, aod_deg, aoa_deg, 1.0}}, tx, rx);
}

ChannelRealization make_rician(const RicianParams &params, const AnglePriors &priors,
                               const ArrayGeometry &tx, const ArrayGeometry &rx, RngStream &rng)
{
    if (params.num_paths < 1)
        throw std::domain_error("make_rician: number of paths must be >= 1");
    if (std::isnan(params.k_factor_db))
        throw std::domain_error("make_rician: K factor is NaN");
    priors.validate();

    double los_weight = 1.0;
    double nlos_weight = 0.0;
    if (params.k_factor_db != std::numeric_limits<double>::infinity())
    {
        const double k = std::pow(10.0, params.k_factor_db / 10.0);
        los_weight = std::sqrt(k / (1.0 + k));
        nlos_weight = std::sqrt(1.0 / (1.0 + k));
    }
    if (params.normalize_nlos && params.num_paths > 1)
        nlos_weight /= std::sqrt(static_cast<double>(params.num_paths - 1));

    const double scale = std::sqrt(static_cast<double>(tx.num_elements * rx.num_elements));
    std::vector<PathParams> paths;
    paths.reserve(static_cast<std::size_t>(params.num_paths));
    for (int i = 0; i < params.num_paths; ++i)
    {
        PathParams p;
        p.aod_deg = rng.uniform(priors.aod_lo_deg, priors.aod_hi_deg);
        p.aoa_deg = rng.uniform(priors.aoa_lo_deg, priors.aoa_hi_deg);
        p.gain = rng.complex_normal() * scale;
        p.weight = i == 0 ? los_weight : nlos_weight;
        paths.push_back(p);
    }
    return ChannelRealization(std::move(paths), tx, rx, params.k_factor_db, 0);
}

ChannelRealization draw_single_path(const AnglePriors &priors, const ArrayGeometry &tx,
                                    const ArrayGeometry &rx, RngStream &rng)
{
    RicianParams los_only;
    los_only.k_factor_db = std::numeric_limits<double>::infinity();
    los_only.num_paths = 1;
    auto h = make_rician(los_only, priors, tx, rx, rng);
    return ChannelRealization(h.paths(), tx, rx);
}

} // namespace beamalign
