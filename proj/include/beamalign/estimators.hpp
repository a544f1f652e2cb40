// SPDX-License-Identifier: Apache-2.0
//
// Sounding model and the AoD estimators: grid of beams (GoB), GoB-based
// auxiliary beam pair (ABP), and the two-stage widebeam + ABP estimator.

#pragma once

#include "beamalign/beams.hpp"
#include "beamalign/channel.hpp"
#include "beamalign/rng.hpp"

#include <complex>
#include <stdexcept>
#include <utility>

namespace beamalign {

struct SoundingResult
{
    std::complex<double> sample;
    double power = 0.0; // |sample|^2
    int beam_index = -1;
};

struct EstimationReport
{
    double estimate_deg = 0.0;
    double estimate_sf = 0.0;
    int soundings_used = 0;
    int stage1_selection = -1;
    double ratio_metric = 0.0;
};

class DegenerateSounding : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// y = sqrt(rho) rx^H H tx + rx^H n with n ~ CN(0, I_M) drawn from rng.
// Throws std::invalid_argument when tx or rx is not unit norm or rho < 0.
SoundingResult sound(const ChannelRealization &channel, const CVector &tx, const CVector &rx,
                     double snr_linear, RngStream &rng);

// Stateful sounding front end used by the estimators: fixed channel, receive
// combiner and SNR; counts the soundings it performs. Without an rng the
// measurements are noiseless.
class Sounder
{
public:
    Sounder(const ChannelRealization &channel, CVector rx_combiner, double snr_linear, RngStream &rng);
    Sounder(const ChannelRealization &channel, CVector rx_combiner, double snr_linear);

    SoundingResult measure(const CVector &tx, int beam_index = -1);
    int count() const { return count_; }
    const ChannelRealization &channel() const { return channel_; }

private:
    const ChannelRealization &channel_;
    CVector rx_;
    double amplitude_;
    RngStream *rng_;
    int count_ = 0;
};

// Receive combiner steered at the dominant path's AoA (perfect AoA knowledge).
CVector aligned_combiner(const ChannelRealization &channel);

// (chi_minus - chi_plus) / (chi_minus + chi_plus), clamped to [-1, 1].
// chi_minus comes from the beam at center - delta. Throws DegenerateSounding
// when the sum is below 1e-300.
double ratio_metric(double chi_minus, double chi_plus);

// Closed-form inversion of the ratio metric:
//   mu = center - asin((z sin d - z sqrt(1 - z^2) sin d cos d) / (sin^2 d + z^2 cos^2 d))
double invert_ratio(double zeta, double delta, double center);

// Noiseless ratio metric -sin(x) sin(d) / (1 - cos(x) cos(d)), x = mu - center.
double forward_ratio(double mu, double delta, double center);

// Closed-form pair powers rho |alpha|^2 cos^2(n x / 2) / sin^2((x +- d) / 2),
// valid for d = k pi / n with odd k; throws std::domain_error otherwise.
// Returns (chi_minus, chi_plus). Used as a test oracle.
std::pair<double, double> closed_form_powers(double mu, double center, double delta, Eigen::Index n_tot,
                                             double rho, std::complex<double> alpha);

// Stage 1 sweeps the widebeams and keeps the strongest; stage 2 sounds the
// pair at its boresight +- delta and inverts the ratio metric.
EstimationReport estimate_two_stage(Sounder &sounder, const WidebeamCodebook &codebook);

// Boresight of the strongest narrow beam.
EstimationReport estimate_gob(Sounder &sounder, const SteeringCodebook &codebook);

// Strongest narrow beam paired with its stronger neighbour; the pair's
// midpoint and half spacing feed the ratio-metric inversion.
EstimationReport estimate_gob_abp(Sounder &sounder, const SteeringCodebook &codebook);

// Convenience forms that build the aligned receive combiner and a noisy sounder.
EstimationReport estimate_two_stage(const ChannelRealization &channel, const WidebeamCodebook &codebook,
                                    double snr_linear, RngStream &rng);
EstimationReport estimate_gob(const ChannelRealization &channel, const SteeringCodebook &codebook,
                              double snr_linear, RngStream &rng);
EstimationReport estimate_gob_abp(const ChannelRealization &channel, const SteeringCodebook &codebook,
                                  double snr_linear, RngStream &rng);

} // namespace beamalign
