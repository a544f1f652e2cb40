// SPDX-License-Identifier: Apache-2.0

#include "beamalign/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace beamalign {

namespace {

constexpr double kPowerFloor = 1e-300;
constexpr double kNormTolerance = 1e-9;

void require_unit_norm(const CVector &v, const char *what)
{
    if (std::abs(v.norm() - 1.0) > kNormTolerance)
        throw std::invalid_argument(std::string(what) + " must have unit norm");
}

std::complex<double> noise_projection(const CVector &rx, RngStream &rng)
{
    CVector n(rx.size());
    for (Eigen::Index m = 0; m < n.size(); ++m)
        n(m) = rng.complex_normal();
    return rx.dot(n);
}

EstimationReport finish(double mu_hat, const ChannelRealization &channel, int soundings, int selection,
                        double zeta)
{
    EstimationReport r;
    r.estimate_sf = mu_hat;
    r.estimate_deg = spatial_to_angle_clamped(mu_hat, channel.tx_geometry());
    r.soundings_used = soundings;
    r.stage1_selection = selection;
    r.ratio_metric = zeta;
    return r;
}

double ratio_or_zero(double chi_minus, double chi_plus)
{
    try
    {
        return ratio_metric(chi_minus, chi_plus);
    }
    catch (const DegenerateSounding &)
    {
        return 0.0;
    }
}

} // namespace

SoundingResult sound(const ChannelRealization &channel, const CVector &tx, const CVector &rx, double snr_linear,
                     RngStream &rng)
{
    Sounder s(channel, rx, snr_linear, rng);
    return s.measure(tx);
}

Sounder::Sounder(const ChannelRealization &channel, CVector rx_combiner, double snr_linear, RngStream &rng)
    : channel_(channel), rx_(std::move(rx_combiner)), amplitude_(std::sqrt(snr_linear)), rng_(&rng)
{
    if (!(snr_linear >= 0.0))
        throw std::invalid_argument("Sounder: SNR must be non-negative");
    require_unit_norm(rx_, "receive combiner");
}

Sounder::Sounder(const ChannelRealization &channel, CVector rx_combiner, double snr_linear)
    : channel_(channel), rx_(std::move(rx_combiner)), amplitude_(std::sqrt(snr_linear)), rng_(nullptr)
{
    if (!(snr_linear >= 0.0))
        throw std::invalid_argument("Sounder: SNR must be non-negative");
    require_unit_norm(rx_, "receive combiner");
}

SoundingResult Sounder::measure(const CVector &tx, int beam_index)
{
    require_unit_norm(tx, "transmit precoder");
    SoundingResult r;
    r.beam_index = beam_index;
    r.sample = amplitude_ * channel_.response(rx_, tx);
    if (rng_)
        r.sample += noise_projection(rx_, *rng_);
    r.power = std::norm(r.sample);
    ++count_;
    return r;
}

CVector aligned_combiner(const ChannelRealization &channel)
{
    const auto &rx = channel.rx_geometry();
    return steering(angle_to_spatial(channel.los().aoa_deg, rx), rx.num_elements);
}

double ratio_metric(double chi_minus, double chi_plus)
{
    const double sum = chi_minus + chi_plus;
    if (!(sum >= kPowerFloor))
        throw DegenerateSounding("ratio_metric: both pair powers vanish");
    return std::clamp((chi_minus - chi_plus) / sum, -1.0, 1.0);
}

double invert_ratio(double zeta, double delta, double center)
{
    const double z = std::clamp(zeta, -1.0, 1.0);
    // The end points are exact: the arcsine argument reduces to -+sin(delta).
    if (z == 1.0)
        return center - delta;
    if (z == -1.0)
        return center + delta;
    const double s = std::sin(delta);
    const double c = std::cos(delta);
    const double num = z * s - z * std::sqrt(1.0 - z * z) * s * c;
    const double den = s * s + z * z * c * c;
    return center - std::asin(std::clamp(num / den, -1.0, 1.0));
}

double forward_ratio(double mu, double delta, double center)
{
    const double x = mu - center;
    return -std::sin(x) * std::sin(delta) / (1.0 - std::cos(x) * std::cos(delta));
}

std::pair<double, double> closed_form_powers(double mu, double center, double delta, Eigen::Index n_tot, double rho,
                                             std::complex<double> alpha)
{
    const Adequacy a = is_adequate(delta, n_tot);
    if (!a.adequate || a.k % 2 == 0)
        throw std::domain_error("closed_form_powers: requires delta = k pi / n with odd k");
    const double x = mu - center;
    const double scale = rho * std::norm(alpha);
    const double num = std::pow(std::cos(0.5 * static_cast<double>(n_tot) * x), 2);
    const double chi_minus = scale * num / std::pow(std::sin(0.5 * (x + delta)), 2);
    const double chi_plus = scale * num / std::pow(std::sin(0.5 * (x - delta)), 2);
    return {chi_minus, chi_plus};
}

EstimationReport estimate_two_stage(Sounder &sounder, const WidebeamCodebook &codebook)
{
    if (codebook.beams.empty())
        throw std::invalid_argument("estimate_two_stage: empty codebook");
    const int start = sounder.count();

    int best = 0;
    double best_power = -1.0;
    for (int j = 0; j < codebook.num_beams(); ++j)
    {
        const double p = sounder.measure(codebook.beams[j].combined, j).power;
        if (p > best_power)
        {
            best_power = p;
            best = j;
        }
    }

    const double center = codebook.beams[best].boresight;
    const AbpPair pair = build_abp(center, codebook.half_width, codebook.n_tot);
    const double chi_minus = sounder.measure(pair.beam_minus).power;
    const double chi_plus = sounder.measure(pair.beam_plus).power;
    const double zeta = ratio_or_zero(chi_minus, chi_plus);
    const double mu_hat = invert_ratio(zeta, pair.delta, center);
    return finish(mu_hat, sounder.channel(), sounder.count() - start, best, zeta);
}

EstimationReport estimate_gob(Sounder &sounder, const SteeringCodebook &codebook)
{
    if (codebook.beams.empty())
        throw std::invalid_argument("estimate_gob: empty codebook");
    const int start = sounder.count();
    int best = 0;
    double best_power = -1.0;
    for (int b = 0; b < codebook.size(); ++b)
    {
        const double p = sounder.measure(codebook.beams[b], b).power;
        if (p > best_power)
        {
            best_power = p;
            best = b;
        }
    }
    return finish(codebook.boresights[best], sounder.channel(), sounder.count() - start, best, 0.0);
}

EstimationReport estimate_gob_abp(Sounder &sounder, const SteeringCodebook &codebook)
{
    if (codebook.size() < 2)
        throw std::invalid_argument("estimate_gob_abp: need at least two beams");
    const int start = sounder.count();
    std::vector<double> powers(codebook.beams.size());
    for (int b = 0; b < codebook.size(); ++b)
        powers[b] = sounder.measure(codebook.beams[b], b).power;

    const int best = static_cast<int>(std::max_element(powers.begin(), powers.end()) - powers.begin());
    int neighbour;
    if (best == 0)
        neighbour = 1;
    else if (best == codebook.size() - 1)
        neighbour = best - 1;
    else
        neighbour = powers[best + 1] > powers[best - 1] ? best + 1 : best - 1;

    const int lower = std::min(best, neighbour);
    const int upper = std::max(best, neighbour);
    const double center = 0.5 * (codebook.boresights[lower] + codebook.boresights[upper]);
    const double delta = 0.5 * (codebook.boresights[upper] - codebook.boresights[lower]);
    const double zeta = ratio_or_zero(powers[lower], powers[upper]);
    const double mu_hat = invert_ratio(zeta, delta, center);
    return finish(mu_hat, sounder.channel(), sounder.count() - start, best, zeta);
}

EstimationReport estimate_two_stage(const ChannelRealization &channel, const WidebeamCodebook &codebook,
                                    double snr_linear, RngStream &rng)
{
    Sounder s(channel, aligned_combiner(channel), snr_linear, rng);
    return estimate_two_stage(s, codebook);
}

EstimationReport estimate_gob(const ChannelRealization &channel, const SteeringCodebook &codebook, double snr_linear,
                              RngStream &rng)
{
    Sounder s(channel, aligned_combiner(channel), snr_linear, rng);
    return estimate_gob(s, codebook);
}

EstimationReport estimate_gob_abp(const ChannelRealization &channel, const SteeringCodebook &codebook,
                                  double snr_linear, RngStream &rng)
{
    Sounder s(channel, aligned_combiner(channel), snr_linear, rng);
    return estimate_gob_abp(s, codebook);
}

} // namespace beamalign
