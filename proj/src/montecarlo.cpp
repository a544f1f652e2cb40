// SPDX-License-Identifier: Apache-2.0

#include "beamalign/montecarlo.hpp"

#include "beamalign/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace beamalign {

namespace {

constexpr std::uint64_t kChannelStream = 0x6368616E6E656Cull; // "channel"
constexpr std::uint64_t kTrialsPerChunk = 256;

} // namespace

std::string EstimatorSpec::label() const
{
    switch (kind)
    {
    case EstimatorKind::two_stage:
        return "two_stage";
    case EstimatorKind::two_stage_nonadequate:
        return "two_stage_nonadequate";
    case EstimatorKind::gob:
        return "gob_" + std::to_string(num_beams);
    case EstimatorKind::gob_abp:
        return "gob_abp_" + std::to_string(num_beams);
    }
    return "unknown";
}

std::vector<double> ExperimentConfig::default_snr_grid()
{
    std::vector<double> grid;
    for (int i = 0; i <= 18; ++i)
        grid.push_back(-10.0 + 2.5 * i);
    return grid;
}

void ExperimentConfig::validate() const
{
    ArrayGeometry{n_tot, element_spacing}.validate();
    ArrayGeometry{m_tot, element_spacing}.validate();
    priors.validate();
    if (trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    if (snr_grid_db.empty())
        throw std::invalid_argument("SNR grid is empty");
    for (double s : snr_grid_db)
        if (!std::isfinite(s))
            throw std::invalid_argument("SNR grid entries must be finite");
    if (estimators.empty())
        throw std::invalid_argument("no estimators selected");
    if (n_rf < 1 || n_rf % 2 == 0)
        throw std::invalid_argument("n_rf must be odd and >= 1");
    if (channel_kind == ChannelKind::rician && rician.num_paths < 1)
        throw std::invalid_argument("num_paths must be >= 1");
    for (const auto &e : estimators)
    {
        if (e.kind == EstimatorKind::gob && e.num_beams < 1)
            throw std::invalid_argument("GoB needs at least one beam");
        if (e.kind == EstimatorKind::gob_abp && e.num_beams < 2)
            throw std::invalid_argument("GoB-based ABP needs at least two beams");
    }
    std::vector<std::string> labels;
    for (const auto &e : estimators)
        labels.push_back(e.label());
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
        throw std::invalid_argument("duplicate estimator");
}

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config))
{
    config_.validate();

    CodebookOptions options;
    options.n_tot = config_.n_tot;
    options.n_rf = config_.n_rf;
    options.element_spacing = config_.element_spacing;
    options.num_beams = config_.num_widebeams;
    options.target_k = config_.widebeam_k;
    options.min_overlap = config_.min_overlap;
    widebeams_ = build_widebeam_codebook(config_.priors.aod_lo_deg, config_.priors.aod_hi_deg, options);

    const ArrayGeometry tx = tx_geometry();
    for (const auto &e : config_.estimators)
    {
        if (e.kind == EstimatorKind::two_stage_nonadequate && !nonadequate_)
        {
            CodebookOptions na = options;
            na.num_beams = widebeams_.num_beams();
            na.delta_scale = config_.delta_scale;
            nonadequate_ = build_widebeam_codebook(config_.priors.aod_lo_deg, config_.priors.aod_hi_deg, na);
        }
        if (e.kind == EstimatorKind::gob || e.kind == EstimatorKind::gob_abp)
        {
            const bool have = std::any_of(steering_.begin(), steering_.end(),
                                          [&](const auto &s) { return s.first == e.num_beams; });
            if (!have)
                steering_.emplace_back(e.num_beams, build_steering_codebook(config_.priors.aod_lo_deg,
                                                                            config_.priors.aod_hi_deg,
                                                                            e.num_beams, tx));
        }
    }
}

const WidebeamCodebook &Experiment::nonadequate_widebeams() const
{
    if (!nonadequate_)
        throw std::logic_error("non-adequate codebook not configured");
    return *nonadequate_;
}

const SteeringCodebook &Experiment::steering_codebook(int num_beams) const
{
    for (const auto &s : steering_)
        if (s.first == num_beams)
            return s.second;
    throw std::logic_error("steering codebook of that size not configured");
}

ChannelRealization Experiment::draw_channel(std::uint64_t trial_index) const
{
    RngStream rng = RngStream::derive(config_.master_seed, {kChannelStream, trial_index});
    if (config_.channel_kind == ChannelKind::rician)
        return make_rician(config_.rician, config_.priors, tx_geometry(), rx_geometry(), rng);
    return draw_single_path(config_.priors, tx_geometry(), rx_geometry(), rng);
}

int Experiment::soundings(std::size_t estimator_index) const
{
    const EstimatorSpec &e = config_.estimators.at(estimator_index);
    switch (e.kind)
    {
    case EstimatorKind::two_stage:
        return widebeams_.soundings();
    case EstimatorKind::two_stage_nonadequate:
        return nonadequate_widebeams().soundings();
    case EstimatorKind::gob:
    case EstimatorKind::gob_abp:
        return e.num_beams;
    }
    return 0;
}

double Experiment::run_trial(std::size_t estimator_index, std::size_t snr_index, std::uint64_t trial_index) const
{
    const EstimatorSpec &e = config_.estimators.at(estimator_index);
    const double snr = std::pow(10.0, config_.snr_grid_db.at(snr_index) / 10.0);
    const ChannelRealization channel = draw_channel(trial_index);
    RngStream noise = RngStream::derive(config_.master_seed, {fnv1a64(e.label()), snr_index, trial_index});
    Sounder sounder(channel, aligned_combiner(channel), snr, noise);

    EstimationReport report;
    switch (e.kind)
    {
    case EstimatorKind::two_stage:
        report = estimate_two_stage(sounder, widebeams_);
        break;
    case EstimatorKind::two_stage_nonadequate:
        report = estimate_two_stage(sounder, nonadequate_widebeams());
        break;
    case EstimatorKind::gob:
        report = estimate_gob(sounder, steering_codebook(e.num_beams));
        break;
    case EstimatorKind::gob_abp:
        report = estimate_gob_abp(sounder, steering_codebook(e.num_beams));
        break;
    }
    if (report.soundings_used != soundings(estimator_index))
        throw std::logic_error("sounding budget mismatch for " + e.label());
    return std::abs(channel.los().aod_deg - report.estimate_deg);
}

std::vector<ErrorCurve> Experiment::run_sweep(unsigned workers) const
{
    const std::size_t n_est = config_.estimators.size();
    const std::size_t n_snr = config_.snr_grid_db.size();
    const auto n_trials = static_cast<std::uint64_t>(config_.trials);
    const std::uint64_t chunks_per_point = (n_trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
    const std::uint64_t total_chunks = n_est * n_snr * chunks_per_point;

    std::vector<double> errors(n_est * n_snr * n_trials);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        try
        {
            for (std::uint64_t c = next++; c < total_chunks; c = next++)
            {
                const std::uint64_t point = c / chunks_per_point;
                const std::size_t est = point / n_snr;
                const std::size_t snr = point % n_snr;
                const std::uint64_t first = (c % chunks_per_point) * kTrialsPerChunk;
                const std::uint64_t last = std::min(first + kTrialsPerChunk, n_trials);
                for (std::uint64_t t = first; t < last; ++t)
                    errors[point * n_trials + t] = run_trial(est, snr, t);
            }
        }
        catch (...)
        {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = total_chunks;
        }
    };

    workers = std::max(1u, workers);
    if (workers == 1)
        work();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
        for (auto &t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    std::vector<ErrorCurve> curves;
    for (std::size_t est = 0; est < n_est; ++est)
    {
        ErrorCurve curve;
        curve.estimator = config_.estimators[est].label();
        for (std::size_t snr = 0; snr < n_snr; ++snr)
        {
            const double *e = errors.data() + (est * n_snr + snr) * n_trials;
            double sum = 0.0;
            for (std::uint64_t t = 0; t < n_trials; ++t)
                sum += e[t];
            const double mean = sum / static_cast<double>(n_trials);
            double ss = 0.0;
            for (std::uint64_t t = 0; t < n_trials; ++t)
                ss += (e[t] - mean) * (e[t] - mean);
            const double std_error =
                n_trials > 1 ? std::sqrt(ss / static_cast<double>(n_trials - 1) / static_cast<double>(n_trials))
                             : 0.0;
            curve.rows.push_back({config_.snr_grid_db[snr], mean, std_error, config_.trials, soundings(est)});
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

double run_trial(const ExperimentConfig &config, std::size_t estimator_index, std::size_t snr_index,
                 std::uint64_t trial_index)
{
    return Experiment(config).run_trial(estimator_index, snr_index, trial_index);
}

std::vector<ErrorCurve> run_sweep(const ExperimentConfig &config, unsigned workers)
{
    return Experiment(config).run_sweep(workers);
}

} // namespace beamalign
