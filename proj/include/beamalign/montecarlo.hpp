// SPDX-License-Identifier: Apache-2.0
//
// Deterministic Monte Carlo sweeps of AoD estimation error versus SNR.
//
// Every trial draws its channel from a stream keyed by (master_seed, trial)
// only, so all estimators and SNR points see the same channel for a given
// trial index. Sounding noise comes from a stream keyed by
// (master_seed, estimator label, snr index, trial). Results therefore do not
// depend on the number of workers or the order in which trials run.

#pragma once

#include "beamalign/beams.hpp"
#include "beamalign/channel.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace beamalign {

enum class EstimatorKind
{
    two_stage,
    two_stage_nonadequate,
    gob,
    gob_abp,
};

struct EstimatorSpec
{
    EstimatorKind kind = EstimatorKind::two_stage;
    int num_beams = 0; // GoB codebook size; unused for the two-stage variants

    std::string label() const;
};

enum class ChannelKind
{
    single_path,
    rician,
};

struct ExperimentConfig
{
    Eigen::Index n_tot = 16;
    Eigen::Index m_tot = 8;
    double element_spacing = 0.5;
    std::vector<double> snr_grid_db = default_snr_grid();
    int trials = 10000;
    AnglePriors priors;
    ChannelKind channel_kind = ChannelKind::single_path;
    RicianParams rician;
    std::vector<EstimatorSpec> estimators;
    std::uint64_t master_seed = 1;
    int n_rf = 5;

    // Widebeam codebook for the two-stage estimators.
    std::optional<int> num_widebeams;
    int widebeam_k = 2;
    double min_overlap = 0.1;
    double delta_scale = 1.5; // non-adequate half-width in units of pi / n_tot

    void validate() const;
    static std::vector<double> default_snr_grid(); // -10:2.5:35 dB
};

struct ErrorRow
{
    double snr_db = 0.0;
    double mean_abs_error_deg = 0.0;
    double std_error_deg = 0.0; // standard error of the mean
    int trials = 0;
    int soundings = 0;
};

struct ErrorCurve
{
    std::string estimator;
    std::vector<ErrorRow> rows;
};

// A validated configuration with its codebooks built once and shared
// read-only by all trials.
class Experiment
{
public:
    explicit Experiment(ExperimentConfig config);

    const ExperimentConfig &config() const { return config_; }
    const WidebeamCodebook &widebeams() const { return widebeams_; }
    const WidebeamCodebook &nonadequate_widebeams() const;
    const SteeringCodebook &steering_codebook(int num_beams) const;

    ArrayGeometry tx_geometry() const { return {config_.n_tot, config_.element_spacing}; }
    ArrayGeometry rx_geometry() const { return {config_.m_tot, config_.element_spacing}; }

    // Channel seen by every estimator and SNR point at this trial index.
    ChannelRealization draw_channel(std::uint64_t trial_index) const;

    // |theta - theta_hat| in degrees for one trial.
    double run_trial(std::size_t estimator_index, std::size_t snr_index, std::uint64_t trial_index) const;

    // Sounding budget of an estimator.
    int soundings(std::size_t estimator_index) const;

    std::vector<ErrorCurve> run_sweep(unsigned workers = 1) const;

private:
    ExperimentConfig config_;
    WidebeamCodebook widebeams_;
    std::optional<WidebeamCodebook> nonadequate_;
    std::vector<std::pair<int, SteeringCodebook>> steering_;
};

double run_trial(const ExperimentConfig &config, std::size_t estimator_index, std::size_t snr_index,
                 std::uint64_t trial_index);

std::vector<ErrorCurve> run_sweep(const ExperimentConfig &config, unsigned workers = 1);

} // namespace beamalign
