// SPDX-License-Identifier: Apache-2.0
//
// INI-style experiment configuration:
//
//   [experiment]  n_tot m_tot element_spacing trials master_seed n_rf
//                 snr_grid_db aod_prior_deg aoa_prior_deg
//   [channel]     kind k_factor_db num_paths normalize_nlos
//   [widebeams]   num_widebeams k min_overlap delta_scale
//   [estimators]  set gob_beams gob_abp_beams
//
// Lists are comma separated; snr_grid_db also accepts start:step:stop.
// Unknown sections or keys are rejected. Missing keys take the defaults of
// ExperimentConfig (gob_beams and gob_abp_beams default to n_tot).

#pragma once

#include "beamalign/montecarlo.hpp"

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>

namespace beamalign {

class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string key, const std::string &message)
        : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key))
    {
    }
    // "section.key" of the offending entry, empty for syntax errors.
    const std::string &key() const { return key_; }

private:
    std::string key_;
};

ExperimentConfig parse_config(std::istream &in);
ExperimentConfig load_config(const std::filesystem::path &path);

// Canonical text of the effective configuration, defaults included.
// parse_config(render_config(c)) reproduces c.
std::string render_config(const ExperimentConfig &config);

std::uint64_t config_hash(const ExperimentConfig &config);

} // namespace beamalign
