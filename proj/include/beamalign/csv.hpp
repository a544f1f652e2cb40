// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "beamalign/beams.hpp"
#include "beamalign/montecarlo.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace beamalign {

// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

// Lines are written as "# <line>" before the header.
void write_comments(std::ostream &out, const std::vector<std::string> &lines);

// estimator,snr_db,mean_abs_error_deg,std_error_deg,trials,soundings
void write_results_csv(std::ostream &out, const std::vector<ErrorCurve> &curves);

// spatial_freq_rad,angle_deg,power_linear,power_db
void write_pattern_csv(std::ostream &out, const CVector &precoder, const Eigen::VectorXd &grid,
                       const ArrayGeometry &geom);

// beam_index,boresight_rad,half_width_rad,k,weights_re[0],weights_im[0],...
void write_codebook_csv(std::ostream &out, const WidebeamCodebook &codebook);

} // namespace beamalign
