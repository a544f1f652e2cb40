// SPDX-License-Identifier: Apache-2.0

#include "beamalign/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace beamalign {

std::string format_number(double value)
{
    std::array<char, 64> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), result.ptr);
}

void write_comments(std::ostream &out, const std::vector<std::string> &lines)
{
    for (const auto &line : lines)
        out << "# " << line << '\n';
}

void write_results_csv(std::ostream &out, const std::vector<ErrorCurve> &curves)
{
    out << "estimator,snr_db,mean_abs_error_deg,std_error_deg,trials,soundings\n";
    for (const auto &curve : curves)
        for (const auto &row : curve.rows)
            out << curve.estimator << ',' << format_number(row.snr_db) << ','
                << format_number(row.mean_abs_error_deg) << ',' << format_number(row.std_error_deg) << ','
                << row.trials << ',' << row.soundings << '\n';
}

void write_pattern_csv(std::ostream &out, const CVector &precoder, const Eigen::VectorXd &grid,
                       const ArrayGeometry &geom)
{
    const Eigen::VectorXd power = beam_power_pattern(precoder, grid);
    out << "spatial_freq_rad,angle_deg,power_linear,power_db\n";
    for (Eigen::Index g = 0; g < grid.size(); ++g)
    {
        // -300 dB stands in for exact nulls.
        const double db = 10.0 * std::log10(std::max(power(g), 1e-30));
        out << format_number(grid(g)) << ',' << format_number(spatial_to_angle_clamped(grid(g), geom)) << ','
            << format_number(power(g)) << ',' << format_number(db) << '\n';
    }
}

void write_codebook_csv(std::ostream &out, const WidebeamCodebook &codebook)
{
    out << "beam_index,boresight_rad,half_width_rad,k";
    for (Eigen::Index i = 0; i < codebook.n_tot; ++i)
        out << ",weights_re[" << i << "],weights_im[" << i << ']';
    out << '\n';
    for (int j = 0; j < codebook.num_beams(); ++j)
    {
        const auto &beam = codebook.beams[j];
        out << j << ',' << format_number(beam.boresight) << ',' << format_number(beam.half_width) << ','
            << format_number(codebook.adequate ? std::round(codebook.k) : codebook.k);
        for (Eigen::Index i = 0; i < beam.combined.size(); ++i)
            out << ',' << format_number(beam.combined(i).real()) << ',' << format_number(beam.combined(i).imag());
        out << '\n';
    }
}

} // namespace beamalign
