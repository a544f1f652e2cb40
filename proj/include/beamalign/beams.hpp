// SPDX-License-Identifier: Apache-2.0
//
// Steering-beam codebooks, auxiliary beam pairs and flat-top widebeams built
// as symmetric linear combinations of steering vectors:
//
//   f = F_RF f_BB,  F_RF = [a(g), a(g + xi_1), a(g - xi_1), a(g + xi_2), ...]
//                   f_BB = [c_0, c_1, conj(c_1), c_2, conj(c_2), ...]
//
// with |c_0| >= |c_1| >= |c_2| >= ... and ||f|| = 1.

#pragma once

#include "beamalign/arrays.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace beamalign {

struct Adequacy
{
    bool adequate = false;
    int k = 0;
};

// A half-width delta is adequate when delta = k pi / n for a positive integer k.
Adequacy is_adequate(double delta, Eigen::Index n);

// |a(mu_g)^H f|^2 for every grid point. Throws std::invalid_argument when f is
// not unit norm (tolerance 1e-9).
Eigen::VectorXd beam_power_pattern(const CVector &precoder, const Eigen::VectorXd &grid);

// `points` spatial frequencies uniformly spaced on (-pi, pi].
Eigen::VectorXd spatial_grid(Eigen::Index points);

// Result of the widebeam search, expressed at boresight 0. The centered
// weights are real: weight 0 is c_0 and weight i is b_i = c_i exp(j (n-1) xi_i / 2),
// which makes the boresight-0 amplitude pattern
//   A(t) = c_0 D(t) + sum_i b_i (D(t - xi_i) + D(t + xi_i))
// with D the signed Dirichlet kernel.
struct WidebeamDesign
{
    double half_width = 0.0;
    Eigen::Index n_tot = 1;
    Eigen::VectorXd offsets;          // xi_1 < xi_2 < ...
    Eigen::VectorXd centered_weights; // c_0, b_1, b_2, ... (unnormalized)
    double boresight_gain = 0.0;      // unit-norm power at the boresight
    double inband_min = 0.0;          // minimum unit-norm power on [-delta, delta]
    double peak_sidelobe = 0.0;       // max power beyond delta + 2 pi / n

    int n_rf() const { return 1 + 2 * static_cast<int>(offsets.size()); }
    double flatness() const { return boresight_gain > 0.0 ? inband_min / boresight_gain : 0.0; }
};

struct WidebeamPrecoder
{
    double boresight = 0.0;
    double half_width = 0.0;
    CMatrix analog;   // n_tot x n_rf, columns are steering vectors
    CVector baseband; // n_rf
    CVector combined; // analog * baseband, unit norm
};

// Thrown when no searched candidate keeps the in-band minimum above half the
// boresight gain. Carries the best candidate found.
class SynthesisError : public std::runtime_error
{
public:
    SynthesisError(const std::string &what, WidebeamDesign best)
        : std::runtime_error(what), best_(std::move(best))
    {
    }
    const WidebeamDesign &best() const { return best_; }

private:
    WidebeamDesign best_;
};

// Grid search over the offsets xi_i in (0, 2 delta]; for each offset tuple the
// weights are a least-squares fit to the ideal flat-top (1 on [-delta, delta],
// 0 elsewhere), projected onto the magnitude ordering. Candidates whose
// pattern peaks anywhere but the boresight are discarded; the winner has the
// largest in-band minimum (ties: lowest peak side lobe).
//
// n_rf must be odd. n_rf = 1 returns the plain steering beam without any
// flatness requirement.
WidebeamDesign design_widebeam(double half_width, int n_rf, Eigen::Index n_tot);

// Places a design at the given boresight.
WidebeamPrecoder realize_widebeam(const WidebeamDesign &design, double boresight);

// design_widebeam + realize_widebeam. Non-adequate half-widths are rejected
// with std::invalid_argument unless allow_nonadequate is set.
WidebeamPrecoder synthesize_widebeam(double boresight, double half_width, int n_rf,
                                     Eigen::Index n_tot, bool allow_nonadequate = false);

struct CodebookOptions
{
    Eigen::Index n_tot = 16;
    int n_rf = 5;
    double element_spacing = 0.5;
    // Number of widebeams J. When empty, J is the smallest count whose
    // boresight spacing stays within (1 - min_overlap) * 2 * target_k * pi / n_tot.
    std::optional<int> num_beams;
    int target_k = 2;
    double min_overlap = 0.1;
    // Non-adequate mode: half-width delta_scale * pi / n_tot, same J as the
    // adequate codebook would use.
    std::optional<double> delta_scale;
};

struct WidebeamCodebook
{
    std::vector<WidebeamPrecoder> beams;
    double span_lo = 0.0; // spatial frequency
    double span_hi = 0.0;
    double half_width = 0.0;
    double k = 0.0; // half_width * n_tot / pi, integral for adequate codebooks
    bool adequate = true;
    Eigen::Index n_tot = 1;
    WidebeamDesign design;

    int num_beams() const { return static_cast<int>(beams.size()); }
    // Widebeam sweep plus one auxiliary beam pair.
    int soundings() const { return num_beams() + 2; }
};

// Boresights are spaced uniformly in spatial frequency, the outermost ones
// half a spacing inside the span. With J given, the half-width is the
// smallest adequate k pi / n_tot with 2 delta >= spacing.
WidebeamCodebook build_widebeam_codebook(double span_lo_deg, double span_hi_deg,
                                         const CodebookOptions &options);

struct SteeringCodebook
{
    std::vector<double> boresights;
    std::vector<CVector> beams;
    double spacing = 0.0;
    Eigen::Index n_tot = 1;

    int size() const { return static_cast<int>(beams.size()); }
};

// Grid of narrow steering beams covering the span with the same centering
// rule as the widebeam codebook.
SteeringCodebook build_steering_codebook(double span_lo_deg, double span_hi_deg, int num_beams,
                                         const ArrayGeometry &geom);

struct AbpPair
{
    double center = 0.0;
    double delta = 0.0;
    CVector beam_minus; // a(center - delta)
    CVector beam_plus;  // a(center + delta)
};

AbpPair build_abp(double center, double delta, Eigen::Index n_tot);

} // namespace beamalign
