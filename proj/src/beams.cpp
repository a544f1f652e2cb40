// SPDX-License-Identifier: Apache-2.0

#include "beamalign/beams.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace beamalign {

namespace {

constexpr double kPi = std::numbers::pi;

// Fit grid: samples per DFT bin over (-pi, pi].
constexpr Eigen::Index kFitSamplesPerBin = 32;
// Points on [-delta, delta] used for the in-band minimum and the peak check.
constexpr Eigen::Index kInbandPoints = 1025;
// Upper bound on the number of offset tuples visited.
constexpr double kMaxCandidates = 5000.0;

double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

// Basis of the centered amplitude pattern, one column per free weight.
Eigen::MatrixXd centered_basis(const Eigen::VectorXd &t, const Eigen::VectorXd &offsets, Eigen::Index n)
{
    Eigen::MatrixXd basis(t.size(), offsets.size() + 1);
    for (Eigen::Index s = 0; s < t.size(); ++s)
    {
        basis(s, 0) = dirichlet(t(s), n);
        for (Eigen::Index i = 0; i < offsets.size(); ++i)
            basis(s, i + 1) = dirichlet(t(s) - offsets(i), n) + dirichlet(t(s) + offsets(i), n);
    }
    return basis;
}

// Offsets visited by the search: P-subsets of {2 delta i / steps}, increasing.
void for_each_offset_tuple(int pairs, int steps, double half_width,
                           const std::function<void(const Eigen::VectorXd &)> &visit)
{
    std::vector<int> idx(pairs);
    for (int i = 0; i < pairs; ++i)
        idx[i] = i;
    Eigen::VectorXd offsets(pairs);
    while (true)
    {
        for (int i = 0; i < pairs; ++i)
            offsets(i) = 2.0 * half_width * (idx[i] + 1) / steps;
        visit(offsets);

        int pos = pairs - 1;
        while (pos >= 0 && idx[pos] == steps - pairs + pos)
            --pos;
        if (pos < 0)
            break;
        ++idx[pos];
        for (int i = pos + 1; i < pairs; ++i)
            idx[i] = idx[i - 1] + 1;
    }
}

struct Scored
{
    WidebeamDesign design;
    bool peak_at_boresight = false;
};

bool better(const WidebeamDesign &a, const WidebeamDesign &b)
{
    const double scale = std::max(a.inband_min, b.inband_min);
    if (std::abs(a.inband_min - b.inband_min) > 1e-9 * scale)
        return a.inband_min > b.inband_min;
    return a.peak_sidelobe < b.peak_sidelobe;
}

} // namespace

Adequacy is_adequate(double delta, Eigen::Index n)
{
    if (!(delta > 0.0) || n < 1)
        return {};
    const double ratio = delta * static_cast<double>(n) / kPi;
    const double k = std::round(ratio);
    if (k >= 1.0 && std::abs(ratio - k) <= 1e-9)
        return {true, static_cast<int>(k)};
    return {};
}

Eigen::VectorXd beam_power_pattern(const CVector &precoder, const Eigen::VectorXd &grid)
{
    if (std::abs(precoder.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("beam_power_pattern: precoder must have unit norm");
    const Eigen::Index n = precoder.size();
    Eigen::VectorXd pattern(grid.size());
    for (Eigen::Index g = 0; g < grid.size(); ++g)
        pattern(g) = std::norm(steering(grid(g), n).dot(precoder));
    return pattern;
}

Eigen::VectorXd spatial_grid(Eigen::Index points)
{
    if (points < 1)
        throw std::invalid_argument("spatial_grid: need at least one point");
    Eigen::VectorXd grid(points);
    for (Eigen::Index g = 0; g < points; ++g)
        grid(g) = -kPi + 2.0 * kPi * static_cast<double>(g + 1) / static_cast<double>(points);
    return grid;
}

WidebeamDesign design_widebeam(double half_width, int n_rf, Eigen::Index n_tot)
{
    if (n_tot < 1)
        throw std::invalid_argument("design_widebeam: n_tot must be >= 1");
    if (n_rf < 1 || n_rf % 2 == 0)
        throw std::invalid_argument("design_widebeam: n_rf must be odd and >= 1");
    if (!(half_width > 0.0) || half_width > kPi)
        throw std::invalid_argument("design_widebeam: half_width must lie in (0, pi]");

    const int pairs = (n_rf - 1) / 2;
    const double nd = static_cast<double>(n_tot);

    const Eigen::VectorXd fit_grid = spatial_grid(kFitSamplesPerBin * n_tot);
    const Eigen::VectorXd inband = Eigen::VectorXd::LinSpaced(kInbandPoints, -half_width, half_width);
    const Eigen::VectorXd target =
        (fit_grid.array().abs() <= half_width).cast<double>().matrix();
    const double sidelobe_edge = half_width + 2.0 * kPi / nd;

    auto score = [&](const Eigen::VectorXd &offsets, const Eigen::VectorXd &weights) {
        Scored s;
        s.design.half_width = half_width;
        s.design.n_tot = n_tot;
        s.design.offsets = offsets;
        s.design.centered_weights = weights;

        const Eigen::VectorXd fit_amp = centered_basis(fit_grid, offsets, n_tot) * weights;
        const Eigen::VectorXd band_amp = centered_basis(inband, offsets, n_tot) * weights;
        // Uniform samples integrate |A|^2 exactly, so this is ||f||^2.
        const double energy = nd * fit_amp.squaredNorm() / static_cast<double>(fit_grid.size());
        const Eigen::VectorXd fit_power = fit_amp.array().square() / energy;
        const Eigen::VectorXd band_power = band_amp.array().square() / energy;

        double boresight_amp = weights(0);
        for (Eigen::Index i = 0; i < offsets.size(); ++i)
            boresight_amp += 2.0 * weights(i + 1) * dirichlet(offsets(i), n_tot);
        const double boresight = boresight_amp * boresight_amp / energy;
        s.design.boresight_gain = boresight;
        s.design.inband_min = band_power.minCoeff();
        double sidelobe = 0.0;
        for (Eigen::Index g = 0; g < fit_grid.size(); ++g)
            if (std::abs(fit_grid(g)) >= sidelobe_edge)
                sidelobe = std::max(sidelobe, fit_power(g));
        s.design.peak_sidelobe = sidelobe;
        const double peak = std::max(fit_power.maxCoeff(), band_power.maxCoeff());
        s.peak_at_boresight = peak <= boresight * (1.0 + 1e-9);
        return s;
    };

    if (pairs == 0)
        return score(Eigen::VectorXd(), Eigen::VectorXd::Ones(1)).design;

    int steps = 32;
    while (steps > pairs && binomial(steps, pairs) > kMaxCandidates)
        --steps;

    std::optional<WidebeamDesign> best_flat;
    std::optional<WidebeamDesign> best_any;
    for_each_offset_tuple(pairs, steps, half_width, [&](const Eigen::VectorXd &offsets) {
        const Eigen::MatrixXd basis = centered_basis(fit_grid, offsets, n_tot);
        Eigen::VectorXd w = basis.colPivHouseholderQr().solve(target);
        if (!w.allFinite() || w(0) == 0.0)
            return;
        if (w(0) < 0.0)
            w = -w;
        for (Eigen::Index i = 1; i < w.size(); ++i)
            if (std::abs(w(i)) > std::abs(w(i - 1)))
                w(i) = std::copysign(std::abs(w(i - 1)), w(i));

        const Scored s = score(offsets, w);
        if (!s.peak_at_boresight)
            return;
        if (!best_any || better(s.design, *best_any))
            best_any = s.design;
        if (s.design.flatness() >= 0.5 && (!best_flat || better(s.design, *best_flat)))
            best_flat = s.design;
    });

    if (best_flat)
        return *best_flat;
    WidebeamDesign fallback =
        best_any ? *best_any : score(Eigen::VectorXd::Zero(pairs), Eigen::VectorXd::Ones(pairs + 1)).design;
    throw SynthesisError("widebeam synthesis: no candidate keeps the in-band gain within 3 dB of the boresight "
                         "(best in-band/boresight ratio " +
                             std::to_string(fallback.flatness()) + ")",
                         std::move(fallback));
}

WidebeamPrecoder realize_widebeam(const WidebeamDesign &design, double boresight)
{
    const Eigen::Index n = design.n_tot;
    const Eigen::Index pairs = design.offsets.size();
    const double phase_center = 0.5 * static_cast<double>(n - 1);

    WidebeamPrecoder p;
    p.boresight = boresight;
    p.half_width = design.half_width;
    p.analog.resize(n, 1 + 2 * pairs);
    p.baseband.resize(1 + 2 * pairs);

    p.analog.col(0) = steering(boresight, n);
    p.baseband(0) = design.centered_weights(0);
    for (Eigen::Index i = 0; i < pairs; ++i)
    {
        const double xi = design.offsets(i);
        const std::complex<double> c = std::polar(design.centered_weights(i + 1), -phase_center * xi);
        p.analog.col(1 + 2 * i) = steering(boresight + xi, n);
        p.analog.col(2 + 2 * i) = steering(boresight - xi, n);
        p.baseband(1 + 2 * i) = c;
        p.baseband(2 + 2 * i) = std::conj(c);
    }
    p.baseband /= (p.analog * p.baseband).norm();
    p.combined = p.analog * p.baseband;
    return p;
}

WidebeamPrecoder synthesize_widebeam(double boresight, double half_width, int n_rf, Eigen::Index n_tot,
                                     bool allow_nonadequate)
{
    if (!allow_nonadequate && !is_adequate(half_width, n_tot).adequate)
        throw std::invalid_argument("synthesize_widebeam: half-width is not k pi / n_tot");
    return realize_widebeam(design_widebeam(half_width, n_rf, n_tot), boresight);
}

WidebeamCodebook build_widebeam_codebook(double span_lo_deg, double span_hi_deg, const CodebookOptions &options)
{
    const ArrayGeometry geom{options.n_tot, options.element_spacing};
    geom.validate();
    if (!(span_lo_deg <= span_hi_deg))
        throw std::domain_error("build_widebeam_codebook: span must satisfy lo <= hi");
    const double lo = angle_to_spatial(span_lo_deg, geom);
    const double hi = angle_to_spatial(span_hi_deg, geom);
    const double width = hi - lo;
    const double bin = kPi / static_cast<double>(options.n_tot);

    int num_beams = 0;
    if (options.num_beams)
    {
        if (*options.num_beams < 1)
            throw std::invalid_argument("build_widebeam_codebook: J must be >= 1");
        num_beams = *options.num_beams;
    }
    else
    {
        if (options.target_k < 1)
            throw std::invalid_argument("build_widebeam_codebook: target k must be >= 1");
        if (!(options.min_overlap >= 0.0 && options.min_overlap < 1.0))
            throw std::invalid_argument("build_widebeam_codebook: min_overlap must lie in [0, 1)");
        const double max_spacing = (1.0 - options.min_overlap) * 2.0 * options.target_k * bin;
        num_beams = std::max(1, static_cast<int>(std::ceil(width / max_spacing - 1e-12)));
    }
    const double spacing = width / num_beams;

    WidebeamCodebook book;
    book.span_lo = lo;
    book.span_hi = hi;
    book.n_tot = options.n_tot;
    if (options.delta_scale)
    {
        if (!(*options.delta_scale > 0.0))
            throw std::invalid_argument("build_widebeam_codebook: delta_scale must be positive");
        book.half_width = *options.delta_scale * bin;
    }
    else
    {
        int k = 1;
        while (2.0 * k * bin < spacing * (1.0 - 1e-12))
            ++k;
        book.half_width = k * bin;
    }
    book.k = book.half_width / bin;
    book.adequate = is_adequate(book.half_width, options.n_tot).adequate;

    book.design = design_widebeam(book.half_width, options.n_rf, options.n_tot);
    book.beams.reserve(static_cast<std::size_t>(num_beams));
    for (int j = 0; j < num_beams; ++j)
        book.beams.push_back(realize_widebeam(book.design, lo + (j + 0.5) * spacing));
    return book;
}

SteeringCodebook build_steering_codebook(double span_lo_deg, double span_hi_deg, int num_beams,
                                         const ArrayGeometry &geom)
{
    geom.validate();
    if (num_beams < 1)
        throw std::invalid_argument("build_steering_codebook: need at least one beam");
    if (!(span_lo_deg <= span_hi_deg))
        throw std::domain_error("build_steering_codebook: span must satisfy lo <= hi");
    const double lo = angle_to_spatial(span_lo_deg, geom);
    const double hi = angle_to_spatial(span_hi_deg, geom);

    SteeringCodebook book;
    book.n_tot = geom.num_elements;
    book.spacing = (hi - lo) / num_beams;
    for (int b = 0; b < num_beams; ++b)
    {
        const double sf = lo + (b + 0.5) * book.spacing;
        book.boresights.push_back(sf);
        book.beams.push_back(steering(sf, geom.num_elements));
    }
    return book;
}

AbpPair build_abp(double center, double delta, Eigen::Index n_tot)
{
    if (!(delta > 0.0))
        throw std::invalid_argument("build_abp: delta must be positive");
    return {center, delta, steering(center - delta, n_tot), steering(center + delta, n_tot)};
}

} // namespace beamalign
