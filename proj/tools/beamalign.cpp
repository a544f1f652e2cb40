// SPDX-License-Identifier: Apache-2.0
//
// beamalign: run AoD estimation sweeps and export widebeam patterns/codebooks.
//
// Exit codes: 0 success, 2 configuration error, 3 synthesis failure, 4 I/O error.

#include "beamalign/config.hpp"
#include "beamalign/csv.hpp"
#include "beamalign/montecarlo.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace {

constexpr const char *kVersion = "0.1.0";

enum ExitCode
{
    kOk = 0,
    kConfigError = 2,
    kSynthesisError = 3,
    kIoError = 4,
};

void setup_logging()
{
    auto logger = spdlog::stderr_logger_st("beamalign");
    logger->set_pattern("[%l] %v");
    logger->set_level(spdlog::level::warn);
    if (const char *env = std::getenv("BEAMALIGN_LOG"))
        logger->set_level(spdlog::level::from_str(env));
    spdlog::set_default_logger(logger);
}

std::string hex(std::uint64_t v)
{
    std::ostringstream out;
    out << "0x" << std::hex << v;
    return out.str();
}

std::vector<std::string> metadata(const beamalign::ExperimentConfig &config)
{
    std::vector<std::string> lines = {
        std::string("beamalign ") + kVersion,
        "master_seed=" + std::to_string(config.master_seed),
        "config_hash=" + hex(beamalign::config_hash(config)),
    };
    std::istringstream rendered(beamalign::render_config(config));
    for (std::string line; std::getline(rendered, line);)
        lines.push_back("config: " + line);
    return lines;
}

std::optional<std::ofstream> open_output(const std::string &path)
{
    std::ofstream out(path);
    if (!out)
    {
        spdlog::error("cannot open output file {}", path);
        return std::nullopt;
    }
    return out;
}

struct RunOptions
{
    std::string config;
    std::string out;
    unsigned workers = 0;
    std::optional<std::uint64_t> seed;
};

int cmd_run(const RunOptions &opts)
{
    beamalign::ExperimentConfig config;
    try
    {
        config = beamalign::load_config(opts.config);
    }
    catch (const beamalign::ConfigError &e)
    {
        spdlog::error("invalid config {}: {}", opts.config, e.what());
        return kConfigError;
    }
    catch (const std::ios_base::failure &e)
    {
        spdlog::error("{}", e.what());
        return kIoError;
    }
    if (opts.seed)
        config.master_seed = *opts.seed;
    spdlog::info("effective configuration:\n{}", beamalign::render_config(config));

    const unsigned workers = opts.workers ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
    std::vector<beamalign::ErrorCurve> curves;
    try
    {
        const beamalign::Experiment experiment(config);
        spdlog::info("widebeam codebook: J={} k={} soundings={}", experiment.widebeams().num_beams(),
                     experiment.widebeams().k, experiment.widebeams().soundings());
        curves = experiment.run_sweep(workers);
    }
    catch (const beamalign::SynthesisError &e)
    {
        spdlog::error("{}", e.what());
        return kSynthesisError;
    }
    catch (const std::invalid_argument &e)
    {
        spdlog::error("invalid configuration: {}", e.what());
        return kConfigError;
    }

    auto out = open_output(opts.out);
    if (!out)
        return kIoError;
    beamalign::write_comments(*out, metadata(config));
    beamalign::write_results_csv(*out, curves);
    if (!out->flush())
        return kIoError;

    for (const auto &curve : curves)
    {
        const auto &top = curve.rows.back();
        std::cout << curve.estimator << ": soundings=" << top.soundings << " error@" << top.snr_db
                  << "dB=" << top.mean_abs_error_deg << " deg (se " << top.std_error_deg << ")\n";
    }
    return kOk;
}

struct PatternOptions
{
    int n_tot = 16;
    int n_rf = 5;
    double boresight_deg = 0.0;
    double k = 2.0;
    int grid_points = 1024;
    std::string out;
    bool allow_nonadequate = false;
    std::optional<double> delta_scale;
};

int cmd_pattern(const PatternOptions &opts)
{
    const beamalign::ArrayGeometry geom{opts.n_tot, 0.5};
    double k = opts.k;
    if (opts.delta_scale)
    {
        if (!opts.allow_nonadequate)
        {
            spdlog::error("--delta-scale requires --allow-nonadequate");
            return kConfigError;
        }
        k = *opts.delta_scale;
    }
    const bool integral = k >= 1.0 && k == std::floor(k);
    if (!integral && !opts.allow_nonadequate)
    {
        spdlog::error("half-width k={} is not a positive integer (use --allow-nonadequate)", k);
        return kConfigError;
    }
    if (!(k > 0.0) || opts.n_tot < 1 || opts.grid_points < 1)
    {
        spdlog::error("invalid pattern parameters");
        return kConfigError;
    }
    if (!integral)
        spdlog::warn("synthesizing non-adequate widebeam with half-width {} pi / {}", k, opts.n_tot);

    beamalign::WidebeamPrecoder beam;
    try
    {
        const double boresight = beamalign::angle_to_spatial(opts.boresight_deg, geom);
        beam = beamalign::synthesize_widebeam(boresight, k * std::numbers::pi / opts.n_tot, opts.n_rf, opts.n_tot,
                                              true);
    }
    catch (const beamalign::SynthesisError &e)
    {
        spdlog::error("{}", e.what());
        return kSynthesisError;
    }
    catch (const std::exception &e)
    {
        spdlog::error("{}", e.what());
        return kConfigError;
    }

    auto out = open_output(opts.out);
    if (!out)
        return kIoError;
    beamalign::write_pattern_csv(*out, beam.combined, beamalign::spatial_grid(opts.grid_points), geom);
    return out->flush() ? kOk : kIoError;
}

struct CodebookCliOptions
{
    std::string config;
    int n_tot = 16;
    int n_rf = 5;
    std::vector<double> span_deg = {-50.0, 50.0};
    int num_beams = 0;
    int k = 2;
    std::string out;
    bool allow_nonadequate = false;
    std::optional<double> delta_scale;
};

int cmd_codebook(const CodebookCliOptions &opts)
{
    beamalign::CodebookOptions options;
    double lo = opts.span_deg.at(0);
    double hi = opts.span_deg.at(1);
    options.n_tot = opts.n_tot;
    options.n_rf = opts.n_rf;
    options.target_k = opts.k;
    if (opts.num_beams > 0)
        options.num_beams = opts.num_beams;
    if (!opts.config.empty())
    {
        try
        {
            const auto config = beamalign::load_config(opts.config);
            options.n_tot = config.n_tot;
            options.n_rf = config.n_rf;
            options.element_spacing = config.element_spacing;
            options.num_beams = config.num_widebeams;
            options.target_k = config.widebeam_k;
            options.min_overlap = config.min_overlap;
            lo = config.priors.aod_lo_deg;
            hi = config.priors.aod_hi_deg;
        }
        catch (const beamalign::ConfigError &e)
        {
            spdlog::error("invalid config {}: {}", opts.config, e.what());
            return kConfigError;
        }
        catch (const std::ios_base::failure &e)
        {
            spdlog::error("{}", e.what());
            return kIoError;
        }
    }
    if (opts.delta_scale)
    {
        if (!opts.allow_nonadequate)
        {
            spdlog::error("--delta-scale requires --allow-nonadequate");
            return kConfigError;
        }
        spdlog::warn("building non-adequate codebook with half-width {} pi / {}", *opts.delta_scale, options.n_tot);
    }

    beamalign::WidebeamCodebook book;
    try
    {
        if (opts.delta_scale)
        {
            // Same J as the adequate codebook, only the half-width changes.
            options.num_beams = beamalign::build_widebeam_codebook(lo, hi, options).num_beams();
            options.delta_scale = opts.delta_scale;
        }
        book = beamalign::build_widebeam_codebook(lo, hi, options);
    }
    catch (const beamalign::SynthesisError &e)
    {
        spdlog::error("{}", e.what());
        return kSynthesisError;
    }
    catch (const std::exception &e)
    {
        spdlog::error("{}", e.what());
        return kConfigError;
    }
    spdlog::info("codebook: J={} k={} soundings={}", book.num_beams(), book.k, book.soundings());

    auto out = open_output(opts.out);
    if (!out)
        return kIoError;
    beamalign::write_codebook_csv(*out, book);
    return out->flush() ? kOk : kIoError;
}

} // namespace

int main(int argc, char **argv)
{
    setup_logging();

    CLI::App app{"Two-stage widebeam + auxiliary beam pair AoD estimation simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RunOptions run;
    auto *run_cmd = app.add_subcommand("run", "Run a Monte Carlo sweep and write the result CSV");
    run_cmd->add_option("--config", run.config, "Experiment config file")->required();
    run_cmd->add_option("--out", run.out, "Output CSV path")->required();
    run_cmd->add_option("--workers", run.workers, "Worker threads (default: hardware concurrency)");
    run_cmd->add_option("--seed", run.seed, "Override master_seed");

    PatternOptions pattern;
    auto *pattern_cmd = app.add_subcommand("pattern", "Synthesize one widebeam and write its power pattern");
    pattern_cmd->add_option("--n-tot", pattern.n_tot, "Transmit antennas")->capture_default_str();
    pattern_cmd->add_option("--n-rf", pattern.n_rf, "RF chains (odd)")->capture_default_str();
    pattern_cmd->add_option("--boresight-deg", pattern.boresight_deg, "Boresight angle")->capture_default_str();
    pattern_cmd->add_option("--k", pattern.k, "Half-width in units of pi / n_tot")->capture_default_str();
    pattern_cmd->add_option("--grid-points", pattern.grid_points, "Pattern samples on (-pi, pi]")
        ->capture_default_str();
    pattern_cmd->add_option("--out", pattern.out, "Output CSV path")->required();
    pattern_cmd->add_flag("--allow-nonadequate", pattern.allow_nonadequate, "Accept non-integer k");
    pattern_cmd->add_option("--delta-scale", pattern.delta_scale, "Non-adequate half-width in units of pi / n_tot");

    CodebookCliOptions codebook;
    auto *codebook_cmd = app.add_subcommand("codebook", "Build a widebeam codebook and write its weights");
    codebook_cmd->add_option("--config", codebook.config, "Take n_tot, n_rf, span and widebeam settings from a config");
    codebook_cmd->add_option("--n-tot", codebook.n_tot, "Transmit antennas")->capture_default_str();
    codebook_cmd->add_option("--n-rf", codebook.n_rf, "RF chains (odd)")->capture_default_str();
    codebook_cmd->add_option("--span-deg", codebook.span_deg, "AoD span lo hi")->expected(2)->capture_default_str();
    codebook_cmd->add_option("--beams", codebook.num_beams, "Number of widebeams J (0: automatic)");
    codebook_cmd->add_option("--k", codebook.k, "Target half-width k for automatic J")->capture_default_str();
    codebook_cmd->add_option("--out", codebook.out, "Output CSV path")->required();
    codebook_cmd->add_flag("--allow-nonadequate", codebook.allow_nonadequate, "Accept non-integer half-widths");
    codebook_cmd->add_option("--delta-scale", codebook.delta_scale, "Non-adequate half-width in units of pi / n_tot");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    if (run_cmd->parsed())
        return cmd_run(run);
    if (pattern_cmd->parsed())
        return cmd_pattern(pattern);
    return cmd_codebook(codebook);
}
