// SPDX-License-Identifier: Apache-2.0

#include "beamalign/config.hpp"
#include "beamalign/csv.hpp"

#include <doctest.h>

#include <sstream>

using namespace beamalign;

namespace {

ExperimentConfig parse(const std::string &text)
{
    std::istringstream in(text);
    return parse_config(in);
}

std::string error_key(const std::string &text)
{
    try
    {
        parse(text);
    }
    catch (const ConfigError &e)
    {
        return e.key();
    }
    return "<none>";
}

} // namespace

TEST_CASE("empty config gives the defaults")
{
    const auto c = parse("");
    CHECK(c.n_tot == 16);
    CHECK(c.m_tot == 8);
    CHECK(c.trials == 10000);
    CHECK(c.snr_grid_db.size() == 19);
    REQUIRE(c.estimators.size() == 3);
    CHECK(c.estimators[1].label() == "gob_16");
}

TEST_CASE("full config")
{
    const auto c = parse(R"(
[experiment]
n_tot = 32
trials = 500
master_seed = 99
snr_grid_db = 0:5:20
aod_prior_deg = -40, 40

[channel]
kind = rician
k_factor_db = 10
num_paths = 3

[widebeams]
num_widebeams = 0
delta_scale = 1.5

[estimators]
set = two_stage, two_stage_nonadequate, gob, gob_abp
gob_beams = 16, 32
gob_abp_beams = 32
)");
    CHECK(c.n_tot == 32);
    CHECK(c.trials == 500);
    CHECK(c.master_seed == 99);
    CHECK(c.snr_grid_db == std::vector<double>{0, 5, 10, 15, 20});
    CHECK(c.priors.aod_lo_deg == -40.0);
    CHECK(c.channel_kind == ChannelKind::rician);
    CHECK(c.rician.k_factor_db == 10.0);
    CHECK(c.rician.num_paths == 3);
    CHECK_FALSE(c.num_widebeams.has_value());
    REQUIRE(c.estimators.size() == 5);
    CHECK(c.estimators[2].label() == "gob_16");
    CHECK(c.estimators[3].label() == "gob_32");
    CHECK(c.estimators[4].label() == "gob_abp_32");

    SUBCASE("render round trip")
    {
        const auto again = parse(render_config(c));
        CHECK(render_config(again) == render_config(c));
        CHECK(config_hash(again) == config_hash(c));
    }
}

TEST_CASE("malformed configs name the offending key")
{
    CHECK(error_key("[experiment]\nn_tot = sixteen\n") == "experiment.n_tot");
    CHECK(error_key("[experiment]\nbogus = 1\n") == "experiment.bogus");
    CHECK(error_key("[nowhere]\nx = 1\n") == "nowhere");
    CHECK(error_key("[channel]\nkind = fading\n") == "channel.kind");
    CHECK(error_key("[estimators]\nset = two_stage, magic\n") == "estimators.set");
    CHECK(error_key("[experiment]\nsnr_grid_db = 0:-1:10\n") == "experiment.snr_grid_db");
    CHECK(error_key("[experiment]\naod_prior_deg = -100, 10\n") == "experiment.aod_prior_deg");
    CHECK(error_key("[experiment]\ntrials = 0\n") == "experiment.trials");
    CHECK(error_key("[experiment]\nn_rf = 4\n") == "experiment.n_rf");
    CHECK(error_key("[estimators]\ngob_beams = 2.5\n") == "estimators.gob_beams");
    CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), std::ios_base::failure);
}

TEST_CASE("number formatting round trips")
{
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 35.0, -2.5})
        CHECK(std::stod(format_number(v)) == v);
    CHECK(format_number(35.0) == "35");
}
