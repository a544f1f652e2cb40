// SPDX-License-Identifier: Apache-2.0

#include "beamalign/config.hpp"

#include "beamalign/csv.hpp"
#include "beamalign/rng.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace beamalign {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>> &schema()
{
    static const std::map<std::string, std::set<std::string>> keys = {
        {"experiment",
         {"n_tot", "m_tot", "element_spacing", "trials", "master_seed", "n_rf", "snr_grid_db", "aod_prior_deg",
          "aoa_prior_deg"}},
        {"channel", {"kind", "k_factor_db", "num_paths", "normalize_nlos"}},
        {"widebeams", {"num_widebeams", "k", "min_overlap", "delta_scale"}},
        {"estimators", {"set", "gob_beams", "gob_abp_beams"}},
    };
    return keys;
}

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string &text, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep))
        parts.push_back(trim(item));
    if (!text.empty() && text.back() == sep)
        parts.emplace_back();
    return parts;
}

template <typename T>
T parse_number(const std::string &key, const std::string &text)
{
    T value{};
    const std::string t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError(key, "cannot parse '" + t + "' as a number");
    return value;
}

bool parse_bool(const std::string &key, const std::string &text)
{
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes")
        return true;
    if (t == "false" || t == "0" || t == "no")
        return false;
    throw ConfigError(key, "expected true or false, got '" + t + "'");
}

std::vector<double> parse_list(const std::string &key, const std::string &text)
{
    std::vector<double> values;
    for (const auto &part : split(text, ','))
        values.push_back(parse_number<double>(key, part));
    return values;
}

std::vector<double> parse_grid(const std::string &key, const std::string &text)
{
    if (text.find(':') == std::string::npos)
        return parse_list(key, text);
    const auto parts = split(text, ':');
    if (parts.size() != 3)
        throw ConfigError(key, "range must be start:step:stop");
    const double start = parse_number<double>(key, parts[0]);
    const double step = parse_number<double>(key, parts[1]);
    const double stop = parse_number<double>(key, parts[2]);
    if (!(step > 0.0) || stop < start)
        throw ConfigError(key, "range needs step > 0 and stop >= start");
    std::vector<double> grid;
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i)
        grid.push_back(start + step * static_cast<double>(i));
    return grid;
}

std::pair<double, double> parse_interval(const std::string &key, const std::string &text)
{
    const auto v = parse_list(key, text);
    if (v.size() != 2 || !(v[0] <= v[1]) || v[0] < -90.0 || v[1] > 90.0)
        throw ConfigError(key, "expected lo,hi within [-90, 90]");
    return {v[0], v[1]};
}

std::string join(const std::vector<double> &values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i)
        out += (i ? "," : "") + format_number(values[i]);
    return out;
}

std::string kind_name(EstimatorKind kind)
{
    switch (kind)
    {
    case EstimatorKind::two_stage:
        return "two_stage";
    case EstimatorKind::two_stage_nonadequate:
        return "two_stage_nonadequate";
    case EstimatorKind::gob:
        return "gob";
    case EstimatorKind::gob_abp:
        return "gob_abp";
    }
    return {};
}

} // namespace

ExperimentConfig parse_config(std::istream &in)
{
    pt::ptree tree;
    try
    {
        pt::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error &e)
    {
        throw ConfigError("", "line " + std::to_string(e.line()) + ": " + e.message());
    }

    for (const auto &[section, body] : tree)
    {
        const auto it = schema().find(section);
        if (it == schema().end())
        {
            if (body.empty())
                throw ConfigError(section, "key outside any section");
            throw ConfigError(section, "unknown section");
        }
        for (const auto &[key, value] : body)
            if (!it->second.count(key))
                throw ConfigError(section + "." + key, "unknown key");
    }

    auto get = [&](const std::string &path) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.')))
            return trim(*v);
        return std::nullopt;
    };

    ExperimentConfig c;
    if (auto v = get("experiment.n_tot"))
        c.n_tot = parse_number<int>("experiment.n_tot", *v);
    if (auto v = get("experiment.m_tot"))
        c.m_tot = parse_number<int>("experiment.m_tot", *v);
    if (auto v = get("experiment.element_spacing"))
        c.element_spacing = parse_number<double>("experiment.element_spacing", *v);
    if (auto v = get("experiment.trials"))
        c.trials = parse_number<int>("experiment.trials", *v);
    if (auto v = get("experiment.master_seed"))
        c.master_seed = parse_number<std::uint64_t>("experiment.master_seed", *v);
    if (auto v = get("experiment.n_rf"))
        c.n_rf = parse_number<int>("experiment.n_rf", *v);
    if (auto v = get("experiment.snr_grid_db"))
        c.snr_grid_db = parse_grid("experiment.snr_grid_db", *v);
    if (auto v = get("experiment.aod_prior_deg"))
        std::tie(c.priors.aod_lo_deg, c.priors.aod_hi_deg) = parse_interval("experiment.aod_prior_deg", *v);
    if (auto v = get("experiment.aoa_prior_deg"))
        std::tie(c.priors.aoa_lo_deg, c.priors.aoa_hi_deg) = parse_interval("experiment.aoa_prior_deg", *v);

    if (auto v = get("channel.kind"))
    {
        if (*v == "single_path")
            c.channel_kind = ChannelKind::single_path;
        else if (*v == "rician")
            c.channel_kind = ChannelKind::rician;
        else
            throw ConfigError("channel.kind", "expected single_path or rician, got '" + *v + "'");
    }
    if (auto v = get("channel.k_factor_db"))
        c.rician.k_factor_db = parse_number<double>("channel.k_factor_db", *v);
    if (auto v = get("channel.num_paths"))
        c.rician.num_paths = parse_number<int>("channel.num_paths", *v);
    if (auto v = get("channel.normalize_nlos"))
        c.rician.normalize_nlos = parse_bool("channel.normalize_nlos", *v);

    if (auto v = get("widebeams.num_widebeams"))
    {
        const int j = parse_number<int>("widebeams.num_widebeams", *v);
        if (j < 0)
            throw ConfigError("widebeams.num_widebeams", "must be >= 0 (0 selects automatically)");
        c.num_widebeams = j == 0 ? std::nullopt : std::optional<int>(j);
    }
    if (auto v = get("widebeams.k"))
        c.widebeam_k = parse_number<int>("widebeams.k", *v);
    if (auto v = get("widebeams.min_overlap"))
        c.min_overlap = parse_number<double>("widebeams.min_overlap", *v);
    if (auto v = get("widebeams.delta_scale"))
        c.delta_scale = parse_number<double>("widebeams.delta_scale", *v);

    auto beam_counts = [&](const std::string &key) {
        std::vector<int> counts;
        if (auto v = get(key))
            for (double b : parse_list(key, *v))
            {
                if (b != std::floor(b) || b < 1)
                    throw ConfigError(key, "beam counts must be positive integers");
                counts.push_back(static_cast<int>(b));
            }
        else
            counts.push_back(static_cast<int>(c.n_tot));
        return counts;
    };
    const auto gob_beams = beam_counts("estimators.gob_beams");
    const auto gob_abp_beams = beam_counts("estimators.gob_abp_beams");
    const std::string set = get("estimators.set").value_or("two_stage,gob,gob_abp");
    for (const auto &name : split(set, ','))
    {
        if (name == "two_stage")
            c.estimators.push_back({EstimatorKind::two_stage, 0});
        else if (name == "two_stage_nonadequate")
            c.estimators.push_back({EstimatorKind::two_stage_nonadequate, 0});
        else if (name == "gob")
            for (int b : gob_beams)
                c.estimators.push_back({EstimatorKind::gob, b});
        else if (name == "gob_abp")
            for (int b : gob_abp_beams)
                c.estimators.push_back({EstimatorKind::gob_abp, b});
        else
            throw ConfigError("estimators.set", "unknown estimator '" + name + "'");
    }

    auto require = [](bool ok, const char *key, const char *msg) {
        if (!ok)
            throw ConfigError(key, msg);
    };
    require(c.n_tot >= 1, "experiment.n_tot", "must be >= 1");
    require(c.m_tot >= 1, "experiment.m_tot", "must be >= 1");
    require(c.element_spacing > 0.0, "experiment.element_spacing", "must be positive");
    require(c.trials >= 1, "experiment.trials", "must be >= 1");
    require(c.n_rf >= 1 && c.n_rf % 2 == 1, "experiment.n_rf", "must be odd and >= 1");
    require(!c.snr_grid_db.empty(), "experiment.snr_grid_db", "must not be empty");
    require(c.rician.num_paths >= 1, "channel.num_paths", "must be >= 1");
    require(c.widebeam_k >= 1, "widebeams.k", "must be >= 1");
    require(c.min_overlap >= 0.0 && c.min_overlap < 1.0, "widebeams.min_overlap", "must lie in [0, 1)");
    require(c.delta_scale > 0.0, "widebeams.delta_scale", "must be positive");

    try
    {
        c.validate();
    }
    catch (const std::exception &e)
    {
        throw ConfigError("", e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::ios_base::failure("cannot open config file " + path.string());
    return parse_config(in);
}

std::string render_config(const ExperimentConfig &c)
{
    std::ostringstream out;
    out << "[experiment]\n"
        << "n_tot = " << c.n_tot << '\n'
        << "m_tot = " << c.m_tot << '\n'
        << "element_spacing = " << format_number(c.element_spacing) << '\n'
        << "trials = " << c.trials << '\n'
        << "master_seed = " << c.master_seed << '\n'
        << "n_rf = " << c.n_rf << '\n'
        << "snr_grid_db = " << join(c.snr_grid_db) << '\n'
        << "aod_prior_deg = " << join({c.priors.aod_lo_deg, c.priors.aod_hi_deg}) << '\n'
        << "aoa_prior_deg = " << join({c.priors.aoa_lo_deg, c.priors.aoa_hi_deg}) << '\n';
    out << "[channel]\n"
        << "kind = " << (c.channel_kind == ChannelKind::rician ? "rician" : "single_path") << '\n'
        << "k_factor_db = " << format_number(c.rician.k_factor_db) << '\n'
        << "num_paths = " << c.rician.num_paths << '\n'
        << "normalize_nlos = " << (c.rician.normalize_nlos ? "true" : "false") << '\n';
    out << "[widebeams]\n"
        << "num_widebeams = " << c.num_widebeams.value_or(0) << '\n'
        << "k = " << c.widebeam_k << '\n'
        << "min_overlap = " << format_number(c.min_overlap) << '\n'
        << "delta_scale = " << format_number(c.delta_scale) << '\n';

    std::vector<std::string> kinds;
    std::vector<double> gob, gob_abp;
    for (const auto &e : c.estimators)
    {
        const std::string name = kind_name(e.kind);
        if (std::find(kinds.begin(), kinds.end(), name) == kinds.end())
            kinds.push_back(name);
        if (e.kind == EstimatorKind::gob)
            gob.push_back(e.num_beams);
        if (e.kind == EstimatorKind::gob_abp)
            gob_abp.push_back(e.num_beams);
    }
    std::string set;
    for (std::size_t i = 0; i < kinds.size(); ++i)
        set += (i ? "," : "") + kinds[i];
    out << "[estimators]\n"
        << "set = " << set << '\n'
        << "gob_beams = " << (gob.empty() ? format_number(static_cast<double>(c.n_tot)) : join(gob)) << '\n'
        << "gob_abp_beams = " << (gob_abp.empty() ? format_number(static_cast<double>(c.n_tot)) : join(gob_abp))
        << '\n';
    return out.str();
}

std::uint64_t config_hash(const ExperimentConfig &config)
{
    return fnv1a64(render_config(config));
}

} // namespace beamalign
