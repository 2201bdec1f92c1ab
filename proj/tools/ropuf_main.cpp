#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ropuf/json_io.hpp"
#include "ropuf/rng.hpp"
#include "ropuf/run_config.hpp"
#include "ropuf/temp_aware.hpp"

using nlohmann::json;
using namespace ropuf;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string format = "text";
    std::string out_path;
    bool no_timestamp = false;
    int threads = 1;
};

std::string iso_timestamp()
{
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunConfig load_config(const GlobalOptions &g)
{
    RunConfig config = g.config_path.empty() ? default_run_config() : load_run_config(g.config_path);
    if (g.format != "")
        config.output_format = parse_output_format(g.format);
    return config;
}

std::uint64_t base_seed(const GlobalOptions &g, const RunConfig &config)
{
    return g.seed ? *g.seed : config.seeds.front();
}

std::uint64_t chip_seed(std::uint64_t base, std::uint64_t index)
{
    return mix_seed({base, 0x63686970ULL, index}); // per-chip stream
}

void write_output(const GlobalOptions &g, const std::string &content)
{
    if (g.out_path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n')
            std::cout << '\n';
        return;
    }
    std::ofstream out(g.out_path);
    if (!out)
        throw ConfigError("cannot write output file \"" + g.out_path + "\"");
    out << content;
    if (!content.empty() && content.back() != '\n')
        out << '\n';
}

/// Renders a report in the selected format. `to_text` may be empty, in which
/// case the JSON is pretty-printed for the text format as well.
void emit_report(const GlobalOptions &g, const RunConfig &config, json j,
                 const std::string &text_form = "", const std::string &csv_form = "")
{
    OutputFormat format = config.output_format;
    if (format == OutputFormat::Csv && !csv_form.empty()) {
        write_output(g, csv_form);
        return;
    }
    if (format == OutputFormat::Text && !text_form.empty()) {
        std::string text = text_form;
        if (!g.no_timestamp)
            text += "generated at " + iso_timestamp() + "\n";
        write_output(g, text);
        return;
    }
    if (!g.no_timestamp)
        j["generated_at"] = iso_timestamp();
    write_output(g, j.dump(2));
}

ChipInstance chip_for_run(const GlobalOptions &g, const RunConfig &config,
                          const std::string &chip_path)
{
    if (!chip_path.empty()) {
        ChipInstance chip = load_chip(chip_path);
        if (chip.topology_ref != config.topology.ref())
            throw DomainError("chip \"" + chip.chip_id + "\" was sampled for topology \"" +
                              chip.topology_ref + "\", but the config describes \"" +
                              config.topology.ref() + "\"");
        return chip;
    }
    return sample_chip(config.technology, config.variation, config.topology,
                       base_seed(g, config));
}

std::vector<Challenge> challenges_for_pair(const RunConfig &config, const std::string &pair_text)
{
    auto dash = pair_text.find('-');
    if (dash == std::string::npos)
        throw ConfigError("malformed pair \"" + pair_text + "\": expected \"a-b\"");
    Challenge probe;
    try {
        probe.ro_a = std::stoi(pair_text.substr(0, dash));
        probe.ro_b = std::stoi(pair_text.substr(dash + 1));
    } catch (const std::logic_error &) {
        throw ConfigError("malformed pair \"" + pair_text + "\": indices must be integers");
    }
    if (probe.ro_a >= probe.ro_b)
        throw DomainError("pair \"" + pair_text + "\" violates the canonical ordering a < b");
    std::vector<Challenge> challenges;
    for (const auto &cfg : enumerate_configs(config.topology)) {
        Challenge ch{probe.ro_a, probe.ro_b, cfg};
        validate_challenge(ch, config.topology);
        challenges.push_back(std::move(ch));
    }
    return challenges;
}

std::vector<double> temperature_grid(double min_c, double max_c, double step_c)
{
    if (!(step_c > 0.0))
        throw DomainError("temperature step must be positive");
    if (max_c < min_c)
        throw DomainError("temperature range is empty");
    std::vector<double> grid;
    for (double t = min_c; t <= max_c + 1e-9; t += step_c)
        grid.push_back(t);
    return grid;
}

void cmd_gen_chip(const GlobalOptions &g, const std::string &out_path)
{
    RunConfig config = load_config(g);
    ChipInstance chip = sample_chip(config.technology, config.variation, config.topology,
                                    base_seed(g, config));
    save_chip(chip, out_path);
    std::cout << "chip_id=" << chip.chip_id << " seed=" << chip.seed << " file=" << out_path
              << "\n";
}

void cmd_respond(const GlobalOptions &g, const std::string &chip_path,
                 const std::string &challenge_text, std::optional<double> temperature, int repeats)
{
    RunConfig config = load_config(g);
    ChipInstance chip = load_chip(chip_path);
    if (chip.topology_ref != config.topology.ref())
        throw DomainError("chip topology \"" + chip.topology_ref + "\" does not match the config (\"" +
                          config.topology.ref() + "\")");
    Challenge challenge = parse_challenge(challenge_text, config.topology);
    MeasurementSettings settings = config.measurement;
    if (temperature)
        settings.temperature = *temperature;
    if (repeats < 1)
        throw ConfigError("--repeats must be at least 1");

    std::string csv = response_csv_header() + "\n";
    json records = json::array();
    for (int rep = 0; rep < repeats; ++rep) {
        Response r = respond_seeded(chip, challenge, config.topology, config.technology, settings,
                                    static_cast<std::uint64_t>(rep));
        csv += response_csv_row(chip.chip_id, challenge, settings.temperature, r) + "\n";
        records.push_back({{"chip_id", chip.chip_id},
                           {"challenge", format_challenge(challenge)},
                           {"temperature_c", settings.temperature},
                           {"bit", r.bit},
                           {"unstable", r.unstable},
                           {"count_a", r.count_a},
                           {"count_b", r.count_b}});
    }
    if (config.output_format == OutputFormat::Json)
        emit_report(g, config, json{{"responses", records}});
    else
        write_output(g, csv);
}

void cmd_uniqueness(const GlobalOptions &g, int k_chips, const std::string &pair_text, bool noisy)
{
    RunConfig config = load_config(g);
    if (k_chips < 2)
        throw ConfigError("--chips must be at least 2");
    auto challenges = challenges_for_pair(config, pair_text);
    MeasurementSettings settings = config.measurement;
    settings.jitter_sigma = noisy ? config.variation.sigma_jitter : 0.0;

    // An explicit seed list long enough for the cohort is used verbatim
    // (duplicates deliberately produce identical chips); otherwise per-chip
    // seeds are derived from the base seed.
    std::vector<ChipInstance> chips;
    chips.reserve(static_cast<std::size_t>(k_chips));
    if (!g.seed && config.seeds.size() >= static_cast<std::size_t>(k_chips)) {
        for (int i = 0; i < k_chips; ++i)
            chips.push_back(sample_chip(config.technology, config.variation, config.topology,
                                        config.seeds[static_cast<std::size_t>(i)]));
    } else {
        std::uint64_t base = base_seed(g, config);
        for (int i = 0; i < k_chips; ++i)
            chips.push_back(sample_chip(config.technology, config.variation, config.topology,
                                        chip_seed(base, static_cast<std::uint64_t>(i))));
    }

    UniquenessReport report =
        uniqueness(chips, challenges, config.topology, config.technology, settings, g.threads);

    char line[160];
    std::snprintf(line, sizeof(line), "uniqueness = %.4f %% (k=%d chips, n=%zu challenges, pair %s)\n",
                  report.uniqueness_percent, report.k_chips, report.n_challenges, pair_text.c_str());
    std::string csv = "chip_i,chip_j,hd_percent\n";
    for (int i = 0; i < report.k_chips; ++i)
        for (int j = i + 1; j < report.k_chips; ++j) {
            char row[64];
            std::snprintf(row, sizeof(row), "%d,%d,%.4f\n", i, j,
                          report.pairwise_hd_percent[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            csv += row;
        }
    emit_report(g, config, uniqueness_to_json(report), line, csv);
}

void cmd_reliability(const GlobalOptions &g, const std::string &chip_path,
                     const std::string &pair_text, bool all_pairs, double temp_min, double temp_max,
                     double temp_step, int repeats)
{
    RunConfig config = load_config(g);
    ChipInstance chip = chip_for_run(g, config, chip_path);
    std::vector<Challenge> challenges =
        all_pairs ? enumerate_challenges(config.topology) : challenges_for_pair(config, pair_text);
    auto sweep = temperature_grid(temp_min, temp_max, temp_step);
    ReliabilityReport report = reliability(chip, challenges, config.topology, config.technology,
                                           config.measurement, sweep, repeats, g.threads);

    char line[200];
    std::snprintf(line, sizeof(line),
                  "reliability = %.4f %% (chip %s, %zu challenges, %zu temperatures, %d repeats, "
                  "reference %.1f degC)\n",
                  report.reliability_percent, chip.chip_id.c_str(), report.n_challenges,
                  report.temperatures_c.size(), report.repeats, report.reference_temperature_c);
    std::string csv = "temperature_c,flip_percent\n";
    for (std::size_t i = 0; i < report.temperatures_c.size(); ++i) {
        char row[64];
        std::snprintf(row, sizeof(row), "%.2f,%.4f\n", report.temperatures_c[i],
                      report.flip_percent_per_temperature[i]);
        csv += row;
    }
    emit_report(g, config, reliability_to_json(report), line, csv);
}

void cmd_delta_sweep(const GlobalOptions &g, const std::string &chip_path,
                     const std::string &pair_text, std::optional<double> temperature)
{
    RunConfig config = load_config(g);
    ChipInstance chip = chip_for_run(g, config, chip_path);
    auto challenges = challenges_for_pair(config, pair_text);
    double temp = temperature ? *temperature : config.measurement.temperature;
    DeltaSweep sweep = delta_sweep(chip, challenges.front().ro_a, challenges.front().ro_b,
                                   config.topology, config.technology, temp);

    char line[200];
    std::snprintf(line, sizeof(line),
                  "delta sweep pair %d-%d at %.1f degC: %zu configurations, %d negative / %d "
                  "positive / %d zero\n",
                  sweep.ro_a, sweep.ro_b, sweep.temperature_c, sweep.entries.size(),
                  sweep.negative_count, sweep.positive_count, sweep.zero_count);
    emit_report(g, config, delta_sweep_to_json(sweep), line, delta_sweep_to_csv(sweep));
}

void cmd_challenge_space(const GlobalOptions &g)
{
    RunConfig config = load_config(g);
    BigCount count = challenge_space(config.topology);
    json j{{"r_oscillators", config.topology.r_oscillators},
           {"c_columns", config.topology.c_columns},
           {"voltage_levels", config.topology.level_count()},
           {"challenge_space", count.str()}};
    emit_report(g, config, j, count.str() + "\n", "challenge_space\n" + count.str() + "\n");
}

void cmd_temp_table(const GlobalOptions &g, const std::string &chip_path, double temp_min,
                    double temp_max, double temp_step)
{
    RunConfig config = load_config(g);
    ChipInstance chip = chip_for_run(g, config, chip_path);
    auto grid = temperature_grid(temp_min, temp_max, temp_step);
    ConfigTableBuild build = build_config_table(chip, config.topology, config.technology, grid,
                                                g.threads);

    json j = config_table_to_json(build.table);
    json unresolved = json::array();
    for (const auto &[a, b] : build.unresolved)
        unresolved.push_back(std::to_string(a) + "-" + std::to_string(b));
    j["unresolved"] = unresolved;
    j["memory_bits"] = memory_bits(config.topology);

    std::string text;
    for (const auto &[pair, cfg] : build.table.entries)
        text += "pair " + std::to_string(pair.first) + "-" + std::to_string(pair.second) +
                ": config " + format_config(cfg) + "\n";
    for (const auto &[a, b] : build.unresolved)
        text += "pair " + std::to_string(a) + "-" + std::to_string(b) + ": unresolved\n";

    if (build.unresolved.empty()) {
        std::string bits = encode_table(build.table, config.topology);
        j["packed_bits"] = bits;
        j["packed_hex"] = bits_to_hex(bits);
        j["bit_length"] = bits.size();
        text += "packed " + std::to_string(bits.size()) + " bits (memory estimate " +
                std::to_string(memory_bits(config.topology)) + " bits), hex " + bits_to_hex(bits) +
                "\n";
    } else {
        text += "table incomplete (" + std::to_string(build.unresolved.size()) +
                " unresolved pairs), not packed\n";
    }
    std::string csv = "pair,config\n";
    for (const auto &[pair, cfg] : build.table.entries)
        csv += std::to_string(pair.first) + "-" + std::to_string(pair.second) + "," +
               format_config(cfg) + "\n";
    emit_report(g, config, j, text, csv);
}

void cmd_area(const GlobalOptions &g, std::optional<int> r, std::optional<int> i,
              std::optional<int> c, std::optional<int> l, bool original, const std::string &sweep)
{
    RunConfig config = load_config(g);
    if (!sweep.empty()) {
        std::vector<AreaReport> rows;
        if (sweep == "overhead")
            rows = sweep_switch_overhead(config.area, l.value_or(3));
        else if (sweep == "bits-vs-ro")
            rows = sweep_bits_vs_ro(config.area);
        else if (sweep == "bits-vs-columns")
            rows = sweep_bits_vs_columns(config.area);
        else if (sweep == "efficiency")
            rows = sweep_area_efficiency(config.area);
        else
            throw ConfigError("unknown sweep \"" + sweep +
                              "\" (expected overhead, bits-vs-ro, bits-vs-columns or efficiency)");
        write_output(g, area_sweep_to_csv(rows));
        return;
    }

    PufTopology topology = config.topology;
    if (r || i || c || l) {
        int rr = r.value_or(config.topology.r_oscillators);
        int ii = i.value_or(config.topology.inverters_per_ro);
        int cc = c.value_or(config.topology.c_columns);
        int ll = l.value_or(config.topology.level_count());
        topology = sweep_topology(rr, ii, cc, ll);
    }
    AreaReport report = bits_per_area(topology, config.area, !original);
    emit_report(g, config, area_report_to_json(report), area_report_to_text(report),
                area_sweep_to_csv({report}));
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Multi-voltage ring-oscillator PUF simulator and metrics toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_path, "run configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "base seed (overrides the config seed list)");
    app.add_option("--format", g.format, "output format: text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--out", g.out_path, "write the report to this file instead of stdout");
    app.add_flag("--no-timestamp", g.no_timestamp, "omit the generated-at field from reports");
    app.add_option("--threads", g.threads, "worker threads for cohort and pair evaluation")
        ->check(CLI::PositiveNumber);

    std::string gen_out = "chip.json";
    auto *gen = app.add_subcommand("gen-chip", "sample a chip and write it as JSON");
    gen->add_option("--out-chip", gen_out, "chip file to write");

    std::string chip_path, challenge_text = "0-1:000", pair_text = "0-1";
    std::optional<double> temperature;
    int repeats = 1;
    auto *resp = app.add_subcommand("respond", "evaluate one challenge on a stored chip");
    resp->add_option("--chip", chip_path, "chip JSON file")->required()->check(CLI::ExistingFile);
    resp->add_option("--challenge", challenge_text, "challenge as a-b:v1v2...vC")->required();
    resp->add_option("--temperature", temperature, "operating temperature [degC]");
    resp->add_option("--repeats", repeats, "number of measurements");

    int k_chips = 20;
    bool noisy = false;
    std::string uni_pair = "0-1";
    auto *uni = app.add_subcommand("uniqueness", "inter-chip uniqueness of a seeded cohort");
    uni->add_option("--chips", k_chips, "cohort size");
    uni->add_option("--pair", uni_pair, "RO pair answering the challenges");
    uni->add_flag("--noisy", noisy, "enable measurement jitter (default: noise-free)");

    std::string rel_chip, rel_pair = "0-1";
    bool rel_all_pairs = false;
    double temp_min = -25.0, temp_max = 125.0, temp_step = 10.0;
    int rel_repeats = 5;
    auto *rel = app.add_subcommand("reliability", "bit stability across a temperature sweep");
    rel->add_option("--chip", rel_chip, "chip JSON file (default: sample from seed)")
        ->check(CLI::ExistingFile);
    rel->add_option("--pair", rel_pair, "RO pair answering the challenges");
    rel->add_flag("--all-pairs", rel_all_pairs, "evaluate every pair instead of --pair");
    rel->add_option("--temp-min", temp_min, "sweep start [degC]");
    rel->add_option("--temp-max", temp_max, "sweep end [degC]");
    rel->add_option("--temp-step", temp_step, "sweep step [degC]");
    rel->add_option("--repeats", rel_repeats, "measurements per point");

    std::string ds_chip, ds_pair = "0-1";
    std::optional<double> ds_temp;
    auto *ds = app.add_subcommand("delta-sweep", "delay difference over every configuration");
    ds->add_option("--chip", ds_chip, "chip JSON file (default: sample from seed)")
        ->check(CLI::ExistingFile);
    ds->add_option("--pair", ds_pair, "RO pair to compare");
    ds->add_option("--temperature", ds_temp, "operating temperature [degC]");

    auto *cs = app.add_subcommand("challenge-space", "maximum number of challenge/response pairs");

    std::string tt_chip;
    double tt_min = -25.0, tt_max = 125.0, tt_step = 10.0;
    auto *tt = app.add_subcommand("temp-table",
                                  "search temperature-stable configurations for every pair");
    tt->add_option("--chip", tt_chip, "chip JSON file (default: sample from seed)")
        ->check(CLI::ExistingFile);
    tt->add_option("--temp-min", tt_min, "grid start [degC]");
    tt->add_option("--temp-max", tt_max, "grid end [degC]");
    tt->add_option("--temp-step", tt_step, "grid step [degC]");

    std::optional<int> area_r, area_i, area_c, area_l;
    bool area_original = false;
    std::string area_sweep;
    auto *area = app.add_subcommand("area", "gate-equivalent area estimate");
    area->add_option("--r", area_r, "ring oscillators");
    area->add_option("--i", area_i, "inverters per RO");
    area->add_option("--c", area_c, "columns");
    area->add_option("--l", area_l, "supply levels");
    area->add_flag("--original", area_original, "single-supply PUF (no switches)");
    area->add_option("--sweep", area_sweep,
                     "emit a CSV grid: overhead, bits-vs-ro, bits-vs-columns or efficiency");

    try {
        app.parse(argc, argv);
        if (gen->parsed())
            cmd_gen_chip(g, gen_out);
        else if (resp->parsed())
            cmd_respond(g, chip_path, challenge_text, temperature, repeats);
        else if (uni->parsed())
            cmd_uniqueness(g, k_chips, uni_pair, noisy);
        else if (rel->parsed())
            cmd_reliability(g, rel_chip, rel_pair, rel_all_pairs, temp_min, temp_max, temp_step,
                            rel_repeats);
        else if (ds->parsed())
            cmd_delta_sweep(g, ds_chip, ds_pair, ds_temp);
        else if (cs->parsed())
            cmd_challenge_space(g);
        else if (tt->parsed())
            cmd_temp_table(g, tt_chip, tt_min, tt_max, tt_step);
        else if (area->parsed())
            cmd_area(g, area_r, area_i, area_c, area_l, area_original, area_sweep);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const DomainError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
