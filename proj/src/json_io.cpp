#include "ropuf/json_io.hpp"

#include <nlohmann/json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <limits>

namespace ropuf {

using nlohmann::json;

namespace {

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

/// Exact counts: JSON number while it fits a 64-bit unsigned, else a
/// decimal string.
json big_count_to_json(const BigCount &value)
{
    if (value <= BigCount(std::numeric_limits<std::uint64_t>::max()))
        return value.convert_to<std::uint64_t>();
    return value.str();
}

} // namespace

json chip_to_json(const ChipInstance &chip)
{
    json devices = json::array();
    for (const auto &ro : chip.devices) {
        json row = json::array();
        for (const auto &device : ro)
            row.push_back({{"d_base_ps", device.d_base * 1e12}, {"kappa_per_c", device.kappa}});
        devices.push_back(std::move(row));
    }
    return json{{"chip_id", chip.chip_id},
                {"seed", chip.seed},
                {"topology_ref", chip.topology_ref},
                {"devices", std::move(devices)}};
}

ChipInstance chip_from_json(const json &j)
{
    ChipInstance chip;
    try {
        chip.chip_id = j.at("chip_id").get<std::string>();
        chip.seed = j.at("seed").get<std::uint64_t>();
        chip.topology_ref = j.at("topology_ref").get<std::string>();
        for (const auto &row : j.at("devices")) {
            std::vector<InverterDevice> ro;
            for (const auto &entry : row) {
                InverterDevice device;
                device.d_base = entry.at("d_base_ps").get<double>() * 1e-12;
                device.kappa = entry.at("kappa_per_c").get<double>();
                ro.push_back(device);
            }
            chip.devices.push_back(std::move(ro));
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("invalid chip document: ") + e.what());
    }
    return chip;
}

void save_chip(const ChipInstance &chip, const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write chip file \"" + path + "\"");
    out << chip_to_json(chip).dump(2) << '\n';
}

ChipInstance load_chip(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read chip file \"" + path + "\"");
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw ConfigError("chip file \"" + path + "\" is not valid JSON: " + e.what());
    }
    return chip_from_json(j);
}

json uniqueness_to_json(const UniquenessReport &report)
{
    return json{{"k_chips", report.k_chips},
                {"n_challenges", report.n_challenges},
                {"uniqueness_percent", report.uniqueness_percent},
                {"pairwise_hd_percent", report.pairwise_hd_percent}};
}

json reliability_to_json(const ReliabilityReport &report)
{
    return json{{"reliability_percent", report.reliability_percent},
                {"reference_temperature_c", report.reference_temperature_c},
                {"temperatures_c", report.temperatures_c},
                {"flip_percent_per_temperature", report.flip_percent_per_temperature},
                {"n_challenges", report.n_challenges},
                {"repeats", report.repeats},
                {"comparisons", report.comparisons},
                {"excluded_ties", report.excluded_ties}};
}

json delta_sweep_to_json(const DeltaSweep &sweep)
{
    json entries = json::array();
    for (const auto &[config, delta] : sweep.entries)
        entries.push_back({{"config", format_config(config)}, {"delta_ps", delta * 1e12}});
    return json{{"ro_a", sweep.ro_a},
                {"ro_b", sweep.ro_b},
                {"temperature_c", sweep.temperature_c},
                {"entries", std::move(entries)},
                {"negative_count", sweep.negative_count},
                {"positive_count", sweep.positive_count},
                {"zero_count", sweep.zero_count}};
}

std::string delta_sweep_to_csv(const DeltaSweep &sweep)
{
    std::string csv = "config,delta_ps\n";
    for (const auto &[config, delta] : sweep.entries)
        csv += format_config(config) + "," + fixed(delta * 1e12, 6) + "\n";
    return csv;
}

json config_table_to_json(const ConfigTable &table)
{
    json entries = json::array();
    for (const auto &[pair, config] : table.entries)
        entries.push_back({{"pair", std::to_string(pair.first) + "-" + std::to_string(pair.second)},
                           {"config", format_config(config)}});
    return json{{"topology_ref", table.topology_ref}, {"entries", std::move(entries)}};
}

ConfigTable config_table_from_json(const json &j, const PufTopology &topology)
{
    ConfigTable table;
    try {
        table.topology_ref = j.at("topology_ref").get<std::string>();
        for (const auto &entry : j.at("entries")) {
            const auto pair_text = entry.at("pair").get<std::string>();
            auto dash = pair_text.find('-');
            if (dash == std::string::npos)
                throw ConfigError("invalid pair \"" + pair_text + "\"");
            int a = std::stoi(pair_text.substr(0, dash));
            int b = std::stoi(pair_text.substr(dash + 1));
            table.entries.emplace(std::make_pair(a, b),
                                  parse_config(entry.at("config").get<std::string>(), topology));
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("invalid table document: ") + e.what());
    }
    return table;
}

json area_report_to_json(const AreaReport &report)
{
    const AreaConstants &k = report.constants;
    return json{{"r_oscillators", report.r},
                {"inverters_per_ro", report.i},
                {"c_columns", report.c},
                {"voltage_levels", report.l},
                {"multi_voltage", report.multi_voltage},
                {"base_ge", report.base_ge},
                {"switch_ge", report.switch_ge},
                {"total_ge", report.total_ge},
                {"overhead_percent", report.overhead_percent},
                {"max_output_bits", big_count_to_json(report.max_output_bits)},
                {"bits_per_ge", report.bits_per_ge},
                {"constants",
                 {{"ge_inverter", k.ge_inverter},
                  {"ge_counter_per_bit", k.ge_counter_per_bit},
                  {"ge_comparator_per_bit", k.ge_comparator_per_bit},
                  {"ge_mux_per_input", k.ge_mux_per_input},
                  {"ge_switch", k.ge_switch},
                  {"buffer_inverters_per_ro", k.buffer_inverters_per_ro},
                  {"counter_bits", k.counter_bits}}}};
}

std::string area_report_to_text(const AreaReport &report)
{
    const AreaConstants &k = report.constants;
    std::string text;
    text += "topology          R=" + std::to_string(report.r) + " I=" + std::to_string(report.i) +
            " C=" + std::to_string(report.c) + " L=" + std::to_string(report.l) +
            (report.multi_voltage ? " (multi-voltage)" : " (single supply)") + "\n";
    text += "base area         " + fixed(report.base_ge, 2) + " GE\n";
    text += "switch area       " + fixed(report.switch_ge, 2) + " GE\n";
    text += "total area        " + fixed(report.total_ge, 2) + " GE\n";
    text += "switch overhead   " + fixed(report.overhead_percent, 2) + " %\n";
    text += "max output bits   " + report.max_output_bits.str() + "\n";
    text += "bits per GE       " + fixed(report.bits_per_ge, 4) + "\n";
    text += "constants         inverter=" + fixed(k.ge_inverter, 2) +
            " counter/bit=" + fixed(k.ge_counter_per_bit, 2) +
            " comparator/bit=" + fixed(k.ge_comparator_per_bit, 2) +
            " mux/input=" + fixed(k.ge_mux_per_input, 2) + " switch=" + fixed(k.ge_switch, 2) +
            " buffers/ro=" + std::to_string(k.buffer_inverters_per_ro) +
            " counter_bits=" + std::to_string(k.counter_bits) + " [GE]\n";
    return text;
}

std::string area_sweep_to_csv(const std::vector<AreaReport> &rows)
{
    std::string csv = "r,i,c,l,base_ge,switch_ge,overhead_pct,max_bits,bits_per_ge\n";
    for (const auto &row : rows) {
        csv += std::to_string(row.r) + "," + std::to_string(row.i) + "," + std::to_string(row.c) +
               "," + std::to_string(row.l) + "," + fixed(row.base_ge, 3) + "," +
               fixed(row.switch_ge, 3) + "," + fixed(row.overhead_percent, 4) + "," +
               row.max_output_bits.str() + "," + fixed(row.bits_per_ge, 6) + "\n";
    }
    return csv;
}

std::string response_csv_header()
{
    return "chip_id,challenge,temperature_c,bit,unstable";
}

std::string response_csv_row(const std::string &chip_id, const Challenge &challenge,
                             double temperature_c, const Response &response)
{
    return chip_id + "," + format_challenge(challenge) + "," + fixed(temperature_c, 2) + "," +
           std::to_string(response.bit) + "," + (response.unstable ? "1" : "0");
}

} // namespace ropuf
