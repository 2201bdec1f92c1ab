#include "ropuf/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ropuf {

OutputFormat parse_output_format(const std::string &name)
{
    if (name == "text")
        return OutputFormat::Text;
    if (name == "json")
        return OutputFormat::Json;
    if (name == "csv")
        return OutputFormat::Csv;
    throw ConfigError("unknown output format \"" + name + "\" (expected text, json or csv)");
}

std::string output_format_name(OutputFormat format)
{
    switch (format) {
    case OutputFormat::Text:
        return "text";
    case OutputFormat::Json:
        return "json";
    case OutputFormat::Csv:
        return "csv";
    }
    return "text";
}

void RunConfig::validate() const
{
    technology.validate();
    variation.validate();
    topology.validate();
    measurement.validate();
    area.validate();
    if (seeds.empty())
        throw DomainError("at least one seed is required");
}

RunConfig default_run_config()
{
    RunConfig config;
    config.topology = PufTopology::make(2, 13, 3, {1.08, 1.2, 1.32});
    config.measurement.jitter_sigma = config.variation.sigma_jitter;
    return config;
}

namespace {

struct Line {
    int number;
    std::string section;
    std::string key;
    std::string value;
};

std::string trim(const std::string &s)
{
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

class ConfigReader {
  public:
    ConfigReader(const std::string &text, std::string source) : source_(std::move(source))
    {
        std::istringstream in(text);
        std::string raw;
        std::string section;
        int number = 0;
        while (std::getline(in, raw)) {
            ++number;
            auto comment = raw.find_first_of("#;");
            if (comment != std::string::npos)
                raw = raw.substr(0, comment);
            std::string line = trim(raw);
            if (line.empty())
                continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    fail(number, "unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                if (section.empty())
                    fail(number, "empty section name");
                sections_seen_.insert({section, number});
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos)
                fail(number, "expected key = value");
            if (section.empty())
                fail(number, "key outside any [section]");
            Line entry{number, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
            if (entry.key.empty())
                fail(number, "empty key");
            entries_.push_back(std::move(entry));
        }
    }

    [[noreturn]] void fail(int line, const std::string &message) const
    {
        throw ConfigError(source_ + ":" + std::to_string(line) + ": " + message);
    }

    double number(const Line &line) const
    {
        try {
            std::size_t used = 0;
            double v = std::stod(line.value, &used);
            if (used != line.value.size())
                throw std::invalid_argument("");
            return v;
        } catch (const std::logic_error &) {
            fail(line.number, "key \"" + line.key + "\": \"" + line.value + "\" is not a number");
        }
    }

    long long integer(const Line &line) const
    {
        try {
            std::size_t used = 0;
            long long v = std::stoll(line.value, &used);
            if (used != line.value.size())
                throw std::invalid_argument("");
            return v;
        } catch (const std::logic_error &) {
            fail(line.number, "key \"" + line.key + "\": \"" + line.value + "\" is not an integer");
        }
    }

    std::vector<std::string> list(const Line &line) const
    {
        std::vector<std::string> items;
        std::string current;
        std::istringstream in(line.value);
        while (std::getline(in, current, ','))
            items.push_back(trim(current));
        if (items.empty() || items.back().empty())
            fail(line.number, "key \"" + line.key + "\": expected a comma-separated list");
        return items;
    }

    const std::vector<Line> &entries() const { return entries_; }
    const std::map<std::string, int> &sections() const { return sections_seen_; }

  private:
    std::string source_;
    std::vector<Line> entries_;
    std::map<std::string, int> sections_seen_;
};

} // namespace

RunConfig parse_run_config_text(const std::string &text, const std::string &source_name)
{
    ConfigReader reader(text, source_name);
    RunConfig config = default_run_config();
    bool ripple_given = false;

    static const std::map<std::string, int> known_sections = {
        {"technology", 0}, {"variation", 0}, {"topology", 0}, {"measurement", 0}, {"area", 0}, {"run", 0}};
    for (const auto &[section, line] : reader.sections())
        if (!known_sections.count(section))
            throw ConfigError(source_name + ":" + std::to_string(line) + ": unknown section [" +
                              section + "]");

    for (const auto &line : reader.entries()) {
        auto &t = config.technology;
        auto &v = config.variation;
        auto &topo = config.topology;
        auto &m = config.measurement;
        auto &a = config.area;
        const std::string id = line.section + "." + line.key;

        if (id == "technology.v_nominal_v")
            t.v_nominal = reader.number(line);
        else if (id == "technology.v_th0_v")
            t.v_th0 = reader.number(line);
        else if (id == "technology.alpha")
            t.alpha = reader.number(line);
        else if (id == "technology.d_inv_nominal_ps")
            t.d_inv_nominal = reader.number(line) * 1e-12;
        else if (id == "technology.k_vth_temp_mv_per_c")
            t.k_vth_temp = reader.number(line) * 1e-3;
        else if (id == "technology.t_ref_c")
            t.t_ref = reader.number(line);
        else if (id == "variation.sigma_inter")
            v.sigma_inter = reader.number(line);
        else if (id == "variation.sigma_intra")
            v.sigma_intra = reader.number(line);
        else if (id == "variation.kappa_mean_per_c")
            v.kappa_mean = reader.number(line);
        else if (id == "variation.sigma_kappa_per_c")
            v.sigma_kappa = reader.number(line);
        else if (id == "variation.sigma_jitter") {
            v.sigma_jitter = reader.number(line);
            m.jitter_sigma = v.sigma_jitter;
        } else if (id == "topology.r_oscillators") {
            topo.r_oscillators = static_cast<int>(reader.integer(line));
        } else if (id == "topology.inverters_per_ro") {
            topo.inverters_per_ro = static_cast<int>(reader.integer(line));
        } else if (id == "topology.c_columns") {
            topo.c_columns = static_cast<int>(reader.integer(line));
        } else if (id == "topology.vdd_levels_v") {
            topo.voltage_levels.clear();
            for (const auto &item : reader.list(line)) {
                Line fake{line.number, line.section, line.key, item};
                topo.voltage_levels.push_back(reader.number(fake));
            }
        } else if (id == "topology.vdd_var_v") {
            topo.level_variation.clear();
            for (const auto &item : reader.list(line)) {
                Line fake{line.number, line.section, line.key, item};
                topo.level_variation.push_back(reader.number(fake));
            }
            ripple_given = true;
        } else if (id == "topology.column_of_inverter") {
            topo.column_of_inverter.clear();
            for (const auto &item : reader.list(line)) {
                Line fake{line.number, line.section, line.key, item};
                topo.column_of_inverter.push_back(static_cast<int>(reader.integer(fake)));
            }
        } else if (id == "measurement.compare_time_us")
            m.compare_time = reader.number(line) * 1e-6;
        else if (id == "measurement.counter_bits")
            m.counter_bits = static_cast<int>(reader.integer(line));
        else if (id == "measurement.temperature_c")
            m.temperature = reader.number(line);
        else if (id == "area.ge_inverter")
            a.ge_inverter = reader.number(line);
        else if (id == "area.ge_counter_per_bit")
            a.ge_counter_per_bit = reader.number(line);
        else if (id == "area.ge_comparator_per_bit")
            a.ge_comparator_per_bit = reader.number(line);
        else if (id == "area.ge_mux_per_input")
            a.ge_mux_per_input = reader.number(line);
        else if (id == "area.ge_switch")
            a.ge_switch = reader.number(line);
        else if (id == "area.buffer_inverters_per_ro")
            a.buffer_inverters_per_ro = static_cast<int>(reader.integer(line));
        else if (id == "area.counter_bits")
            a.counter_bits = static_cast<int>(reader.integer(line));
        else if (id == "run.seeds") {
            config.seeds.clear();
            for (const auto &item : reader.list(line)) {
                Line fake{line.number, line.section, line.key, item};
                config.seeds.push_back(static_cast<std::uint64_t>(reader.integer(fake)));
            }
        } else if (id == "run.output_format")
            config.output_format = parse_output_format(line.value);
        else
            reader.fail(line.number, "unknown key \"" + line.key + "\" in section [" + line.section + "]");
    }

    // Default ripple (0.05 V per level) when levels were overridden without it.
    if (!ripple_given)
        config.topology.level_variation.assign(config.topology.voltage_levels.size(), 0.05);

    config.validate();
    return config;
}

RunConfig load_run_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file \"" + path + "\"");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config_text(buffer.str(), path);
}

std::string run_config_to_text(const RunConfig &config)
{
    char buf[128];
    std::string text;
    auto add = [&text](const std::string &line) { text += line + "\n"; };
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };

    const auto &t = config.technology;
    add("[technology]");
    add("v_nominal_v = " + num(t.v_nominal));
    add("v_th0_v = " + num(t.v_th0));
    add("alpha = " + num(t.alpha));
    add("d_inv_nominal_ps = " + num(t.d_inv_nominal * 1e12));
    add("k_vth_temp_mv_per_c = " + num(t.k_vth_temp * 1e3));
    add("t_ref_c = " + num(t.t_ref));

    const auto &v = config.variation;
    add("");
    add("[variation]");
    add("sigma_inter = " + num(v.sigma_inter));
    add("sigma_intra = " + num(v.sigma_intra));
    add("kappa_mean_per_c = " + num(v.kappa_mean));
    add("sigma_kappa_per_c = " + num(v.sigma_kappa));
    add("sigma_jitter = " + num(v.sigma_jitter));

    const auto &topo = config.topology;
    add("");
    add("[topology]");
    add("r_oscillators = " + std::to_string(topo.r_oscillators));
    add("inverters_per_ro = " + std::to_string(topo.inverters_per_ro));
    add("c_columns = " + std::to_string(topo.c_columns));
    std::string levels, ripple;
    for (std::size_t i = 0; i < topo.voltage_levels.size(); ++i) {
        if (i) {
            levels += ", ";
            ripple += ", ";
        }
        levels += num(topo.voltage_levels[i]);
        ripple += num(topo.level_variation[i]);
    }
    add("vdd_levels_v = " + levels);
    add("vdd_var_v = " + ripple);
    if (!topo.column_of_inverter.empty()) {
        std::string map;
        for (std::size_t i = 0; i < topo.column_of_inverter.size(); ++i) {
            if (i)
                map += ", ";
            map += std::to_string(topo.column_of_inverter[i]);
        }
        add("column_of_inverter = " + map);
    }

    const auto &m = config.measurement;
    add("");
    add("[measurement]");
    add("compare_time_us = " + num(m.compare_time * 1e6));
    add("counter_bits = " + std::to_string(m.counter_bits));
    add("temperature_c = " + num(m.temperature));

    const auto &a = config.area;
    add("");
    add("[area]");
    add("ge_inverter = " + num(a.ge_inverter));
    add("ge_counter_per_bit = " + num(a.ge_counter_per_bit));
    add("ge_comparator_per_bit = " + num(a.ge_comparator_per_bit));
    add("ge_mux_per_input = " + num(a.ge_mux_per_input));
    add("ge_switch = " + num(a.ge_switch));
    add("buffer_inverters_per_ro = " + std::to_string(a.buffer_inverters_per_ro));
    add("counter_bits = " + std::to_string(a.counter_bits));

    add("");
    add("[run]");
    std::string seeds;
    for (std::size_t i = 0; i < config.seeds.size(); ++i) {
        if (i)
            seeds += ", ";
        seeds += std::to_string(config.seeds[i]);
    }
    add("seeds = " + seeds);
    add("output_format = " + output_format_name(config.output_format));
    return text;
}

} // namespace ropuf
