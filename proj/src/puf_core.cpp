#include "ropuf/puf_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ropuf/rng.hpp"

namespace ropuf {

namespace {

std::string format_voltage(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

PufTopology PufTopology::make(int r, int i, int c, std::vector<double> levels,
                              std::vector<double> variation)
{
    PufTopology t;
    t.r_oscillators = r;
    t.inverters_per_ro = i;
    t.c_columns = c;
    t.voltage_levels = std::move(levels);
    if (variation.empty())
        variation.assign(t.voltage_levels.size(), 0.05);
    t.level_variation = std::move(variation);
    t.validate();
    return t;
}

int PufTopology::column_of(int inverter_index) const
{
    if (column_of_inverter.empty())
        return inverter_index % c_columns;
    return column_of_inverter[static_cast<std::size_t>(inverter_index)];
}

std::vector<int> PufTopology::column_sizes() const
{
    std::vector<int> sizes(static_cast<std::size_t>(c_columns), 0);
    for (int j = 0; j < inverters_per_ro; ++j)
        ++sizes[static_cast<std::size_t>(column_of(j))];
    return sizes;
}

int PufTopology::closest_level(double v) const
{
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < level_count(); ++i) {
        double d = std::abs(voltage_levels[static_cast<std::size_t>(i)] - v);
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

std::string PufTopology::ref() const
{
    std::string s = "r" + std::to_string(r_oscillators) + "-i" + std::to_string(inverters_per_ro) +
                    "-c" + std::to_string(c_columns) + "-v";
    for (std::size_t i = 0; i < voltage_levels.size(); ++i) {
        if (i)
            s += ',';
        s += format_voltage(voltage_levels[i]);
    }
    if (!column_of_inverter.empty()) {
        s += "-m";
        for (int col : column_of_inverter)
            s += std::to_string(col);
    }
    return s;
}

void PufTopology::validate() const
{
    if (r_oscillators < 1)
        throw DomainError("topology needs at least one ring oscillator");
    if (inverters_per_ro < 1 || inverters_per_ro % 2 == 0)
        throw DomainError("inverters_per_ro must be odd (a ring oscillator cannot oscillate otherwise)");
    if (c_columns < 1 || c_columns > inverters_per_ro)
        throw DomainError("c_columns must be in [1, inverters_per_ro]");
    if (!column_of_inverter.empty()) {
        if (static_cast<int>(column_of_inverter.size()) != inverters_per_ro)
            throw DomainError("column_of_inverter must assign every inverter position");
        for (int col : column_of_inverter)
            if (col < 0 || col >= c_columns)
                throw DomainError("column_of_inverter index out of range");
    }
    for (int size : column_sizes())
        if (size == 0)
            throw DomainError("every column must contain at least one inverter");
    if (voltage_levels.empty())
        throw DomainError("at least one supply level is required");
    if (level_variation.size() != voltage_levels.size())
        throw DomainError("level_variation must list one ripple value per supply level");
    for (double v : voltage_levels)
        if (!(v > 0.0))
            throw DomainError("supply levels must be positive");
    for (double var : level_variation)
        if (var < 0.0)
            throw DomainError("level ripple must be non-negative");
    for (std::size_t i = 0; i < voltage_levels.size(); ++i) {
        for (std::size_t j = i + 1; j < voltage_levels.size(); ++j) {
            double distance = std::abs(voltage_levels[i] - voltage_levels[j]);
            double half_ripple = (level_variation[i] + level_variation[j]) / 2.0;
            if (!(distance > half_ripple))
                throw DomainError("level spacing invariant violated: |" + format_voltage(voltage_levels[i]) +
                                  " - " + format_voltage(voltage_levels[j]) + "| V must exceed (" +
                                  format_voltage(level_variation[i]) + " + " +
                                  format_voltage(level_variation[j]) +
                                  ")/2 V, the half-sum of the level ripples");
        }
    }
}

void MeasurementSettings::validate() const
{
    if (!(compare_time > 0.0))
        throw DomainError("compare_time must be positive");
    if (counter_bits < 1 || counter_bits > 63)
        throw DomainError("counter_bits must be in [1, 63]");
    if (jitter_sigma < 0.0)
        throw DomainError("jitter_sigma must be non-negative");
}

void validate_config(const VoltageConfiguration &config, const PufTopology &topology)
{
    if (static_cast<int>(config.level_index_per_column.size()) != topology.c_columns)
        throw DomainError("configuration must select one level per column");
    for (int idx : config.level_index_per_column)
        if (idx < 0 || idx >= topology.level_count())
            throw DomainError("level index " + std::to_string(idx) + " out of range (L = " +
                              std::to_string(topology.level_count()) + ")");
}

void validate_challenge(const Challenge &challenge, const PufTopology &topology)
{
    if (challenge.ro_a < 0 || challenge.ro_a >= topology.r_oscillators || challenge.ro_b < 0 ||
        challenge.ro_b >= topology.r_oscillators)
        throw DomainError("ring-oscillator index out of range (R = " +
                          std::to_string(topology.r_oscillators) + ")");
    if (challenge.ro_a == challenge.ro_b)
        throw DomainError("a challenge must compare two distinct ring oscillators");
    validate_config(challenge.config, topology);
}

double ro_delay(const ChipInstance &chip, int ro, const VoltageConfiguration &config,
                const PufTopology &topology, const TechnologyParams &tech, double temperature_c)
{
    if (ro < 0 || ro >= static_cast<int>(chip.devices.size()))
        throw DomainError("ring-oscillator index out of range");
    validate_config(config, topology);
    const auto &devices = chip.devices[static_cast<std::size_t>(ro)];
    double total = 0.0;
    for (int j = 0; j < topology.inverters_per_ro; ++j) {
        int level = config.level_index_per_column[static_cast<std::size_t>(topology.column_of(j))];
        double v = topology.voltage_levels[static_cast<std::size_t>(level)];
        const auto &device = devices[static_cast<std::size_t>(j)];
        total += alpha_law_delay(device.d_base, v, temperature_c, tech, device.kappa);
    }
    return total;
}

std::uint64_t count_oscillations(double delay, const MeasurementSettings &settings,
                                 std::mt19937_64 &rng)
{
    if (!(delay > 0.0))
        throw DomainError("oscillator delay must be positive");
    settings.validate();
    double effective = delay;
    if (settings.jitter_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, settings.jitter_sigma);
        double factor = 1.0 + noise(rng);
        while (!(factor > 0.0))
            factor = 1.0 + noise(rng);
        effective = delay * factor;
    }
    double quotient = settings.compare_time / effective;
    // Snap quotients within a few ulps of an integer before truncating, so
    // exact-ratio inputs (1 us / 2 ns) count the full period.
    double nearest = std::nearbyint(quotient);
    if (nearest > 0.0 &&
        std::abs(quotient - nearest) <= 4.0 * std::numeric_limits<double>::epsilon() * nearest)
        quotient = nearest;
    double count = std::floor(quotient);
    double max_count = std::ldexp(1.0, settings.counter_bits) - 1.0;
    if (count >= max_count)
        return static_cast<std::uint64_t>(max_count);
    return static_cast<std::uint64_t>(count);
}

Response respond(const ChipInstance &chip, const Challenge &challenge, const PufTopology &topology,
                 const TechnologyParams &tech, const MeasurementSettings &settings,
                 std::mt19937_64 &rng)
{
    validate_challenge(challenge, topology);
    double delay_a = ro_delay(chip, challenge.ro_a, challenge.config, topology, tech, settings.temperature);
    double delay_b = ro_delay(chip, challenge.ro_b, challenge.config, topology, tech, settings.temperature);
    Response r;
    r.count_a = count_oscillations(delay_a, settings, rng);
    r.count_b = count_oscillations(delay_b, settings, rng);
    if (r.count_a > r.count_b) {
        r.bit = 0;
    } else if (r.count_a < r.count_b) {
        r.bit = 1;
    } else {
        r.bit = 1;
        r.unstable = true;
    }
    return r;
}

Response respond_seeded(const ChipInstance &chip, const Challenge &challenge,
                        const PufTopology &topology, const TechnologyParams &tech,
                        const MeasurementSettings &settings, std::uint64_t measurement_index)
{
    auto rng = make_engine(mix_seed({chip.seed, challenge_key(challenge), measurement_index}));
    return respond(chip, challenge, topology, tech, settings, rng);
}

PairDelta compare_pair(const ChipInstance &chip, int ro_a, int ro_b,
                       const VoltageConfiguration &config, const PufTopology &topology,
                       const TechnologyParams &tech, double temperature_c)
{
    PairDelta d;
    d.delay_a = ro_delay(chip, ro_a, config, topology, tech, temperature_c);
    d.delay_b = ro_delay(chip, ro_b, config, topology, tech, temperature_c);
    d.delta = d.delay_a - d.delay_b;
    d.tie = d.delta == 0.0;
    d.bit = d.delta < 0.0 ? 0 : 1;
    return d;
}

std::vector<VoltageConfiguration> enumerate_configs(const PufTopology &topology)
{
    const int l = topology.level_count();
    const int c = topology.c_columns;
    double total = std::pow(static_cast<double>(l), c);
    if (total > static_cast<double>(1 << 24))
        throw DomainError("configuration space too large to enumerate (L^C > 2^24)");

    std::vector<VoltageConfiguration> out;
    out.reserve(static_cast<std::size_t>(total));
    VoltageConfiguration current;
    current.level_index_per_column.assign(static_cast<std::size_t>(c), 0);
    while (true) {
        out.push_back(current);
        int pos = c - 1;
        while (pos >= 0 && current.level_index_per_column[static_cast<std::size_t>(pos)] == l - 1) {
            current.level_index_per_column[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0)
            break;
        ++current.level_index_per_column[static_cast<std::size_t>(pos)];
    }
    return out;
}

std::vector<Challenge> enumerate_challenges(const PufTopology &topology)
{
    auto configs = enumerate_configs(topology);
    std::vector<Challenge> out;
    for (int a = 0; a < topology.r_oscillators; ++a)
        for (int b = a + 1; b < topology.r_oscillators; ++b)
            for (const auto &config : configs)
                out.push_back(Challenge{a, b, config});
    return out;
}

std::uint64_t challenge_key(const Challenge &challenge)
{
    std::uint64_t state = 0x2545f4914f6cdd1dULL;
    auto fold = [&state](std::uint64_t x) {
        state ^= x + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
        (void)splitmix64(state);
    };
    fold(static_cast<std::uint64_t>(challenge.ro_a));
    fold(static_cast<std::uint64_t>(challenge.ro_b));
    for (int idx : challenge.config.level_index_per_column)
        fold(static_cast<std::uint64_t>(idx) + 1);
    return splitmix64(state);
}

std::string format_config(const VoltageConfiguration &config)
{
    std::string s;
    for (int idx : config.level_index_per_column) {
        if (idx < 0 || idx > 9)
            throw DomainError("config text form supports level indices 0..9 only");
        s += static_cast<char>('0' + idx);
    }
    return s;
}

std::string format_challenge(const Challenge &challenge)
{
    return std::to_string(challenge.ro_a) + "-" + std::to_string(challenge.ro_b) + ":" +
           format_config(challenge.config);
}

VoltageConfiguration parse_config(const std::string &text, const PufTopology &topology)
{
    VoltageConfiguration config;
    for (char ch : text) {
        if (ch < '0' || ch > '9')
            throw ConfigError("malformed configuration \"" + text + "\": expected one level digit per column");
        config.level_index_per_column.push_back(ch - '0');
    }
    validate_config(config, topology);
    return config;
}

Challenge parse_challenge(const std::string &text, const PufTopology &topology)
{
    auto dash = text.find('-');
    auto colon = text.find(':');
    if (dash == std::string::npos || colon == std::string::npos || dash == 0 || colon < dash + 2 ||
        colon + 1 >= text.size())
        throw ConfigError("malformed challenge \"" + text + "\": expected \"a-b:v1v2...vC\"");
    Challenge challenge;
    try {
        std::size_t used = 0;
        challenge.ro_a = std::stoi(text.substr(0, dash), &used);
        if (used != dash)
            throw std::invalid_argument("");
        challenge.ro_b = std::stoi(text.substr(dash + 1, colon - dash - 1), &used);
        if (used != colon - dash - 1)
            throw std::invalid_argument("");
    } catch (const std::logic_error &) {
        throw ConfigError("malformed challenge \"" + text + "\": ring-oscillator indices must be integers");
    }
    challenge.config = parse_config(text.substr(colon + 1), topology);
    if (challenge.ro_a >= challenge.ro_b)
        throw DomainError("challenge \"" + text + "\" violates the canonical ordering ro_a < ro_b");
    validate_challenge(challenge, topology);
    return challenge;
}

} // namespace ropuf
