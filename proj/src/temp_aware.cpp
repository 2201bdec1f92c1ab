#include "ropuf/temp_aware.hpp"

#include <algorithm>
#include <bit>

#include "ropuf/parallel.hpp"

namespace ropuf {

bool StabilityProfile::row_stable(const Row &row)
{
    if (row.tie || row.bits.empty())
        return false;
    return std::all_of(row.bits.begin(), row.bits.end(),
                       [&](int b) { return b == row.bits.front(); });
}

std::vector<double> default_temperature_grid()
{
    std::vector<double> grid;
    for (int t = -25; t <= 125; t += 10)
        grid.push_back(static_cast<double>(t));
    return grid;
}

StabilityProfile stability_profile(const ChipInstance &chip, int ro_a, int ro_b,
                                   const PufTopology &topology, const TechnologyParams &tech,
                                   const std::vector<double> &temp_samples)
{
    if (temp_samples.empty())
        throw DomainError("temperature samples must not be empty");
    StabilityProfile profile;
    profile.ro_a = ro_a;
    profile.ro_b = ro_b;
    profile.temperatures_c = temp_samples;
    profile.nominal_config.level_index_per_column.assign(
        static_cast<std::size_t>(topology.c_columns), topology.closest_level(tech.v_nominal));

    for (const auto &config : enumerate_configs(topology)) {
        StabilityProfile::Row row;
        row.config = config;
        row.bits.reserve(temp_samples.size());
        for (double t : temp_samples) {
            PairDelta d = compare_pair(chip, ro_a, ro_b, config, topology, tech, t);
            row.bits.push_back(d.bit);
            row.tie = row.tie || d.tie;
        }
        profile.rows.push_back(std::move(row));
    }
    return profile;
}

std::optional<VoltageConfiguration> find_reliable_config(const StabilityProfile &profile)
{
    for (const auto &row : profile.rows)
        if (row.config == profile.nominal_config && StabilityProfile::row_stable(row))
            return row.config;
    for (const auto &row : profile.rows)
        if (StabilityProfile::row_stable(row))
            return row.config;
    return std::nullopt;
}

ConfigTableBuild build_config_table(const ChipInstance &chip, const PufTopology &topology,
                                    const TechnologyParams &tech,
                                    const std::vector<double> &temp_samples, int threads)
{
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < topology.r_oscillators; ++a)
        for (int b = a + 1; b < topology.r_oscillators; ++b)
            pairs.emplace_back(a, b);

    std::vector<std::optional<VoltageConfiguration>> found(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t i) {
        auto profile = stability_profile(chip, pairs[i].first, pairs[i].second, topology, tech,
                                         temp_samples);
        found[i] = find_reliable_config(profile);
    });

    ConfigTableBuild build;
    build.table.topology_ref = topology.ref();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (found[i])
            build.table.entries.emplace(pairs[i], *found[i]);
        else
            build.unresolved.push_back(pairs[i]);
    }
    return build;
}

std::uint64_t memory_bits(const PufTopology &topology)
{
    const auto l = static_cast<unsigned>(topology.level_count());
    std::uint64_t bits_per_level = l <= 1 ? 0 : std::bit_width(l - 1);
    std::uint64_t pairs = static_cast<std::uint64_t>(topology.r_oscillators) *
                          static_cast<std::uint64_t>(topology.r_oscillators - 1) / 2;
    return bits_per_level * static_cast<std::uint64_t>(topology.c_columns) * pairs;
}

namespace {

std::uint64_t bits_per_level_index(const PufTopology &topology)
{
    const auto l = static_cast<unsigned>(topology.level_count());
    return l <= 1 ? 0 : std::bit_width(l - 1);
}

} // namespace

std::string encode_table(const ConfigTable &table, const PufTopology &topology)
{
    const std::uint64_t width = bits_per_level_index(topology);
    std::string bits;
    bits.reserve(memory_bits(topology));
    for (int a = 0; a < topology.r_oscillators; ++a) {
        for (int b = a + 1; b < topology.r_oscillators; ++b) {
            auto it = table.entries.find({a, b});
            if (it == table.entries.end())
                throw DomainError("cannot encode an incomplete table: pair " + std::to_string(a) + "-" +
                                  std::to_string(b) + " has no configuration");
            validate_config(it->second, topology);
            for (int idx : it->second.level_index_per_column)
                for (std::uint64_t bit = width; bit-- > 0;)
                    bits += ((static_cast<std::uint64_t>(idx) >> bit) & 1u) ? '1' : '0';
        }
    }
    return bits;
}

ConfigTable decode_table(const std::string &bits, const PufTopology &topology)
{
    if (bits.size() != memory_bits(topology))
        throw DomainError("packed table has " + std::to_string(bits.size()) + " bits, expected " +
                          std::to_string(memory_bits(topology)));
    for (char c : bits)
        if (c != '0' && c != '1')
            throw DomainError("packed table must contain only '0' and '1'");

    const std::uint64_t width = bits_per_level_index(topology);
    ConfigTable table;
    table.topology_ref = topology.ref();
    std::size_t pos = 0;
    for (int a = 0; a < topology.r_oscillators; ++a) {
        for (int b = a + 1; b < topology.r_oscillators; ++b) {
            VoltageConfiguration config;
            for (int c = 0; c < topology.c_columns; ++c) {
                int idx = 0;
                for (std::uint64_t bit = 0; bit < width; ++bit)
                    idx = (idx << 1) | (bits[pos++] == '1' ? 1 : 0);
                config.level_index_per_column.push_back(idx);
            }
            validate_config(config, topology);
            table.entries.emplace(std::make_pair(a, b), std::move(config));
        }
    }
    return table;
}

std::string bits_to_hex(const std::string &bits)
{
    static const char digits[] = "0123456789abcdef";
    std::string hex;
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        int nibble = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            nibble <<= 1;
            if (i + j < bits.size() && bits[i + j] == '1')
                nibble |= 1;
        }
        hex += digits[nibble];
    }
    return hex;
}

} // namespace ropuf
