#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ropuf/puf_core.hpp"

namespace ropuf {

/// Noise-free response of one RO pair for every configuration at every
/// sampled temperature. A configuration is stable iff its row is constant
/// and tie-free.
struct StabilityProfile {
    int ro_a = 0;
    int ro_b = 1;
    std::vector<double> temperatures_c;

    struct Row {
        VoltageConfiguration config;
        std::vector<int> bits; ///< one per temperature sample
        bool tie = false;      ///< exact delay equality occurred at some temperature
    };
    std::vector<Row> rows; ///< lexicographic configuration order, L^C rows

    VoltageConfiguration nominal_config; ///< every column at the level closest to v_nominal

    static bool row_stable(const Row &row);
};

/// Per-pair reliable voltage configurations, keyed by canonical (a, b).
struct ConfigTable {
    std::string topology_ref;
    std::map<std::pair<int, int>, VoltageConfiguration> entries;
};

struct ConfigTableBuild {
    ConfigTable table;
    std::vector<std::pair<int, int>> unresolved; ///< pairs with no stable configuration
};

/// Default temperature grid: -25..125 degC inclusive, step 10.
std::vector<double> default_temperature_grid();

/// Evaluates the noise-free bit of the pair for every (configuration,
/// temperature). Exact delay ties mark the row unstable.
StabilityProfile stability_profile(const ChipInstance &chip, int ro_a, int ro_b,
                                   const PufTopology &topology, const TechnologyParams &tech,
                                   const std::vector<double> &temp_samples);

/// The nominal configuration when it is stable, otherwise the first stable
/// configuration in lexicographic order; absent when none is stable.
std::optional<VoltageConfiguration> find_reliable_config(const StabilityProfile &profile);

/// Runs the profile search for every RO pair. Entries cover every pair with
/// at least one stable configuration; the rest are reported as unresolved.
ConfigTableBuild build_config_table(const ChipInstance &chip, const PufTopology &topology,
                                    const TechnologyParams &tech,
                                    const std::vector<double> &temp_samples, int threads = 1);

/// Size of the configuration memory: ceil(log2 L) * C * R(R-1)/2 bits.
std::uint64_t memory_bits(const PufTopology &topology);

/// Packs a complete table into a bit string: pairs in lexicographic order,
/// per-column level indices in ceil(log2 L) bits each, most significant bit
/// first. The string length equals memory_bits(topology).
std::string encode_table(const ConfigTable &table, const PufTopology &topology);

/// Inverse of encode_table. Rejects strings of the wrong length.
ConfigTable decode_table(const std::string &bits, const PufTopology &topology);

/// Hex dump of a bit string (zero-padded to whole bytes, big-endian per byte).
std::string bits_to_hex(const std::string &bits);

} // namespace ropuf
