#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ropuf/device_model.hpp"

namespace ropuf {

/// Geometry of a multi-voltage RO-PUF: R ring oscillators of I inverters
/// each, the inverter positions grouped into C global columns, and the L
/// selectable supply levels with their maximum ripple.
///
/// Columns are global: inverter position j of every RO belongs to the same
/// column and is powered by that column's selected supply.
struct PufTopology {
    int r_oscillators = 2;
    int inverters_per_ro = 13;             ///< must be odd
    int c_columns = 3;
    std::vector<int> column_of_inverter;   ///< size I; empty means position j -> column j % C
    std::vector<double> voltage_levels;    ///< Vdd_1..Vdd_L [V]
    std::vector<double> level_variation;   ///< max supply ripple per level [V]

    static PufTopology make(int r, int i, int c, std::vector<double> levels,
                            std::vector<double> variation = {});

    int level_count() const { return static_cast<int>(voltage_levels.size()); }
    int column_of(int inverter_index) const;
    std::vector<int> column_sizes() const;

    /// Index of the level closest to v (ties resolved toward the lower index).
    int closest_level(double v) const;

    /// Canonical identifier, e.g. "r2-i13-c3-v1.08,1.2,1.32".
    std::string ref() const;

    /// Checks structural invariants, including the pairwise level-spacing
    /// rule |Vdd_i - Vdd_j| > (VAR_i + VAR_j)/2.
    void validate() const;
};

/// One supply-level index per column.
struct VoltageConfiguration {
    std::vector<int> level_index_per_column;

    bool operator==(const VoltageConfiguration &) const = default;
    /// Lexicographic order on the index sequence.
    bool operator<(const VoltageConfiguration &o) const
    {
        return level_index_per_column < o.level_index_per_column;
    }
};

/// An RO pair plus a voltage configuration. Canonical challenges have
/// ro_a < ro_b so each unordered pair appears once.
struct Challenge {
    int ro_a = 0;
    int ro_b = 1;
    VoltageConfiguration config;
};

/// Counter/comparator measurement parameters.
struct MeasurementSettings {
    double compare_time = 10e-6; ///< comparison interval [s]
    int counter_bits = 16;       ///< counter width
    double jitter_sigma = 1e-3;  ///< per-measurement relative delay noise
    double temperature = 25.0;   ///< [degC]

    void validate() const;
};

/// Result of one challenge evaluation. `unstable` marks a counter tie,
/// where the comparison carries no information.
struct Response {
    int bit = 0;
    bool unstable = false;
    std::uint64_t count_a = 0;
    std::uint64_t count_b = 0;
};

/// Noise-free delay comparison of an RO pair under one configuration.
struct PairDelta {
    double delay_a = 0.0;
    double delay_b = 0.0;
    double delta = 0.0; ///< delay_a - delay_b [s]
    int bit = 0;        ///< 0 when RO a is faster, 1 otherwise
    bool tie = false;   ///< exact delay equality
};

void validate_config(const VoltageConfiguration &config, const PufTopology &topology);
void validate_challenge(const Challenge &challenge, const PufTopology &topology);

/// Total loop delay of one RO under a voltage configuration: the sum of the
/// alpha-law delays of its inverters, each at its column's supply level.
double ro_delay(const ChipInstance &chip, int ro, const VoltageConfiguration &config,
                const PufTopology &topology, const TechnologyParams &tech, double temperature_c);

/// Oscillation count accumulated over the comparison interval:
/// floor(compare_time / (delay * (1 + noise))), saturated at the counter
/// maximum 2^counter_bits - 1.
std::uint64_t count_oscillations(double delay, const MeasurementSettings &settings,
                                 std::mt19937_64 &rng);

/// Full measurement of one challenge: both counters run for the comparison
/// interval, then the comparator decides. Bit 0 means RO a was faster.
/// A counter tie yields bit 1 with the unstable flag set.
Response respond(const ChipInstance &chip, const Challenge &challenge, const PufTopology &topology,
                 const TechnologyParams &tech, const MeasurementSettings &settings,
                 std::mt19937_64 &rng);

/// respond() with a self-derived RNG stream: the noise seed is a hash of
/// (chip seed, challenge, measurement_index), so concurrent or reordered
/// evaluation produces identical results.
Response respond_seeded(const ChipInstance &chip, const Challenge &challenge,
                        const PufTopology &topology, const TechnologyParams &tech,
                        const MeasurementSettings &settings, std::uint64_t measurement_index = 0);

/// Noise-free pair comparison from raw delays (no counter quantization).
PairDelta compare_pair(const ChipInstance &chip, int ro_a, int ro_b,
                       const VoltageConfiguration &config, const PufTopology &topology,
                       const TechnologyParams &tech, double temperature_c);

/// All L^C configurations in lexicographic order of the index sequence.
std::vector<VoltageConfiguration> enumerate_configs(const PufTopology &topology);

/// All canonical challenges (every RO pair x every configuration), pairs in
/// lexicographic order, configurations in lexicographic order within a pair.
std::vector<Challenge> enumerate_challenges(const PufTopology &topology);

/// Stable 64-bit key of a challenge, used for derived noise seeds.
std::uint64_t challenge_key(const Challenge &challenge);

/// Text forms. Configurations print as one level digit per column ("102");
/// challenges as "a-b:v1v2...vC" (e.g. "0-3:102").
std::string format_config(const VoltageConfiguration &config);
std::string format_challenge(const Challenge &challenge);
VoltageConfiguration parse_config(const std::string &text, const PufTopology &topology);
Challenge parse_challenge(const std::string &text, const PufTopology &topology);

} // namespace ropuf
