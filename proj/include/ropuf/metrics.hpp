#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

#include "ropuf/puf_core.hpp"

namespace ropuf {

using BigCount = boost::multiprecision::cpp_int;

/// Inter-chip uniqueness: mean pairwise Hamming distance between the
/// response vectors of k chips, in percent. Ideal value 50.
struct UniquenessReport {
    int k_chips = 0;
    std::size_t n_challenges = 0;
    double uniqueness_percent = 0.0;
    std::vector<std::vector<double>> pairwise_hd_percent; ///< k x k, symmetric, zero diagonal
};

/// Intra-chip reliability across a temperature sweep, relative to the
/// response at the reference temperature (the sweep element closest to
/// 25 degC). Counter ties carry no comparison information and are excluded
/// from the flip accounting.
struct ReliabilityReport {
    double reliability_percent = 100.0;
    double reference_temperature_c = 25.0;
    std::vector<double> temperatures_c;
    std::vector<double> flip_percent_per_temperature;
    std::size_t n_challenges = 0;
    int repeats = 0;
    std::uint64_t comparisons = 0;
    std::uint64_t excluded_ties = 0;
};

/// Noise-free delay difference of one RO pair over every configuration.
struct DeltaSweep {
    int ro_a = 0;
    int ro_b = 1;
    double temperature_c = 25.0;
    std::vector<std::pair<VoltageConfiguration, double>> entries; ///< (config, delay_a - delay_b [s])
    int negative_count = 0; ///< configurations where RO a is faster
    int positive_count = 0;
    int zero_count = 0;
};

/// Response bits of one chip for a challenge list, in order. Jitter comes
/// from settings; measurement_base offsets the derived noise streams.
std::vector<int> response_bits(const ChipInstance &chip, const std::vector<Challenge> &challenges,
                               const PufTopology &topology, const TechnologyParams &tech,
                               const MeasurementSettings &settings,
                               std::uint64_t measurement_base = 0);

/// Uniqueness of pre-computed response vectors (all the same length).
UniquenessReport uniqueness_from_outputs(const std::vector<std::vector<int>> &outputs);

/// U = 2/(k(k-1)) * sum_{i<j} HD(O_i, O_j)/n * 100%, with every chip
/// answering the same challenge list. Chips must share the topology.
UniquenessReport uniqueness(const std::vector<ChipInstance> &chips,
                            const std::vector<Challenge> &challenges, const PufTopology &topology,
                            const TechnologyParams &tech, const MeasurementSettings &settings,
                            int threads = 1);

/// 100% minus the mean bit-flip rate against the reference-temperature
/// response, averaged over challenges, sweep temperatures and repeats.
ReliabilityReport reliability(const ChipInstance &chip, const std::vector<Challenge> &challenges,
                              const PufTopology &topology, const TechnologyParams &tech,
                              const MeasurementSettings &settings,
                              const std::vector<double> &temp_sweep, int repeats, int threads = 1);

/// Maximum number of challenge/response pairs: R(R-1)/2 * L^C, exact.
BigCount challenge_space(const PufTopology &topology);

/// Challenges whose noise-free relative delay gap exceeds `margin` at every
/// sweep temperature and whose bit never changes across the sweep.
std::vector<Challenge> valid_challenges(const ChipInstance &chip, const PufTopology &topology,
                                        const TechnologyParams &tech, double margin,
                                        const std::vector<double> &temp_sweep);

/// delay_a - delay_b for one pair over all L^C configurations, noise-free.
DeltaSweep delta_sweep(const ChipInstance &chip, int ro_a, int ro_b, const PufTopology &topology,
                       const TechnologyParams &tech, double temperature_c);

} // namespace ropuf
