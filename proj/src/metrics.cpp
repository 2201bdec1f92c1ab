#include "ropuf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "ropuf/parallel.hpp"

namespace ropuf {

namespace {

void check_same_topology(const std::vector<ChipInstance> &chips, const PufTopology &topology)
{
    const std::string expected = topology.ref();
    for (const auto &chip : chips)
        if (chip.topology_ref != expected)
            throw DomainError("chip " + chip.chip_id + " was sampled for topology \"" +
                              chip.topology_ref + "\", not \"" + expected + "\"");
}

} // namespace

std::vector<int> response_bits(const ChipInstance &chip, const std::vector<Challenge> &challenges,
                               const PufTopology &topology, const TechnologyParams &tech,
                               const MeasurementSettings &settings, std::uint64_t measurement_base)
{
    std::vector<int> bits(challenges.size());
    for (std::size_t i = 0; i < challenges.size(); ++i)
        bits[i] = respond_seeded(chip, challenges[i], topology, tech, settings, measurement_base).bit;
    return bits;
}

UniquenessReport uniqueness_from_outputs(const std::vector<std::vector<int>> &outputs)
{
    const int k = static_cast<int>(outputs.size());
    if (k < 2)
        throw DomainError("uniqueness needs at least two chips");
    const std::size_t n = outputs.front().size();
    if (n == 0)
        throw DomainError("uniqueness needs at least one challenge");
    for (const auto &o : outputs)
        if (o.size() != n)
            throw DomainError("all response vectors must have the same length");

    UniquenessReport report;
    report.k_chips = k;
    report.n_challenges = n;
    report.pairwise_hd_percent.assign(static_cast<std::size_t>(k),
                                      std::vector<double>(static_cast<std::size_t>(k), 0.0));
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            std::size_t hd = 0;
            for (std::size_t c = 0; c < n; ++c)
                hd += static_cast<std::size_t>(outputs[static_cast<std::size_t>(i)][c] !=
                                               outputs[static_cast<std::size_t>(j)][c]);
            double percent = 100.0 * static_cast<double>(hd) / static_cast<double>(n);
            report.pairwise_hd_percent[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = percent;
            report.pairwise_hd_percent[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = percent;
            sum += percent;
        }
    }
    report.uniqueness_percent = 2.0 * sum / (static_cast<double>(k) * static_cast<double>(k - 1));
    return report;
}

UniquenessReport uniqueness(const std::vector<ChipInstance> &chips,
                            const std::vector<Challenge> &challenges, const PufTopology &topology,
                            const TechnologyParams &tech, const MeasurementSettings &settings,
                            int threads)
{
    if (chips.size() < 2)
        throw DomainError("uniqueness needs at least two chips");
    check_same_topology(chips, topology);
    std::vector<std::vector<int>> outputs(chips.size());
    parallel_for(chips.size(), threads, [&](std::size_t i) {
        outputs[i] = response_bits(chips[i], challenges, topology, tech, settings);
    });
    return uniqueness_from_outputs(outputs);
}

ReliabilityReport reliability(const ChipInstance &chip, const std::vector<Challenge> &challenges,
                              const PufTopology &topology, const TechnologyParams &tech,
                              const MeasurementSettings &settings,
                              const std::vector<double> &temp_sweep, int repeats, int threads)
{
    if (temp_sweep.empty())
        throw DomainError("temperature sweep must not be empty");
    if (challenges.empty())
        throw DomainError("reliability needs at least one challenge");
    if (repeats < 1)
        throw DomainError("repeats must be at least 1");

    // Reference response: noise-free, at the sweep element closest to 25 degC.
    double reference = temp_sweep.front();
    for (double t : temp_sweep)
        if (std::abs(t - 25.0) < std::abs(reference - 25.0))
            reference = t;

    MeasurementSettings ref_settings = settings;
    ref_settings.jitter_sigma = 0.0;
    ref_settings.temperature = reference;
    std::vector<int> ref_bits(challenges.size());
    std::vector<bool> ref_tie(challenges.size());
    for (std::size_t ci = 0; ci < challenges.size(); ++ci) {
        Response r = respond_seeded(chip, challenges[ci], topology, tech, ref_settings);
        ref_bits[ci] = r.bit;
        ref_tie[ci] = r.unstable;
    }

    ReliabilityReport report;
    report.reference_temperature_c = reference;
    report.temperatures_c = temp_sweep;
    report.n_challenges = challenges.size();
    report.repeats = repeats;
    report.flip_percent_per_temperature.assign(temp_sweep.size(), 0.0);

    std::vector<std::uint64_t> flips(temp_sweep.size(), 0);
    std::vector<std::uint64_t> counted(temp_sweep.size(), 0);
    parallel_for(temp_sweep.size(), threads, [&](std::size_t ti) {
        MeasurementSettings sweep_settings = settings;
        sweep_settings.temperature = temp_sweep[ti];
        std::uint64_t local_flips = 0;
        std::uint64_t local_counted = 0;
        for (std::size_t ci = 0; ci < challenges.size(); ++ci) {
            if (ref_tie[ci])
                continue; // no reference bit to compare against
            for (int rep = 0; rep < repeats; ++rep) {
                std::uint64_t measurement = (static_cast<std::uint64_t>(ti) << 32) |
                                            static_cast<std::uint64_t>(rep + 1);
                Response r = respond_seeded(chip, challenges[ci], topology, tech, sweep_settings,
                                            measurement);
                if (r.unstable)
                    continue; // a tie carries no comparison
                ++local_counted;
                local_flips += static_cast<std::uint64_t>(r.bit != ref_bits[ci]);
            }
        }
        flips[ti] = local_flips;
        counted[ti] = local_counted;
    });

    std::uint64_t total_flips = 0;
    std::uint64_t total_counted = 0;
    const std::uint64_t per_temp = static_cast<std::uint64_t>(challenges.size()) *
                                   static_cast<std::uint64_t>(repeats);
    for (std::size_t ti = 0; ti < temp_sweep.size(); ++ti) {
        total_flips += flips[ti];
        total_counted += counted[ti];
        report.flip_percent_per_temperature[ti] =
            counted[ti] ? 100.0 * static_cast<double>(flips[ti]) / static_cast<double>(counted[ti])
                        : 0.0;
    }
    report.comparisons = total_counted;
    report.excluded_ties = per_temp * temp_sweep.size() - total_counted;
    report.reliability_percent =
        total_counted ? 100.0 * (1.0 - static_cast<double>(total_flips) / static_cast<double>(total_counted))
                      : 100.0;
    return report;
}

BigCount challenge_space(const PufTopology &topology)
{
    if (topology.r_oscillators < 2)
        throw DomainError("challenge space needs at least two ring oscillators");
    BigCount pairs = BigCount(topology.r_oscillators) * (topology.r_oscillators - 1) / 2;
    BigCount configs = boost::multiprecision::pow(BigCount(topology.level_count()),
                                                  static_cast<unsigned>(topology.c_columns));
    return pairs * configs;
}

std::vector<Challenge> valid_challenges(const ChipInstance &chip, const PufTopology &topology,
                                        const TechnologyParams &tech, double margin,
                                        const std::vector<double> &temp_sweep)
{
    if (margin < 0.0)
        throw DomainError("validity margin must be non-negative");
    if (temp_sweep.empty())
        throw DomainError("temperature sweep must not be empty");

    std::vector<Challenge> valid;
    for (const auto &challenge : enumerate_challenges(topology)) {
        bool ok = true;
        int first_bit = -1;
        for (double t : temp_sweep) {
            PairDelta d =
                compare_pair(chip, challenge.ro_a, challenge.ro_b, challenge.config, topology, tech, t);
            double gap = std::abs(d.delta) / std::min(d.delay_a, d.delay_b);
            if (d.tie || !(gap > margin)) {
                ok = false;
                break;
            }
            if (first_bit < 0)
                first_bit = d.bit;
            else if (d.bit != first_bit) {
                ok = false;
                break;
            }
        }
        if (ok)
            valid.push_back(challenge);
    }
    return valid;
}

DeltaSweep delta_sweep(const ChipInstance &chip, int ro_a, int ro_b, const PufTopology &topology,
                       const TechnologyParams &tech, double temperature_c)
{
    if (ro_a == ro_b)
        throw DomainError("delta sweep needs two distinct ring oscillators");
    DeltaSweep sweep;
    sweep.ro_a = ro_a;
    sweep.ro_b = ro_b;
    sweep.temperature_c = temperature_c;
    for (const auto &config : enumerate_configs(topology)) {
        PairDelta d = compare_pair(chip, ro_a, ro_b, config, topology, tech, temperature_c);
        sweep.entries.emplace_back(config, d.delta);
        if (d.delta < 0.0)
            ++sweep.negative_count;
        else if (d.delta > 0.0)
            ++sweep.positive_count;
        else
            ++sweep.zero_count;
    }
    return sweep;
}

} // namespace ropuf
