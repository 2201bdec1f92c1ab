#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "ropuf/puf_core.hpp"
#include "ropuf/rng.hpp"
#include "test_helpers.hpp"

using namespace ropuf;
using namespace ropuf::testing;

namespace {
const TechnologyParams kTech;

MeasurementSettings noise_free()
{
    MeasurementSettings s;
    s.jitter_sigma = 0.0;
    return s;
}
} // namespace

TEST_SUITE("topology")
{
    TEST_CASE("structural invariants")
    {
        CHECK_THROWS_AS(PufTopology::make(2, 4, 2, {1.2, 1.32}), DomainError); // even ring
        CHECK_THROWS_AS(PufTopology::make(2, 3, 4, {1.2, 1.32}), DomainError); // C > I
        CHECK_THROWS_AS(PufTopology::make(0, 3, 3, {1.2, 1.32}), DomainError);
        CHECK_THROWS_AS(PufTopology::make(2, 3, 3, {}), DomainError); // no levels
    }

    TEST_CASE("level spacing must exceed the half-sum of the ripples")
    {
        try {
            PufTopology::make(2, 3, 3, {1.2, 1.21}, {0.05, 0.05});
            FAIL("expected a spacing violation");
        } catch (const DomainError &e) {
            CHECK(std::string(e.what()).find("spacing") != std::string::npos);
        }
        // 0.12 V spacing with 0.05 V ripple is fine
        CHECK_NOTHROW(PufTopology::make(2, 3, 3, {1.08, 1.2, 1.32}, {0.05, 0.05, 0.05}));
        // equality is not enough: |1.5-1.25| = (0.25+0.25)/2 exactly
        CHECK_THROWS_AS(PufTopology::make(2, 3, 3, {1.25, 1.5}, {0.25, 0.25}), DomainError);
    }

    TEST_CASE("default column assignment is balanced")
    {
        auto topology = PufTopology::make(2, 13, 3, {1.08, 1.2, 1.32});
        auto sizes = topology.column_sizes();
        REQUIRE(sizes.size() == 3);
        CHECK(*std::max_element(sizes.begin(), sizes.end()) -
                  *std::min_element(sizes.begin(), sizes.end()) <=
              1);
        int total = 0;
        for (int s : sizes)
            total += s;
        CHECK(total == 13);
        // position j of every RO shares a column: the map is per position
        CHECK(topology.column_of(0) == 0);
        CHECK(topology.column_of(3) == 0);
        CHECK(topology.column_of(4) == 1);
    }

    TEST_CASE("closest level and ref string")
    {
        auto topology = PufTopology::make(2, 3, 3, {1.08, 1.2, 1.32});
        CHECK(topology.closest_level(1.2) == 1);
        CHECK(topology.closest_level(1.5) == 2);
        CHECK(topology.ref() == "r2-i3-c3-v1.08,1.2,1.32");
    }
}

TEST_SUITE("ro_delay")
{
    TEST_CASE("worked three-inverter example")
    {
        WorkedExample ex;
        double nominal_a = ro_delay(ex.chip, 0, uniform_config(ex.topology, 1), ex.topology, kTech, 25.0);
        double nominal_b = ro_delay(ex.chip, 1, uniform_config(ex.topology, 1), ex.topology, kTech, 25.0);
        REQUIRE(nominal_a == 600e-12);
        REQUIRE(nominal_b == 600e-12);

        // first column raised to 1.32 V
        auto raised = config_of({2, 1, 1});
        CHECK(std::abs(ro_delay(ex.chip, 0, raised, ex.topology, kTech, 25.0) / nominal_a - 0.94) < 0.005);
        CHECK(std::abs(ro_delay(ex.chip, 1, raised, ex.topology, kTech, 25.0) / nominal_b - 0.97) < 0.005);

        // every column raised
        auto all_raised = uniform_config(ex.topology, 2);
        CHECK(std::abs(ro_delay(ex.chip, 0, all_raised, ex.topology, kTech, 25.0) / nominal_a - 0.83) < 0.005);
        CHECK(std::abs(ro_delay(ex.chip, 1, all_raised, ex.topology, kTech, 25.0) / nominal_b - 0.83) < 0.005);
    }

    TEST_CASE("nominal configuration returns the exact base-delay sum")
    {
        auto topology = PufTopology::make(2, 13, 3, {1.08, 1.2, 1.32});
        ChipInstance chip = sample_chip(kTech, VariationModel{}, topology, 11);
        double expected = 0.0;
        for (const auto &device : chip.devices[0])
            expected += device.d_base;
        CHECK(ro_delay(chip, 0, uniform_config(topology, 1), topology, kTech, 25.0) == expected);
    }

    TEST_CASE("additivity over inverters")
    {
        auto topology = PufTopology::make(2, 13, 3, {1.08, 1.2, 1.32});
        ChipInstance chip = sample_chip(kTech, VariationModel{}, topology, 5);
        auto config = config_of({2, 0, 1});
        for (int ro = 0; ro < 2; ++ro) {
            double manual = 0.0;
            for (int j = 0; j < topology.inverters_per_ro; ++j) {
                const auto &device = chip.devices[static_cast<std::size_t>(ro)][static_cast<std::size_t>(j)];
                double v = topology.voltage_levels[static_cast<std::size_t>(
                    config.level_index_per_column[static_cast<std::size_t>(topology.column_of(j))])];
                manual += alpha_law_delay(device.d_base, v, 85.0, kTech, device.kappa);
            }
            double composed = ro_delay(chip, ro, config, topology, kTech, 85.0);
            CHECK(std::abs(composed - manual) <= 1e-12 * manual);
        }
    }

    TEST_CASE("index and configuration validation")
    {
        WorkedExample ex;
        CHECK_THROWS_AS(ro_delay(ex.chip, 2, uniform_config(ex.topology, 0), ex.topology, kTech, 25.0),
                        DomainError);
        CHECK_THROWS_AS(ro_delay(ex.chip, 0, config_of({0, 1}), ex.topology, kTech, 25.0), DomainError);
        CHECK_THROWS_AS(ro_delay(ex.chip, 0, config_of({0, 1, 3}), ex.topology, kTech, 25.0), DomainError);
    }
}

TEST_SUITE("count_oscillations")
{
    TEST_CASE("exact division")
    {
        MeasurementSettings s = noise_free();
        s.compare_time = 1e-6;
        s.counter_bits = 16;
        auto rng = make_engine(0);
        CHECK(count_oscillations(2e-9, s, rng) == 500);
    }

    TEST_CASE("saturates at the counter maximum")
    {
        MeasurementSettings s = noise_free();
        s.compare_time = 1e-3;
        s.counter_bits = 8;
        auto rng = make_engine(0);
        CHECK(count_oscillations(1e-9, s, rng) == 255);
    }

    TEST_CASE("jitter spreads counts around the exact value")
    {
        MeasurementSettings s;
        s.compare_time = 1e-6;
        s.counter_bits = 16;
        s.jitter_sigma = 1e-3;
        auto rng = make_engine(20260810);
        std::map<std::uint64_t, int> histogram;
        for (int i = 0; i < 10000; ++i)
            ++histogram[count_oscillations(2e-9, s, rng)];
        for (const auto &[count, _] : histogram) {
            CHECK(count >= 498);
            CHECK(count <= 502);
        }
        auto mode = std::max_element(histogram.begin(), histogram.end(),
                                     [](const auto &a, const auto &b) { return a.second < b.second; });
        CHECK(mode->first == 500);
    }
}

TEST_SUITE("respond")
{
    TEST_CASE("bit follows the faster oscillator and flips under a raised column")
    {
        // RO A marginally slower overall (612 ps vs 600 ps), but its delay is
        // front-loaded: raising column 0 speeds A up more than B.
        auto topology = PufTopology::make(2, 3, 3, {1.08, 1.2, 1.32});
        ChipInstance chip = make_chip(topology, {{204e-12, 306e-12, 102e-12}, {100e-12, 100e-12, 400e-12}});
        MeasurementSettings s = noise_free();
        auto rng = make_engine(0);

        Challenge nominal{0, 1, uniform_config(topology, 1)};
        Response at_nominal = respond(chip, nominal, topology, kTech, s, rng);
        CHECK(at_nominal.bit == 1); // A slower
        CHECK_FALSE(at_nominal.unstable);

        Challenge raised{0, 1, config_of({2, 1, 1})};
        Response at_raised = respond(chip, raised, topology, kTech, s, rng);
        CHECK(at_raised.bit == 0); // ordering crossed
        CHECK_FALSE(at_raised.unstable);
    }

    TEST_CASE("swapping the oscillators complements the bit")
    {
        auto topology = PufTopology::make(4, 13, 3, {1.08, 1.2, 1.32});
        MeasurementSettings s = noise_free();
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            ChipInstance chip = sample_chip(kTech, VariationModel{}, topology, seed);
            auto rng = make_engine(0);
            Challenge fwd{1, 3, config_of({0, 2, 1})};
            Challenge rev{3, 1, config_of({0, 2, 1})}; // ordering relaxed on purpose
            Response a = respond(chip, fwd, topology, kTech, s, rng);
            Response b = respond(chip, rev, topology, kTech, s, rng);
            if (!a.unstable)
                CHECK(a.bit == 1 - b.bit);
        }
    }

    TEST_CASE("identical oscillators tie and are flagged unstable")
    {
        auto topology = PufTopology::make(2, 3, 3, {1.08, 1.2, 1.32});
        ChipInstance chip = make_chip(topology, {{200e-12, 300e-12, 100e-12}, {200e-12, 300e-12, 100e-12}});
        Response r = respond_seeded(chip, Challenge{0, 1, uniform_config(topology, 1)}, topology,
                                    kTech, noise_free());
        CHECK(r.bit == 1);
        CHECK(r.unstable);
        CHECK(r.count_a == r.count_b);
    }

    TEST_CASE("deterministic for a fixed seed")
    {
        auto topology = PufTopology::make(2, 13, 3, {1.08, 1.2, 1.32});
        ChipInstance chip = sample_chip(kTech, VariationModel{}, topology, 9);
        MeasurementSettings s; // default jitter enabled
        Challenge challenge{0, 1, config_of({1, 0, 2})};
        Response a = respond_seeded(chip, challenge, topology, kTech, s, 17);
        Response b = respond_seeded(chip, challenge, topology, kTech, s, 17);
        CHECK(a.bit == b.bit);
        CHECK(a.count_a == b.count_a);
        CHECK(a.count_b == b.count_b);
    }

    TEST_CASE("a uniform supply level never changes the bit")
    {
        // All inverters share the scale factor, so the comparison is the
        // same at every level; holds at any temperature when the devices
        // share one temperature coefficient.
        VariationModel var;
        var.sigma_kappa = 0.0;
        auto topology = PufTopology::make(2, 5, 5, {1.08, 1.2, 1.32});
        MeasurementSettings s = noise_free();
        for (std::uint64_t seed = 1; seed <= 30; ++seed) {
            ChipInstance chip = sample_chip(kTech, var, topology, seed);
            for (double temperature : {25.0, 85.0}) {
                s.temperature = temperature;
                int reference = -1;
                for (int level = 0; level < topology.level_count(); ++level) {
                    Challenge challenge{0, 1, uniform_config(topology, level)};
                    Response r = respond_seeded(chip, challenge, topology, kTech, s);
                    if (reference < 0)
                        reference = r.bit;
                    else
                        CHECK(r.bit == reference);
                }
            }
        }
    }
}

TEST_SUITE("configs")
{
    TEST_CASE("enumeration is lexicographic, complete and duplicate-free")
    {
        auto topology = PufTopology::make(2, 3, 3, {1.08, 1.2, 1.32});
        auto configs = enumerate_configs(topology);
        REQUIRE(configs.size() == 27);
        CHECK(configs.front() == config_of({0, 0, 0}));
        CHECK(configs[1] == config_of({0, 0, 1}));
        CHECK(configs.back() == config_of({2, 2, 2}));
        CHECK(std::is_sorted(configs.begin(), configs.end()));
        std::set<std::vector<int>> unique;
        for (const auto &c : configs)
            unique.insert(c.level_index_per_column);
        CHECK(unique.size() == 27);

        auto two_levels = PufTopology::make(2, 13, 3, {1.2, 1.32});
        CHECK(enumerate_configs(two_levels).size() == 8);

        auto single = PufTopology::make(2, 3, 2, {1.2});
        auto only = enumerate_configs(single);
        REQUIRE(only.size() == 1);
        CHECK(only.front() == config_of({0, 0}));
    }

    TEST_CASE("challenge enumeration covers every pair")
    {
        auto topology = PufTopology::make(4, 3, 3, {1.2, 1.32});
        auto challenges = enumerate_challenges(topology);
        CHECK(challenges.size() == 6 * 8);
        for (const auto &c : challenges)
            CHECK(c.ro_a < c.ro_b);
    }

    TEST_CASE("text round trip")
    {
        auto topology = PufTopology::make(4, 3, 3, {1.08, 1.2, 1.32});
        Challenge challenge = parse_challenge("0-3:102", topology);
        CHECK(challenge.ro_a == 0);
        CHECK(challenge.ro_b == 3);
        CHECK(challenge.config == config_of({1, 0, 2}));
        CHECK(format_challenge(challenge) == "0-3:102");
    }

    TEST_CASE("malformed and out-of-range challenge strings")
    {
        auto topology = PufTopology::make(2, 13, 3, {1.2, 1.32});
        CHECK_THROWS_AS(parse_challenge("1-0:000", topology), DomainError);  // ordering
        CHECK_THROWS_AS(parse_challenge("0-1:020", topology), DomainError);  // level out of range
        CHECK_THROWS_AS(parse_challenge("0-5:000", topology), DomainError);  // RO out of range
        CHECK_THROWS_AS(parse_challenge("0-1:00", topology), DomainError);   // wrong column count
        CHECK_THROWS_AS(parse_challenge("garbage", topology), ConfigError);
        CHECK_THROWS_AS(parse_challenge("0-1", topology), ConfigError);
        CHECK_THROWS_AS(parse_challenge("0-x:000", topology), ConfigError);
        CHECK_THROWS_AS(parse_challenge("0-1:0a0", topology), ConfigError);
    }
}
