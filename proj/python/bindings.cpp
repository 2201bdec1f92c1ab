#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "ropuf/area_model.hpp"
#include "ropuf/json_io.hpp"
#include "ropuf/metrics.hpp"
#include "ropuf/rng.hpp"
#include "ropuf/run_config.hpp"
#include "ropuf/temp_aware.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace ropuf;

namespace {

py::object big_to_int(const BigCount &value)
{
    return py::reinterpret_steal<py::object>(PyLong_FromString(value.str().c_str(), nullptr, 10));
}

} // namespace

PYBIND11_MODULE(ropuf, m)
{
    m.doc() = "Multi-voltage ring-oscillator PUF simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    py::class_<TechnologyParams>(m, "TechnologyParams")
        .def(py::init<>())
        .def_readwrite("v_nominal", &TechnologyParams::v_nominal)
        .def_readwrite("v_th0", &TechnologyParams::v_th0)
        .def_readwrite("alpha", &TechnologyParams::alpha)
        .def_readwrite("d_inv_nominal", &TechnologyParams::d_inv_nominal)
        .def_readwrite("k_vth_temp", &TechnologyParams::k_vth_temp)
        .def_readwrite("t_ref", &TechnologyParams::t_ref)
        .def("scaling_k", &TechnologyParams::scaling_k)
        .def("v_th", &TechnologyParams::v_th, "temperature_c"_a);

    py::class_<VariationModel>(m, "VariationModel")
        .def(py::init<>())
        .def_readwrite("sigma_inter", &VariationModel::sigma_inter)
        .def_readwrite("sigma_intra", &VariationModel::sigma_intra)
        .def_readwrite("kappa_mean", &VariationModel::kappa_mean)
        .def_readwrite("sigma_kappa", &VariationModel::sigma_kappa)
        .def_readwrite("sigma_jitter", &VariationModel::sigma_jitter);

    py::class_<InverterDevice>(m, "InverterDevice")
        .def(py::init<>())
        .def_readwrite("d_base", &InverterDevice::d_base)
        .def_readwrite("kappa", &InverterDevice::kappa);

    py::class_<ChipInstance>(m, "ChipInstance")
        .def(py::init<>())
        .def_readwrite("chip_id", &ChipInstance::chip_id)
        .def_readwrite("seed", &ChipInstance::seed)
        .def_readwrite("topology_ref", &ChipInstance::topology_ref)
        .def_readwrite("devices", &ChipInstance::devices);

    py::class_<PufTopology>(m, "PufTopology")
        .def(py::init<>())
        .def_static("make", &PufTopology::make, "r"_a, "i"_a, "c"_a, "levels"_a,
                    "variation"_a = std::vector<double>{})
        .def_readwrite("r_oscillators", &PufTopology::r_oscillators)
        .def_readwrite("inverters_per_ro", &PufTopology::inverters_per_ro)
        .def_readwrite("c_columns", &PufTopology::c_columns)
        .def_readwrite("column_of_inverter", &PufTopology::column_of_inverter)
        .def_readwrite("voltage_levels", &PufTopology::voltage_levels)
        .def_readwrite("level_variation", &PufTopology::level_variation)
        .def("column_of", &PufTopology::column_of)
        .def("closest_level", &PufTopology::closest_level)
        .def("ref", &PufTopology::ref)
        .def("validate", &PufTopology::validate);

    py::class_<VoltageConfiguration>(m, "VoltageConfiguration")
        .def(py::init<>())
        .def(py::init([](std::vector<int> levels) {
                 VoltageConfiguration c;
                 c.level_index_per_column = std::move(levels);
                 return c;
             }),
             "levels"_a)
        .def_readwrite("level_index_per_column", &VoltageConfiguration::level_index_per_column)
        .def("__eq__", [](const VoltageConfiguration &a, const VoltageConfiguration &b) { return a == b; })
        .def("__repr__", [](const VoltageConfiguration &c) { return "VoltageConfiguration(" + format_config(c) + ")"; });

    py::class_<Challenge>(m, "Challenge")
        .def(py::init<>())
        .def(py::init([](int a, int b, VoltageConfiguration config) {
                 return Challenge{a, b, std::move(config)};
             }),
             "ro_a"_a, "ro_b"_a, "config"_a)
        .def_readwrite("ro_a", &Challenge::ro_a)
        .def_readwrite("ro_b", &Challenge::ro_b)
        .def_readwrite("config", &Challenge::config)
        .def("__repr__", [](const Challenge &c) { return "Challenge(" + format_challenge(c) + ")"; });

    py::class_<MeasurementSettings>(m, "MeasurementSettings")
        .def(py::init<>())
        .def_readwrite("compare_time", &MeasurementSettings::compare_time)
        .def_readwrite("counter_bits", &MeasurementSettings::counter_bits)
        .def_readwrite("jitter_sigma", &MeasurementSettings::jitter_sigma)
        .def_readwrite("temperature", &MeasurementSettings::temperature);

    py::class_<Response>(m, "Response")
        .def_readonly("bit", &Response::bit)
        .def_readonly("unstable", &Response::unstable)
        .def_readonly("count_a", &Response::count_a)
        .def_readonly("count_b", &Response::count_b);

    py::class_<PairDelta>(m, "PairDelta")
        .def_readonly("delay_a", &PairDelta::delay_a)
        .def_readonly("delay_b", &PairDelta::delay_b)
        .def_readonly("delta", &PairDelta::delta)
        .def_readonly("bit", &PairDelta::bit)
        .def_readonly("tie", &PairDelta::tie);

    py::class_<UniquenessReport>(m, "UniquenessReport")
        .def_readonly("k_chips", &UniquenessReport::k_chips)
        .def_readonly("n_challenges", &UniquenessReport::n_challenges)
        .def_readonly("uniqueness_percent", &UniquenessReport::uniqueness_percent)
        .def_readonly("pairwise_hd_percent", &UniquenessReport::pairwise_hd_percent);

    py::class_<ReliabilityReport>(m, "ReliabilityReport")
        .def_readonly("reliability_percent", &ReliabilityReport::reliability_percent)
        .def_readonly("reference_temperature_c", &ReliabilityReport::reference_temperature_c)
        .def_readonly("temperatures_c", &ReliabilityReport::temperatures_c)
        .def_readonly("flip_percent_per_temperature", &ReliabilityReport::flip_percent_per_temperature)
        .def_readonly("n_challenges", &ReliabilityReport::n_challenges)
        .def_readonly("repeats", &ReliabilityReport::repeats)
        .def_readonly("comparisons", &ReliabilityReport::comparisons)
        .def_readonly("excluded_ties", &ReliabilityReport::excluded_ties);

    py::class_<DeltaSweep>(m, "DeltaSweep")
        .def_readonly("ro_a", &DeltaSweep::ro_a)
        .def_readonly("ro_b", &DeltaSweep::ro_b)
        .def_readonly("temperature_c", &DeltaSweep::temperature_c)
        .def_readonly("entries", &DeltaSweep::entries)
        .def_readonly("negative_count", &DeltaSweep::negative_count)
        .def_readonly("positive_count", &DeltaSweep::positive_count)
        .def_readonly("zero_count", &DeltaSweep::zero_count);

    py::class_<StabilityProfile::Row>(m, "StabilityRow")
        .def_readonly("config", &StabilityProfile::Row::config)
        .def_readonly("bits", &StabilityProfile::Row::bits)
        .def_readonly("tie", &StabilityProfile::Row::tie);

    py::class_<StabilityProfile>(m, "StabilityProfile")
        .def_readonly("ro_a", &StabilityProfile::ro_a)
        .def_readonly("ro_b", &StabilityProfile::ro_b)
        .def_readonly("temperatures_c", &StabilityProfile::temperatures_c)
        .def_readonly("rows", &StabilityProfile::rows)
        .def_readonly("nominal_config", &StabilityProfile::nominal_config)
        .def_static("row_stable", &StabilityProfile::row_stable);

    py::class_<ConfigTable>(m, "ConfigTable")
        .def(py::init<>())
        .def_readwrite("topology_ref", &ConfigTable::topology_ref)
        .def_readwrite("entries", &ConfigTable::entries);

    py::class_<ConfigTableBuild>(m, "ConfigTableBuild")
        .def_readonly("table", &ConfigTableBuild::table)
        .def_readonly("unresolved", &ConfigTableBuild::unresolved);

    py::class_<AreaConstants>(m, "AreaConstants")
        .def(py::init<>())
        .def_readwrite("ge_inverter", &AreaConstants::ge_inverter)
        .def_readwrite("ge_counter_per_bit", &AreaConstants::ge_counter_per_bit)
        .def_readwrite("ge_comparator_per_bit", &AreaConstants::ge_comparator_per_bit)
        .def_readwrite("ge_mux_per_input", &AreaConstants::ge_mux_per_input)
        .def_readwrite("ge_switch", &AreaConstants::ge_switch)
        .def_readwrite("buffer_inverters_per_ro", &AreaConstants::buffer_inverters_per_ro)
        .def_readwrite("counter_bits", &AreaConstants::counter_bits);

    py::class_<SwitchOverhead>(m, "SwitchOverhead")
        .def_readonly("switch_ge", &SwitchOverhead::switch_ge)
        .def_readonly("overhead_percent", &SwitchOverhead::overhead_percent);

    py::class_<AreaReport>(m, "AreaReport")
        .def_readonly("r", &AreaReport::r)
        .def_readonly("i", &AreaReport::i)
        .def_readonly("c", &AreaReport::c)
        .def_readonly("l", &AreaReport::l)
        .def_readonly("multi_voltage", &AreaReport::multi_voltage)
        .def_readonly("base_ge", &AreaReport::base_ge)
        .def_readonly("switch_ge", &AreaReport::switch_ge)
        .def_readonly("total_ge", &AreaReport::total_ge)
        .def_readonly("overhead_percent", &AreaReport::overhead_percent)
        .def_property_readonly("max_output_bits",
                               [](const AreaReport &r) { return big_to_int(r.max_output_bits); })
        .def_readonly("bits_per_ge", &AreaReport::bits_per_ge);

    m.def("alpha_law_delay", &alpha_law_delay, "d_base"_a, "v"_a, "temperature_c"_a, "tech"_a,
          "kappa"_a = 0.0);
    m.def("voltage_scale_factor", &voltage_scale_factor, "v_from"_a, "v_to"_a, "temperature_c"_a,
          "tech"_a);
    m.def("sample_chip", &sample_chip, "tech"_a, "variation"_a, "topology"_a, "seed"_a);
    m.def("ro_delay", &ro_delay, "chip"_a, "ro"_a, "config"_a, "topology"_a, "tech"_a,
          "temperature_c"_a);
    m.def(
        "count_oscillations",
        [](double delay, const MeasurementSettings &settings, std::uint64_t seed) {
            auto rng = make_engine(seed);
            return count_oscillations(delay, settings, rng);
        },
        "delay"_a, "settings"_a, "seed"_a = 0);
    m.def("respond", &respond_seeded, "chip"_a, "challenge"_a, "topology"_a, "tech"_a, "settings"_a,
          "measurement_index"_a = 0);
    m.def("compare_pair", &compare_pair, "chip"_a, "ro_a"_a, "ro_b"_a, "config"_a, "topology"_a,
          "tech"_a, "temperature_c"_a);
    m.def("enumerate_configs", &enumerate_configs, "topology"_a);
    m.def("enumerate_challenges", &enumerate_challenges, "topology"_a);
    m.def("format_config", &format_config, "config"_a);
    m.def("format_challenge", &format_challenge, "challenge"_a);
    m.def("parse_config", &parse_config, "text"_a, "topology"_a);
    m.def("parse_challenge", &parse_challenge, "text"_a, "topology"_a);

    m.def("response_bits", &response_bits, "chip"_a, "challenges"_a, "topology"_a, "tech"_a,
          "settings"_a, "measurement_base"_a = 0);
    m.def("uniqueness_from_outputs", &uniqueness_from_outputs, "outputs"_a);
    m.def("uniqueness", &uniqueness, "chips"_a, "challenges"_a, "topology"_a, "tech"_a, "settings"_a,
          "threads"_a = 1);
    m.def("reliability", &reliability, "chip"_a, "challenges"_a, "topology"_a, "tech"_a,
          "settings"_a, "temp_sweep"_a, "repeats"_a, "threads"_a = 1);
    m.def(
        "challenge_space",
        [](const PufTopology &topology) { return big_to_int(challenge_space(topology)); },
        "topology"_a);
    m.def("valid_challenges", &valid_challenges, "chip"_a, "topology"_a, "tech"_a, "margin"_a,
          "temp_sweep"_a);
    m.def("delta_sweep", &delta_sweep, "chip"_a, "ro_a"_a, "ro_b"_a, "topology"_a, "tech"_a,
          "temperature_c"_a);

    m.def("default_temperature_grid", &default_temperature_grid);
    m.def("stability_profile", &stability_profile, "chip"_a, "ro_a"_a, "ro_b"_a, "topology"_a,
          "tech"_a, "temp_samples"_a);
    m.def("find_reliable_config", &find_reliable_config, "profile"_a);
    m.def("build_config_table", &build_config_table, "chip"_a, "topology"_a, "tech"_a,
          "temp_samples"_a, "threads"_a = 1);
    m.def("memory_bits", &memory_bits, "topology"_a);
    m.def("encode_table", &encode_table, "table"_a, "topology"_a);
    m.def("decode_table", &decode_table, "bits"_a, "topology"_a);
    m.def("bits_to_hex", &bits_to_hex, "bits"_a);

    m.def("base_area", &base_area, "topology"_a, "constants"_a, "has_muxes"_a = true);
    m.def("switch_overhead", &switch_overhead, "topology"_a, "constants"_a);
    m.def("bits_per_area", &bits_per_area, "topology"_a, "constants"_a, "multi_voltage"_a = true);
    m.def("standard_level_grid", &standard_level_grid, "l"_a);
    m.def("sweep_topology", &sweep_topology, "r"_a, "i"_a, "c"_a, "l"_a);

    m.def(
        "chip_to_json", [](const ChipInstance &chip) { return chip_to_json(chip).dump(2); },
        "chip"_a);
    m.def(
        "chip_from_json",
        [](const std::string &text) { return chip_from_json(nlohmann::json::parse(text)); },
        "text"_a);
    m.def("save_chip", &save_chip, "chip"_a, "path"_a);
    m.def("load_chip", &load_chip, "path"_a);
}
