#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ropuf/area_model.hpp"
#include "ropuf/device_model.hpp"
#include "ropuf/puf_core.hpp"

namespace ropuf {

enum class OutputFormat { Text, Json, Csv };

OutputFormat parse_output_format(const std::string &name);
std::string output_format_name(OutputFormat format);

/// Everything a run needs. Parsed from a sectioned key=value file where
/// physical quantities carry their unit in the key name (d_inv_nominal_ps,
/// compare_time_us, ...). Defaults describe a two-oscillator, 13-inverter,
/// 3-column PUF with supply levels {1.08, 1.2, 1.32} V on the 90 nm
/// constants.
struct RunConfig {
    TechnologyParams technology;
    VariationModel variation;
    PufTopology topology;
    MeasurementSettings measurement;
    AreaConstants area;
    std::vector<std::uint64_t> seeds{1};
    OutputFormat output_format = OutputFormat::Text;

    void validate() const;
};

RunConfig default_run_config();

/// Strict parser: unknown sections or keys, bad numbers and wrong list
/// lengths are ConfigErrors carrying file:line diagnostics.
RunConfig parse_run_config_text(const std::string &text, const std::string &source_name);
RunConfig load_run_config(const std::string &path);

/// Canonical text form of a config (parses back to the same value).
std::string run_config_to_text(const RunConfig &config);

} // namespace ropuf
