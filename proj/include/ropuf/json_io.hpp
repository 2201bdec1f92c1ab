#pragma once

#include <nlohmann/json_fwd.hpp>

#include <string>

#include "ropuf/area_model.hpp"
#include "ropuf/metrics.hpp"
#include "ropuf/temp_aware.hpp"

namespace ropuf {

/// Chip files: {chip_id, seed, topology_ref, devices: [[{d_base_ps, kappa_per_c}]]}.
/// Round-trips are value-exact well past 15 significant digits.
nlohmann::json chip_to_json(const ChipInstance &chip);
ChipInstance chip_from_json(const nlohmann::json &j);
void save_chip(const ChipInstance &chip, const std::string &path);
ChipInstance load_chip(const std::string &path);

nlohmann::json uniqueness_to_json(const UniquenessReport &report);
nlohmann::json reliability_to_json(const ReliabilityReport &report);

nlohmann::json delta_sweep_to_json(const DeltaSweep &sweep);
std::string delta_sweep_to_csv(const DeltaSweep &sweep);

nlohmann::json config_table_to_json(const ConfigTable &table);
ConfigTable config_table_from_json(const nlohmann::json &j, const PufTopology &topology);

nlohmann::json area_report_to_json(const AreaReport &report);
std::string area_report_to_text(const AreaReport &report);
std::string area_sweep_to_csv(const std::vector<AreaReport> &rows);

/// CSV rows for response records: chip_id, challenge, temperature_c, bit, unstable.
std::string response_csv_header();
std::string response_csv_row(const std::string &chip_id, const Challenge &challenge,
                             double temperature_c, const Response &response);

} // namespace ropuf
