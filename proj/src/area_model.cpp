#include "ropuf/area_model.hpp"

#include <algorithm>

namespace ropuf {

void AreaConstants::validate() const
{
    if (ge_inverter < 0.0 || ge_counter_per_bit < 0.0 || ge_comparator_per_bit < 0.0 ||
        ge_mux_per_input < 0.0 || ge_switch < 0.0)
        throw DomainError("gate-equivalent constants must be non-negative");
    if (buffer_inverters_per_ro < 0 || counter_bits < 0)
        throw DomainError("cell counts must be non-negative");
}

double base_area(const PufTopology &topology, const AreaConstants &constants, bool has_muxes)
{
    constants.validate();
    const double r = topology.r_oscillators;
    double area = r * topology.inverters_per_ro * constants.ge_inverter;
    area += r * constants.buffer_inverters_per_ro * constants.ge_inverter;
    area += 2.0 * constants.counter_bits * constants.ge_counter_per_bit;
    area += constants.counter_bits * constants.ge_comparator_per_bit;
    if (has_muxes && topology.r_oscillators > 2)
        area += 2.0 * r * constants.ge_mux_per_input;
    return area;
}

SwitchOverhead switch_overhead(const PufTopology &topology, const AreaConstants &constants)
{
    SwitchOverhead result;
    result.switch_ge = static_cast<double>(topology.level_count()) * topology.c_columns * constants.ge_switch;
    double base = base_area(topology, constants, /*has_muxes=*/true);
    result.overhead_percent = base > 0.0 ? 100.0 * result.switch_ge / base : 0.0;
    return result;
}

AreaReport bits_per_area(const PufTopology &topology, const AreaConstants &constants,
                         bool multi_voltage)
{
    AreaReport report;
    report.r = topology.r_oscillators;
    report.i = topology.inverters_per_ro;
    report.c = topology.c_columns;
    report.l = multi_voltage ? topology.level_count() : 1;
    report.multi_voltage = multi_voltage;
    report.constants = constants;

    report.base_ge = base_area(topology, constants, /*has_muxes=*/true);
    BigCount pairs = BigCount(topology.r_oscillators) * (topology.r_oscillators - 1) / 2;
    if (multi_voltage) {
        SwitchOverhead sw = switch_overhead(topology, constants);
        report.switch_ge = sw.switch_ge;
        report.overhead_percent = sw.overhead_percent;
        report.max_output_bits =
            pairs * boost::multiprecision::pow(BigCount(topology.level_count()),
                                               static_cast<unsigned>(topology.c_columns));
    } else {
        report.switch_ge = 0.0;
        report.overhead_percent = 0.0;
        report.max_output_bits = pairs;
    }
    report.total_ge = report.base_ge + report.switch_ge;
    report.bits_per_ge =
        report.total_ge > 0.0 ? report.max_output_bits.convert_to<double>() / report.total_ge : 0.0;
    return report;
}

std::vector<double> standard_level_grid(int l)
{
    if (l < 1)
        throw DomainError("level grid needs at least one level");
    // Alternately one step up, one step down from 1.2 V, in integer
    // hundredths so the values match their decimal literals exactly.
    std::vector<int> centivolts{120};
    int up = 0, down = 0;
    while (static_cast<int>(centivolts.size()) < l) {
        if (up <= down)
            centivolts.push_back(120 + 12 * ++up);
        else
            centivolts.push_back(120 - 12 * ++down);
    }
    std::sort(centivolts.begin(), centivolts.end());
    std::vector<double> levels;
    for (int cv : centivolts) {
        if (cv <= 0)
            throw DomainError("level grid too wide for positive supplies");
        levels.push_back(cv / 100.0);
    }
    return levels;
}

PufTopology sweep_topology(int r, int i, int c, int l)
{
    return PufTopology::make(r, i, c, standard_level_grid(l));
}

std::vector<AreaReport> sweep_bits_vs_ro(const AreaConstants &constants)
{
    std::vector<AreaReport> rows;
    for (int r = 2; r <= 30; ++r) {
        auto topology = sweep_topology(r, 11, 11, 3);
        rows.push_back(bits_per_area(topology, constants, /*multi_voltage=*/false));
        rows.push_back(bits_per_area(topology, constants, /*multi_voltage=*/true));
    }
    return rows;
}

std::vector<AreaReport> sweep_bits_vs_columns(const AreaConstants &constants)
{
    std::vector<AreaReport> rows;
    for (int c = 3; c <= 19; c += 2) {
        auto topology = sweep_topology(20, c, c, 3);
        rows.push_back(bits_per_area(topology, constants, /*multi_voltage=*/false));
        rows.push_back(bits_per_area(topology, constants, /*multi_voltage=*/true));
    }
    return rows;
}

std::vector<AreaReport> sweep_area_efficiency(const AreaConstants &constants)
{
    std::vector<AreaReport> rows;
    for (int r = 2; r <= 30; ++r)
        for (int c = 3; c <= 19; c += 2)
            rows.push_back(bits_per_area(sweep_topology(r, c, c, 3), constants, /*multi_voltage=*/true));
    return rows;
}

std::vector<AreaReport> sweep_switch_overhead(const AreaConstants &constants, int l)
{
    std::vector<AreaReport> rows;
    for (int r = 2; r <= 10; ++r)
        for (int c = 3; c <= 19; c += 2)
            rows.push_back(bits_per_area(sweep_topology(r, c, c, l), constants, /*multi_voltage=*/true));
    return rows;
}

} // namespace ropuf
