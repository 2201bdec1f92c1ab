#pragma once

#include <vector>

#include "ropuf/metrics.hpp"
#include "ropuf/puf_core.hpp"

namespace ropuf {

/// Gate-equivalent cost of each building block. The switch figure is the
/// load-bearing constant; the rest calibrate the base-cell accounting and
/// are printed alongside every report.
struct AreaConstants {
    double ge_inverter = 0.75;
    double ge_counter_per_bit = 2.0;
    double ge_comparator_per_bit = 0.75;
    double ge_mux_per_input = 0.5;
    double ge_switch = 0.5;          ///< one PMOS supply switch
    int buffer_inverters_per_ro = 2; ///< output buffer (two inverters in series)
    int counter_bits = 8;            ///< counter width assumed by the area model

    void validate() const;
};

struct AreaReport {
    int r = 0, i = 0, c = 0, l = 0;
    bool multi_voltage = true;
    double base_ge = 0.0;
    double switch_ge = 0.0;
    double total_ge = 0.0;
    double overhead_percent = 0.0;
    BigCount max_output_bits;
    double bits_per_ge = 0.0;
    AreaConstants constants;
};

struct SwitchOverhead {
    double switch_ge = 0.0;
    double overhead_percent = 0.0;
};

/// Base cells of an RO-PUF without supply switches: inverters, output
/// buffers, two counters, one comparator, and (for R > 2, when present)
/// the two R-input multiplexers.
double base_area(const PufTopology &topology, const AreaConstants &constants, bool has_muxes);

/// One switch per level per global column: L*C*ge_switch, and its share of
/// the base area in percent.
SwitchOverhead switch_overhead(const PufTopology &topology, const AreaConstants &constants);

/// Full report. Multi-voltage PUFs produce R(R-1)/2 * L^C bits and carry
/// the switch overhead; the single-supply variant produces R(R-1)/2 bits
/// with no switches.
AreaReport bits_per_area(const PufTopology &topology, const AreaConstants &constants,
                         bool multi_voltage = true);

/// Supply levels centered on 1.2 V spaced 0.12 V apart, e.g.
/// l=3 -> {1.08, 1.2, 1.32}. Used by the sweep grids.
std::vector<double> standard_level_grid(int l);

/// Area-model topology with one inverter per column and the standard grid.
PufTopology sweep_topology(int r, int i, int c, int l);

/// Sweep grids (one inverter per column unless stated otherwise).
/// bits-vs-ro:       I = C = 11; single-supply and L = 3 variants, R in 2..30.
/// bits-vs-columns:  R = 20; single-supply and L = 3 variants, I = C odd in 3..19.
/// area-efficiency:  L = 3, R in 2..30, I = C odd in 3..19.
/// switch-overhead:  R in 2..10, I = C odd in 3..19 at the given L.
std::vector<AreaReport> sweep_bits_vs_ro(const AreaConstants &constants);
std::vector<AreaReport> sweep_bits_vs_columns(const AreaConstants &constants);
std::vector<AreaReport> sweep_area_efficiency(const AreaConstants &constants);
std::vector<AreaReport> sweep_switch_overhead(const AreaConstants &constants, int l = 3);

} // namespace ropuf
