#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ropuf/errors.hpp"

namespace ropuf {

struct PufTopology;

/// Alpha-power-law constants of a process node plus the first-order
/// temperature coefficients of the delay model. Defaults are the 90 nm
/// ASIC calibration used throughout this project.
struct TechnologyParams {
    double v_nominal = 1.2;        ///< typical supply voltage [V]
    double v_th0 = 0.6;            ///< threshold voltage at t_ref [V]
    double alpha = 1.54;           ///< velocity saturation index
    double d_inv_nominal = 50e-12; ///< typical single-inverter delay at (v_nominal, t_ref) [s]
    double k_vth_temp = -0.7e-3;   ///< linear threshold-voltage drift [V/degC]
    double t_ref = 25.0;           ///< reference temperature [degC]

    /// Scaling factor K = (v_nominal - v_th0)^alpha / v_nominal.
    double scaling_k() const;

    /// Threshold voltage at the given temperature.
    double v_th(double temperature_c) const;

    void validate() const;
};

/// Statistical process-variation model: hierarchical Gaussian
/// (chip level x device level) plus per-measurement jitter.
struct VariationModel {
    double sigma_inter = 0.05;     ///< chip-level mean delay shift, std-dev relative to nominal
    double sigma_intra = 0.03;     ///< per-inverter delay deviation, relative
    double kappa_mean = 5e-4;      ///< mean linear temperature coefficient of base delay [1/degC]
    double sigma_kappa = 2e-5;     ///< per-inverter spread of that coefficient [1/degC]
    double sigma_jitter = 1e-3;    ///< per-measurement delay noise, relative

    void validate() const;
};

/// One manufactured inverter: its delay at the nominal operating point and
/// its temperature coefficient.
struct InverterDevice {
    double d_base = 0.0; ///< delay at (v_nominal, t_ref) [s]
    double kappa = 0.0;  ///< linear temperature coefficient of d_base [1/degC]
};

/// One virtual manufactured chip. Immutable after sampling; safe to share
/// across threads.
struct ChipInstance {
    std::string chip_id;
    std::uint64_t seed = 0;
    std::string topology_ref;
    std::vector<std::vector<InverterDevice>> devices; ///< [ro_index][inverter_index]
};

/// Delay of one combinational path at supply voltage v and the given
/// temperature:
///
///   d = d_base * (1 + kappa*(T - t_ref)) * K * v / (v - v_th(T))^alpha
///
/// At (v_nominal, t_ref) with kappa = 0 the result equals d_base exactly.
/// Throws VoltageBelowThreshold if v <= v_th(T).
double alpha_law_delay(double d_base, double v, double temperature_c, const TechnologyParams &tech,
                       double kappa = 0.0);

/// Multiplying a delay measured at v_from by this factor gives its delay at
/// v_to, both at the same temperature.
double voltage_scale_factor(double v_from, double v_to, double temperature_c,
                            const TechnologyParams &tech);

/// Samples one chip. Deterministic in (seed, topology, tech, var): the same
/// seed reproduces the same devices bit for bit. Non-positive delay draws
/// are resampled, never clamped.
ChipInstance sample_chip(const TechnologyParams &tech, const VariationModel &var,
                         const PufTopology &topology, std::uint64_t seed);

} // namespace ropuf
