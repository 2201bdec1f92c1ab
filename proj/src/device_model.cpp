#include "ropuf/device_model.hpp"

#include <cmath>
#include <random>

#include "ropuf/puf_core.hpp"
#include "ropuf/rng.hpp"

namespace ropuf {

double TechnologyParams::scaling_k() const
{
    return std::pow(v_nominal - v_th0, alpha) / v_nominal;
}

double TechnologyParams::v_th(double temperature_c) const
{
    return v_th0 + k_vth_temp * (temperature_c - t_ref);
}

void TechnologyParams::validate() const
{
    if (!(v_nominal > v_th0))
        throw DomainError("v_nominal must exceed v_th0");
    if (!(v_th0 > 0.0))
        throw DomainError("v_th0 must be positive");
    if (!(alpha > 0.0))
        throw DomainError("alpha must be positive");
    if (!(d_inv_nominal > 0.0))
        throw DomainError("d_inv_nominal must be positive");
}

void VariationModel::validate() const
{
    if (sigma_inter < 0.0 || sigma_intra < 0.0 || sigma_kappa < 0.0 || sigma_jitter < 0.0)
        throw DomainError("variation sigmas must be non-negative");
}

double alpha_law_delay(double d_base, double v, double temperature_c, const TechnologyParams &tech,
                       double kappa)
{
    if (!(d_base > 0.0))
        throw DomainError("path delay must be positive");
    double vth = tech.v_th(temperature_c);
    if (!(v > vth))
        throw VoltageBelowThreshold(v, vth);

    // Written as (v/v_nominal) * ((v_nominal - v_th0)/(v - v_th(T)))^alpha so
    // the nominal operating point evaluates to d_base exactly.
    double scale = (v / tech.v_nominal) * std::pow((tech.v_nominal - tech.v_th0) / (v - vth), tech.alpha);
    double temp_term = 1.0 + kappa * (temperature_c - tech.t_ref);
    if (!(temp_term > 0.0))
        throw DomainError("temperature coefficient drives the delay non-positive");
    return d_base * temp_term * scale;
}

double voltage_scale_factor(double v_from, double v_to, double temperature_c,
                            const TechnologyParams &tech)
{
    return alpha_law_delay(1.0, v_to, temperature_c, tech, 0.0) /
           alpha_law_delay(1.0, v_from, temperature_c, tech, 0.0);
}

ChipInstance sample_chip(const TechnologyParams &tech, const VariationModel &var,
                         const PufTopology &topology, std::uint64_t seed)
{
    tech.validate();
    var.validate();
    topology.validate();

    auto rng = make_engine(seed);
    std::normal_distribution<double> inter(1.0, var.sigma_inter);
    std::normal_distribution<double> intra(1.0, var.sigma_intra);
    std::normal_distribution<double> kappa_dist(var.kappa_mean, var.sigma_kappa);

    double chip_shift = inter(rng);
    while (!(chip_shift > 0.0))
        chip_shift = inter(rng);

    ChipInstance chip;
    chip.chip_id = "chip-" + std::to_string(seed);
    chip.seed = seed;
    chip.topology_ref = topology.ref();
    chip.devices.resize(static_cast<std::size_t>(topology.r_oscillators));
    for (auto &ro : chip.devices) {
        ro.resize(static_cast<std::size_t>(topology.inverters_per_ro));
        for (auto &device : ro) {
            double d = tech.d_inv_nominal * chip_shift * intra(rng);
            while (!(d > 0.0))
                d = tech.d_inv_nominal * chip_shift * intra(rng);
            device.d_base = d;
            device.kappa = kappa_dist(rng);
        }
    }
    return chip;
}

} // namespace ropuf
