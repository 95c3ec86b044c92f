#pragma once

#include <stdexcept>
#include <string>

namespace wsnsim {

/// First-order radio constants. Defaults are the usual mote-scale values:
/// 50 nJ/bit electronics, 100 pJ/bit/m^2 amplifier.
struct EnergyParams {
    double elec_per_bit = 50e-9;
    double amp_per_bit_per_m2 = 100e-12;
    double data_bits = 2000;
    double control_bits = 100;
    double initial_battery = 0.5;

    void validate() const {
        if (!(elec_per_bit > 0) || !(amp_per_bit_per_m2 > 0) || !(data_bits > 0) || !(control_bits > 0) ||
            !(initial_battery > 0))
            throw std::invalid_argument("energy parameters must all be positive");
        if (control_bits > data_bits) throw std::invalid_argument("control_bits must not exceed data_bits");
    }
};

inline double tx_cost(double bits, double d, const EnergyParams& p) noexcept {
    return bits * p.elec_per_bit + bits * p.amp_per_bit_per_m2 * d * d;
}

inline double rx_cost(double bits, const EnergyParams& p) noexcept { return bits * p.elec_per_bit; }

enum class DrainOutcome { Ok, Died };

struct Battery {
    double remaining = 0.0;
    double initial = 0.0;

    static Battery full(double joules) { return {joules, joules}; }

    double power_fraction() const noexcept { return initial > 0 ? remaining / initial : 0.0; }
    bool empty() const noexcept { return remaining <= 0.0; }
};

struct DrainResult {
    Battery battery;
    DrainOutcome outcome;
    double charged;   // energy actually spent on the action
    double stranded;  // energy left in the cell when an unaffordable action killed it
};

/// An action costing exactly what is left still completes; anything more
/// empties the battery without completing.
inline DrainResult drain(Battery b, double cost) {
    if (cost < 0) throw std::invalid_argument("negative energy cost");
    if (cost <= b.remaining) {
        b.remaining -= cost;
        return {b, DrainOutcome::Ok, cost, 0.0};
    }
    const double left = b.remaining;
    b.remaining = 0.0;
    return {b, DrainOutcome::Died, 0.0, left};
}

} // namespace wsnsim
