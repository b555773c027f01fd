#pragma once

#include <optional>

#include "liouville/types.hpp"

namespace liouville::models {

/// Driven two-level atom; all rates in units of gamma's reference.
struct TwoLevelParams {
    double rabi = 5.0;
    double detuning = 0.0;
    double gamma = 1.0;
    double dephasing = 0.0;
};

/// Raman Lambda system: two ground states coupled to one excited state.
struct ThreeLevelParams {
    double rabi_a = 1.0;
    double rabi_b = 1.0;
    double common_detuning = 0.0;    // delta = (delta_a + delta_b) / 2
    double difference_detuning = 0.0;  // Delta = delta_a - delta_b
    double gamma = 1.0;
};

/// 15-level 87Rb ladder (5S1/2 F=1, 5P1/2 F'=1,2, 6S1/2 F''=1, 5S1/2 F=2)
/// driven by a circular pump and a linear probe. Rates in units of gamma_a;
/// lengths in meters.
struct WaveplateParams {
    double omega_p = 5.0;            // pump Rabi frequency
    double omega_s = 0.1;            // probe Rabi frequency (weakest leg)
    double delta_p = 141.4;          // pump detuning
    double delta_s = 0.0;            // probe detuning (the swept variable)
    double hyperfine = 141.4;        // F'=1 to F'=2 splitting
    double gamma_a = 1.0;            // 5P1/2 decay (the unit)
    double gamma_b = 3.45 / 5.75;    // 6S1/2 decay
    double gamma_g = 0.1 / 5.75;     // ground-state exchange rate
    double branching = 0.5;          // fraction of gamma_b decaying in-ladder
    double cell_length = 0.15;       // m
    double atom_density = 1e16;      // 1/m^3
    double wavelength = 1.323e-6;    // probe wavelength, m
    // Decay rate entering the beta scale; tracks gamma_b unless overridden.
    std::optional<double> beta_gamma;
};

/// Phase shift and transmission of the two circular probe components.
struct PolarizationObservables {
    double phi_plus = 0.0;     // radians
    double phi_minus = 0.0;
    double trans_plus = 1.0;   // transmission factors (1 = lossless)
    double trans_minus = 1.0;
    double beta = 0.0;         // common dimensionless scale
};

SystemSpec two_level(const TwoLevelParams& params);
SystemSpec three_level_lambda(const ThreeLevelParams& params);
SystemSpec rb87_waveplate(const WaveplateParams& params);

/// Probe phase/attenuation from the steady state of the 15-level system:
/// sums the sigma+ and sigma- probe coherences weighted by their Rabi
/// ratios to the weakest leg.
PolarizationObservables polarization_observables(const DensityMatrix& rho,
                                                 const WaveplateParams& params);

/// Output Jones vector for an x-polarized input probe.
Eigen::Vector2cd jones_output(const PolarizationObservables& obs);

/// Re(rho_kk) for a 1-based level index.
double excited_population(const DensityMatrix& rho, int level);

}  // namespace liouville::models
