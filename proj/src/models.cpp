#include "liouville/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace liouville::models {

namespace {

const Complex kImag(0.0, 1.0);

SystemSpec empty_spec(int n) {
    SystemSpec spec;
    spec.n_levels = n;
    spec.hamiltonian = ComplexMatrix::Zero(n, n);
    spec.source = RealMatrix::Zero(n, n);
    spec.dephasing = RealMatrix::Zero(n, n);
    return spec;
}

}  // namespace

SystemSpec two_level(const TwoLevelParams& p) {
    if (!(p.gamma > 0)) throw std::invalid_argument("gamma must be positive");
    if (p.dephasing < 0) throw std::invalid_argument("dephasing must be >= 0");

    SystemSpec spec = empty_spec(2);
    spec.hamiltonian(0, 1) = p.rabi / 2.0;
    spec.hamiltonian(1, 0) = p.rabi / 2.0;
    spec.hamiltonian(1, 1) = -p.detuning - kImag * p.gamma / 2.0;
    spec.source(0, 1) = p.gamma;
    spec.dephasing(0, 1) = p.dephasing;
    spec.dephasing(1, 0) = p.dephasing;
    return spec;
}

SystemSpec three_level_lambda(const ThreeLevelParams& p) {
    if (!(p.gamma > 0)) throw std::invalid_argument("gamma must be positive");

    SystemSpec spec = empty_spec(3);
    spec.hamiltonian(0, 0) = p.difference_detuning / 2.0;
    spec.hamiltonian(1, 1) = -p.difference_detuning / 2.0;
    spec.hamiltonian(0, 2) = p.rabi_a / 2.0;
    spec.hamiltonian(2, 0) = p.rabi_a / 2.0;
    spec.hamiltonian(1, 2) = p.rabi_b / 2.0;
    spec.hamiltonian(2, 1) = p.rabi_b / 2.0;
    spec.hamiltonian(2, 2) = -p.common_detuning - kImag * p.gamma / 2.0;
    // The excited state feeds both ground states equally.
    spec.source(0, 2) = p.gamma / 2.0;
    spec.source(1, 2) = p.gamma / 2.0;
    return spec;
}

SystemSpec rb87_waveplate(const WaveplateParams& p) {
    if (p.branching < 0 || p.branching > 1)
        throw std::invalid_argument("branching must be in [0, 1]");
    if (p.gamma_a < 0 || p.gamma_b < 0 || p.gamma_g < 0)
        throw std::invalid_argument("decay rates must be >= 0");
    if (!(p.cell_length > 0) || !(p.atom_density > 0) || !(p.wavelength > 0))
        throw std::invalid_argument("cell length, density and wavelength must be > 0");

    const double ga = p.gamma_a;
    const double gb = p.gamma_b;
    const double gg = p.gamma_g;
    const double gbd = p.branching * gb;          // in-ladder decay to 5P1/2
    const double gbi = (1.0 - p.branching) * gb;  // effective decay to 5S1/2
    const double op = p.omega_p;
    const double os = p.omega_s;
    const double s3 = std::sqrt(3.0);
    const double s6 = std::sqrt(6.0);

    SystemSpec spec = empty_spec(15);
    ComplexMatrix& h = spec.hamiltonian;
    auto set_coupling = [&h](int i, int j, double value) {
        h(i - 1, j - 1) = value;
        h(j - 1, i - 1) = std::conj(h(i - 1, j - 1));
    };

    // Ground 5S1/2 F=1 sublevels (1..3) and the F=2 reservoir (15).
    h(0, 0) = -kImag * gg / 2.0;
    h(1, 1) = -kImag * gg / 2.0;
    h(2, 2) = -kImag * gg / 2.0;
    h(14, 14) = -kImag * gg / 2.0;
    // 5P1/2 F'=1 (4..6) and F'=2 (7..11).
    for (int j = 4; j <= 6; ++j) h(j - 1, j - 1) = -p.delta_p - kImag * ga / 2.0;
    for (int j = 7; j <= 11; ++j)
        h(j - 1, j - 1) = p.hyperfine - p.delta_p - kImag * ga / 2.0;
    // 6S1/2 F''=1 (12..14).
    for (int j = 12; j <= 14; ++j)
        h(j - 1, j - 1) = -p.delta_s - p.delta_p - kImag * gb / 2.0;

    // Pump legs (sigma+), scaled by the dipole ratios.
    set_coupling(1, 5, -op / 2.0);
    set_coupling(1, 9, -op / 2.0);
    set_coupling(2, 6, -op / 2.0);
    set_coupling(2, 10, -s3 * op / 2.0);
    set_coupling(3, 11, -s6 * op / 2.0);
    // Probe legs (both circular components).
    set_coupling(4, 13, -os / 2.0);
    set_coupling(5, 12, os / 2.0);
    set_coupling(5, 14, -os / 2.0);
    set_coupling(6, 13, os / 2.0);
    set_coupling(7, 12, s6 * os / 2.0);
    set_coupling(8, 13, s3 * os / 2.0);
    set_coupling(9, 12, os / 2.0);
    set_coupling(9, 14, os / 2.0);
    set_coupling(10, 13, s3 * os / 2.0);
    set_coupling(11, 14, s6 * os / 2.0);

    RealMatrix& g = spec.source;
    auto influx = [&g](int into, int from, double rate) {
        g(into - 1, from - 1) = rate;
    };

    influx(1, 4, ga / 12), influx(1, 5, ga / 12), influx(1, 9, ga / 12);
    influx(1, 7, ga / 2), influx(1, 8, ga / 4);
    influx(2, 4, ga / 12), influx(2, 6, ga / 12);
    influx(2, 8, ga / 4), influx(2, 9, ga / 3), influx(2, 10, ga / 4);
    influx(3, 5, ga / 12), influx(3, 6, ga / 12), influx(3, 9, ga / 12);
    influx(3, 10, ga / 4), influx(3, 11, ga / 2);
    for (int into = 1; into <= 3; ++into) {
        for (int from = 12; from <= 14; ++from) influx(into, from, gbi / 18);
        influx(into, 15, gg / 3);
    }
    influx(4, 12, gbd / 12), influx(4, 13, gbd / 12);
    influx(5, 12, gbd / 12), influx(5, 14, gbd / 12);
    influx(6, 13, gbd / 12), influx(6, 14, gbd / 12);
    influx(7, 12, gbd / 2);
    influx(8, 12, gbd / 4), influx(8, 13, gbd / 4);
    influx(9, 12, gbd / 12), influx(9, 13, gbd / 3), influx(9, 14, gbd / 12);
    influx(10, 13, gbd / 4), influx(10, 14, gbd / 4);
    influx(11, 14, gbd / 2);
    for (int from = 1; from <= 3; ++from) influx(15, from, gg);
    for (int from = 4; from <= 6; ++from) influx(15, from, 5 * ga / 6);
    for (int from = 7; from <= 11; ++from) influx(15, from, ga / 2);
    for (int from = 12; from <= 14; ++from) influx(15, from, 5 * gbi / 6);

    return spec;
}

namespace {

struct ProbeLeg {
    int upper;   // 6S1/2 level, 1-based
    int lower;   // 5P1/2 level, 1-based
    double rabi_ratio;  // Rabi frequency over the weakest leg's
};

}  // namespace

PolarizationObservables polarization_observables(const DensityMatrix& rho,
                                                 const WaveplateParams& p) {
    if (rho.n_levels() != 15)
        throw DimensionError("polarization observables need a 15-level state");

    const double s3 = std::sqrt(3.0);
    const double s6 = std::sqrt(6.0);
    const ProbeLeg plus[] = {
        {13, 4, 1.0}, {14, 5, 1.0}, {12, 7, s6}, {13, 8, s3}, {14, 9, 1.0}};
    const ProbeLeg minus[] = {
        {12, 5, 1.0}, {13, 6, 1.0}, {12, 9, 1.0}, {13, 10, s3}, {14, 11, s6}};

    auto coherence_sum = [&rho](const ProbeLeg (&legs)[5]) {
        Complex sum = 0;
        for (const ProbeLeg& leg : legs)
            sum += leg.rabi_ratio * rho.entries(leg.upper - 1, leg.lower - 1);
        return sum;
    };
    const Complex sum_plus = coherence_sum(plus);
    const Complex sum_minus = coherence_sum(minus);

    // Weakest-leg decay fraction: amplitudes from level 14 go as
    // 1:1:1:sqrt(3):sqrt(6), so the weakest channel carries 1/12.
    const double b_min_sq = 1.0 / 12.0;
    const double pi = std::numbers::pi;
    const double beta_rate = p.beta_gamma.value_or(p.gamma_b);
    const double beta = b_min_sq * 3.0 * p.atom_density * beta_rate *
                        std::pow(p.wavelength, 3) /
                        (4.0 * pi * pi * p.omega_s);
    const double k_l = 2.0 * pi / p.wavelength * p.cell_length;

    PolarizationObservables obs;
    obs.beta = beta;
    obs.phi_plus = k_l * beta / 2.0 * sum_plus.real();
    obs.phi_minus = k_l * beta / 2.0 * sum_minus.real();
    obs.trans_plus = std::exp(-k_l * beta * sum_plus.imag() / 2.0);
    obs.trans_minus = std::exp(-k_l * beta * sum_minus.imag() / 2.0);
    return obs;
}

Eigen::Vector2cd jones_output(const PolarizationObservables& obs) {
    const Eigen::Vector2cd right(1.0, kImag);
    const Eigen::Vector2cd left(1.0, -kImag);
    return 0.5 * obs.trans_plus * std::exp(kImag * obs.phi_plus) * right +
           0.5 * obs.trans_minus * std::exp(kImag * obs.phi_minus) * left;
}

double excited_population(const DensityMatrix& rho, int level) {
    if (level < 1 || level > rho.n_levels()) {
        std::ostringstream msg;
        msg << "level " << level << " outside [1, " << rho.n_levels() << "]";
        throw IndexError(msg.str());
    }
    return rho.entries(level - 1, level - 1).real();
}

}  // namespace liouville::models
