#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace liouville {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

// Thrown when matrix/vector dimensions do not match the declared level count.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown for 1-based indices outside their declared range.
struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Thrown when the integrator step violates the stability guard.
struct StepSizeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when the reduced system is singular or numerically rank-deficient,
// i.e. the steady state is not unique or the problem is ill-posed.
struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a computation produces non-finite values or a solution that
// fails its contract (divergence, broken density-matrix invariants).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Full input to vectorization: an N-level system in the rotating frame.
///
/// All rates and frequencies are dimensionless multiples of a per-model
/// reference rate. Decay lives in the imaginary parts of the Hamiltonian
/// diagonal; population influx in `source`; transverse decay in `dephasing`.
struct SystemSpec {
    int n_levels = 0;
    // N x N complex effective Hamiltonian. Off-diagonal entries must be
    // Hermitian-symmetric; diagonal imaginary parts must be <= 0 (decay).
    ComplexMatrix hamiltonian;
    // source(i, j) is the rate multiplying rho_jj in d rho_ii / dt.
    RealMatrix source;
    // dephasing(i, j) multiplies -rho_ij; zero diagonal required.
    RealMatrix dephasing;
    // Asserts the trace-closure condition: per-level influx equals decay.
    bool closed_system = true;
};

/// The N^2 x N^2 matrix M of dA/dt = M A, with A the row-major
/// vectorization of the density matrix.
struct EvolutionMatrix {
    int n_levels = 0;
    ComplexMatrix entries;
};

/// Trace-reduced steady-state system W B = -S of size N^2 - 1.
struct ReducedSystem {
    ComplexMatrix w;
    ComplexVector s;
};

/// N x N Hermitian, unit-trace state.
struct DensityMatrix {
    ComplexMatrix entries;

    int n_levels() const { return static_cast<int>(entries.rows()); }
    Complex trace() const { return entries.trace(); }
    double hermiticity_defect() const {
        return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    }
};

/// Time-ordered samples of an integration run; times in units of the
/// reference rate's inverse.
struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
};

/// One failed check from validate_spec, with the offending indices
/// (1-based, 0 when not applicable) and the violation magnitude.
struct SpecViolation {
    std::string check;
    int i = 0;
    int j = 0;
    double magnitude = 0.0;
    std::string message;
};

struct ValidationReport {
    std::vector<SpecViolation> violations;
    bool ok() const { return violations.empty(); }
};

}  // namespace liouville
