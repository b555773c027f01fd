#pragma once

#include <cstdint>
#include <utility>

#include "liouville/types.hpp"

namespace liouville {

// Largest decay rate whose inverse condition number still counts as a
// solvable steady-state system.
inline constexpr double kDefaultConditionLimit = 1e12;

/// Non-zero remainder: remainder(a/b) if non-zero, else b. Result in [1, b].
int nzrem(int a, int b);

/// Maps a 1-based vector index n in [1, N^2] to the 1-based (row, col) of
/// the density-matrix element it represents, with n = (row-1)*N + col.
std::pair<int, int> index_to_pair(int n, int n_levels);

/// Row-major stacking of a square complex matrix into a vector.
ComplexVector vectorize(const ComplexMatrix& rho);

/// Exact inverse of vectorize; the vector length must equal n_levels^2.
ComplexMatrix devectorize(const ComplexVector& a, int n_levels);

/// Right-hand side of the Liouville equation:
///   Q = -i (H rho - rho H^dagger) + Q_source + Q_deph
/// with Q_source(i,i) = sum_j G(i,j) rho(j,j) and Q_deph(i,j) = -D(i,j) rho(i,j).
ComplexMatrix apply_liouvillian(const SystemSpec& spec, const ComplexMatrix& rho);

/// Element-by-element construction of M: for each (n, p), sets
/// rho(eps, sig) = 1 (zero elsewhere), evaluates the Liouvillian, and reads
/// off Q(alpha, beta). Costs N^4 Liouvillian evaluations; kept deliberately
/// literal so the fast builder has an independent reference.
EvolutionMatrix build_M_naive(const SystemSpec& spec);

/// Column-wise O(N^2) construction of the same matrix: each column is
/// assembled from two columns of the Hamiltonian plus source/dephasing
/// entries, without evaluating the Liouvillian at all.
EvolutionMatrix build_M_fast(const SystemSpec& spec);

/// Trace reduction: S is the last column of M (first N^2-1 entries), W is M
/// without its last row/column, with columns (k-1)*N + k (k = 1..N-1)
/// replaced by themselves minus S.
ReducedSystem reduce(const EvolutionMatrix& m);

/// Steady state of a closed system via W B = -S and the unit-trace recovery
/// of the last population. Throws SingularSystemError when the reduced
/// system's condition estimate exceeds `condition_limit`.
DensityMatrix steady_state(const SystemSpec& spec,
                           double condition_limit = kDefaultConditionLimit);

/// Same solve starting from an already-built evolution matrix (lets callers
/// pick the builder). Checks the residual contract against max|M|.
DensityMatrix solve_steady_state(const EvolutionMatrix& m,
                                 double condition_limit = kDefaultConditionLimit);

/// Fixed-step classical 4th-order integration of dA/dt = M A, sampling every
/// step (the first sample is rho0 at t = 0). Requires
/// dt * max_rate <= 0.1 where max_rate is the largest magnitude among
/// Hamiltonian and source entries.
Trajectory evolve(const SystemSpec& spec, const DensityMatrix& rho0,
                  double t_end, double dt);

/// Checks every SystemSpec invariant and, for closed systems, per-level
/// trace closure: sum_i G(i,j) = -2 Im H(j,j) within 1e-9.
ValidationReport validate_spec(const SystemSpec& spec);

/// Max-norm of M * vectorize(rho); zero at a steady state.
double residual(const EvolutionMatrix& m, const DensityMatrix& rho);

/// Step-size stability bound used by evolve: 0.1 / max_rate
/// (infinity when the spec has no dynamics).
double max_stable_dt(const SystemSpec& spec);

/// Random closed system with Hermitian-symmetric couplings, decaying
/// diagonal matched to the source matrix, and symmetric dephasing.
/// Deterministic in the seed; used by the builder benchmark and tests.
SystemSpec random_closed_spec(int n_levels, std::uint64_t seed);

}  // namespace liouville
