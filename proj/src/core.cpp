#include "liouville/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/LU>

namespace liouville {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        std::ostringstream msg;
        msg << what << " must be square, got " << m.rows() << "x" << m.cols();
        throw DimensionError(msg.str());
    }
}

void require_spec_dims(const SystemSpec& spec) {
    const int n = spec.n_levels;
    if (n <= 0) throw DimensionError("n_levels must be positive");
    if (spec.hamiltonian.rows() != n || spec.hamiltonian.cols() != n ||
        spec.source.rows() != n || spec.source.cols() != n ||
        spec.dephasing.rows() != n || spec.dephasing.cols() != n) {
        throw DimensionError("spec matrices must all be n_levels x n_levels");
    }
}

}  // namespace

int nzrem(int a, int b) {
    const int r = a % b;
    return r != 0 ? r : b;
}

std::pair<int, int> index_to_pair(int n, int n_levels) {
    if (n < 1 || n > n_levels * n_levels) {
        std::ostringstream msg;
        msg << "vector index " << n << " outside [1, " << n_levels * n_levels << "]";
        throw IndexError(msg.str());
    }
    const int col = nzrem(n, n_levels);
    const int row = 1 + (n - col) / n_levels;
    return {row, col};
}

ComplexVector vectorize(const ComplexMatrix& rho) {
    require_square(rho, "density matrix");
    const Eigen::Index n = rho.rows();
    ComplexVector a(n * n);
    for (Eigen::Index r = 0; r < n; ++r)
        a.segment(r * n, n) = rho.row(r).transpose();
    return a;
}

ComplexMatrix devectorize(const ComplexVector& a, int n_levels) {
    if (a.size() != Eigen::Index(n_levels) * n_levels) {
        std::ostringstream msg;
        msg << "vector of length " << a.size() << " is not " << n_levels << "^2";
        throw DimensionError(msg.str());
    }
    ComplexMatrix rho(n_levels, n_levels);
    for (int r = 0; r < n_levels; ++r)
        rho.row(r) = a.segment(Eigen::Index(r) * n_levels, n_levels).transpose();
    return rho;
}

ComplexMatrix apply_liouvillian(const SystemSpec& spec, const ComplexMatrix& rho) {
    require_spec_dims(spec);
    if (rho.rows() != spec.n_levels || rho.cols() != spec.n_levels)
        throw DimensionError("state dimensions do not match spec.n_levels");

    const ComplexMatrix& h = spec.hamiltonian;
    ComplexMatrix q = Complex(0, -1) * (h * rho - rho * h.adjoint());

    // Population influx: diagonal only.
    for (int i = 0; i < spec.n_levels; ++i) {
        Complex influx = 0;
        for (int j = 0; j < spec.n_levels; ++j)
            influx += spec.source(i, j) * rho(j, j);
        q(i, i) += influx;
    }
    // Transverse decay.
    q.array() -= spec.dephasing.cast<Complex>().array() * rho.array();
    return q;
}

EvolutionMatrix build_M_naive(const SystemSpec& spec) {
    require_spec_dims(spec);
    const int n = spec.n_levels;
    const int dim = n * n;
    EvolutionMatrix m{n, ComplexMatrix::Zero(dim, dim)};

    ComplexMatrix basis = ComplexMatrix::Zero(n, n);
    for (int row = 1; row <= dim; ++row) {
        const auto [alpha, beta] = index_to_pair(row, n);
        for (int col = 1; col <= dim; ++col) {
            const auto [eps, sig] = index_to_pair(col, n);
            basis.setZero();
            basis(eps - 1, sig - 1) = 1.0;
            const ComplexMatrix q = apply_liouvillian(spec, basis);
            m.entries(row - 1, col - 1) = q(alpha - 1, beta - 1);
        }
    }
    return m;
}

EvolutionMatrix build_M_fast(const SystemSpec& spec) {
    require_spec_dims(spec);
    const int n = spec.n_levels;
    const Eigen::Index dim = Eigen::Index(n) * n;
    EvolutionMatrix m{n, ComplexMatrix::Zero(dim, dim)};
    const ComplexMatrix& h = spec.hamiltonian;

    for (int eps = 0; eps < n; ++eps) {
        for (int sig = 0; sig < n; ++sig) {
            const int col = eps * n + sig;
            // rho H^dagger: conjugated column sig of H fills the eps-th row block.
            m.entries.col(col).segment(Eigen::Index(eps) * n, n) +=
                Complex(0, 1) * h.col(sig).conjugate();
            // H rho: column eps of H lands at rows sig, sig+N, ..., sig+N(N-1).
            for (int r = 0; r < n; ++r)
                m.entries(Eigen::Index(r) * n + sig, col) -= Complex(0, 1) * h(r, eps);
            if (eps == sig) {
                // Source column eps feeds every population row.
                for (int r = 0; r < n; ++r)
                    m.entries(Eigen::Index(r) * n + r, col) += spec.source(r, eps);
            } else {
                m.entries(col, col) -= spec.dephasing(eps, sig);
            }
        }
    }
    return m;
}

ReducedSystem reduce(const EvolutionMatrix& m) {
    const int n = m.n_levels;
    const int dim = n * n;
    if (m.entries.rows() != dim || m.entries.cols() != dim)
        throw DimensionError("evolution matrix dimensions do not match n_levels");

    ReducedSystem sys;
    sys.s = m.entries.col(dim - 1).head(dim - 1);
    sys.w = m.entries.topLeftCorner(dim - 1, dim - 1);
    for (int k = 1; k <= n - 1; ++k)
        sys.w.col((k - 1) * n + k - 1) -= sys.s;
    return sys;
}

DensityMatrix solve_steady_state(const EvolutionMatrix& m, double condition_limit) {
    const int n = m.n_levels;
    const int dim = n * n;
    if (m.entries.rows() != dim || m.entries.cols() != dim)
        throw DimensionError("evolution matrix dimensions do not match n_levels");

    DensityMatrix rho{ComplexMatrix::Zero(n, n)};
    if (dim > 1) {
        const ReducedSystem sys = reduce(m);
        Eigen::PartialPivLU<ComplexMatrix> lu(sys.w);
        const double rcond = lu.rcond();
        if (!(rcond > 1.0 / condition_limit)) {
            std::ostringstream msg;
            msg << "steady state not unique (reciprocal condition estimate " << rcond
                << ")";
            throw SingularSystemError(msg.str());
        }
        const ComplexVector b = lu.solve(-sys.s);

        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k)
                if (!(j == n && k == n))
                    rho.entries(j - 1, k - 1) = b((j - 1) * n + k - 1);
        Complex last = 1.0;
        for (int j = 1; j <= n - 1; ++j) last -= b((j - 1) * n + j - 1);
        rho.entries(n - 1, n - 1) = last;
    } else {
        rho.entries(0, 0) = 1.0;  // unit trace pins the single population
    }

    if (!rho.entries.allFinite())
        throw NumericalError("steady-state solve produced non-finite entries");
    const double scale = m.entries.cwiseAbs().maxCoeff();
    if (residual(m, rho) > 1e-10 * scale)
        throw NumericalError("steady-state residual exceeds 1e-10 * max|M|");
    return rho;
}

DensityMatrix steady_state(const SystemSpec& spec, double condition_limit) {
    if (!spec.closed_system)
        throw std::invalid_argument("steady_state requires a closed system");
    const ValidationReport report = validate_spec(spec);
    if (!report.ok())
        throw std::invalid_argument("invalid spec: " + report.violations.front().message);
    return solve_steady_state(build_M_fast(spec), condition_limit);
}

double max_stable_dt(const SystemSpec& spec) {
    require_spec_dims(spec);
    const double max_rate = std::max(spec.hamiltonian.cwiseAbs().maxCoeff(),
                                     spec.source.maxCoeff());
    if (max_rate <= 0.0) return std::numeric_limits<double>::infinity();
    return 0.1 / max_rate;
}

Trajectory evolve(const SystemSpec& spec, const DensityMatrix& rho0,
                  double t_end, double dt) {
    if (!(t_end > 0) || !(dt > 0))
        throw std::invalid_argument("t_end and dt must be positive");
    const double dt_max = max_stable_dt(spec);
    if (dt > dt_max) {
        std::ostringstream msg;
        msg << "dt = " << dt << " violates the stability guard dt <= " << dt_max;
        throw StepSizeError(msg.str());
    }
    if (rho0.entries.rows() != spec.n_levels || rho0.entries.cols() != spec.n_levels)
        throw DimensionError("initial state dimensions do not match spec.n_levels");

    const EvolutionMatrix m = build_M_fast(spec);
    ComplexVector a = vectorize(rho0.entries);

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(rho0);

    double t = 0.0;
    while (t < t_end - 1e-12 * t_end) {
        const double h = std::min(dt, t_end - t);
        const ComplexVector k1 = m.entries * a;
        const ComplexVector k2 = m.entries * (a + 0.5 * h * k1);
        const ComplexVector k3 = m.entries * (a + 0.5 * h * k2);
        const ComplexVector k4 = m.entries * (a + h * k3);
        a += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
        if (!a.allFinite())
            throw NumericalError("integration diverged: non-finite state");
        traj.times.push_back(t);
        traj.states.push_back(DensityMatrix{devectorize(a, spec.n_levels)});
    }
    return traj;
}

ValidationReport validate_spec(const SystemSpec& spec) {
    ValidationReport report;
    auto add = [&report](std::string check, int i, int j, double magnitude,
                         std::string message) {
        report.violations.push_back(
            {std::move(check), i, j, magnitude, std::move(message)});
    };

    const int n = spec.n_levels;
    if (n <= 0) {
        add("dimensions", 0, 0, 0.0, "n_levels must be positive");
        return report;
    }
    if (spec.hamiltonian.rows() != n || spec.hamiltonian.cols() != n ||
        spec.source.rows() != n || spec.source.cols() != n ||
        spec.dephasing.rows() != n || spec.dephasing.cols() != n) {
        add("dimensions", 0, 0, 0.0, "spec matrices must all be n_levels x n_levels");
        return report;
    }

    const double h_scale = std::max(1.0, spec.hamiltonian.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double defect =
                std::abs(spec.hamiltonian(i, j) - std::conj(spec.hamiltonian(j, i)));
            if (defect > 1e-12 * h_scale) {
                std::ostringstream msg;
                msg << "H(" << i + 1 << "," << j + 1 << ") != conj(H(" << j + 1 << ","
                    << i + 1 << ")), defect " << defect;
                add("hermitian-coupling", i + 1, j + 1, defect, msg.str());
            }
        }
    }
    for (int j = 0; j < n; ++j) {
        const double im = spec.hamiltonian(j, j).imag();
        if (im > 1e-12 * h_scale) {
            std::ostringstream msg;
            msg << "Im H(" << j + 1 << "," << j + 1 << ") = " << im << " > 0 (gain)";
            add("diagonal-decay", j + 1, j + 1, im, msg.str());
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (spec.source(i, j) < 0) {
                std::ostringstream msg;
                msg << "G(" << i + 1 << "," << j + 1 << ") = " << spec.source(i, j)
                    << " < 0";
                add("source-nonnegative", i + 1, j + 1, -spec.source(i, j), msg.str());
            }
            if (spec.dephasing(i, j) < 0) {
                std::ostringstream msg;
                msg << "D(" << i + 1 << "," << j + 1 << ") = " << spec.dephasing(i, j)
                    << " < 0";
                add("dephasing-nonnegative", i + 1, j + 1, -spec.dephasing(i, j),
                    msg.str());
            }
        }
        if (spec.dephasing(i, i) != 0.0) {
            std::ostringstream msg;
            msg << "D(" << i + 1 << "," << i + 1 << ") must be zero";
            add("dephasing-diagonal", i + 1, i + 1, std::abs(spec.dephasing(i, i)),
                msg.str());
        }
    }
    // Asymmetric dephasing would break Hermiticity of the evolution.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double defect = std::abs(spec.dephasing(i, j) - spec.dephasing(j, i));
            if (defect > 0.0) {
                std::ostringstream msg;
                msg << "D(" << i + 1 << "," << j + 1 << ") != D(" << j + 1 << ","
                    << i + 1 << ")";
                add("dephasing-symmetric", i + 1, j + 1, defect, msg.str());
            }
        }
    }

    if (spec.closed_system) {
        for (int j = 0; j < n; ++j) {
            const double influx = spec.source.col(j).sum();
            const double decay = -2.0 * spec.hamiltonian(j, j).imag();
            const double defect = std::abs(influx - decay);
            if (defect > 1e-9) {
                std::ostringstream msg;
                msg << "level " << j + 1 << ": total influx " << influx
                    << " != decay rate " << decay;
                add("trace-closure", j + 1, 0, defect, msg.str());
            }
        }
    }
    return report;
}

double residual(const EvolutionMatrix& m, const DensityMatrix& rho) {
    if (rho.entries.rows() != m.n_levels || rho.entries.cols() != m.n_levels)
        throw DimensionError("state dimensions do not match the evolution matrix");
    return (m.entries * vectorize(rho.entries)).cwiseAbs().maxCoeff();
}

SystemSpec random_closed_spec(int n_levels, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);

    const int n = n_levels;
    SystemSpec spec;
    spec.n_levels = n;
    spec.hamiltonian = ComplexMatrix::Zero(n, n);
    spec.source = RealMatrix::Zero(n, n);
    spec.dephasing = RealMatrix::Zero(n, n);

    for (int i = 0; i < n; ++i) {
        spec.hamiltonian(i, i) = Complex(4.0 * sym(rng), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const Complex c(2.0 * sym(rng), 2.0 * sym(rng));
            spec.hamiltonian(i, j) = c;
            spec.hamiltonian(j, i) = std::conj(c);
            const double d = unit(rng);
            spec.dephasing(i, j) = d;
            spec.dephasing(j, i) = d;
        }
    }
    // Random influx, then per-level decay chosen to close the trace.
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i)
            if (i != j && unit(rng) < 0.6) spec.source(i, j) = unit(rng);
        spec.hamiltonian(j, j) -= Complex(0.0, 0.5 * spec.source.col(j).sum());
    }
    return spec;
}

}  // namespace liouville
