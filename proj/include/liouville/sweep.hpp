#pragma once

#include "liouville/core.hpp"
#include "liouville/model_io.hpp"
#include "liouville/models.hpp"

namespace liouville {

struct SweepOptions {
    bool use_fast_builder = true;
    // 0 = take LIOUVILLE_THREADS from the environment, else all hardware
    // threads. Output order never depends on this.
    int max_threads = 0;
    double condition_limit = kDefaultConditionLimit;
    // Optical parameters for waveplate observables (the model file only
    // carries the atomic part).
    models::WaveplateParams waveplate;
};

struct PointFailure {
    int index = 0;  // 0-based sweep point
    double x = 0.0;
    std::string message;
};

struct SweepOutcome {
    io::SweepResult table;
    std::vector<PointFailure> failures;  // failed points produce NaN cells
    bool ok() const { return failures.empty(); }
};

/// Flattened observable values for one state, in the column order of
/// io::column_names.
std::vector<double> evaluate_observables(const std::vector<io::Observable>& observables,
                                         const DensityMatrix& rho,
                                         const models::WaveplateParams& waveplate);

/// The sweep grid: from + (to - from) * i / (points - 1).
std::vector<double> sweep_grid(const io::SweepDirective& sweep);

/// One steady-state solve per grid point, parallel over points. The model
/// must carry a sweep directive.
SweepOutcome run_sweep(const io::ModelFile& model, const SweepOptions& options = {});

}  // namespace liouville
