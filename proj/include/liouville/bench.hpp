#pragma once

#include <cstdint>
#include <vector>

#include "liouville/core.hpp"

namespace liouville {

struct BenchRow {
    int n_levels = 0;
    double naive_ms = 0.0;  // median over reps
    double fast_ms = 0.0;
    double ratio = 0.0;     // naive / fast
};

/// Times both builders on `reps` random closed specs per size and checks
/// their outputs agree within 1e-12 max-norm each rep. Throws NumericalError
/// naming the offending (N, seed) on disagreement.
std::vector<BenchRow> run_bench(const std::vector<int>& sizes, int reps,
                                std::uint64_t seed);

}  // namespace liouville
