#include "liouville/bench.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <sstream>

namespace liouville {

namespace {

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

template <typename F>
double time_ms(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

}  // namespace

std::vector<BenchRow> run_bench(const std::vector<int>& sizes, int reps,
                                std::uint64_t seed) {
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    for (int n : sizes)
        if (n < 2) throw std::invalid_argument("benchmark sizes must be >= 2");

    std::vector<BenchRow> rows;
    for (int n : sizes) {
        std::vector<double> naive_times, fast_times;
        for (int rep = 0; rep < reps; ++rep) {
            const std::uint64_t rep_seed = seed + 7919u * rep + n;
            const SystemSpec spec = random_closed_spec(n, rep_seed);

            EvolutionMatrix m_naive, m_fast;
            naive_times.push_back(time_ms([&] { m_naive = build_M_naive(spec); }));
            fast_times.push_back(time_ms([&] { m_fast = build_M_fast(spec); }));

            const double diff =
                (m_naive.entries - m_fast.entries).cwiseAbs().maxCoeff();
            if (diff > 1e-12) {
                std::ostringstream msg;
                msg << "builder mismatch " << diff << " at N = " << n
                    << ", seed = " << rep_seed;
                throw NumericalError(msg.str());
            }
        }
        BenchRow row;
        row.n_levels = n;
        row.naive_ms = median(naive_times);
        row.fast_ms = median(fast_times);
        row.ratio = row.fast_ms > 0 ? row.naive_ms / row.fast_ms
                                    : std::numeric_limits<double>::infinity();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace liouville
