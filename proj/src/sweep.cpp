#include "liouville/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>

namespace liouville {

namespace {

int resolve_thread_count(int requested, std::size_t points) {
    int threads = requested;
    if (threads <= 0) {
        if (const char* env = std::getenv("LIOUVILLE_THREADS")) {
            char* end = nullptr;
            const long parsed = std::strtol(env, &end, 10);
            if (end && *end == '\0' && parsed >= 1) threads = int(parsed);
        }
    }
    if (threads <= 0) threads = int(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    return int(std::min<std::size_t>(threads, std::max<std::size_t>(points, 1)));
}

}  // namespace

std::vector<double> evaluate_observables(const std::vector<io::Observable>& observables,
                                         const DensityMatrix& rho,
                                         const models::WaveplateParams& waveplate) {
    std::vector<double> row;
    for (const io::Observable& obs : observables) {
        switch (obs.kind) {
            case io::Observable::Kind::Population:
                row.push_back(models::excited_population(rho, obs.i));
                break;
            case io::Observable::Kind::Coherence: {
                const Complex value = rho.entries(obs.i - 1, obs.j - 1);
                row.push_back(value.real());
                row.push_back(value.imag());
                break;
            }
            case io::Observable::Kind::Waveplate: {
                const models::PolarizationObservables pol =
                    models::polarization_observables(rho, waveplate);
                row.push_back(pol.phi_plus);
                row.push_back(pol.phi_minus);
                row.push_back(pol.trans_plus);
                row.push_back(pol.trans_minus);
                row.push_back(pol.phi_plus - pol.phi_minus);
                break;
            }
        }
    }
    return row;
}

std::vector<double> sweep_grid(const io::SweepDirective& sweep) {
    std::vector<double> grid(sweep.points);
    if (sweep.points == 1) {
        grid[0] = sweep.from;
        return grid;
    }
    const int n = sweep.points - 1;
    for (int i = 0; i <= n; ++i)
        grid[i] = (sweep.from * (n - i) + sweep.to * i) / n;
    return grid;
}

SweepOutcome run_sweep(const io::ModelFile& model, const SweepOptions& options) {
    if (!model.sweep)
        throw std::invalid_argument("model has no sweep directive");

    SweepOutcome outcome;
    outcome.table.variable = model.sweep->variable;
    for (const io::Observable& obs : model.observables)
        for (std::string& name : io::column_names(obs))
            outcome.table.columns.push_back(std::move(name));

    outcome.table.x = sweep_grid(*model.sweep);
    const std::size_t points = outcome.table.x.size();
    outcome.table.rows.assign(
        points, std::vector<double>(outcome.table.columns.size(),
                                    std::numeric_limits<double>::quiet_NaN()));

    std::mutex failure_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < points; i = next.fetch_add(1)) {
            const double x = outcome.table.x[i];
            try {
                const SystemSpec spec = io::instantiate(model, x);
                const EvolutionMatrix m = options.use_fast_builder
                                              ? build_M_fast(spec)
                                              : build_M_naive(spec);
                const DensityMatrix rho =
                    solve_steady_state(m, options.condition_limit);
                outcome.table.rows[i] =
                    evaluate_observables(model.observables, rho, options.waveplate);
            } catch (const std::exception& e) {
                const std::scoped_lock lock(failure_mutex);
                outcome.failures.push_back({int(i), x, e.what()});
            }
        }
    };

    const int threads = resolve_thread_count(options.max_threads, points);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::sort(outcome.failures.begin(), outcome.failures.end(),
              [](const PointFailure& a, const PointFailure& b) {
                  return a.index < b.index;
              });
    return outcome;
}

}  // namespace liouville
