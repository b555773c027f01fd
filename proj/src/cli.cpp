#include "liouville/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "liouville/bench.hpp"
#include "liouville/builtins.hpp"
#include "liouville/core.hpp"
#include "liouville/model_io.hpp"
#include "liouville/sweep.hpp"

namespace liouville::cli {

namespace {

struct ModelSource {
    std::string path;
    std::string builtin;
};

struct UserError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

io::ModelFile load_model(const ModelSource& source) {
    if (source.path.empty() == source.builtin.empty())
        throw UserError("exactly one of --model or --builtin is required");

    if (!source.builtin.empty()) {
        if (auto model = builtin_model(source.builtin)) return *model;
        std::ostringstream msg;
        msg << "unknown builtin '" << source.builtin << "' (available:";
        for (const std::string& name : builtin_names()) msg << " " << name;
        msg << ")";
        throw UserError(msg.str());
    }

    std::ifstream in(source.path, std::ios::binary);
    if (!in) throw UserError("cannot open model file '" + source.path + "'");
    std::ostringstream text;
    text << in.rdbuf();

    const io::ParseResult parsed = io::parse_model(text.str());
    if (!parsed.ok()) {
        std::ostringstream msg;
        for (std::size_t i = 0; i < parsed.diagnostics.size(); ++i) {
            if (i) msg << "\n";
            msg << source.path << ":" << io::render(parsed.diagnostics[i]);
        }
        throw UserError(msg.str());
    }
    return *parsed.model;
}

void write_text(const std::string& text, const std::string& out_path,
                std::ostream& out) {
    if (out_path.empty() || out_path == "-") {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw UserError("cannot open output file '" + out_path + "'");
    file << text;
    if (!file) throw UserError("failed writing output file '" + out_path + "'");
}

std::string format_number(double value, const char* format = "%.17g") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), format, value);
    return buf;
}

EvolutionMatrix build_matrix(const SystemSpec& spec, const std::string& builder) {
    if (builder == "naive") return build_M_naive(spec);
    return build_M_fast(spec);
}

void print_density_matrix(const DensityMatrix& rho, std::ostream& out) {
    const int n = rho.n_levels();
    out << "Re(rho):\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            out << format_number(rho.entries(i, j).real(), "% .9e") << (j + 1 < n ? " " : "");
        out << "\n";
    }
    out << "Im(rho):\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            out << format_number(rho.entries(i, j).imag(), "% .9e") << (j + 1 < n ? " " : "");
        out << "\n";
    }
}

int cmd_steady(const ModelSource& source, double x, const std::string& builder,
               std::ostream& out, std::ostream& err) {
    const io::ModelFile model = load_model(source);
    const SystemSpec spec = io::instantiate(model, x);
    const ValidationReport report = validate_spec(spec);
    if (!report.ok()) {
        for (const SpecViolation& v : report.violations)
            err << "validation: " << v.message << "\n";
        return kExitUserError;
    }

    const EvolutionMatrix m = build_matrix(spec, builder);
    const DensityMatrix rho = solve_steady_state(m);

    out << "steady state at x = " << format_number(x) << " (N = " << spec.n_levels
        << ", builder = " << builder << ")\n";
    print_density_matrix(rho, out);
    out << "trace = " << format_number(rho.trace().real()) << " + "
        << format_number(rho.trace().imag()) << "i\n";
    out << "residual = " << format_number(residual(m, rho), "%.3e")
        << " (bound " << format_number(1e-10 * m.entries.cwiseAbs().maxCoeff(), "%.3e")
        << ")\n";

    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eigs(
        0.5 * (rho.entries + rho.entries.adjoint()));
    const double min_eig = eigs.eigenvalues().minCoeff();
    if (min_eig < -1e-8)
        err << "warning: smallest population eigenvalue " << format_number(min_eig, "%.3e")
            << " below -1e-8\n";
    return kExitOk;
}

int cmd_validate(const ModelSource& source, double x, std::ostream& out,
                 std::ostream& err) {
    const io::ModelFile model = load_model(source);
    SystemSpec spec;
    try {
        spec = io::instantiate(model, x);
    } catch (const std::invalid_argument& e) {
        err << "validation: " << e.what() << "\n";
        return kExitUserError;
    }
    const ValidationReport report = validate_spec(spec);
    if (!report.ok()) {
        for (const SpecViolation& v : report.violations)
            out << v.check << ": " << v.message << "\n";
        out << report.violations.size() << " violation(s)\n";
        return kExitUserError;
    }
    out << "validation passed (N = " << spec.n_levels << ", closure "
        << (spec.closed_system ? "checked" : "not requested") << ")\n";
    return kExitOk;
}

int cmd_sweep(io::ModelFile model, const std::string& builder,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
    if (!model.sweep) throw UserError("model has no sweep directive");

    SweepOptions options;
    options.use_fast_builder = (builder != "naive");
    const SweepOutcome outcome = run_sweep(model, options);
    write_text(io::emit_csv(outcome.table), out_path, out);

    if (!outcome.ok()) {
        err << "sweep: " << outcome.failures.size() << " of " << outcome.table.x.size()
            << " points failed\n";
        for (const PointFailure& failure : outcome.failures)
            err << "  point " << failure.index << " (x = " << format_number(failure.x)
                << "): " << failure.message << "\n";
        return kExitNumericalError;
    }
    return kExitOk;
}

int cmd_evolve(const ModelSource& source, double x, double t_end, double dt,
               int init_level, const std::string& out_path, std::ostream& out) {
    const io::ModelFile model = load_model(source);
    const SystemSpec spec = io::instantiate(model, x);
    if (init_level < 1 || init_level > spec.n_levels)
        throw UserError("--init level outside [1, N]");
    const double bound = max_stable_dt(spec);
    if (dt > bound)
        throw UserError("dt = " + format_number(dt) +
                        " violates the stability guard dt <= " + format_number(bound));

    DensityMatrix rho0{ComplexMatrix::Zero(spec.n_levels, spec.n_levels)};
    rho0.entries(init_level - 1, init_level - 1) = 1.0;

    const Trajectory traj = evolve(spec, rho0, t_end, dt);

    io::SweepResult table;
    table.variable = "t";
    for (const io::Observable& obs : model.observables)
        for (std::string& name : io::column_names(obs))
            table.columns.push_back(std::move(name));
    table.x = traj.times;
    table.rows.reserve(traj.states.size());
    const models::WaveplateParams waveplate;
    for (const DensityMatrix& state : traj.states)
        table.rows.push_back(evaluate_observables(model.observables, state, waveplate));

    write_text(io::emit_csv(table, "t"), out_path, out);
    return kExitOk;
}

int cmd_bench(const std::vector<int>& sizes, int reps, std::uint64_t seed,
              const std::string& out_path, std::ostream& out) {
    if (sizes.empty()) throw UserError("--sizes must not be empty");
    for (int n : sizes)
        if (n < 2) throw UserError("benchmark sizes must be >= 2");
    if (reps < 1) throw UserError("--reps must be >= 1");

    const std::vector<BenchRow> rows = run_bench(sizes, reps, seed);
    std::ostringstream csv;
    csv << "n,naive_ms,fast_ms,ratio\n";
    for (const BenchRow& row : rows)
        csv << row.n_levels << "," << format_number(row.naive_ms, "%.6g") << ","
            << format_number(row.fast_ms, "%.6g") << ","
            << format_number(row.ratio, "%.6g") << "\n";
    write_text(csv.str(), out_path, out);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady states, sweeps and time evolution of N-level systems "
                 "via the vectorized Liouville equation"};
    app.require_subcommand(1);

    ModelSource source;
    double x = 0.0;
    std::string builder = "fast";
    std::string out_path;
    double t_end = 0.0, dt = 0.0;
    int init_level = 1;
    std::vector<int> sizes = {2, 3, 5, 10, 15};
    int reps = 5;
    std::uint64_t seed = 12345;
    double sweep_from = 0.0, sweep_to = 0.0;
    int sweep_points = 0;

    auto add_model_flags = [&source](CLI::App* cmd) {
        cmd->add_option("--model", source.path, "model description file");
        cmd->add_option("--builtin", source.builtin,
                        "builtin model: two-level, lambda3, rb87-waveplate");
    };
    auto add_builder_flag = [&builder](CLI::App* cmd) {
        cmd->add_option("--builder", builder, "evolution-matrix builder")
            ->check(CLI::IsMember({"naive", "fast"}));
    };

    CLI::App* steady = app.add_subcommand("steady", "solve one steady state");
    add_model_flags(steady);
    add_builder_flag(steady);
    steady->add_option("--x", x, "sweep-variable value");

    CLI::App* sweep = app.add_subcommand("sweep", "steady state across the sweep grid");
    add_model_flags(sweep);
    add_builder_flag(sweep);
    sweep->add_option("--out", out_path, "output CSV path (default stdout)");
    CLI::Option* opt_from = sweep->add_option("--from", sweep_from, "override sweep start");
    CLI::Option* opt_to = sweep->add_option("--to", sweep_to, "override sweep end");
    CLI::Option* opt_points = sweep->add_option("--points", sweep_points, "override sweep points")
                                  ->check(CLI::PositiveNumber);

    CLI::App* evolve_cmd = app.add_subcommand("evolve", "integrate the time evolution");
    add_model_flags(evolve_cmd);
    evolve_cmd->add_option("--x", x, "sweep-variable value");
    evolve_cmd->add_option("--t-end", t_end, "end time (units of 1/rate)")
        ->required()
        ->check(CLI::PositiveNumber);
    evolve_cmd->add_option("--dt", dt, "integrator step")->required()->check(CLI::PositiveNumber);
    evolve_cmd->add_option("--init", init_level, "initially populated level (1-based)");
    evolve_cmd->add_option("--out", out_path, "output CSV path (default stdout)");

    CLI::App* validate = app.add_subcommand("validate", "check model invariants and closure");
    add_model_flags(validate);
    validate->add_option("--x", x, "sweep-variable value");

    CLI::App* bench = app.add_subcommand("bench", "compare the two matrix builders");
    bench->add_option("--sizes", sizes, "level counts to benchmark")->delimiter(',');
    bench->add_option("--reps", reps, "repetitions per size");
    bench->add_option("--seed", seed, "random-spec seed");
    bench->add_option("--out", out_path, "output CSV path (default stdout)");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        const CLI::App* target = &app;
        while (!target->get_subcommands().empty())
            target = target->get_subcommands().front();
        out << target->help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUserError;
    }

    try {
        if (steady->parsed()) return cmd_steady(source, x, builder, out, err);
        if (sweep->parsed()) {
            io::ModelFile model = load_model(source);
            if (model.sweep) {
                if (*opt_from) model.sweep->from = sweep_from;
                if (*opt_to) model.sweep->to = sweep_to;
                if (*opt_points) model.sweep->points = sweep_points;
            }
            return cmd_sweep(std::move(model), builder, out_path, out, err);
        }
        if (evolve_cmd->parsed())
            return cmd_evolve(source, x, t_end, dt, init_level, out_path, out);
        if (validate->parsed()) return cmd_validate(source, x, out, err);
        if (bench->parsed()) return cmd_bench(sizes, reps, seed, out_path, out);
        err << "error: no subcommand given\n";
        return kExitUserError;
    } catch (const UserError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const SingularSystemError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitNumericalError;
    }
}

}  // namespace liouville::cli
