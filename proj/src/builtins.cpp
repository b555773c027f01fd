#include "liouville/builtins.hpp"

#include <functional>

namespace liouville {

namespace {

// Recovers the (c0, c1) linear coefficients of every entry from the builder
// evaluated at x = 0 and x = 1. Exact for specs whose entries are linear in
// the swept variable, which covers every detuning sweep here.
io::ModelFile model_from_builder(
    const std::function<SystemSpec(double)>& build_at) {
    const SystemSpec at0 = build_at(0.0);
    const SystemSpec at1 = build_at(1.0);

    io::ModelFile model;
    model.n_levels = at0.n_levels;
    for (int i = 0; i < at0.n_levels; ++i) {
        for (int j = 0; j < at0.n_levels; ++j) {
            const io::EntryKey key{i + 1, j + 1};
            const Complex h0 = at0.hamiltonian(i, j);
            const Complex h1 = at1.hamiltonian(i, j) - h0;
            if (h0 != Complex{} || h1 != Complex{}) model.ham[key] = {h0, h1};

            const double g0 = at0.source(i, j);
            const double g1 = at1.source(i, j) - g0;
            if (g0 != 0.0 || g1 != 0.0) model.src[key] = {g0, g1};

            const double d0 = at0.dephasing(i, j);
            const double d1 = at1.dephasing(i, j) - d0;
            if (d0 != 0.0 || d1 != 0.0) model.deph[key] = {d0, d1};
        }
    }
    return model;
}

}  // namespace

std::optional<io::ModelFile> builtin_model(std::string_view name) {
    using io::Observable;

    if (name == "two-level") {
        io::ModelFile model = model_from_builder([](double x) {
            models::TwoLevelParams params;
            params.detuning = x;
            return models::two_level(params);
        });
        model.sweep = io::SweepDirective{"delta", -100.0, 100.0, 401};
        model.observables = {{Observable::Kind::Population, 2, 0}};
        return model;
    }
    if (name == "lambda3") {
        io::ModelFile model = model_from_builder([](double x) {
            models::ThreeLevelParams params;
            params.difference_detuning = x;
            return models::three_level_lambda(params);
        });
        model.sweep = io::SweepDirective{"Delta", -20.0, 20.0, 401};
        model.observables = {{Observable::Kind::Population, 3, 0}};
        return model;
    }
    if (name == "rb87-waveplate") {
        io::ModelFile model = model_from_builder([](double x) {
            models::WaveplateParams params;
            params.delta_s = x;
            return models::rb87_waveplate(params);
        });
        model.sweep = io::SweepDirective{"delta_s", -200.0, 200.0, 401};
        model.observables = {{Observable::Kind::Waveplate, 0, 0}};
        return model;
    }
    return std::nullopt;
}

std::vector<std::string> builtin_names() {
    return {"two-level", "lambda3", "rb87-waveplate"};
}

}  // namespace liouville
