#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liouville/types.hpp"

namespace liouville::io {

// Parse-time limit keeping dense N^2 x N^2 systems within memory.
inline constexpr int kMaxLevels = 64;

struct Diagnostic {
    int line = 0;    // 1-based
    int column = 0;  // 1-based
    std::string message;
};

std::string render(const Diagnostic& d);

/// Linear dependence on the single sweep variable: value = c0 + c1 * x.
struct LinearComplex {
    Complex c0{0.0, 0.0};
    Complex c1{0.0, 0.0};
};

struct LinearReal {
    double c0 = 0.0;
    double c1 = 0.0;
};

struct SweepDirective {
    std::string variable;
    double from = 0.0;
    double to = 0.0;
    int points = 1;
};

struct Observable {
    enum class Kind { Population, Coherence, Waveplate };
    Kind kind = Kind::Population;
    int i = 0;  // level (pop) or row (coh), 1-based
    int j = 0;  // column (coh only)
};

/// CSV column names an observable expands to (complex values split
/// into .re/.im columns).
std::vector<std::string> column_names(const Observable& obs);

using EntryKey = std::pair<int, int>;  // 1-based (i, j)

/// Declarative model: matrix entries as linear functions of one sweep
/// variable, plus sweep range and output directives.
struct ModelFile {
    int n_levels = 0;
    std::map<EntryKey, LinearComplex> ham;
    std::map<EntryKey, LinearReal> src;
    std::map<EntryKey, LinearReal> deph;
    std::optional<SweepDirective> sweep;
    std::vector<Observable> observables;
};

struct ParseResult {
    std::optional<ModelFile> model;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return model.has_value(); }
};

/// Single-pass parse of the line-oriented model grammar. Never throws on
/// malformed input: every lexical, syntax, or semantic problem becomes a
/// diagnostic with its line and column.
ParseResult parse_model(std::string_view text);

/// Canonical text form: entries in sorted (i, j) order, zero entries
/// omitted, constant entries without the linear coefficient.
/// parse_model(serialize_model(m)) reproduces m's coefficient maps.
std::string serialize_model(const ModelFile& model);

/// Evaluates every entry at x and builds the SystemSpec. Throws
/// std::invalid_argument naming the first violated invariant.
SystemSpec instantiate(const ModelFile& model, double x);

/// One row per sweep point; columns flattened to reals.
struct SweepResult {
    std::string variable;
    std::vector<std::string> columns;          // names, excluding the x column
    std::vector<double> x;
    std::vector<std::vector<double>> rows;     // rows[i].size() == columns.size()
};

/// UTF-8 CSV: header "x,<col>,...", 17 significant digits, \n endings.
/// Trajectories reuse the same layout with "t" as the first column.
std::string emit_csv(const SweepResult& result, std::string_view x_header = "x");

}  // namespace liouville::io
