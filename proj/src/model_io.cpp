#include "liouville/model_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "liouville/core.hpp"

namespace liouville::io {

namespace {

struct Token {
    std::string_view text;
    int column = 0;
};

// Tokens of one line, comments stripped.
std::vector<Token> tokenize(std::string_view line) {
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);

    std::vector<Token> tokens;
    std::size_t pos = 0;
    auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
    };
    while (pos < line.size()) {
        while (pos < line.size() && is_space(line[pos])) ++pos;
        if (pos >= line.size()) break;
        const std::size_t start = pos;
        while (pos < line.size() && !is_space(line[pos])) ++pos;
        tokens.push_back({line.substr(start, pos - start), int(start) + 1});
    }
    return tokens;
}

bool parse_int(std::string_view text, int& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_real(std::string_view text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool parse_complex(std::string_view text, Complex& out) {
    const std::size_t sep = text.find(':');
    double re = 0.0, im = 0.0;
    if (sep == std::string_view::npos) {
        if (!parse_real(text, re)) return false;
    } else {
        if (!parse_real(text.substr(0, sep), re)) return false;
        if (!parse_real(text.substr(sep + 1), im)) return false;
    }
    out = Complex(re, im);
    return true;
}

bool is_identifier(std::string_view text) {
    if (text.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(text[0])) && text[0] != '_')
        return false;
    for (char c : text)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

std::string format_real(double value) {
    if (value == 0.0) return "0";  // fold away negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string format_complex(Complex value) {
    std::string out = format_real(value.real());
    if (value.imag() != 0.0) {
        out += ':';
        out += format_real(value.imag());
    }
    return out;
}

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    ParseResult run() {
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text_.size()) {
            const std::size_t nl = text_.find('\n', pos);
            const std::size_t end = (nl == std::string_view::npos) ? text_.size() : nl;
            ++line_no;
            parse_line(line_no, text_.substr(pos, end - pos));
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
        if (!levels_seen_)
            error(1, 1, "missing levels declaration");

        ParseResult result;
        result.diagnostics = std::move(diagnostics_);
        if (result.diagnostics.empty()) result.model = std::move(model_);
        return result;
    }

  private:
    void error(int line, int column, std::string message) {
        diagnostics_.push_back({line, column, std::move(message)});
    }

    bool expect_argc(int line, const std::vector<Token>& toks, int min_args,
                     int max_args) {
        const int argc = int(toks.size()) - 1;
        if (argc < min_args) {
            std::ostringstream msg;
            msg << "'" << toks[0].text << "' expects at least " << min_args
                << " argument(s), got " << argc;
            error(line, toks[0].column, msg.str());
            return false;
        }
        if (argc > max_args) {
            std::ostringstream msg;
            msg << "unexpected trailing token '" << toks[max_args + 1].text << "'";
            error(line, toks[max_args + 1].column, msg.str());
            return false;
        }
        return true;
    }

    bool level_index(int line, const Token& tok, int& out) {
        if (!parse_int(tok.text, out)) {
            error(line, tok.column, "expected an integer, got '" + std::string(tok.text) + "'");
            return false;
        }
        if (out < 1 || out > model_.n_levels) {
            std::ostringstream msg;
            msg << "index " << out << " outside [1, " << model_.n_levels << "]";
            error(line, tok.column, msg.str());
            return false;
        }
        return true;
    }

    bool require_levels(int line, const Token& kw) {
        if (levels_seen_) return true;
        error(line, kw.column,
              "levels must be declared before '" + std::string(kw.text) + "'");
        return false;
    }

    void parse_line(int line, std::string_view raw) {
        const std::vector<Token> toks = tokenize(raw);
        if (toks.empty()) return;
        const std::string_view kw = toks[0].text;

        if (kw == "levels") {
            if (!expect_argc(line, toks, 1, 1)) return;
            if (levels_seen_) {
                error(line, toks[0].column, "duplicate levels declaration");
                return;
            }
            int n = 0;
            if (!parse_int(toks[1].text, n)) {
                error(line, toks[1].column,
                      "expected an integer, got '" + std::string(toks[1].text) + "'");
                return;
            }
            if (n < 1 || n > kMaxLevels) {
                std::ostringstream msg;
                msg << "levels must be in [1, " << kMaxLevels << "]";
                error(line, toks[1].column, msg.str());
                return;
            }
            model_.n_levels = n;
            levels_seen_ = true;
        } else if (kw == "ham") {
            if (!require_levels(line, toks[0]) || !expect_argc(line, toks, 3, 4)) return;
            int i = 0, j = 0;
            if (!level_index(line, toks[1], i) || !level_index(line, toks[2], j)) return;
            LinearComplex value;
            if (!parse_complex(toks[3].text, value.c0)) {
                error(line, toks[3].column,
                      "expected a complex literal, got '" + std::string(toks[3].text) + "'");
                return;
            }
            if (toks.size() == 5 && !parse_complex(toks[4].text, value.c1)) {
                error(line, toks[4].column,
                      "expected a complex literal, got '" + std::string(toks[4].text) + "'");
                return;
            }
            if (!model_.ham.emplace(EntryKey{i, j}, value).second) {
                std::ostringstream msg;
                msg << "duplicate ham entry (" << i << ", " << j << ")";
                error(line, toks[0].column, msg.str());
                return;
            }
            if (i != j) {
                const auto partner = model_.ham.find({j, i});
                if (partner != model_.ham.end() &&
                    (partner->second.c0 != std::conj(value.c0) ||
                     partner->second.c1 != std::conj(value.c1))) {
                    std::ostringstream msg;
                    msg << "ham (" << i << ", " << j << ") is not the conjugate of ham ("
                        << j << ", " << i << ")";
                    error(line, toks[0].column, msg.str());
                }
            }
        } else if (kw == "src" || kw == "deph") {
            if (!require_levels(line, toks[0]) || !expect_argc(line, toks, 3, 4)) return;
            int i = 0, j = 0;
            if (!level_index(line, toks[1], i) || !level_index(line, toks[2], j)) return;
            if (kw == "deph" && i == j) {
                error(line, toks[1].column, "dephasing diagonal must be zero");
                return;
            }
            LinearReal value;
            if (!parse_real(toks[3].text, value.c0)) {
                error(line, toks[3].column,
                      "expected a real literal, got '" + std::string(toks[3].text) + "'");
                return;
            }
            if (toks.size() == 5 && !parse_real(toks[4].text, value.c1)) {
                error(line, toks[4].column,
                      "expected a real literal, got '" + std::string(toks[4].text) + "'");
                return;
            }
            auto& table = (kw == "src") ? model_.src : model_.deph;
            if (!table.emplace(EntryKey{i, j}, value).second) {
                std::ostringstream msg;
                msg << "duplicate " << kw << " entry (" << i << ", " << j << ")";
                error(line, toks[0].column, msg.str());
            }
        } else if (kw == "sweep") {
            if (!require_levels(line, toks[0]) || !expect_argc(line, toks, 4, 4)) return;
            if (model_.sweep) {
                error(line, toks[0].column, "at most one sweep directive is allowed");
                return;
            }
            SweepDirective sweep;
            if (!is_identifier(toks[1].text)) {
                error(line, toks[1].column,
                      "expected an identifier, got '" + std::string(toks[1].text) + "'");
                return;
            }
            sweep.variable = std::string(toks[1].text);
            if (!parse_real(toks[2].text, sweep.from) ||
                !parse_real(toks[3].text, sweep.to)) {
                error(line, toks[2].column, "expected real sweep bounds");
                return;
            }
            if (!parse_int(toks[4].text, sweep.points) || sweep.points < 1) {
                error(line, toks[4].column, "sweep points must be a positive integer");
                return;
            }
            model_.sweep = std::move(sweep);
        } else if (kw == "observe") {
            if (!require_levels(line, toks[0])) return;
            if (toks.size() < 2) {
                error(line, toks[0].column, "'observe' expects pop, coh or waveplate");
                return;
            }
            const std::string_view what = toks[1].text;
            Observable obs;
            if (what == "pop") {
                if (!expect_argc(line, toks, 2, 2)) return;
                obs.kind = Observable::Kind::Population;
                if (!level_index(line, toks[2], obs.i)) return;
            } else if (what == "coh") {
                if (!expect_argc(line, toks, 3, 3)) return;
                obs.kind = Observable::Kind::Coherence;
                if (!level_index(line, toks[2], obs.i) ||
                    !level_index(line, toks[3], obs.j))
                    return;
            } else if (what == "waveplate") {
                if (!expect_argc(line, toks, 1, 1)) return;
                obs.kind = Observable::Kind::Waveplate;
                if (model_.n_levels != 15) {
                    error(line, toks[1].column, "observe waveplate requires levels 15");
                    return;
                }
            } else {
                error(line, toks[1].column,
                      "unknown observable '" + std::string(what) + "'");
                return;
            }
            model_.observables.push_back(obs);
        } else {
            error(line, toks[0].column, "unknown directive '" + std::string(kw) + "'");
        }
    }

    std::string_view text_;
    ModelFile model_;
    std::vector<Diagnostic> diagnostics_;
    bool levels_seen_ = false;
};

}  // namespace

std::string render(const Diagnostic& d) {
    std::ostringstream out;
    out << d.line << ":" << d.column << ": " << d.message;
    return out.str();
}

std::vector<std::string> column_names(const Observable& obs) {
    std::ostringstream base;
    switch (obs.kind) {
        case Observable::Kind::Population:
            base << "pop" << obs.i;
            return {base.str()};
        case Observable::Kind::Coherence:
            base << "coh" << obs.i << "_" << obs.j;
            return {base.str() + ".re", base.str() + ".im"};
        case Observable::Kind::Waveplate:
            return {"phi_plus", "phi_minus", "trans_plus", "trans_minus", "dphi"};
    }
    throw std::logic_error("unreachable observable kind");
}

ParseResult parse_model(std::string_view text) { return Parser(text).run(); }

std::string serialize_model(const ModelFile& model) {
    std::ostringstream out;
    out << "levels " << model.n_levels << "\n";
    for (const auto& [key, value] : model.ham) {
        if (value.c0 == Complex{} && value.c1 == Complex{}) continue;
        out << "ham " << key.first << " " << key.second << " "
            << format_complex(value.c0);
        if (value.c1 != Complex{}) out << " " << format_complex(value.c1);
        out << "\n";
    }
    auto emit_real_entries = [&out](const char* kind,
                                    const std::map<EntryKey, LinearReal>& table) {
        for (const auto& [key, value] : table) {
            if (value.c0 == 0.0 && value.c1 == 0.0) continue;
            out << kind << " " << key.first << " " << key.second << " "
                << format_real(value.c0);
            if (value.c1 != 0.0) out << " " << format_real(value.c1);
            out << "\n";
        }
    };
    emit_real_entries("src", model.src);
    emit_real_entries("deph", model.deph);
    if (model.sweep) {
        out << "sweep " << model.sweep->variable << " " << format_real(model.sweep->from)
            << " " << format_real(model.sweep->to) << " " << model.sweep->points << "\n";
    }
    for (const Observable& obs : model.observables) {
        switch (obs.kind) {
            case Observable::Kind::Population:
                out << "observe pop " << obs.i << "\n";
                break;
            case Observable::Kind::Coherence:
                out << "observe coh " << obs.i << " " << obs.j << "\n";
                break;
            case Observable::Kind::Waveplate:
                out << "observe waveplate\n";
                break;
        }
    }
    return out.str();
}

SystemSpec instantiate(const ModelFile& model, double x) {
    if (model.n_levels < 1 || model.n_levels > kMaxLevels)
        throw std::invalid_argument("model has no valid levels declaration");

    const int n = model.n_levels;
    SystemSpec spec;
    spec.n_levels = n;
    spec.hamiltonian = ComplexMatrix::Zero(n, n);
    spec.source = RealMatrix::Zero(n, n);
    spec.dephasing = RealMatrix::Zero(n, n);
    spec.closed_system = true;

    for (const auto& [key, value] : model.ham)
        spec.hamiltonian(key.first - 1, key.second - 1) = value.c0 + value.c1 * x;
    for (const auto& [key, value] : model.src)
        spec.source(key.first - 1, key.second - 1) = value.c0 + value.c1 * x;
    for (const auto& [key, value] : model.deph)
        spec.dephasing(key.first - 1, key.second - 1) = value.c0 + value.c1 * x;

    // Check the structural invariants only; trace closure is the steady-state
    // solver's concern.
    SystemSpec open = spec;
    open.closed_system = false;
    const ValidationReport report = validate_spec(open);
    if (!report.ok()) {
        std::ostringstream msg;
        msg << "invariant violation at x = " << x << ": "
            << report.violations.front().message;
        throw std::invalid_argument(msg.str());
    }
    return spec;
}

std::string emit_csv(const SweepResult& result, std::string_view x_header) {
    std::ostringstream out;
    out << x_header;
    for (const std::string& name : result.columns) out << "," << name;
    out << "\n";
    for (std::size_t row = 0; row < result.x.size(); ++row) {
        out << format_real(result.x[row]);
        for (double value : result.rows[row]) out << "," << format_real(value);
        out << "\n";
    }
    return out.str();
}

}  // namespace liouville::io
