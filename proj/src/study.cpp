#include "iifem/study.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace iifem {

Scheme parse_scheme(std::string_view name) {
    if (name == "galerkin") return Scheme::Galerkin;
    if (name == "mixed_fvm" || name == "mixed-fvm") return Scheme::MixedFvm;
    throw ConfigError("unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(Scheme s) { return s == Scheme::Galerkin ? "galerkin" : "mixed_fvm"; }

// ---------------------------------------------------------------------------
// Pipeline

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

}  // namespace

Discretization solve_problem(const ProblemSpec& problem, int nx, int ny, Scheme scheme, const SolverOptions& solver,
                             bool detect_interface) {
    Discretization d;
    d.mesh = stage("mesh", [&] { return build_uniform_mesh(nx, ny, problem.domain); });
    d.cuts = stage("classify", [&] {
        return detect_interface ? classify_elements(d.mesh, problem.level_set) : uncut_elements(d.mesh, problem.level_set);
    });
    d.bases = stage("basis", [&] { return build_bases(d.cuts, problem.beta); });

    const LoadMode mode = scheme == Scheme::Galerkin ? LoadMode::Pointwise : LoadMode::CellMean;
    std::vector<double> load;
    stage("assemble", [&] {
        d.stiffness = assemble_stiffness(d.mesh, d.cuts, d.bases, problem.beta);
        load = assemble_load(d.mesh, d.cuts, d.bases, problem.source, mode);
        return 0;
    });
    d.system = stage("dirichlet", [&] {
        return apply_dirichlet(d.stiffness, load, d.mesh, DofMap::from_mesh(d.mesh), problem.boundary);
    });
    d.solve = stage("solve", [&] {
        auto rep = cg_solve(d.system.matrix, d.system.rhs, solver.rel_tol, solver.max_iter, solver.precond);
        if (!rep.converged) {
            throw std::runtime_error("conjugate gradients stopped after " + std::to_string(rep.iterations) +
                                     " iterations at relative residual " + std::to_string(rep.relative_residual));
        }
        return rep;
    });
    d.p_dofs = d.system.expand(d.solve.solution);

    if (scheme == Scheme::MixedFvm) {
        d.mixed = stage("recover", [&] {
            const auto fbar = element_mean_source(d.mesh, d.cuts, problem.source);
            return postprocess(d.mesh, d.cuts, d.bases, d.p_dofs, fbar, problem.beta);
        });
    }
    return d;
}

// ---------------------------------------------------------------------------
// Configuration

void StudyConfig::validate() const {
    if (!(beta_minus > 0.0) || !(beta_plus > 0.0)) throw ConfigError("coefficients must be positive");
    if (!(radius > 0.0)) throw ConfigError("radius must be positive");
    if (ladder.empty()) throw ConfigError("mesh ladder is empty");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (ladder[i] < 1) throw ConfigError("ladder entries must be >= 1");
        if (i > 0 && ladder[i] <= ladder[i - 1]) throw ConfigError("ladder must be strictly increasing");
    }
    if (!(solver.rel_tol > 0.0 && solver.rel_tol < 1.0)) throw ConfigError("rel-tol must lie in (0, 1)");
    if (solver.max_iter < 0) throw ConfigError("max-iter must be non-negative");
    if (custom && !custom->exact) throw ConfigError("custom problem needs an exact solution for error measurement");
}

ProblemSpec StudyConfig::problem() const {
    if (custom) return *custom;
    return circle_r3_problem(radius, {beta_minus, beta_plus});
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
    const std::string s(trim(v));
    try {
        std::size_t used = 0;
        const double d = std::stod(s, &used);
        if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError("invalid number for " + std::string(key) + ": '" + s + "'");
}

int parse_int(std::string_view key, std::string_view v) {
    v = trim(v);
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError("invalid integer for " + std::string(key) + ": '" + std::string(v) + "'");
    }
    return out;
}

}  // namespace

std::vector<int> parse_ladder(std::string_view text) {
    std::vector<int> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        out.push_back(parse_int("ladder", text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    if (out.empty()) throw ConfigError("mesh ladder is empty");
    return out;
}

void apply_setting(StudyConfig& config, std::string_view key_in, std::string_view value) {
    std::string key(trim(key_in));
    std::replace(key.begin(), key.end(), '-', '_');
    value = trim(value);
    try {
        if (key == "scheme") {
            config.scheme = parse_scheme(value);
        } else if (key == "beta_minus") {
            config.beta_minus = parse_double(key, value);
        } else if (key == "beta_plus") {
            config.beta_plus = parse_double(key, value);
        } else if (key == "radius") {
            config.radius = parse_double(key, value);
        } else if (key == "ladder") {
            config.ladder = parse_ladder(value);
        } else if (key == "rel_tol") {
            config.solver.rel_tol = parse_double(key, value);
        } else if (key == "max_iter") {
            config.solver.max_iter = parse_int(key, value);
        } else if (key == "precond") {
            config.solver.precond = parse_preconditioner(value);
        } else if (key == "out_csv") {
            config.out_csv = std::string(value);
        } else if (key == "out_plot") {
            config.out_plot = std::string(value);
        } else if (key == "dump_mesh") {
            config.dump_mesh = std::string(value);
        } else if (key == "dump_matrix") {
            config.dump_matrix = std::string(value);
        } else if (key == "dump_velocity") {
            config.dump_velocity = std::string(value);
        } else if (key == "problem") {
            if (value != "circle_r3") throw ConfigError("only problem = circle_r3 is available from configuration");
        } else {
            throw ConfigError("unknown configuration key '" + key + "'");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

StudyConfig parse_config(std::istream& in, StudyConfig base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv(line);
        if (const auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
        sv = trim(sv);
        if (sv.empty()) continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        try {
            apply_setting(base, sv.substr(0, eq), sv.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return base;
}

StudyConfig load_config(const std::string& path, StudyConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

// ---------------------------------------------------------------------------
// Report

std::string_view column_name(Norm n) {
    switch (n) {
        case Norm::PL2: return "p_l2";
        case Norm::PH1: return "p_h1";
        case Norm::UL2: return "u_l2";
        case Norm::DivL2: return "div_l2";
    }
    return "";
}

std::optional<double> ConvergenceRow::value(Norm n) const {
    switch (n) {
        case Norm::PL2: return p_l2;
        case Norm::PH1: return p_h1;
        case Norm::UL2: return u_l2;
        case Norm::DivL2: return div_l2;
    }
    return std::nullopt;
}

std::optional<double> ConvergenceReport::step_order(Norm n, std::size_t i) const {
    if (i == 0 || i >= rows.size()) return std::nullopt;
    const auto e0 = rows[i - 1].value(n), e1 = rows[i].value(n);
    if (!e0 || !e1 || !(*e0 > 0.0) || !(*e1 > 0.0)) return std::nullopt;
    return iifem::step_order(rows[i - 1].h, *e0, rows[i].h, *e1);
}

std::optional<double> ConvergenceReport::fitted_order(Norm n) const {
    std::vector<double> hs, es;
    for (const auto& r : rows) {
        const auto v = r.value(n);
        if (!v || !(*v > 0.0)) return std::nullopt;
        hs.push_back(r.h);
        es.push_back(*v);
    }
    if (hs.size() < 2) return std::nullopt;
    return fit_order(hs, es);
}

namespace {

void write_outputs(const StudyConfig& config, const ConvergenceReport& report) {
    if (report.rows.empty()) return;
    if (!config.out_csv.empty()) emit_csv(report, config.out_csv);
    if (!config.out_plot.empty()) emit_plotdata(report, config.out_plot);
}

void write_dumps(const StudyConfig& config, const Discretization& d) {
    const auto open = [](const std::string& path) {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write '" + path + "'");
        return out;
    };
    if (!config.dump_mesh.empty()) {
        auto out = open(config.dump_mesh);
        dump_mesh(d.mesh, out);
    }
    if (!config.dump_matrix.empty()) {
        auto out = open(config.dump_matrix);
        d.system.matrix.dump(out);
    }
    if (!config.dump_velocity.empty() && d.mixed) {
        auto out = open(config.dump_velocity);
        dump_velocity(d.mixed->velocity, out);
    }
}

}  // namespace

ConvergenceReport run_study(const StudyConfig& config) {
    config.validate();
    const ProblemSpec problem = config.problem();
    const ExactSolution& exact = *problem.exact;

    ConvergenceReport report;
    report.scheme = config.scheme;
    for (std::size_t li = 0; li < config.ladder.size(); ++li) {
        const int n = config.ladder[li];
        Discretization d;
        try {
            d = solve_problem(problem, n, n, config.scheme, config.solver, config.detect_interface);
        } catch (const StageError& e) {
            write_outputs(config, report);
            throw StudyError(n, e.stage, e.what(), report);
        }

        ConvergenceRow row;
        row.inv_h = n;
        row.h = 1.0 / n;
        row.cg_iterations = d.solve.iterations;
        row.relative_residual = d.solve.relative_residual;
        try {
            row.p_l2 = l2_error(d.mesh, d.cuts, d.bases, d.p_dofs, exact.p);
            row.p_h1 = h1_broken_error(d.mesh, d.cuts, d.bases, d.p_dofs, exact.p, exact.grad_p);
            if (d.mixed) {
                const auto hd = hdiv_error(d.mesh, d.cuts, d.mixed->velocity, exact.u, problem.source);
                row.u_l2 = hd.u_l2;
                row.div_l2 = hd.div_l2;
                row.flux_mismatch = check_flux_continuity(d.mesh, d.mixed->fluxes);
                double defect = 0.0;
                for (std::size_t t = 0; t < d.mixed->velocity.size(); ++t) {
                    defect = std::max(defect, std::abs(d.mixed->velocity[t].divergence() - d.mixed->fbar[t]));
                }
                row.divergence_defect = defect;
            }
        } catch (const std::exception& e) {
            write_outputs(config, report);
            throw StudyError(n, "measure", e.what(), report);
        }
        report.rows.push_back(row);
        if (li + 1 == config.ladder.size()) write_dumps(config, d);
    }
    write_outputs(config, report);
    return report;
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::string format(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string sci(double v) { return format("%.5e", v); }
std::string sig(double v) { return format("%.6g", v); }

}  // namespace

void write_csv(const ConvergenceReport& report, std::ostream& os) {
    if (report.rows.empty()) throw InvalidArgument("write_csv: empty report");
    os << "inv_h";
    for (Norm n : all_norms) os << ',' << column_name(n) << ',' << column_name(n) << "_order";
    os << '\n';
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        os << report.rows[i].inv_h;
        for (Norm n : all_norms) {
            const auto v = report.rows[i].value(n);
            const auto o = report.step_order(n, i);
            os << ',' << (v ? sci(*v) : "") << ',' << (o ? sig(*o) : "");
        }
        os << '\n';
    }
    os << "fit";
    for (Norm n : all_norms) {
        const auto o = report.fitted_order(n);
        os << ',' << (o ? sig(*o) : "") << ',';
    }
    os << '\n';
}

void emit_csv(const ConvergenceReport& report, const std::string& path) {
    std::ostringstream buf;
    write_csv(report, buf);
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << buf.str())) throw IoError("cannot write '" + path + "'");
}

void write_plotdata(const ConvergenceReport& report, std::ostream& os) {
    bool first = true;
    for (Norm n : all_norms) {
        if (!first) os << '\n';
        first = false;
        const bool present = !report.rows.empty() && std::all_of(report.rows.begin(), report.rows.end(), [&](const auto& r) {
            const auto v = r.value(n);
            return v && *v > 0.0;
        });
        if (!present) {
            os << "# skipped " << column_name(n) << '\n';
            continue;
        }
        os << "# " << column_name(n) << ": log10_h log10_error\n";
        for (const auto& r : report.rows) {
            os << format("%.17g", std::log10(r.h)) << ' ' << format("%.17g", std::log10(*r.value(n))) << '\n';
        }
    }
}

void emit_plotdata(const ConvergenceReport& report, const std::string& path) {
    std::ostringstream buf;
    write_plotdata(report, buf);
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << buf.str())) throw IoError("cannot write '" + path + "'");
}

void print_table(const ConvergenceReport& report, std::ostream& os) {
    char line[256];
    os << "scheme: " << to_string(report.scheme) << '\n';
    std::snprintf(line, sizeof line, "%6s  %-10s %6s  %-10s %6s  %-10s %6s  %-10s %6s  %5s\n", "1/h", "p_l2", "order",
                  "p_h1", "order", "u_l2", "order", "div_l2", "order", "iters");
    os << line;
    const auto cell = [](std::optional<double> v) { return v ? sci(*v) : std::string("-"); };
    const auto ord = [](std::optional<double> v) { return v ? format("%.3f", *v) : std::string(""); };
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& r = report.rows[i];
        std::snprintf(line, sizeof line, "%6d  %-10s %6s  %-10s %6s  %-10s %6s  %-10s %6s  %5d\n", r.inv_h,
                      cell(r.p_l2).c_str(), ord(report.step_order(Norm::PL2, i)).c_str(), cell(r.p_h1).c_str(),
                      ord(report.step_order(Norm::PH1, i)).c_str(), cell(r.u_l2).c_str(),
                      ord(report.step_order(Norm::UL2, i)).c_str(), cell(r.div_l2).c_str(),
                      ord(report.step_order(Norm::DivL2, i)).c_str(), r.cg_iterations);
        os << line;
    }
    std::snprintf(line, sizeof line, "%6s  %-10s %6s  %-10s %6s  %-10s %6s  %-10s %6s\n", "Order", "",
                  ord(report.fitted_order(Norm::PL2)).c_str(), "", ord(report.fitted_order(Norm::PH1)).c_str(), "",
                  ord(report.fitted_order(Norm::UL2)).c_str(), "", ord(report.fitted_order(Norm::DivL2)).c_str());
    os << line;
}

}  // namespace iifem
