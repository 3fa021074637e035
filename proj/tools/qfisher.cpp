// qfisher: command-line front end for the Fisher information / uncertainty
// library. Exit codes: 0 success, 1 numerical validation failure, 2 usage or
// configuration error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qfisher/qfisher.hpp"
#include "qfisher/self_check.hpp"
#include "report.hpp"

namespace {

using namespace qfisher;
using report::CsvTable;
using report::JsonObject;
using report::number;

constexpr int exit_ok = 0;
constexpr int exit_numerical = 1;
constexpr int exit_usage = 2;

constexpr const char* default_grid_text = "-16:16:2049";

enum class Format { csv, json };

struct RunConfig {
    Grid1D grid;
    bool grid_explicit = false;
    double hbar = 1.0;
    StateSpec state;
    Format format = Format::csv;
    std::optional<std::string> output_path;
    std::uint64_t seed = 0;
};

struct RawOptions {
    std::string grid;
    double hbar = 1.0;
    std::string state = "gaussian:1";
    std::string format;
    std::string out;
    std::uint64_t seed = 0;
};

double parse_number(const std::string& text, const std::string& field) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (text.empty() || used != text.size() || !std::isfinite(v))
        throw qfisher::invalid_argument(field + ": '" + text + "' is not a finite number");
    return v;
}

Grid1D parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(':', start);
        parts.push_back(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (parts.size() != 3) throw qfisher::invalid_argument("grid: expected MIN:MAX:N, got '" + text + "'");
    const double lo = parse_number(parts[0], "grid MIN");
    const double hi = parse_number(parts[1], "grid MAX");
    const double n = parse_number(parts[2], "grid N");
    if (n < 0 || n != std::floor(n) || n > 1e9)
        throw qfisher::invalid_argument("grid N: '" + parts[2] + "' is not a point count");
    try {
        return make_grid(lo, hi, static_cast<std::size_t>(n));
    } catch (const qfisher::invalid_argument& e) {
        throw qfisher::invalid_argument(std::string("grid: ") + e.what());
    }
}

RunConfig resolve_config(const RawOptions& raw, bool grid_flag_given, Format default_format) {
    RunConfig cfg{parse_grid(default_grid_text)};
    if (grid_flag_given) {
        cfg.grid = parse_grid(raw.grid);
        cfg.grid_explicit = true;
    } else if (const char* env = std::getenv("QFISHER_DEFAULT_GRID"); env && *env) {
        cfg.grid = parse_grid(env);
        cfg.grid_explicit = true;
    }
    if (!(raw.hbar > 0.0) || !std::isfinite(raw.hbar))
        throw qfisher::invalid_argument("hbar: must be a positive number");
    cfg.hbar = raw.hbar;
    cfg.state = parse_state(raw.state);
    if (raw.format.empty())
        cfg.format = default_format;
    else
        cfg.format = raw.format == "json" ? Format::json : Format::csv;
    if (!raw.out.empty()) cfg.output_path = raw.out;
    cfg.seed = raw.seed;
    return cfg;
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (!cfg.output_path) {
        std::cout << text;
        return;
    }
    std::ofstream f(*cfg.output_path, std::ios::binary);
    if (!f) throw qfisher::invalid_argument("out: cannot open '" + *cfg.output_path + "' for writing");
    f << text;
}

JsonObject header(const RunConfig& cfg, const char* command) {
    JsonObject grid;
    grid.add("x_min", cfg.grid.x_min())
        .add("x_max", cfg.grid.x_max())
        .add("n_points", static_cast<std::uint64_t>(cfg.grid.n_points()));
    JsonObject o;
    o.add("schema", report::schema_version)
        .add("command", command)
        .add("state", cfg.state.to_string())
        .add("grid", grid)
        .add("hbar", cfg.hbar);
    return o;
}

WavefunctionGrid load_state(const RunConfig& cfg) {
    auto psi = corpus(cfg.state, cfg.grid);
    const double edge = std::max(std::norm(psi.psi().front()), std::norm(psi.psi().back()));
    if (edge >= endpoint_warning_level)
        std::cerr << "warning: density " << edge << " at grid endpoint exceeds "
                  << endpoint_warning_level << "; truncation error may be visible\n";
    return psi;
}

std::string field_value_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
    CsvTable t({"field", "value"});
    for (const auto& [k, v] : rows) t.row({k, v});
    return t.str();
}

// ---------------------------------------------------------------------------

int cmd_fisher(const RunConfig& cfg) {
    const auto psi = load_state(cfg);
    const auto loc = fisher_location(density_of(psi));
    const auto amp = fisher_amplitude(psi);
    const auto id = momentum_identity_check(psi, cfg.hbar);

    if (cfg.format == Format::json) {
        auto fr = [](const FisherResult& r) {
            JsonObject o;
            o.add("value", r.value).add("method", std::string(to_string(r.method))).add("excluded_mass", r.excluded_mass);
            return o;
        };
        JsonObject idj;
        idj.add("lhs", id.lhs).add("rhs", id.rhs).add("relative_gap", id.relative_gap);
        auto o = header(cfg, "fisher");
        o.add("log_derivative", fr(loc)).add("amplitude_derivative", fr(amp)).add("momentum_identity", idj);
        emit(cfg, o.str() + "\n");
    } else {
        emit(cfg, field_value_csv({
                      {"log_derivative.value", number(loc.value)},
                      {"log_derivative.excluded_mass", number(loc.excluded_mass)},
                      {"amplitude_derivative.value", number(amp.value)},
                      {"amplitude_derivative.excluded_mass", number(amp.excluded_mass)},
                      {"momentum_identity.lhs", number(id.lhs)},
                      {"momentum_identity.rhs", number(id.rhs)},
                      {"momentum_identity.relative_gap", number(id.relative_gap)},
                  }));
    }
    return exit_ok;
}

int cmd_kl_scan(const RunConfig& cfg, const std::vector<double>& deltas_in) {
    const auto psi = load_state(cfg);
    const auto deltas = deltas_in.empty() ? default_scan_deltas(cfg.grid) : deltas_in;
    const auto scan = kl_quadratic_scan(density_of(psi), deltas);

    if (cfg.format == Format::json) {
        std::vector<JsonObject> rows;
        for (std::size_t i = 0; i < scan.shifts.size(); ++i) {
            JsonObject r;
            r.add("delta", scan.shifts[i])
                .add("kl", scan.kl_values[i])
                .add("quadratic", scan.quadratic_values[i])
                .add("residual", scan.residuals[i]);
            rows.push_back(r);
        }
        auto o = header(cfg, "kl-scan");
        o.add("fisher", scan.fisher).add("rows", rows);
        emit(cfg, o.str() + "\n");
    } else {
        CsvTable t({"delta", "kl", "quadratic", "residual"});
        for (std::size_t i = 0; i < scan.shifts.size(); ++i)
            t.row({number(scan.shifts[i]), number(scan.kl_values[i]), number(scan.quadratic_values[i]),
                   number(scan.residuals[i])});
        emit(cfg, t.str());
    }
    return exit_ok;
}

int cmd_uncertainty(const RunConfig& cfg) {
    const auto psi = load_state(cfg);
    const auto u = uncertainty_report(psi, cfg.hbar);
    if (cfg.format == Format::json) {
        auto o = header(cfg, "uncertainty");
        o.add("delta_x", u.delta_x)
            .add("delta_p", u.delta_p)
            .add("product", u.product)
            .add("bound", u.bound)
            .add("fisher_value", u.fisher_value)
            .add("cramer_rao_ratio", u.cramer_rao_ratio())
            .add("heisenberg_satisfied", u.satisfies_heisenberg())
            .add("minimum_uncertainty", u.saturates());
        emit(cfg, o.str() + "\n");
    } else {
        emit(cfg, field_value_csv({
                      {"delta_x", number(u.delta_x)},
                      {"delta_p", number(u.delta_p)},
                      {"product", number(u.product)},
                      {"bound", number(u.bound)},
                      {"fisher_value", number(u.fisher_value)},
                      {"hbar", number(u.hbar)},
                      {"cramer_rao_ratio", number(u.cramer_rao_ratio())},
                      {"heisenberg_satisfied", u.satisfies_heisenberg() ? "true" : "false"},
                      {"minimum_uncertainty", u.saturates() ? "true" : "false"},
                  }));
    }
    return u.satisfies_heisenberg() ? exit_ok : exit_numerical;
}

int cmd_gaussian_min(const RunConfig& cfg, const std::vector<double>& amplitudes, const std::string& shape_name) {
    if (!cfg.state.is_gaussian() || cfg.state.params.size() != 1)
        throw qfisher::invalid_argument("gaussian-min: --state must be gaussian:DX");
    const double dx = cfg.state.params[0];
    if (!(dx > 0.0)) throw qfisher::invalid_argument("gaussian-min: delta_x must be positive");
    PerturbationShape shape;
    if (shape_name == "default")
        shape = default_perturbation(dx);
    else if (shape_name == "none")
        shape = [](double) { return 0.0; };
    else
        throw qfisher::invalid_argument("shape: expected default or none, got '" + shape_name + "'");
    const Grid1D grid = cfg.grid_explicit ? cfg.grid : probe_grid(dx);
    const auto rows = gaussian_minimality_probe(grid, dx, amplitudes, cfg.hbar, shape);
    const bool ok = minimum_at_zero(rows);

    if (cfg.format == Format::json) {
        std::vector<JsonObject> out;
        for (const auto& r : rows) {
            JsonObject j;
            j.add("amplitude", r.amplitude).add("product", r.product);
            out.push_back(j);
        }
        RunConfig shown = cfg;
        shown.grid = grid;
        auto o = header(shown, "gaussian-min");
        o.add("delta_x", dx).add("shape", shape_name).add("minimum_at_zero", ok).add("rows", out);
        emit(cfg, o.str() + "\n");
    } else {
        CsvTable t({"amplitude", "product"});
        for (const auto& r : rows) t.row({number(r.amplitude), number(r.product)});
        emit(cfg, t.str());
    }
    return ok ? exit_ok : exit_numerical;
}

struct CrSimOptions {
    std::string estimator = "mean";
    std::uint64_t n = 100;
    std::uint64_t trials = 10000;
    double theta = 0.0;
    std::string dump_trials;
};

int cmd_cr_sim(const RunConfig& cfg, const CrSimOptions& opt) {
    const auto spec = parse_estimator(opt.estimator);
    const auto psi = load_state(cfg);
    const LocationFamily family(density_of(psi), opt.theta);
    const auto r = run_experiment(spec, family, opt.n, opt.trials, cfg.seed);

    if (!opt.dump_trials.empty()) {
        const auto est = simulate_estimates(spec, family, family.theta, opt.n, opt.trials, cfg.seed);
        CsvTable t({"trial", "seed", "estimate"});
        for (std::size_t i = 0; i < est.size(); ++i)
            t.row({std::to_string(i), std::to_string(mix_seed(cfg.seed, i)), number(est[i])});
        std::ofstream f(opt.dump_trials, std::ios::binary);
        if (!f) throw qfisher::invalid_argument("dump-trials: cannot open '" + opt.dump_trials + "'");
        f << t.str();
    }

    if (cfg.format == Format::json) {
        auto o = header(cfg, "cr-sim");
        o.add("estimator", r.estimator)
            .add("n_samples", static_cast<std::uint64_t>(r.n_samples))
            .add("n_trials", static_cast<std::uint64_t>(r.n_trials))
            .add("seed", r.seed)
            .add("theta", r.theta)
            .add("empirical_mean", r.empirical_mean)
            .add("empirical_variance", r.empirical_variance)
            .add("variance_std_error", r.variance_std_error)
            .add("bias_slope", r.bias_slope)
            .add("fisher", r.fisher)
            .add("cr_bound", r.cr_bound)
            .add("bound_satisfied", r.bound_satisfied);
        emit(cfg, o.str() + "\n");
    } else {
        emit(cfg, field_value_csv({
                      {"estimator", r.estimator},
                      {"n_samples", std::to_string(r.n_samples)},
                      {"n_trials", std::to_string(r.n_trials)},
                      {"seed", std::to_string(r.seed)},
                      {"theta", number(r.theta)},
                      {"empirical_mean", number(r.empirical_mean)},
                      {"empirical_variance", number(r.empirical_variance)},
                      {"variance_std_error", number(r.variance_std_error)},
                      {"bias_slope", number(r.bias_slope)},
                      {"fisher", number(r.fisher)},
                      {"cr_bound", number(r.cr_bound)},
                      {"bound_satisfied", r.bound_satisfied ? "true" : "false"},
                  }));
    }
    return r.bound_satisfied ? exit_ok : exit_numerical;
}

int cmd_self_check() {
    bool all = true;
    for (const auto& c : run_self_check()) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << " (" << c.seconds
                  << " s)\n";
        all = all && c.passed;
    }
    std::cout << (all ? "self-check passed\n" : "self-check FAILED\n");
    return all ? exit_ok : exit_numerical;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qfisher: Fisher information, Kullback divergence and uncertainty products "
                 "for one-dimensional wavefunctions"};
    app.require_subcommand(0, 1);

    RawOptions raw;
    bool self_check = false;
    auto* grid_opt = app.add_option("--grid", raw.grid, "Grid as MIN:MAX:N (N odd, >= 17)");
    app.add_option("--hbar", raw.hbar, "Reduced Planck constant")->capture_default_str();
    app.add_option("--state", raw.state, "State as NAME:P1[:P2]")->capture_default_str();
    app.add_option("--format", raw.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", raw.out, "Write output to PATH instead of stdout");
    app.add_option("--seed", raw.seed, "Base seed for Monte Carlo runs")->capture_default_str();
    app.add_flag("--self-check", self_check, "Run the invariant suite and report pass/fail");

    auto* fisher = app.add_subcommand("fisher", "Fisher information by both routes plus the momentum identity");
    auto* kl = app.add_subcommand("kl-scan", "Kullback divergence against its quadratic approximation");
    std::vector<double> deltas;
    kl->add_option("--deltas", deltas, "Comma-separated shifts (lattice multiples)")->delimiter(',');
    auto* unc = app.add_subcommand("uncertainty", "Position/momentum uncertainty report");
    auto* gmin = app.add_subcommand("gaussian-min", "Uncertainty products of perturbed Gaussian packets");
    std::vector<double> amplitudes{-0.2, -0.1, 0.0, 0.1, 0.2};
    std::string shape = "default";
    gmin->add_option("--amplitudes", amplitudes, "Comma-separated perturbation amplitudes")->delimiter(',');
    gmin->add_option("--shape", shape, "Perturbation shape: default or none")->capture_default_str();
    auto* cr = app.add_subcommand("cr-sim", "Monte Carlo Cramér-Rao experiment");
    CrSimOptions cr_opt;
    cr->add_option("--estimator", cr_opt.estimator, "mean, median or shrunk:C")->capture_default_str();
    cr->add_option("--n", cr_opt.n, "Samples per trial")->capture_default_str();
    cr->add_option("--trials", cr_opt.trials, "Number of trials (>= 1000)")->capture_default_str();
    cr->add_option("--theta", cr_opt.theta, "True location parameter (lattice multiple)")->capture_default_str();
    cr->add_option("--dump-trials", cr_opt.dump_trials, "Write per-trial estimates as CSV to PATH");
    for (auto* sub : {fisher, kl, unc, gmin, cr}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (self_check) return cmd_self_check();
        const bool is_cr = cr->parsed();
        const RunConfig cfg = resolve_config(raw, grid_opt->count() > 0, is_cr ? Format::json : Format::csv);
        if (fisher->parsed()) return cmd_fisher(cfg);
        if (kl->parsed()) return cmd_kl_scan(cfg, deltas);
        if (unc->parsed()) return cmd_uncertainty(cfg);
        if (gmin->parsed()) return cmd_gaussian_min(cfg, amplitudes, shape);
        if (is_cr) return cmd_cr_sim(cfg, cr_opt);
        std::cerr << app.help();
        return exit_usage;
    } catch (const qfisher::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const qfisher::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    }
}
