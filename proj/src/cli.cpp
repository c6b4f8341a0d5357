#include "hjb/cli.hpp"
#include "hjb/config.hpp"
#include "hjb/diagnostics.hpp"
#include "hjb/errors.hpp"
#include "hjb/hjb_solver.hpp"
#include "hjb/numeric.hpp"
#include "hjb/ode.hpp"
#include "hjb/policy.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hjb::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

uint64_t fnv1a64(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// All artifacts land via temp file + rename so a crashed run never leaves a
// half-written output.
class RunDir {
public:
    RunDir(std::string dir, std::string subcommand, std::string config_text)
        : dir_(std::move(dir)), subcommand_(std::move(subcommand)),
          config_hash_(hex64(fnv1a64(config_text))), start_(std::chrono::steady_clock::now()) {
        if (!dir_.empty()) fs::create_directories(dir_);
    }

    bool enabled() const { return !dir_.empty(); }

    void write(const std::string& name, const std::string& content) {
        if (!enabled()) return;
        const fs::path target = fs::path(dir_) / name;
        const fs::path tmp = target.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << content;
        }
        fs::rename(tmp, target);
        outputs_.push_back(name);
    }

    void finalize() {
        if (!enabled()) return;
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start_)
                            .count();
        json m;
        m["config_hash"] = config_hash_;
        m["tool_version"] = "0.1.0";
        m["subcommand"] = subcommand_;
        m["outputs"] = outputs_;
        m["wall_time_ms"] = ms;
        outputs_.push_back("manifest.json");
        m["outputs"] = outputs_;
        const fs::path target = fs::path(dir_) / "manifest.json";
        const fs::path tmp = target.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << m.dump(2) << "\n";
        }
        fs::rename(tmp, target);
    }

private:
    std::string dir_;
    std::string subcommand_;
    std::string config_hash_;
    std::vector<std::string> outputs_;
    std::chrono::steady_clock::time_point start_;
};

std::string value_csv(const ModelSpec& m, const ValueGrid& grid) {
    const auto res = grid_residuals(m, grid);
    std::ostringstream os;
    os << "k,V,dV,c_policy,residual\n";
    for (size_t i = 0; i < grid.size(); ++i) {
        const double slope = grid.node_slope(i);
        double c = 0.0;
        if (slope > 0.0) c = maximize_hamiltonian(m, grid.nodes()[i], slope).c_star;
        os << num(grid.nodes()[i]) << ',' << num(grid.values()[i]) << ',' << num(slope) << ','
           << num(c) << ',' << num(res[i]) << '\n';
    }
    return os.str();
}

std::string path_csv(const ModelSpec& m, const Path& path) {
    std::ostringstream os;
    os << "t,k,c,discounted_utility_density\n";
    for (size_t i = 0; i < path.times.size(); ++i) {
        const double util = m.u(path.consumption[i], path.capital[i]);
        const double dens = is_neg_inf(util) ? kNegInf : std::exp(-m.rho * path.times[i]) * util;
        os << num(path.times[i]) << ',' << num(path.capital[i]) << ',' << num(path.consumption[i])
           << ',' << num(dens) << '\n';
    }
    return os.str();
}

json certificate_json(const CertificateReport& cert) {
    json j;
    j["in_class_V"] = cert.in_class_V;
    j["increasing_ok"] = cert.increasing_ok;
    j["concavity_ok"] = cert.concavity_ok;
    j["concavity_defect"] = cert.concavity_defect;
    j["growth_condition"] = to_string(cert.growth);
    j["growth_tol"] = cert.growth_tol;
    j["max_abs_residual"] = cert.max_abs_residual;
    j["iterations"] = cert.iterations;
    j["residual_nodes"] = cert.residual_nodes;
    j["residual_profile"] = cert.residual_profile;
    json samples = json::array();
    for (const auto& s : cert.decay_samples)
        samples.push_back({{"k_bar", s.k_bar}, {"T", s.horizon}, {"value", s.discounted_value}});
    j["decay_samples"] = samples;
    return j;
}

json path_summary_json(const ModelSpec& m, const Path& path) {
    json j;
    j["termination"] = path.meta.termination;
    j["integrator"] = path.meta.integrator;
    j["steps_accepted"] = path.meta.stats.accepted;
    j["steps_rejected"] = path.meta.stats.rejected;
    j["t_end"] = path.times.back();
    j["k_end"] = path.capital.back();
    j["min_capital"] = path.min_capital();
    if (!path.meta.note.empty()) j["note"] = path.meta.note;
    try {
        const PayoffResult pr = payoff(m, path, Quadrature::clamped_singular);
        j["payoff"] = std::isfinite(pr.value) ? json(pr.value) : json("-inf");
        j["tail_bound"] = pr.tail_bound;
    } catch (const UndefinedPayoff& e) {
        j["payoff"] = "undefined";
        j["payoff_note"] = e.what();
    }
    return j;
}

ValueGrid load_value_csv(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open " + file.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> k, v;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
        if (cells.size() < 2) throw ConfigError("malformed value.csv row: " + line);
        k.push_back(cells[0]);
        v.push_back(cells[1]);
    }
    return ValueGrid(std::move(k), std::move(v));
}

Path load_path_csv(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open " + file.string());
    std::string line;
    std::getline(in, line);
    Path p;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
        if (cells.size() < 3) throw ConfigError("malformed path.csv row: " + line);
        p.times.push_back(cells[0]);
        p.capital.push_back(cells[1]);
        p.consumption.push_back(cells[2]);
    }
    p.meta.termination = "completed";
    p.meta.integrator = "file";
    return p;
}

// Solve fresh, or reuse value.csv already present in the run directory.
std::pair<ValueGrid, bool> obtain_value_grid(const ModelConfig& mc, const std::string& out_dir,
                                             bool verbose) {
    if (!out_dir.empty()) {
        const fs::path existing = fs::path(out_dir) / "value.csv";
        if (fs::exists(existing)) {
            if (verbose) std::cout << "reusing " << existing.string() << " (no re-solve)\n";
            return {load_value_csv(existing), true};
        }
    }
    auto grid = ValueGrid::log_spaced(mc.model.k_lo, mc.model.k_hi, mc.grid_n);
    auto [solved, cert] = solve_hjb(mc.model, grid);
    if (verbose)
        std::cout << "solved " << mc.model.name << " on " << mc.grid_n
                  << " nodes; max residual " << cert.max_abs_residual << "\n";
    return {std::move(solved), false};
}

int cmd_check(const ModelConfig& mc, const std::string& out_dir, bool verbose) {
    RunDir run(out_dir, "check", mc.source_text);
    const AssumptionReport rep = check_assumptions(mc.model, SampleGrid{}, mc.a6);
    json j;
    j["sample_count"] = rep.sample_count;
    json verdicts = json::array();
    std::cout << "assumption  status   evidence\n";
    for (const auto& v : rep.verdicts) {
        std::cout << "A" << v.id << "          " << to_string(v.status);
        for (size_t s = std::strlen(to_string(v.status)); s < 9; ++s) std::cout << ' ';
        std::cout << (v.witness ? v.witness->inequality : v.evidence) << "\n";
        json e;
        e["id"] = v.id;
        e["status"] = to_string(v.status);
        e["evidence"] = v.evidence;
        if (v.witness)
            e["witness"] = {{"x", v.witness->x}, {"y", v.witness->y}, {"violated", v.witness->inequality}};
        verdicts.push_back(e);
    }
    j["verdicts"] = verdicts;
    run.write("assumptions.json", j.dump(2) + "\n");
    run.finalize();
    (void)verbose;
    return rep.fail_count() == 0 ? 0 : 1;
}

int cmd_solve(const ModelConfig& mc, const std::string& out_dir, bool verbose) {
    RunDir run(out_dir, "solve", mc.source_text);
    auto grid = ValueGrid::log_spaced(mc.model.k_lo, mc.model.k_hi, mc.grid_n);
    auto [solved, cert] = solve_hjb(mc.model, grid);
    if (verbose)
        std::cout << "converged in " << cert.iterations << " sweeps; max residual "
                  << cert.max_abs_residual << "; growth " << to_string(cert.growth) << "\n";
    run.write("value.csv", value_csv(mc.model, solved));
    run.write("certificate.json", certificate_json(cert).dump(2) + "\n");
    run.finalize();
    std::cout << (cert.in_class_V ? "certificate: in class" : "certificate: NOT in class") << "\n";
    return cert.in_class_V ? 0 : 1;
}

int cmd_policy(const ModelConfig& mc, const std::string& out_dir, double k, double p) {
    RunDir run(out_dir, "policy", mc.source_text);
    const PolicyResult res = maximize_hamiltonian(mc.model, k, p);
    json j;
    j["c_star"] = res.c_star;
    j["h_value"] = res.h_value;
    j["foc_residual"] = res.foc_residual;
    j["iterations"] = res.iterations;
    j["interior"] = res.interior;
    j["near_corner"] = res.near_corner;
    std::cout << j.dump(2) << "\n";
    run.write("policy.json", j.dump(2) + "\n");
    run.finalize();
    return 0;
}

int cmd_path(const ModelConfig& mc, const std::string& out_dir, double k0, double t_end,
             bool verbose) {
    RunDir run(out_dir, "path", mc.source_text);
    auto [grid, reused] = obtain_value_grid(mc, out_dir, verbose);
    if (!reused) run.write("value.csv", value_csv(mc.model, grid));
    IntegratorConfig icfg;
    icfg.t_end = t_end;
    const Path path = optimal_path(mc.model, grid, k0, icfg);
    run.write("path.csv", path_csv(mc.model, path));
    const json summary = path_summary_json(mc.model, path);
    run.write("path_summary.json", summary.dump(2) + "\n");
    run.finalize();
    std::cout << summary.dump(2) << "\n";
    return path.completed() ? 0 : 1;
}

int cmd_shoot(const ModelConfig& mc, const std::string& out_dir, double k0, double c0,
              double perturb, double t_end, double cap, bool verbose) {
    RunDir run(out_dir, "shoot", mc.source_text);
    if (c0 <= 0.0) {
        auto [grid, reused] = obtain_value_grid(mc, out_dir, verbose);
        if (!reused) run.write("value.csv", value_csv(mc.model, grid));
        const double slope = grid.deriv(k0);
        c0 = maximize_hamiltonian(mc.model, k0, slope).c_star;
        if (verbose) std::cout << "policy consumption at k0: " << num(c0) << "\n";
    }
    IntegratorConfig icfg;
    icfg.t_end = t_end;
    if (cap > 0.0) icfg.divergence_cap = cap;
    const Path path = euler_shooting(mc.model, k0, c0 + perturb, icfg);
    run.write("path.csv", path_csv(mc.model, path));
    json summary = path_summary_json(mc.model, path);
    summary["c0"] = c0 + perturb;
    run.write("path_summary.json", summary.dump(2) + "\n");
    run.finalize();
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_diagnose(const ModelConfig& mc, const std::string& out_dir, const std::string& path_file) {
    RunDir run(out_dir, "diagnose", mc.source_text);
    const Path path = load_path_csv(path_file);
    const DiagnosticsReport rep = diagnose_path(mc.model, path);
    json j;
    j["euler_residual_sup"] = rep.euler.sup_norm();
    json verdicts = json::array();
    bool all_pass = true;
    for (const auto& v : rep.verdicts) {
        verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"tolerance", v.tolerance}, {"detail", v.detail}});
        all_pass = all_pass && v.pass;
        std::cout << (v.pass ? "[ok]  " : "[bad] ") << v.name << "  (tol " << v.tolerance << ") "
                  << v.detail << "\n";
    }
    j["verdicts"] = verdicts;
    json series = json::array();
    for (size_t i = 0; i < rep.euler.t.size(); ++i)
        series.push_back({{"t", rep.euler.t[i]}, {"value", rep.euler.value[i]}});
    j["euler_residual"] = series;
    run.write("diagnostics.json", j.dump(2) + "\n");
    run.finalize();
    return all_pass ? 0 : 1;
}

int cmd_demo(const std::string& which, double rho, const std::string& out_dir) {
    RunDir run(out_dir, "demo", which + "@" + num(rho));
    if (which == "counterexample") {
        const CounterexampleReport rep = counterexample_suite(1.0);
        if (rho != 2.0) {
            std::cout << "linear model, rho = 1: candidate V(k) = a*k\n";
            std::cout << "  a      max |HJB residual| over 50 nodes\n";
            for (size_t i = 0; i < rep.family_slopes.size(); ++i)
                std::cout << "  " << rep.family_slopes[i] << "    " << num(rep.family_max_residual[i]) << "\n";
            std::cout << "  -> " << rep.family_slopes.size()
                      << " distinct exact solutions; the equation does not identify the value\n";
        }
        if (rho != 1.0) {
            std::cout << "linear model, rho = 2: admissible constant-fraction payoffs (bound "
                      << num(rep.trapped_bound) << ")\n";
            for (size_t i = 0; i < rep.trapped_fractions.size(); ++i)
                std::cout << "  s = " << rep.trapped_fractions[i] << "  payoff " << num(rep.trapped_payoffs[i])
                          << "\n";
            std::cout << "  forced quadratic candidate: V'(" << num(rep.forced_smallest_k)
                      << ") = " << num(rep.forced_vprime_there) << " < 1 (contradiction)\n";
        }
        json j;
        j["exact_solution_family"] = {{"a", rep.family_slopes}, {"max_residual", rep.family_max_residual}, {"pass", rep.family_pass}};
        j["trapped_payoffs"] = {{"fractions", rep.trapped_fractions},
                      {"payoffs", rep.trapped_payoffs},
                      {"bound", rep.trapped_bound},
                      {"forced_smallest_k", rep.forced_smallest_k},
                      {"forced_vprime_there", rep.forced_vprime_there},
                      {"pass", rep.trapped_pass}};
        run.write("counterexample.json", j.dump(2) + "\n");
        run.finalize();
        return rep.family_pass && rep.trapped_pass ? 0 : 1;
    }
    if (which == "magic") {
        const MagicReport rep = magic_of_capital_demo();
        std::cout << "zero-capital startup path k = t^2/16, c = t/8\n";
        std::cout << "  t       k'(t) - F(k,c)\n";
        for (size_t i = 0; i < rep.sample_times.size(); ++i)
            std::cout << "  " << rep.sample_times[i] << "     " << num(rep.admissibility_residual[i]) << "\n";
        std::cout << "  discounted payoff " << num(rep.payoff) << " (tail bound " << num(rep.tail_bound)
                  << ")\n  analytic lower bound " << num(rep.lower_bound) << " -> "
                  << (rep.bound_holds ? "holds" : "VIOLATED") << "\n";
        json j;
        j["sample_times"] = rep.sample_times;
        j["admissibility_residual"] = rep.admissibility_residual;
        j["payoff"] = rep.payoff;
        j["tail_bound"] = rep.tail_bound;
        j["lower_bound"] = rep.lower_bound;
        j["admissible"] = rep.admissible;
        j["bound_holds"] = rep.bound_holds;
        run.write("magic.json", j.dump(2) + "\n");
        run.finalize();
        return rep.admissible && rep.bound_holds ? 0 : 1;
    }
    std::cerr << "demo: expected `counterexample` or `magic`, got `" << which << "`\n";
    return 2;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"hjbgrowth: value functions and optimal paths for capital-accumulation models"};
    app.require_subcommand(1);

    std::string config_file, out_dir, demo_which, path_file;
    bool verbose = false;
    double k0 = 0.0, t_end = 40.0, c0 = 0.0, perturb = 0.0, kp = 0.0, pp = 0.0, rho = 0.0, cap = 0.0;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", config_file, "model definition file");
        if (need_config) opt->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--verbose", verbose, "chatty progress output");
    };

    auto* check = app.add_subcommand("check", "verify the model assumptions by sampling");
    add_common(check, true);

    auto* solve = app.add_subcommand("solve", "solve the HJB equation on the configured grid");
    add_common(solve, true);

    auto* policy = app.add_subcommand("policy", "Hamiltonian-maximizing consumption at (k, p)");
    add_common(policy, true);
    policy->add_option("--k", kp, "capital")->required();
    policy->add_option("--p", pp, "shadow price")->required();

    auto* path = app.add_subcommand("path", "integrate the optimal capital path");
    add_common(path, true);
    path->add_option("--k0", k0, "initial capital")->required();
    path->add_option("--t-end", t_end, "horizon");

    auto* shoot = app.add_subcommand("shoot", "integrate the Euler system from (k0, c0)");
    add_common(shoot, true);
    shoot->add_option("--k0", k0, "initial capital")->required();
    shoot->add_option("--c0", c0, "initial consumption (default: policy at k0 from the solved value)");
    shoot->add_option("--perturb", perturb, "offset added to c0");
    shoot->add_option("--t-end", t_end, "horizon");
    shoot->add_option("--cap", cap, "divergence cap on k and c (default 1e6 * k0)");

    auto* diagnose = app.add_subcommand("diagnose", "residual diagnostics for a stored path");
    add_common(diagnose, true);
    diagnose->add_option("--path", path_file, "path.csv to analyze")->required();

    auto* demo = app.add_subcommand("demo", "built-in demonstrations");
    demo->add_option("which", demo_which, "counterexample | magic")->required();
    demo->add_option("--rho", rho, "discount rate filter for the counterexample demo");
    demo->add_option("--out", out_dir, "output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            app.exit(e);
            return 0;
        }
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (*demo) return cmd_demo(demo_which, rho, out_dir);
        const ModelConfig mc = load_model_config(config_file);
        if (*check) return cmd_check(mc, out_dir, verbose);
        if (*solve) return cmd_solve(mc, out_dir, verbose);
        if (*policy) return cmd_policy(mc, out_dir, kp, pp);
        if (*path) return cmd_path(mc, out_dir, k0, t_end, verbose);
        if (*shoot) return cmd_shoot(mc, out_dir, k0, c0, perturb, t_end, cap, verbose);
        if (*diagnose) return cmd_diagnose(mc, out_dir, path_file);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace hjb::cli
