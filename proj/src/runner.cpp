#include "conex/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>

#include "conex/fit.hpp"
#include "conex/grid.hpp"
#include "conex/indexset.hpp"
#include "conex/indicial.hpp"
#include "conex/io.hpp"
#include "conex/liouville.hpp"
#include "conex/profile.hpp"
#include "conex/series.hpp"
#include "conex/spectral.hpp"

namespace conex {

namespace {
namespace fs = std::filesystem;
using nlohmann::json;
constexpr double kPi = std::numbers::pi;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

template <typename T>
T get_or(const json& j, const std::string& key, T def) {
    if (j.contains(key)) return j.at(key).get<T>();
    return def;
}

void write_manifest(const std::string& out_dir, const std::string& task, const json& config,
                    const std::vector<std::string>& outputs, const json& tables, long long ms) {
    json m;
    m["task"] = task;
    m["config"] = config;
    m["outputs"] = outputs;
    m["tables"] = tables;
    m["timings_ms"] = {{"total", ms}};
    m["version"] = "0.1.0";
    write_text_file(out_dir + "/manifest.json", m.dump(2) + "\n");
}

void write_field_csv(const std::string& path, const SectorField& f) {
    std::vector<std::string> header = {"r", "theta", "u", "u_T", "v"};
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<size_t>(f.spec.n_r) * static_cast<size_t>(f.spec.n_theta));
    for (int i = 0; i < f.spec.n_r; ++i)
        for (int j = 0; j < f.spec.n_theta; ++j)
            rows.push_back({f.r[static_cast<size_t>(i)], f.theta[static_cast<size_t>(j)],
                            f.value(f.u, i, j), f.value(f.u_T, i, j), f.value(f.v, i, j)});
    write_csv(path, header, rows);
}

json growth_to_json(const GrowthReport& g) {
    json out;
    out["dim_l"] = g.dim_l;
    out["min_ratio"] = g.min_ratio;
    out["counting"] = json::array();
    for (const auto& [lam, cnt] : g.counting) out["counting"].push_back({{"lambda", lam}, {"count", cnt}});
    return out;
}

int task_profile(json& cfg, const std::string& out) {
    Timer t;
    cfg["n"] = get_or(cfg, "n", 3);
    cfg["alpha"] = get_or(cfg, "alpha", kPi);
    cfg["M"] = get_or(cfg, "M", 1.0);
    cfg["grid"] = get_or(cfg, "grid", 1024);
    ConeSpec cone{cfg["n"].get<int>(), 2, cfg["alpha"].get<double>(), cfg["M"].get<double>()};
    const auto grid = Grid1D::cell_centered(cone.alpha, cfg["grid"].get<int>());
    const auto sol = solve_profile(cone, grid);

    std::vector<std::string> header = {"theta", "u_S", "w"};
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < grid.count; ++i)
        rows.push_back({grid.node(i), sol.u_S[static_cast<size_t>(i)], sol.w[static_cast<size_t>(i)]});
    write_csv(out + "/profile.csv", header, rows);

    json hdr;
    hdr["n"] = cone.n;
    hdr["alpha"] = cone.alpha;
    hdr["M"] = cone.M;
    hdr["sigma"] = sol.sigma;
    hdr["max_beta"] = max_beta(cone.n, sol.sigma);
    hdr["residual"] = sol.residual;
    hdr["newton_steps"] = sol.newton_steps;
    hdr["coefficients"] = json::parse(series_to_json(sol.c_S));
    write_text_file(out + "/profile.json", hdr.dump(2) + "\n");

    write_manifest(out, "profile", cfg, {"profile.csv", "profile.json"},
                   json{{"sigma", sol.sigma}}, t.ms());
    std::cout << "profile: sigma = " << format_g17(sol.sigma) << ", residual = " << sol.residual
              << "\n";
    return exit_ok;
}

std::function<SingularOperator(int)> spectrum_operator_maker(const json& cfg) {
    if (cfg.contains("mu")) {
        const double mu = cfg.at("mu").get<double>();
        return [mu](int n) {
            const auto g = Grid1D::cell_centered(mu * kPi, n);
            return SingularOperator::on_arc(
                g, [mu](double th) { return liouville_potential(mu, th); }, 2.0);
        };
    }
    const int nn = cfg.at("n").get<int>();
    const double alpha = cfg.at("alpha").get<double>();
    return [nn, alpha](int n) {
        ConeSpec cone{nn, 2, alpha, 1.0};
        const auto g = Grid1D::cell_centered(alpha, n);
        const auto prof = solve_profile(cone, g);
        SingularOperator op;
        op.grid = g;
        op.dim_l = 1;
        op.kappa = 0.25 * nn * (nn + 2);
        op.p.assign(static_cast<size_t>(n), 1.0);
        op.w.assign(static_cast<size_t>(n), 1.0);
        op.q.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i)
            op.q[static_cast<size_t>(i)] =
                0.25 * nn * (nn + 2) * std::pow(prof.u_S[static_cast<size_t>(i)], 4.0 / (nn - 2));
        return op;
    };
}

int task_spectrum(json& cfg, const std::string& out) {
    Timer t;
    if (!cfg.contains("mu") && !(cfg.contains("alpha") && cfg.contains("n")))
        throw std::invalid_argument("spectrum: need either mu or alpha+n");
    cfg["grid"] = get_or(cfg, "grid", 4096);
    cfg["modes"] = get_or(cfg, "modes", 5);
    const int N = cfg["grid"].get<int>();
    const int modes = cfg["modes"].get<int>();
    const auto make = spectrum_operator_maker(cfg);
    const auto s = solve_spectrum_richardson(make, N, modes);

    std::vector<std::string> header = {"index", "lambda", "lambda_extrapolated"};
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < modes; ++i)
        rows.push_back({static_cast<double>(i + 1), s.lambdas[static_cast<size_t>(i)],
                        s.lambdas_extrap[static_cast<size_t>(i)]});
    write_csv(out + "/spectrum.csv", header, rows);

    json side;
    side["theta"] = s.grid.nodes;
    side["phis"] = s.phis;
    write_text_file(out + "/eigenfunctions.json", side.dump() + "\n");

    const auto growth = growth_to_json(verify_growth(s));
    write_text_file(out + "/growth.json", growth.dump(2) + "\n");

    write_manifest(out, "spectrum", cfg, {"spectrum.csv", "eigenfunctions.json", "growth.json"},
                   json{{"lambda_1", s.lambdas[0]}}, t.ms());
    std::cout << "spectrum:";
    for (int i = 0; i < modes; ++i) std::cout << ' ' << format_g17(s.lambdas_extrap[static_cast<size_t>(i)]);
    std::cout << "\n";
    return exit_ok;
}

int task_indices(json& cfg, const std::string& out) {
    Timer t;
    const int n = cfg.at("n").get<int>();
    const int k = cfg.at("k").get<int>();
    const auto mbars = cfg.at("mbars").get<std::vector<double>>();
    const double cutoff = cfg.at("cutoff").get<double>();
    cfg["l_from_one"] = get_or(cfg, "l_from_one", false);

    std::vector<double> gens = {2.0};
    if (n > 2) gens.push_back(0.5 * (n - 2));
    gens.insert(gens.end(), mbars.begin(), mbars.end());
    const auto I = monoid_generate(gens, cutoff);
    const auto J = j_closure(mbars, n, k, cutoff, cfg["l_from_one"].get<bool>());
    const auto nt = log_multiplicities(I, mbars, n, k);

    json doc;
    doc["I"] = I.elements;
    doc["J"] = J.elements;
    doc["N_tilde"] = json::array();
    for (const auto& [e, v] : nt) doc["N_tilde"].push_back({{"exponent", e}, {"n", v}});
    doc["params"] = {{"n", n}, {"k", k}, {"mbars", mbars}, {"cutoff", cutoff}};
    write_text_file(out + "/indices.json", doc.dump(2) + "\n");

    std::cout << "I:";
    for (double e : I.elements) std::cout << ' ' << format_g17(e);
    std::cout << "\nJ:";
    for (double e : J.elements) std::cout << ' ' << format_g17(e);
    std::cout << "\nN~:";
    for (const auto& [e, v] : nt)
        if (v >= 0) std::cout << " (" << format_g17(e) << " -> " << v << ")";
    std::cout << "\n";

    write_manifest(out, "indices", cfg, {"indices.json"}, json::object(), t.ms());
    return exit_ok;
}

int task_radial(json& cfg, const std::string& out) {
    Timer t;
    const int k = get_or(cfg, "k", 2);
    const double lambda = cfg.at("lambda").get<double>();
    cfg["k"] = k;
    cfg["r0"] = get_or(cfg, "r0", 0.5);
    cfg["A0"] = get_or(cfg, "A0", 0.0);
    cfg["count"] = get_or(cfg, "count", 4096);
    cfg["r_min_frac"] = get_or(cfg, "r_min_frac", 1e-6);
    auto mode = make_radial_mode(k, lambda, cfg["r0"].get<double>(), cfg["A0"].get<double>(),
                                 cfg["count"].get<int>(), cfg["r_min_frac"].get<double>());

    const json forcing = get_or(cfg, "forcing", json{{"type", "zero"}});
    cfg["forcing"] = forcing;
    const std::string ftype = forcing.at("type").get<std::string>();
    if (ftype == "zero") {
        // nothing to do
    } else if (ftype == "monomial") {
        const double e = forcing.at("e").get<double>();
        const int j = get_or(forcing, "j", 0);
        const double c = get_or(forcing, "c", 1.0);
        for (size_t i = 0; i < mode.r.size(); ++i)
            mode.forcing[i] = c * std::pow(mode.r[i], e) * std::pow(std::log(mode.r[i]), j);
    } else if (ftype == "series") {
        const auto s = series_from_json(forcing.at("series").dump());
        for (size_t i = 0; i < mode.r.size(); ++i) mode.forcing[i] = series_eval(s, mode.r[i]);
    } else if (ftype == "csv") {
        const auto tab = read_csv(forcing.at("path").get<std::string>());
        if (tab.header.size() < 2) throw std::runtime_error("radial: forcing csv needs r,F columns");
        // linear interpolation in log r onto the solver grid
        for (size_t i = 0; i < mode.r.size(); ++i) {
            const double lr = std::log(mode.r[i]);
            const auto& rows = tab.rows;
            size_t hi = 1;
            while (hi + 1 < rows.size() && rows[hi][0] < mode.r[i]) ++hi;
            const double l0 = std::log(rows[hi - 1][0]), l1 = std::log(rows[hi][0]);
            const double w1 = l1 > l0 ? (lr - l0) / (l1 - l0) : 0.0;
            mode.forcing[i] = (1.0 - w1) * rows[hi - 1][1] + w1 * rows[hi][1];
        }
    } else {
        throw std::invalid_argument("radial: unknown forcing type " + ftype);
    }

    const auto A = solve_radial_ode(mode);
    const auto pair = indicial_roots(k, lambda);

    std::vector<std::string> header = {"r", "A", "forcing"};
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < mode.r.size(); ++i) rows.push_back({mode.r[i], A[i], mode.forcing[i]});
    write_csv(out + "/radial.csv", header, rows);

    json doc;
    doc["m_plus"] = pair.m_plus;
    doc["m_minus"] = pair.m_minus;
    doc["lambda"] = lambda;
    doc["k"] = k;
    doc["r0"] = mode.r0;
    doc["A_at_r0"] = mode.A_at_r0;
    write_text_file(out + "/radial.json", doc.dump(2) + "\n");

    write_manifest(out, "radial", cfg, {"radial.csv", "radial.json"}, json::object(), t.ms());
    std::cout << "radial: m+ = " << format_g17(pair.m_plus) << ", m- = " << format_g17(pair.m_minus)
              << "\n";
    return exit_ok;
}

SectorSolveOptions sector_options(json& cfg, bool blowup) {
    SectorSolveOptions opt;
    opt.r_min_frac = get_or(cfg, "r_min_frac", 1e-2);
    opt.r_top_frac = get_or(cfg, "r_top_frac", blowup ? 0.75 : 1.0);
    opt.tol = get_or(cfg, "tol", 1e-9);
    cfg["r_min_frac"] = opt.r_min_frac;
    cfg["r_top_frac"] = opt.r_top_frac;
    cfg["tol"] = opt.tol;
    return opt;
}

SectorSpec sector_spec(json& cfg) {
    SectorSpec spec;
    spec.mu = get_or(cfg, "mu", 0.5);
    spec.M = get_or(cfg, "M", 1.0);
    spec.n_r = get_or(cfg, "grid_r", 128);
    spec.n_theta = get_or(cfg, "grid_t", 64);
    cfg["mu"] = spec.mu;
    cfg["M"] = spec.M;
    cfg["grid_r"] = spec.n_r;
    cfg["grid_t"] = spec.n_theta;
    return spec;
}

int task_simulate(json& cfg, const std::string& out) {
    Timer t;
    const auto spec = sector_spec(cfg);
    const std::string mode_s = get_or<std::string>(cfg, "mode", "blowup");
    cfg["mode"] = mode_s;
    const bool blowup = mode_s == "blowup";
    if (!blowup && mode_s != "trace")
        throw std::invalid_argument("simulate: mode must be blowup or trace");
    const auto opt = sector_options(cfg, blowup);

    SectorField f;
    if (blowup) {
        f = solve_sector(spec, BoundaryMode::full_blowup, {}, opt);
    } else {
        const json trace = get_or(cfg, "trace", json{{"type", "zero"}});
        cfg["trace"] = trace;
        std::vector<double> tr(static_cast<size_t>(spec.n_theta), 0.0);
        const std::string ttype = trace.at("type").get<std::string>();
        const double dth = spec.mu * kPi / spec.n_theta;
        if (ttype == "eps_sin2") {
            const double eps = trace.at("eps").get<double>();
            for (int j = 0; j < spec.n_theta; ++j) {
                const double th = (j + 0.5) * dth;
                const double s = std::sin(th / spec.mu);
                tr[static_cast<size_t>(j)] = eps * s * s;
            }
        } else if (ttype == "csv") {
            const auto tab = read_csv(trace.at("path").get<std::string>());
            if (static_cast<int>(tab.rows.size()) != spec.n_theta)
                throw std::runtime_error("simulate: trace csv must have grid_t rows");
            for (int j = 0; j < spec.n_theta; ++j) tr[static_cast<size_t>(j)] = tab.rows[static_cast<size_t>(j)].back();
        } else if (ttype != "zero") {
            throw std::invalid_argument("simulate: unknown trace type " + ttype);
        }
        f = solve_sector(spec, BoundaryMode::prescribed_arc_trace, tr, opt);
    }

    write_field_csv(out + "/field.csv", f);
    json doc;
    doc["sweeps"] = f.sweeps;
    doc["residual"] = f.residual;
    doc["mode"] = mode_s;
    doc["trace_decay_warning"] = f.trace_decay_warning;
    write_text_file(out + "/field.json", doc.dump(2) + "\n");
    write_manifest(out, "simulate", cfg, {"field.csv", "field.json"},
                   json{{"sweeps", f.sweeps}}, t.ms());
    std::cout << "simulate: " << f.sweeps << " sweeps, residual " << f.residual << "\n";
    return exit_ok;
}

int task_oracle(json& cfg, const std::string& out) {
    Timer t;
    const auto spec = sector_spec(cfg);
    const auto opt = sector_options(cfg, true);
    const auto f = oracle_field(spec, opt);
    write_field_csv(out + "/field.csv", f);
    write_manifest(out, "oracle", cfg, {"field.csv"}, json::object(), t.ms());
    std::cout << "oracle: " << spec.n_r << "x" << spec.n_theta << " field\n";
    return exit_ok;
}

int task_verify(json& cfg, const std::string& out) {
    Timer t;
    const double mu = get_or(cfg, "mu", 0.5);
    const double M = get_or(cfg, "M", 1.0);
    cfg["mu"] = mu;
    cfg["M"] = M;
    cfg["basis_grid"] = get_or(cfg, "basis_grid", 1024);
    cfg["grid_r"] = get_or(cfg, "grid_r", 200);
    const int nth = cfg["basis_grid"].get<int>();

    const auto g = Grid1D::cell_centered(mu * kPi, nth);
    const auto op = SingularOperator::on_arc(
        g, [mu](double th) { return liouville_potential(mu, th); }, 2.0);
    const auto basis = solve_spectrum(op, 2);

    SectorSpec spec{mu, M, cfg["grid_r"].get<int>(), nth};
    SectorSolveOptions opt;
    opt.r_min_frac = get_or(cfg, "r_min_frac", 2e-4);
    opt.r_top_frac = get_or(cfg, "r_top_frac", 0.5);
    cfg["r_min_frac"] = opt.r_min_frac;
    cfg["r_top_frac"] = opt.r_top_frac;
    const auto field = oracle_field(spec, opt);
    const auto A = project_modes(field, basis, 1);

    const auto fit = fit_exponent(field.r, A[0], 1e-3 * M, 1e-1 * M);
    const double expected = 2.0 / mu;
    const double rel = std::abs(fit.exponent / expected - 1.0);
    const bool pass = rel <= 0.01;

    json doc;
    doc["expected_exponent"] = expected;
    doc["fitted_exponent"] = fit.exponent;
    doc["rel_error"] = rel;
    doc["r2"] = fit.r2;
    doc["log_flag"] = fit.log_flag;
    doc["pass"] = pass;
    write_text_file(out + "/verify.json", doc.dump(2) + "\n");
    write_manifest(out, "verify", cfg, {"verify.json"}, json{{"pass", pass}}, t.ms());
    std::cout << "verify: fitted " << format_g17(fit.exponent) << " vs expected "
              << format_g17(expected) << (pass ? " [pass]" : " [FAIL]") << "\n";
    return pass ? exit_ok : exit_verify_failed;
}
} // namespace

nlohmann::json load_config(const std::string& path) {
    auto j = json::parse(read_text_file(path));
    if (j.is_object() && j.contains("config") && j.contains("task")) return j.at("config");
    return j;
}

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("CONEX_OUT"); env && *env) return env;
    return "conex_out";
}

int run_task(const std::string& task, nlohmann::json config, const std::string& out_dir) {
    if (config.contains("task") && config.at("task").get<std::string>() != task)
        throw std::invalid_argument("config task field does not match the subcommand");
    config.erase("task");
    fs::create_directories(out_dir);
    if (task == "profile") return task_profile(config, out_dir);
    if (task == "spectrum") return task_spectrum(config, out_dir);
    if (task == "indices") return task_indices(config, out_dir);
    if (task == "radial") return task_radial(config, out_dir);
    if (task == "simulate") return task_simulate(config, out_dir);
    if (task == "oracle") return task_oracle(config, out_dir);
    if (task == "verify") return task_verify(config, out_dir);
    throw std::invalid_argument("unknown task: " + task);
}

int emit_plots(const std::string& run_dir) {
    std::vector<std::string> csvs;
    if (fs::exists(run_dir))
        for (const auto& e : fs::directory_iterator(run_dir))
            if (e.path().extension() == ".csv") csvs.push_back(e.path().filename().string());
    if (csvs.empty()) {
        std::cerr << "emit_plots: no CSV files in " << run_dir << "\n";
        return exit_error;
    }
    std::sort(csvs.begin(), csvs.end());
    for (const auto& name : csvs) {
        std::string script;
        if (name == "spectrum.csv") {
            script =
                "set datafile separator ','\n"
                "set key left top\n"
                "set xlabel 'mode index i'\n"
                "set ylabel 'lambda'\n"
                "plot 'spectrum.csv' every ::1 using 1:3 with points title 'extrapolated', \\\n"
                "     4*(x+1)**2 with lines title '4(i+1)^2 reference'\n";
            write_text_file(run_dir + "/plot_spectrum.gp", script);
        } else if (name == "field.csv") {
            script =
                "set datafile separator ','\n"
                "set view map\n"
                "set xlabel 'x'\n"
                "set ylabel 'y'\n"
                "splot 'field.csv' every ::1 using ($1*cos($2)):($1*sin($2)):5 with points "
                "pointtype 5 pointsize 0.4 palette title 'v'\n";
            write_text_file(run_dir + "/plot_field.gp", script);
        } else if (name == "radial.csv") {
            script =
                "set datafile separator ','\n"
                "set logscale xy\n"
                "set xlabel 'r'\n"
                "set ylabel '|A|'\n"
                "plot 'radial.csv' every ::1 using 1:(abs($2)) with lines title 'A_i'\n";
            write_text_file(run_dir + "/plot_radial.gp", script);
        } else if (name == "profile.csv") {
            script =
                "set datafile separator ','\n"
                "set xlabel 'theta'\n"
                "plot 'profile.csv' every ::1 using 1:2 with lines title 'u_S', \\\n"
                "     'profile.csv' every ::1 using 1:3 with lines title 'w'\n";
            write_text_file(run_dir + "/plot_profile.gp", script);
        }
    }
    return exit_ok;
}

} // namespace conex
