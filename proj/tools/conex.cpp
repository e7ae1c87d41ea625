#include <iostream>
#include <string>

#include "CLI11.hpp"
#ifdef _OPENMP
#include <omp.h>
#endif

#include "conex/runner.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
};

void add_common(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--config", c.config_path, "JSON config (a run manifest also works)");
    sub->add_option("--out", c.out_dir, "output directory (default $CONEX_OUT or ./conex_out)");
    sub->add_option("--threads", c.threads, "OpenMP thread count");
}

int dispatch(const std::string& task, const CommonOpts& c, const nlohmann::json& overrides) {
    if (c.threads > 0) {
#ifdef _OPENMP
        omp_set_num_threads(c.threads);
#endif
    }
    nlohmann::json cfg = nlohmann::json::object();
    if (!c.config_path.empty()) cfg = conex::load_config(c.config_path);
    for (const auto& [k, v] : overrides.items()) cfg[k] = v; // flags override config keys
    return conex::run_task(task, cfg, conex::resolve_out_dir(c.out_dir));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conex: boundary-expansion toolkit for conic singularities"};
    app.require_subcommand(1);

    CommonOpts copt[8];
    nlohmann::json ovr[8] = {nlohmann::json::object(), nlohmann::json::object(),
                             nlohmann::json::object(), nlohmann::json::object(),
                             nlohmann::json::object(), nlohmann::json::object(),
                             nlohmann::json::object(), nlohmann::json::object()};

    auto add_num = [](CLI::App* sub, nlohmann::json& o, const std::string& flag,
                      const std::string& key, const std::string& help) {
        sub->add_option_function<double>(
            flag, [&o, key](double v) { o[key] = v; }, help);
    };
    auto add_int = [](CLI::App* sub, nlohmann::json& o, const std::string& flag,
                      const std::string& key, const std::string& help) {
        sub->add_option_function<int>(
            flag, [&o, key](int v) { o[key] = v; }, help);
    };

    auto* profile = app.add_subcommand("profile", "solve the arc blow-up profile");
    add_common(profile, copt[0]);
    add_int(profile, ovr[0], "--n", "n", "ambient dimension");
    add_num(profile, ovr[0], "--alpha", "alpha", "arc angle");
    add_num(profile, ovr[0], "--M", "M", "truncation radius");
    add_int(profile, ovr[0], "--grid", "grid", "cell count");

    auto* spectrum = app.add_subcommand("spectrum", "singular eigenvalue sweep");
    add_common(spectrum, copt[1]);
    add_num(spectrum, ovr[1], "--mu", "mu", "sector angle / pi");
    add_num(spectrum, ovr[1], "--alpha", "alpha", "arc angle (profile potential)");
    add_int(spectrum, ovr[1], "--n", "n", "ambient dimension (profile potential)");
    add_int(spectrum, ovr[1], "--grid", "grid", "cell count");
    add_int(spectrum, ovr[1], "--modes", "modes", "number of eigenpairs");

    auto* indices = app.add_subcommand("indices", "exponent monoid, J closure, log table");
    add_common(indices, copt[2]);
    add_int(indices, ovr[2], "--n", "n", "ambient dimension");
    add_int(indices, ovr[2], "--k", "k", "cone codimension");
    add_num(indices, ovr[2], "--cutoff", "cutoff", "exponent cutoff");
    indices->add_option_function<std::vector<double>>(
        "--mbars", [&ovr](const std::vector<double>& v) { ovr[2]["mbars"] = v; },
        "indicial exponents");

    auto* radial = app.add_subcommand("radial", "radial mode ODE by quadrature");
    add_common(radial, copt[3]);
    add_int(radial, ovr[3], "--k", "k", "cone codimension");
    add_num(radial, ovr[3], "--lambda", "lambda", "mode eigenvalue");
    add_num(radial, ovr[3], "--r0", "r0", "anchor radius");
    add_num(radial, ovr[3], "--A0", "A0", "anchor value");
    add_int(radial, ovr[3], "--count", "count", "radius samples");

    auto* simulate = app.add_subcommand("simulate", "nonlinear sector solve");
    add_common(simulate, copt[4]);
    add_num(simulate, ovr[4], "--mu", "mu", "sector angle / pi");
    add_num(simulate, ovr[4], "--M", "M", "sector radius");
    add_int(simulate, ovr[4], "--grid-r", "grid_r", "radial rings");
    add_int(simulate, ovr[4], "--grid-t", "grid_t", "angular cells");
    simulate->add_option_function<std::string>(
        "--mode", [&ovr](const std::string& v) { ovr[4]["mode"] = v; }, "blowup | trace");

    auto* oracle = app.add_subcommand("oracle", "exact conformal field on the sector grid");
    add_common(oracle, copt[5]);
    add_num(oracle, ovr[5], "--mu", "mu", "sector angle / pi");
    add_num(oracle, ovr[5], "--M", "M", "sector radius");
    add_int(oracle, ovr[5], "--grid-r", "grid_r", "radial rings");
    add_int(oracle, ovr[5], "--grid-t", "grid_t", "angular cells");

    auto* verify = app.add_subcommand("verify", "fit the leading sector exponent against 2/mu");
    add_common(verify, copt[6]);
    add_num(verify, ovr[6], "--mu", "mu", "sector angle / pi");
    add_num(verify, ovr[6], "--M", "M", "sector radius");

    auto* plots = app.add_subcommand("plots", "write gnuplot scripts for a run directory");
    add_common(plots, copt[7]);

    CLI11_PARSE(app, argc, argv);

    const std::string names[8] = {"profile", "spectrum", "indices", "radial",
                                  "simulate", "oracle",  "verify",  "plots"};
    CLI::App* subs[8] = {profile, spectrum, indices, radial, simulate, oracle, verify, plots};
    try {
        for (int i = 0; i < 8; ++i) {
            if (subs[i]->parsed()) {
                if (names[i] == "plots")
                    return conex::emit_plots(conex::resolve_out_dir(copt[i].out_dir));
                return dispatch(names[i], copt[i], ovr[i]);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "conex: " << e.what() << "\n";
        return conex::exit_error;
    }
    return conex::exit_error;
}
