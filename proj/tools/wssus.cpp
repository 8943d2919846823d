// Command-line front end: bandwidth sweeps, critical-bandwidth reports,
// Szego oracle runs, SVG plots and direct mutual-information queries.
//
// Exit codes: 0 success, 2 config violation, 3 numerical failure,
// 4 plot I/O failure.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wssus/config.hpp"
#include "wssus/covariance.hpp"
#include "wssus/numfmt.hpp"
#include "wssus/svg.hpp"
#include "wssus/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitPlotIo = 4;

struct CliState {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string unit;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

wssus::RunConfig resolve_config(const CliState& cli) {
    wssus::RunConfig cfg;
    if (!cli.config_path.empty()) wssus::load_config_file(cfg, cli.config_path);
    for (const std::string& kv : cli.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        wssus::config_set(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!cli.unit.empty()) cfg.unit = cli.unit;
    if (cli.seed_set) cfg.seed = cli.seed;
    return cfg;
}

int check_config(const wssus::RunConfig& cfg) {
    const auto violations = wssus::validate_config(cfg);
    if (violations.empty()) return 0;
    for (const std::string& v : violations) std::cerr << "config violates: " << v << '\n';
    return kExitConfig;
}

int cmd_sweep(const CliState& cli) {
    wssus::RunConfig cfg = resolve_config(cli);
    if (int rc = check_config(cfg)) return rc;
    const std::string out = cli.out_path.empty() ? "sweep.csv" : cli.out_path;

    wssus::SweepResult res = wssus::run_sweep(cfg);

    std::ofstream csv(out, std::ios::binary);
    if (!csv) {
        std::cerr << "cannot open '" << out << "' for writing\n";
        return kExitNumerical;
    }
    wssus::write_curve_csv(csv, res.curve, cfg.unit);
    csv.close();

    const std::string side = wssus::sidecar_path(out);
    std::ofstream js(side, std::ios::binary);
    js << wssus::config_to_json(cfg).dump(2) << '\n';
    js.close();

    std::cout << "wrote " << res.curve.points.size() << " points to " << out
              << " (config sidecar " << side << ")\n";
    if (res.had_failure) {
        std::cerr << "one or more points failed numerically and were recorded as NaN\n";
        return kExitNumerical;
    }
    return 0;
}

int cmd_critical(const CliState& cli, const std::string& bound_name, bool as_json) {
    wssus::RunConfig cfg = resolve_config(cli);
    if (int rc = check_config(cfg)) return rc;
    const wssus::BoundKind kind = wssus::parse_bound_kind(bound_name);
    const double scale = cfg.unit == "bit" ? 1.0 / std::numbers::ln2 : 1.0;

    try {
        const wssus::CriticalReport rep = wssus::find_critical(cfg, kind);
        if (as_json) {
            nlohmann::json j{{"bound", wssus::to_string(kind)},
                             {"w_star_hz", rep.w_star_hz},
                             {"value", rep.value * scale},
                             {"ub1", rep.ub1_at * scale},
                             {"ub2", rep.ub2_at * scale},
                             {"lb", rep.lb_at * scale},
                             {"lb_approx", rep.lb_approx_at * scale},
                             {"unit", cfg.unit + "/s"}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "bound      : " << wssus::to_string(kind) << '\n'
                      << "W*         : " << wssus::fmt_double(rep.w_star_hz) << " Hz\n"
                      << "value      : " << wssus::fmt_double(rep.value * scale) << ' ' << cfg.unit
                      << "/s\n"
                      << "ub1(W*)    : " << wssus::fmt_double(rep.ub1_at * scale) << '\n'
                      << "ub2(W*)    : " << wssus::fmt_double(rep.ub2_at * scale) << '\n'
                      << "lb(W*)     : " << wssus::fmt_double(rep.lb_at * scale) << '\n'
                      << "lb_approx(W*): " << wssus::fmt_double(rep.lb_approx_at * scale) << '\n';
        }
        return 0;
    } catch (const wssus::BoundaryError& e) {
        if (as_json) {
            nlohmann::json j{{"bound", wssus::to_string(kind)},
                             {"boundary", e.at_upper ? "upper" : "lower"},
                             {"endpoint_w_hz", e.endpoint_w_hz},
                             {"endpoint_value", e.endpoint_value * scale},
                             {"message", e.what()}};
            std::cout << j.dump(2) << '\n';
        } else {
            std::cout << "boundary: " << e.what() << '\n';
        }
        return 0;
    }
}

int cmd_plot(const CliState& cli, const std::string& in_path) {
    wssus::RunConfig cfg = resolve_config(cli);
    const std::string out = cli.out_path.empty() ? "plot.svg" : cli.out_path;
    std::ifstream in(in_path);
    if (!in) {
        std::cerr << "cannot open curve CSV '" << in_path << "'\n";
        return kExitPlotIo;
    }
    wssus::BoundCurve curve = wssus::read_curve_csv(in);
    try {
        wssus::emit_plot(curve, out, cfg.unit);
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << '\n';
        return kExitPlotIo;
    }
    std::cout << "wrote " << out << '\n';
    return 0;
}

int cmd_oracle(const CliState& cli) {
    wssus::RunConfig cfg = resolve_config(cli);
    if (int rc = check_config(cfg)) return rc;
    const std::string out = cli.out_path.empty() ? "szego.csv" : cli.out_path;

    const wssus::ScatteringSpec sf = wssus::make_scattering(cfg);
    const wssus::PowerBudget power = wssus::make_power(cfg);
    const wssus::GridParams lattice(cfg.oracle_time_oversampling / (2.0 * sf.nu0()),
                                    1.0 / (2.0 * sf.tau0()));

    const auto rows =
        wssus::szego_check(cfg.oracle_k_list, cfg.oracle_m, lattice, sf, power, cfg.oracle_gamma);

    std::ofstream csv(out, std::ios::binary);
    if (!csv) {
        std::cerr << "cannot open '" << out << "' for writing\n";
        return kExitNumerical;
    }
    wssus::write_szego_csv(csv, rows);
    wssus::write_szego_csv(std::cout, rows);
    return 0;
}

int cmd_mi(const CliState& cli, double snr, bool rayleigh, std::int64_t mc_samples) {
    wssus::RunConfig cfg = resolve_config(cli);
    const wssus::Constellation c = wssus::make_constellation(cfg);
    if (rayleigh) {
        std::cout << "rayleigh_cm_mi(" << cfg.constellation << ", " << wssus::fmt_double(snr)
                  << ") = " << wssus::fmt_double(wssus::rayleigh_cm_mi(c, snr)) << " nat\n";
    } else {
        std::cout << "awgn_cm_mi(" << cfg.constellation << ", " << wssus::fmt_double(snr)
                  << ") = " << wssus::fmt_double(wssus::awgn_cm_mi(c, snr)) << " nat\n";
    }
    if (mc_samples > 0) {
        const wssus::MiEstimate est = wssus::mc_mi_oracle(c, snr, mc_samples, cfg.seed);
        std::cout << "mc_mi_oracle: " << wssus::fmt_double(est.value) << " +- "
                  << wssus::fmt_double(est.std_error) << " nat (n=" << mc_samples
                  << ", seed=" << cfg.seed << ")\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Capacity bounds for noncoherent underspread WSSUS Rayleigh fading channels "
                 "under peak constraints"};
    app.require_subcommand(1);
    app.fallthrough();

    CliState cli;
    app.add_option("--config", cli.config_path, "config file (flat key=value or JSON sidecar)");
    app.add_option("--set", cli.overrides, "override, key=value (repeatable)")
        ->take_all();
    app.add_option("--out", cli.out_path, "output path");
    app.add_option("--unit", cli.unit, "rate unit: nat or bit");
    app.add_option("--seed", cli.seed, "RNG seed for Monte-Carlo paths")
        ->each([&](const std::string&) { cli.seed_set = true; });

    auto* sweep = app.add_subcommand("sweep", "evaluate all bounds over a bandwidth sweep");
    auto* critical = app.add_subcommand("critical", "locate the capacity-maximizing bandwidth");
    std::string bound_name = "lb_approx";
    bool as_json = false;
    critical->add_option("--bound", bound_name, "bound to maximize: ub1, ub2, lb, lb_approx");
    critical->add_flag("--json", as_json, "machine-readable JSON report");
    auto* plot = app.add_subcommand("plot", "render a sweep CSV as SVG");
    std::string in_path = "sweep.csv";
    plot->add_option("--in", in_path, "input curve CSV");
    auto* oracle = app.add_subcommand("oracle", "finite log-det vs asymptotic integral report");
    auto* mi = app.add_subcommand("mi", "evaluate the coherent mutual information directly");
    double snr = 1.0;
    bool rayleigh = false;
    std::int64_t mc_samples = 0;
    mi->add_option("--snr", snr, "per-symbol SNR (mean SNR with --rayleigh)")->required();
    mi->add_flag("--rayleigh", rayleigh, "average over Rayleigh fading");
    mi->add_option("--mc", mc_samples, "also run the Monte-Carlo oracle with this many samples");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return cmd_sweep(cli);
        if (critical->parsed()) return cmd_critical(cli, bound_name, as_json);
        if (plot->parsed()) return cmd_plot(cli, in_path);
        if (oracle->parsed()) return cmd_oracle(cli);
        if (mi->parsed()) return cmd_mi(cli, snr, rayleigh, mc_samples);
    } catch (const wssus::NonConvergence& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const wssus::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config violates: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
