#include "zeno/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"

#include "zeno/analytic.hpp"
#include "zeno/config.hpp"
#include "zeno/engine.hpp"
#include "zeno/optimize.hpp"

namespace zeno {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config_path;
    std::string data_path;
    std::string out_path;
    std::optional<int> n;
    std::optional<int> n_min;
    std::optional<int> n_max;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> detector_eff;
    unsigned threads = 0;
    double t_obj = 1.0;
    double rec_share = 0.5;
    double reflectivity = 0.9;
};

ParsedConfig read_config(const Options& opt) {
    ParsedConfig cfg = load_config(opt.config_path);
    if (opt.n) {
        cfg.system.n_cycles = *opt.n;
    }
    if (opt.trials) {
        cfg.trials = *opt.trials;
    }
    if (opt.seed) {
        cfg.seed = *opt.seed;
    }
    if (opt.detector_eff) {
        cfg.system.detector_eff = *opt.detector_eff;
        cfg.system.filter_t = 1.0;
    }
    try {
        cfg.system.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

LossBudget budget_of(const SystemConfig& sys) {
    return {sys.cycle.t_empty, sys.cycle.t_obj_arm, sys.cycle.t_rec};
}

void cmd_simulate(const Options& opt, std::ostream& out) {
    const ParsedConfig cfg = read_config(opt);
    const CurveRow row{cfg.system.n_cycles, run_exact(cfg.system)};
    write_curve_csv(out, std::span(&row, 1));
}

void cmd_sweep(const Options& opt, std::ostream& out) {
    const ParsedConfig cfg = read_config(opt);
    const int n_min = opt.n_min.value_or(1);
    const int n_max = opt.n_max.value_or(cfg.system.n_cycles);
    if (n_min < 1 || n_min > n_max) {
        throw UsageError("--n-min/--n-max must satisfy 1 <= n-min <= n-max");
    }
    write_curve_csv(out, sweep(cfg.system, n_min, n_max));
}

void cmd_mc(const Options& opt, std::ostream& out) {
    const ParsedConfig cfg = read_config(opt);
    const RunOutcome o =
        run_monte_carlo(cfg.system, MonteCarloOptions{cfg.trials, cfg.seed, opt.threads});
    const OutcomeErrors& se = *o.std_err;
    out << kCurveHeader << ",se_qi,se_abs,se_loss,se_wrong,trials,seed\n"
        << cfg.system.n_cycles << ',' << format_number(o.p_qi) << ',' << format_number(o.p_abs)
        << ',' << format_number(o.p_loss) << ',' << format_number(o.p_wrong) << ','
        << format_number(o.eta) << ',' << format_number(o.eta_adjusted) << ','
        << format_number(se.p_qi) << ',' << format_number(se.p_abs) << ','
        << format_number(se.p_loss) << ',' << format_number(se.p_wrong) << ',' << cfg.trials
        << ',' << cfg.seed << '\n';
}

void cmd_fit(const Options& opt, std::ostream& out) {
    std::ifstream in(opt.data_path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot open data file '" + opt.data_path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    const std::vector<EfficiencyPoint> data = parse_efficiency_data(text.str());
    FitOptions fit;
    fit.t_obj = opt.t_obj;
    fit.rec_share = opt.rec_share;
    const FitResult r = fit_losses(data, fit);
    out << "t_cycl=" << format_number(r.t_cycl) << '\n'
        << "uncertainty=" << format_number(r.uncertainty) << '\n'
        << "residual_sum_squares=" << format_number(r.residual_sum_squares) << '\n'
        << "iterations=" << r.iterations << '\n'
        << "points=" << data.size() << '\n';
}

void cmd_optimize(const Options& opt, std::ostream& out) {
    const ParsedConfig cfg = read_config(opt);
    const int n_max = opt.n_max.value_or(1000);
    if (n_max < 1) {
        throw UsageError("--n-max must be >= 1");
    }
    const CycleOptimum best = optimal_cycles(budget_of(cfg.system), n_max);
    out << "n_star=" << best.n_star << '\n'
        << "eta_star=" << format_number(best.eta_star) << '\n'
        << "eta_adjusted="
        << format_number(detector_adjust(best.eta_star, cfg.system.net_detection())) << '\n'
        << "at_boundary=" << (best.at_boundary ? "true" : "false") << '\n';
}

void cmd_compare(const Options& opt, std::ostream& out) {
    const ParsedConfig cfg = read_config(opt);
    const int n_max = opt.n_max.value_or(1000);
    if (n_max < 1) {
        throw UsageError("--n-max must be >= 1");
    }
    if (!(opt.reflectivity >= 0.0 && opt.reflectivity <= 1.0)) {
        throw UsageError("--reflectivity must be in [0, 1]");
    }

    const LossBudget losses = budget_of(cfg.system);
    const CycleOptimum best = optimal_cycles(losses, n_max);
    const ClosedFormResult zeno = lossy_closed_form(losses.at(best.n_star));

    // EV: best first-splitter setting on a grid up to 1 - 1e-6
    constexpr int kSteps = 100000;
    double ev_t1 = 0.0;
    double ev_eta = 0.0;
    for (int i = 0; i <= kSteps; ++i) {
        const double t1 = (1.0 - 1e-6) * i / kSteps;
        if (const double eta = ev_efficiency(t1); eta > ev_eta) {
            ev_eta = eta;
            ev_t1 = t1;
        }
    }
    const ClosedFormResult res = resonance_efficiency({opt.reflectivity});

    out << "scheme,parameter,p_qi,p_abs,eta\n"
        << "zeno," << best.n_star << ',' << format_number(zeno.p_qi) << ','
        << format_number(zeno.p_abs) << ',' << format_number(zeno.eta) << '\n'
        << "ev," << format_number(ev_t1) << ',' << format_number(ev_t1 * (1.0 - ev_t1)) << ','
        << format_number(1.0 - ev_t1) << ',' << format_number(ev_eta) << '\n'
        << "resonance," << format_number(opt.reflectivity) << ',' << format_number(res.p_qi)
        << ',' << format_number(res.p_abs) << ',' << format_number(res.eta) << '\n';
}

void cmd_noise(const Options& opt, std::ostream& out) {
    ParsedConfig cfg = read_config(opt);
    cfg.system.cycle.object = ObjectSpec::absent();
    const int n_min = opt.n_min.value_or(1);
    const int n_max = opt.n_max.value_or(cfg.system.n_cycles);
    if (n_min < 1 || n_min > n_max) {
        throw UsageError("--n-min/--n-max must satisfy 1 <= n-min <= n-max");
    }
    out << "N,p_wrong\n";
    SystemConfig at = cfg.system;
    at.dtheta_override.reset();
    for (int n = n_min; n <= n_max; ++n) {
        at.n_cycles = n;
        out << n << ',' << format_number(noise_run(at)) << '\n';
    }
}

}  // namespace

int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum Zeno interrogation simulator", "zeno"};
    app.require_subcommand(1);
    Options opt;

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "Configuration file")
            ->required()
            ->check(CLI::ExistingFile);
    };
    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", opt.out_path, "Output file (default: standard output)");
    };
    auto add_detector = [&](CLI::App* cmd) {
        cmd->add_option("--detector-eff", opt.detector_eff,
                        "Net detection efficiency, replaces detector_eff * filter_t")
            ->check(CLI::Range(0.0, 1.0));
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Exact run, one CSV row");
    add_config(simulate);
    simulate->add_option("--n", opt.n, "Cycle count")->check(CLI::PositiveNumber);
    add_detector(simulate);
    add_out(simulate);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Exact runs over a range of N");
    add_config(sweep_cmd);
    sweep_cmd->add_option("--n-min", opt.n_min, "First N (default 1)");
    sweep_cmd->add_option("--n-max", opt.n_max, "Last N (default n_cycles)");
    add_detector(sweep_cmd);
    add_out(sweep_cmd);

    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo trajectory sampling");
    add_config(mc);
    mc->add_option("--n", opt.n, "Cycle count")->check(CLI::PositiveNumber);
    mc->add_option("--trials", opt.trials, "Number of photons")->check(CLI::PositiveNumber);
    mc->add_option("--seed", opt.seed, "RNG seed");
    mc->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
    add_detector(mc);
    add_out(mc);

    CLI::App* fit = app.add_subcommand("fit", "Fit the per-cycle survival to eta(N) data");
    fit->add_option("--data", opt.data_path, "CSV with N,eta,sigma rows")
        ->required()
        ->check(CLI::ExistingFile);
    fit->add_option("--t-obj", opt.t_obj, "Fixed object-arm transmission")
        ->check(CLI::Range(0.0, 1.0));
    fit->add_option("--rec-share", opt.rec_share, "Exponent share of t_rec in the product")
        ->check(CLI::Range(0.0, 1.0));
    add_out(fit);

    CLI::App* optimize = app.add_subcommand("optimize", "Efficiency-maximizing cycle count");
    add_config(optimize);
    optimize->add_option("--n-max", opt.n_max, "Largest N scanned (default 1000)");
    add_detector(optimize);
    add_out(optimize);

    CLI::App* compare = app.add_subcommand("compare", "Zeno vs EV vs resonance efficiency");
    add_config(compare);
    compare->add_option("--n-max", opt.n_max, "Largest N scanned (default 1000)");
    compare->add_option("--reflectivity", opt.reflectivity, "Resonance cavity mirror R");
    add_out(compare);

    CLI::App* noise = app.add_subcommand("noise", "False-object probability vs N");
    add_config(noise);
    noise->add_option("--n-min", opt.n_min, "First N (default 1)");
    noise->add_option("--n-max", opt.n_max, "Last N (default n_cycles)");
    add_out(noise);

    std::vector<std::string> argv_store{"zeno"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& a : argv_store) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "zeno: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    std::ostringstream buffer;
    try {
        if (simulate->parsed()) {
            cmd_simulate(opt, buffer);
        } else if (sweep_cmd->parsed()) {
            cmd_sweep(opt, buffer);
        } else if (mc->parsed()) {
            cmd_mc(opt, buffer);
        } else if (fit->parsed()) {
            cmd_fit(opt, buffer);
        } else if (optimize->parsed()) {
            cmd_optimize(opt, buffer);
        } else if (compare->parsed()) {
            cmd_compare(opt, buffer);
        } else {
            cmd_noise(opt, buffer);
        }
    } catch (const UsageError& e) {
        err << "zeno: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "zeno: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "zeno: " << e.what() << '\n';
        return kExitFailure;
    }

    if (opt.out_path.empty()) {
        out << buffer.str();
        return kExitOk;
    }
    std::ofstream file(opt.out_path, std::ios::binary);
    if (!file || !(file << buffer.str())) {
        err << "zeno: cannot write '" << opt.out_path << "'\n";
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace zeno
