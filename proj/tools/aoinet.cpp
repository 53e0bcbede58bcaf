// Command-line front end: simulate | sweep | mm1 | serve-destination |
// serve-source | analyze | config. Exit codes: 0 success, 2 config error,
// 3 runtime failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aoinet/analyze.hpp"
#include "aoinet/configfile.hpp"
#include "aoinet/harness/runner.hpp"
#include "aoinet/sim/mm1.hpp"
#include "aoinet/sim/simulator.hpp"

namespace {

using namespace aoinet;

int fail_config(const std::string& message) {
    std::fprintf(stderr, "config error: %s\n", message.c_str());
    return 2;
}

int fail_runtime(const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    return 3;
}

std::ostream* open_out(const std::string& path, std::ofstream& file) {
    if (path.empty()) {
        return &std::cout;
    }
    file.open(path);
    if (!file) {
        return nullptr;
    }
    return &file;
}

sim::SimConfig load_sim_config(const std::string& path, std::optional<std::uint64_t> seed) {
    ExperimentFile exp = load_experiment(path);
    if (exp.kind != ExperimentFile::Kind::Sim) {
        throw ConfigError(path + ": expected a simulation config (no [harness] section)");
    }
    if (seed) {
        exp.sim.seed = *seed;
    }
    return exp.sim;
}

harness::HarnessConfig load_harness_config(const std::string& path) {
    ExperimentFile exp = load_experiment(path);
    if (exp.kind != ExperimentFile::Kind::Harness) {
        throw ConfigError(path + ": expected a harness config ([harness] section)");
    }
    return exp.harness;
}

int cmd_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_path) {
    sim::SimConfig cfg;
    try {
        cfg = load_sim_config(config_path, seed);
    } catch (const ConfigError& e) {
        return fail_config(e.what());
    }
    try {
        const sim::MetricsLog log = sim::run(cfg);
        std::ofstream file;
        std::ostream* out = open_out(out_path, file);
        if (!out) {
            return fail_runtime("cannot open " + out_path);
        }
        *out << sim::csv_header() << "\n" << sim::csv_row(log) << "\n";
        return 0;
    } catch (const std::invalid_argument& e) {
        return fail_config(e.what());
    } catch (const std::exception& e) {
        return fail_runtime(e.what());
    }
}

int cmd_sweep(const std::string& config_path, const std::string& axis_name,
              const std::vector<double>& grid, std::uint32_t seeds, const std::string& out_path) {
    sim::SimConfig base;
    try {
        base = load_sim_config(config_path, std::nullopt);
    } catch (const ConfigError& e) {
        return fail_config(e.what());
    }
    sim::SweepAxis axis;
    if (axis_name == "lambda") {
        axis = sim::SweepAxis::Lambda;
    } else if (axis_name == "n") {
        axis = sim::SweepAxis::NSources;
    } else if (axis_name == "capacity") {
        axis = sim::SweepAxis::Capacity;
    } else {
        return fail_config("--axis: expected lambda|n|capacity");
    }
    try {
        std::ofstream file;
        std::ostream* out = open_out(out_path, file);
        if (!out) {
            return fail_runtime("cannot open " + out_path);
        }
        *out << sim::csv_header() << "\n";
        bool any_errors = false;
        for (std::uint32_t r = 0; r < seeds; ++r) {
            sim::SimConfig replicate = base;
            replicate.seed = base.seed + r;
            const sim::SweepResult result = sim::sweep(replicate, axis, grid);
            for (const auto& row : result.rows) {
                *out << sim::csv_row(row) << "\n";
            }
            for (const auto& err : result.errors) {
                any_errors = true;
                std::fprintf(stderr, "sweep point %zu (value %g): %s\n", err.index, err.value,
                             err.message.c_str());
            }
        }
        return any_errors ? 3 : 0;
    } catch (const std::invalid_argument& e) {
        return fail_config(e.what());
    } catch (const std::exception& e) {
        return fail_runtime(e.what());
    }
}

int cmd_mm1(const std::vector<double>& grid, double mu, std::uint64_t deliveries,
            std::uint64_t seed, bool with_sim, const std::string& out_path) {
    std::ofstream file;
    std::ostream* out = open_out(out_path, file);
    if (!out) {
        return fail_runtime("cannot open " + out_path);
    }
    *out << analyze::mm1_csv_header() << "\n";
    try {
        for (double rho : grid) {
            for (auto disc : {sim::Mm1Discipline::Fcfs, sim::Mm1Discipline::Lcfs1}) {
                const std::string name = disc == sim::Mm1Discipline::Fcfs ? "fcfs" : "lcfs1";
                if (disc == sim::Mm1Discipline::Fcfs && rho >= 1.0) {
                    continue;
                }
                analyze::Mm1Row oracle{rho, mu, name, "oracle",
                                       sim::mm1_age_oracle(rho * mu, mu, disc), 0, 0};
                *out << analyze::mm1_csv_row(oracle) << "\n";
                if (with_sim) {
                    analyze::Mm1Row simrow{
                        rho, mu, name, "sim",
                        sim::mm1_simulate(rho * mu, mu, disc, deliveries, seed), deliveries,
                        seed};
                    *out << analyze::mm1_csv_row(simrow) << "\n";
                }
            }
        }
        return 0;
    } catch (const std::exception& e) {
        return fail_runtime(e.what());
    }
}

int cmd_analyze(const std::vector<std::string>& paths, const std::string& baseline,
                const std::string& fit_system, bool mm1_mode) {
    try {
        if (mm1_mode) {
            std::vector<analyze::Mm1Row> rows;
            for (const std::string& path : paths) {
                std::ifstream in(path);
                if (!in) {
                    return fail_runtime("cannot open " + path);
                }
                auto part = analyze::read_mm1_csv(in, path);
                rows.insert(rows.end(), part.begin(), part.end());
            }
            std::printf("discipline\targmin_rho\tmin_age_s\tmax_rel_error\n");
            for (const auto& s : analyze::summarize_mm1(rows)) {
                std::printf("%s\t%.4g\t%.6g\t%.4g\n", s.discipline.c_str(), s.argmin_rho,
                            s.min_age_s, s.max_rel_error);
            }
            return 0;
        }
        std::vector<analyze::RunRow> rows;
        for (const std::string& path : paths) {
            std::ifstream in(path);
            if (!in) {
                return fail_runtime("cannot open " + path);
            }
            auto part = analyze::read_runs_csv(in, path);
            rows.insert(rows.end(), part.begin(), part.end());
        }
        const auto groups = analyze::summarize(rows);
        std::printf("system\tn_sources\tlambda_hz\truns\tnaoi_mean_s\tnaoi_std_s\tthroughput_bps\n");
        for (const auto& g : groups) {
            std::printf("%s\t%u\t%.6g\t%zu\t%.6g\t%.6g\t%.6g\n", g.key.system.c_str(),
                        g.key.n_sources, g.key.lambda_hz, g.runs, g.naoi_mean, g.naoi_std,
                        g.throughput_mean);
        }
        const auto ratios = analyze::improvement_ratios(
            groups, baseline.empty() ? std::nullopt : std::optional<std::string>(baseline));
        if (!ratios.empty()) {
            std::printf("\nsystem\tn_sources\tlambda_hz\tbaseline\timprovement\n");
            for (const auto& r : ratios) {
                std::printf("%s\t%u\t%.6g\t%s\t%.4g\n", r.key.system.c_str(), r.key.n_sources,
                            r.key.lambda_hz, r.baseline.c_str(), r.ratio);
            }
        }
        if (!fit_system.empty()) {
            const auto fit = analyze::fit_naoi_vs_n(rows, fit_system);
            if (!fit) {
                return fail_runtime("fit: not enough points for system " + fit_system);
            }
            std::printf("\nfit system=%s points=%zu slope=%.6g intercept=%.6g r2=%.6g\n",
                        fit->system.c_str(), fit->points, fit->slope, fit->intercept, fit->r2);
        }
        return 0;
    } catch (const std::exception& e) {
        return fail_runtime(e.what());
    }
}

int cmd_recompute(const std::string& deliveries_path, double horizon_s) {
    try {
        std::ifstream in(deliveries_path);
        if (!in) {
            return fail_runtime("cannot open " + deliveries_path);
        }
        const double value = analyze::naoi_from_deliveries(in, deliveries_path, horizon_s);
        std::printf("naoi_s=%.9g\n", value);
        return 0;
    } catch (const std::exception& e) {
        return fail_runtime(e.what());
    }
}

int cmd_config(const std::string& path, bool render) {
    try {
        ExperimentFile exp = load_experiment(path);
        if (render) {
            std::cout << render_experiment(exp);
        } else {
            std::printf("%s\n", exp.kind == ExperimentFile::Kind::Sim
                                    ? exp.sim.config_hash().c_str()
                                    : exp.harness.config_hash().c_str());
        }
        return 0;
    } catch (const ConfigError& e) {
        return fail_config(e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Freshness-first polling network toolkit: simulator, UDP harness, analysis"};
    app.require_subcommand(1);

    // simulate
    std::string sim_config;
    std::string sim_out;
    std::optional<std::uint64_t> sim_seed;
    auto* simulate = app.add_subcommand("simulate", "run one experiment from a config file");
    simulate->add_option("--config", sim_config, "experiment file")->required();
    simulate->add_option("--seed", sim_seed, "override the seed");
    simulate->add_option("--out", sim_out, "append CSV here instead of stdout");

    // sweep
    std::string sweep_config;
    std::string sweep_axis;
    std::vector<double> sweep_grid;
    std::uint32_t sweep_seeds = 1;
    std::string sweep_out;
    auto* sweepc = app.add_subcommand("sweep", "run a grid of experiments");
    sweepc->add_option("--config", sweep_config, "base experiment file")->required();
    sweepc->add_option("--axis", sweep_axis, "lambda|n|capacity")->required();
    sweepc->add_option("--grid", sweep_grid, "grid values")->required()->delimiter(',');
    sweepc->add_option("--seeds", sweep_seeds, "seed replicates per point");
    sweepc->add_option("--out", sweep_out, "CSV output path");

    // mm1
    std::vector<double> mm1_grid;
    double mm1_mu = 1.0;
    std::uint64_t mm1_deliveries = 1000000;
    std::uint64_t mm1_seed = 1;
    bool mm1_no_sim = false;
    std::string mm1_out;
    auto* mm1 = app.add_subcommand("mm1", "closed-form and simulated M/M/1 age table");
    mm1->add_option("--grid", mm1_grid, "rho values")->required()->delimiter(',');
    mm1->add_option("--mu", mm1_mu, "service rate");
    mm1->add_option("--deliveries", mm1_deliveries, "simulated deliveries per point");
    mm1->add_option("--seed", mm1_seed, "simulation seed");
    mm1->add_flag("--no-sim", mm1_no_sim, "emit only the closed forms");
    mm1->add_option("--out", mm1_out, "CSV output path");

    // serve-destination / serve-source share flag plumbing
    std::string harness_config;
    harness::HarnessConfig flags;
    bool have_flags_bind = false;
    auto add_harness_flags = [&](CLI::App* cmd, bool is_source) {
        cmd->add_option("--config", harness_config, "harness config file");
        auto* bind = cmd->add_option("--bind", flags.bind, "local address (host:port)");
        bind->each([&](const std::string&) { have_flags_bind = true; });
        cmd->add_option("--duration", flags.duration_s, "run duration in seconds");
        cmd->add_option("--timeout-ms", flags.timeout_ms, "poll response timeout");
        cmd->add_option("--mtu", flags.mtu_payload, "payload bytes per datagram");
        cmd->add_option("--seed", flags.seed, "emulator seed");
        cmd->add_option("--metrics-out", flags.metrics_path, "CSV metrics path");
        if (is_source) {
            cmd->add_option("--peer", flags.peer, "destination address (host:port)");
            cmd->add_option("--source-id", flags.source_id, "source identifier");
            cmd->add_option("--profile", flags.profiles, "gps|imu|camera (repeatable)")
                ->delimiter(',');
            cmd->add_option("--jitter", flags.jitter, "period jitter fraction");
            cmd->add_option("--sync-exchanges", flags.sync_exchanges, "startup sync burst size");
            cmd->add_option("--resync-s", flags.resync_s, "re-sync period (0 = off)");
        } else {
            cmd->add_option("--deliveries-out", flags.deliveries_path, "raw delivery log path");
            std::string policy;
            cmd->add_option_function<std::string>(
                   "--policy",
                   [&flags](const std::string& p) {
                       if (p == "mw") flags.policy = Policy::MaxWeight;
                       else if (p == "maf") flags.policy = Policy::MaxAgeFirst;
                       else if (p == "rr") flags.policy = Policy::RoundRobin;
                       else throw CLI::ValidationError("--policy", "expected mw|maf|rr");
                   },
                   "mw|maf|rr");
        }
    };
    auto* served = app.add_subcommand("serve-destination", "run the polling destination");
    add_harness_flags(served, false);
    auto* serves = app.add_subcommand("serve-source", "run one source with sensor emulators");
    add_harness_flags(serves, true);

    // analyze
    std::vector<std::string> analyze_paths;
    std::string analyze_baseline;
    std::string analyze_fit;
    bool analyze_mm1 = false;
    auto* analyzec = app.add_subcommand("analyze", "summarize run CSVs");
    analyzec->add_option("files", analyze_paths, "CSV files")->required();
    analyzec->add_option("--baseline", analyze_baseline,
                         "baseline system 'policy/access/queue' for ratio tables");
    analyzec->add_option("--fit-n", analyze_fit, "linear-fit NAoI vs n for this system");
    analyzec->add_flag("--mm1", analyze_mm1, "inputs are mm1 tables");

    // recompute NAoI from a raw delivery log
    std::string recompute_path;
    double recompute_horizon = 0.0;
    auto* recompute = app.add_subcommand("recompute", "NAoI from a raw delivery log");
    recompute->add_option("--deliveries", recompute_path, "delivery log CSV")->required();
    recompute->add_option("--horizon", recompute_horizon, "horizon in seconds")->required();

    // config utilities
    std::string config_path;
    bool config_render = false;
    auto* configc = app.add_subcommand("config", "hash or canonically render a config");
    configc->add_option("--config", config_path, "experiment file")->required();
    configc->add_flag("--render", config_render, "print the canonical rendering");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (simulate->parsed()) {
        return cmd_simulate(sim_config, sim_seed, sim_out);
    }
    if (sweepc->parsed()) {
        return cmd_sweep(sweep_config, sweep_axis, sweep_grid, sweep_seeds, sweep_out);
    }
    if (mm1->parsed()) {
        return cmd_mm1(mm1_grid, mm1_mu, mm1_deliveries, mm1_seed, !mm1_no_sim, mm1_out);
    }
    if (served->parsed() || serves->parsed()) {
        harness::HarnessConfig cfg = flags;
        if (!harness_config.empty()) {
            try {
                cfg = load_harness_config(harness_config);
            } catch (const ConfigError& e) {
                return fail_config(e.what());
            }
            // flags override file values where given
            for (const auto* opt : (served->parsed() ? served : serves)->get_options()) {
                if (opt->count() == 0) continue;
                const std::string name = opt->get_name();
                if (name == "--bind") cfg.bind = flags.bind;
                if (name == "--peer") cfg.peer = flags.peer;
                if (name == "--duration") cfg.duration_s = flags.duration_s;
                if (name == "--timeout-ms") cfg.timeout_ms = flags.timeout_ms;
                if (name == "--mtu") cfg.mtu_payload = flags.mtu_payload;
                if (name == "--seed") cfg.seed = flags.seed;
                if (name == "--metrics-out") cfg.metrics_path = flags.metrics_path;
                if (name == "--deliveries-out") cfg.deliveries_path = flags.deliveries_path;
                if (name == "--source-id") cfg.source_id = flags.source_id;
                if (name == "--profile") cfg.profiles = flags.profiles;
                if (name == "--jitter") cfg.jitter = flags.jitter;
                if (name == "--sync-exchanges") cfg.sync_exchanges = flags.sync_exchanges;
                if (name == "--resync-s") cfg.resync_s = flags.resync_s;
                if (name == "--policy") cfg.policy = flags.policy;
            }
        }
        cfg.role = serves->parsed() ? harness::Role::Source : harness::Role::Destination;
        if (serves->parsed() && !have_flags_bind && harness_config.empty()) {
            cfg.bind = "0.0.0.0:0";
        }
        return serves->parsed() ? harness::run_source(cfg) : harness::run_destination(cfg);
    }
    if (analyzec->parsed()) {
        return cmd_analyze(analyze_paths, analyze_baseline, analyze_fit, analyze_mm1);
    }
    if (recompute->parsed()) {
        return cmd_recompute(recompute_path, recompute_horizon);
    }
    if (configc->parsed()) {
        return cmd_config(config_path, config_render);
    }
    return 2;
}
