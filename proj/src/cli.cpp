#include "simtebd/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "simtebd/errors.hpp"
#include "simtebd/ghz.hpp"
#include "simtebd/oracle.hpp"

namespace simtebd::cli {

namespace {

std::string num(double x) { return fmt::format("{:.15g}", x); }

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Config, "cannot write " + path.string());
    return out;
}

int exit_code_for(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::Config:
    case ErrorKind::InstanceTooLarge: return kExitConfig;
    case ErrorKind::Divergence: return kExitDivergence;
    default: return kExitFailed;
    }
}

RunConfig load_with_overrides(const Options& opts) {
    RunConfig cfg = load_config(opts.config);
    if (opts.out_prefix) cfg.output_prefix = *opts.out_prefix;
    if (opts.tolerance) {
        if (!(*opts.tolerance > 0.0)) throw Error(ErrorKind::Config, "--tolerance must be > 0");
        cfg.oracle_tolerance = *opts.tolerance;
    }
    return cfg;
}

template <typename Body>
int guarded(std::ostream& log, Body&& body) {
    try {
        return body();
    } catch (const Error& e) {
        fmt::print(log, "error: {}\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        fmt::print(log, "error: {}\n", e.what());
        return kExitFailed;
    }
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record) {
    out << kTrajectoryHeader << '\n';
    for (const auto& row : record.rows) {
        out << num(row.t) << ',' << num(row.norm_factor) << ',' << num(row.sz_fict) << ','
            << num(row.sz_recovered) << ',' << num(row.re_rho01_recovered) << ',' << num(row.seff)
            << ',' << row.max_bond << ',' << num(row.discarded_weight) << '\n';
    }
}

std::filesystem::path run_csv_path(const std::string& prefix) { return prefix + ".csv"; }

std::filesystem::path sweep_csv_path(const std::string& prefix, double beta) {
    return fmt::format("{}_beta_{:g}.csv", prefix, beta);
}

std::filesystem::path sweep_summary_path(const std::string& prefix) { return prefix + "_summary.json"; }

std::filesystem::path ghz_csv_path(const std::string& prefix) { return prefix + "_ghz.csv"; }

std::filesystem::path oracle_csv_path(const std::string& prefix) { return prefix + "_oracle.csv"; }

int cmd_run(const Options& opts, std::ostream& log) {
    return guarded(log, [&] {
        const RunConfig cfg = load_with_overrides(opts);
        const TrajectoryRecord record = run(cfg.model, cfg.make_generator(), cfg.evolution);
        const auto path = run_csv_path(cfg.output_prefix);
        auto out = open_output(path);
        write_trajectory_csv(out, record);
        fmt::print(log, "wrote {} ({} rows)\n", path.string(), record.rows.size());
        return kExitOk;
    });
}

int cmd_sweep_beta(const Options& opts, std::ostream& log) {
    return guarded(log, [&] {
        const RunConfig cfg = load_with_overrides(opts);
        if (cfg.sweep.empty()) throw Error(ErrorKind::Config, "sweep.betas is empty");

        struct Outcome {
            TrajectoryRecord record;
            std::string error;
            int code{kExitOk};
        };
        std::vector<Outcome> outcomes(cfg.sweep.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < cfg.sweep.size(); i = next++) {
                try {
                    run_into(outcomes[i].record, cfg.model, cfg.generator.make(cfg.sweep[i]), cfg.evolution);
                } catch (const Error& e) {
                    outcomes[i].error = e.what();
                    outcomes[i].code = exit_code_for(e);
                } catch (const std::exception& e) {
                    outcomes[i].error = e.what();
                    outcomes[i].code = kExitFailed;
                }
            }
        };
        const auto n_workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, cfg.sweep.size());
        std::vector<std::thread> pool;
        for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();

        nlohmann::ordered_json summary;
        summary["prefix"] = cfg.output_prefix;
        nlohmann::ordered_json results = nlohmann::ordered_json::object();
        int code = kExitOk;
        for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
            const double beta = cfg.sweep[i];
            const auto& outcome = outcomes[i];
            const auto path = sweep_csv_path(cfg.output_prefix, beta);
            auto out = open_output(path);
            write_trajectory_csv(out, outcome.record);

            nlohmann::ordered_json entry;
            entry["beta"] = beta;
            entry["csv"] = path.string();
            entry["status"] = outcome.error.empty() ? "ok" : "failed";
            if (!outcome.record.rows.empty()) {
                const auto& last = outcome.record.rows.back();
                int max_bond = 1;
                for (const auto& row : outcome.record.rows) max_bond = std::max(max_bond, row.max_bond);
                entry["final_t"] = last.t;
                entry["final_seff"] = last.seff;
                entry["final_sz_fict"] = last.sz_fict;
                entry["final_sz_recovered"] = last.sz_recovered;
                entry["max_bond"] = max_bond;
            }
            if (!outcome.error.empty()) {
                entry["error"] = outcome.error;
                if (code == kExitOk) code = outcome.code;
                fmt::print(log, "beta {:g} failed: {}\n", beta, outcome.error);
            }
            results[fmt::format("{:g}", beta)] = entry;
        }
        summary["results"] = results;
        summary["all_ok"] = code == kExitOk;
        const auto summary_path = sweep_summary_path(cfg.output_prefix);
        auto out = open_output(summary_path);
        out << summary.dump(2) << '\n';
        fmt::print(log, "wrote {} and {} trajectory files\n", summary_path.string(), cfg.sweep.size());
        return code;
    });
}

int cmd_ghz_bench(const Options& opts, std::ostream& log) {
    return guarded(log, [&] {
        if (opts.n_spins < 3) throw Error(ErrorKind::Config, "ghz-bench needs at least 3 spins");
        const std::string prefix = opts.out_prefix.value_or("simtebd");
        const auto path = ghz_csv_path(prefix);
        auto out = open_output(path);
        out << "k,seff_mps,seff_closed_form\n";
        double worst = 0.0;
        for (int k = 0; k <= opts.n_spins; ++k) {
            const double mps = ghz_transformed_seff(opts.n_spins, k, opts.beta);
            const double exact = ghz_seff_closed_form(opts.n_spins, k, opts.beta);
            worst = std::max(worst, std::abs(mps - exact));
            out << k << ',' << num(mps) << ',' << num(exact) << '\n';
            fmt::print(log, "k = {:2d}  S_eff = {:.4f}  (closed form {:.4f})\n", k, mps, exact);
        }
        fmt::print(log, "wrote {}; max |mps - closed form| = {:.3g}\n", path.string(), worst);
        return worst <= 1e-10 ? kExitOk : kExitFailed;
    });
}

int cmd_oracle_check(const Options& opts, std::ostream& log) {
    return guarded(log, [&] {
        const RunConfig cfg = load_with_overrides(opts);
        const DiscretizedBath bath = discretize(cfg.model);
        // Size guard first, before any evolution.
        dense_hamiltonian(cfg.model, bath, SimilarityGenerator{});

        const TrajectoryRecord record = run(cfg.model, cfg.make_generator(), cfg.evolution);
        std::vector<double> times;
        for (const auto& row : record.rows) times.push_back(row.t);
        const auto reference = dense_trajectory(cfg.model, SimilarityGenerator{}, times);

        const auto path = oracle_csv_path(cfg.output_prefix);
        auto out = open_output(path);
        out << "t,sz_recovered_mps,sz_dense,abs_dev\n";
        double worst = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double dev = std::abs(record.rows[i].sz_recovered - reference[i].sz_recovered);
            worst = std::max(worst, dev);
            out << num(times[i]) << ',' << num(record.rows[i].sz_recovered) << ','
                << num(reference[i].sz_recovered) << ',' << num(dev) << '\n';
        }
        const bool pass = worst <= cfg.oracle_tolerance;
        fmt::print(log, "max |sz_mps - sz_dense| = {:.3e} (tolerance {:.1e}): {}\n", worst,
                   cfg.oracle_tolerance, pass ? "PASS" : "FAIL");
        return pass ? kExitOk : kExitFailed;
    });
}

int main(int argc, char** argv) {
    CLI::App app{"Similarity-transformed TEBD for the spin-boson model"};
    app.require_subcommand(1);
    Options opts;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* c = sub->add_option("--config", opts.config, "Config file (key = value)");
        if (needs_config) c->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out_prefix, "Output path prefix");
    };

    auto* run_cmd = app.add_subcommand("run", "Evolve one trajectory and write its CSV");
    add_common(run_cmd, true);
    auto* sweep_cmd = app.add_subcommand("sweep-beta", "Run every beta in sweep.betas");
    add_common(sweep_cmd, true);
    auto* ghz_cmd = app.add_subcommand("ghz-bench", "GHZ entanglement under partial transformation");
    ghz_cmd->add_option("--out", opts.out_prefix, "Output path prefix");
    ghz_cmd->add_option("--n-spins", opts.n_spins, "Number of spins")->capture_default_str();
    ghz_cmd->add_option("--beta", opts.beta, "Transformation strength")->capture_default_str();
    auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare the MPS engine with dense propagation");
    add_common(oracle_cmd, true);
    oracle_cmd->add_option("--tolerance", opts.tolerance, "Maximum allowed |sz| deviation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (run_cmd->parsed()) return cmd_run(opts, std::cerr);
    if (sweep_cmd->parsed()) return cmd_sweep_beta(opts, std::cerr);
    if (ghz_cmd->parsed()) return cmd_ghz_bench(opts, std::cerr);
    return cmd_oracle_check(opts, std::cerr);
}

}  // namespace simtebd::cli
