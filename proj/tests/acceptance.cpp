// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <fmt/core.h>

#include "simtebd/bath.hpp"
#include "simtebd/cli.hpp"
#include "simtebd/errors.hpp"
#include "simtebd/oracle.hpp"
#include "simtebd/tebd.hpp"

namespace fs = std::filesystem;
using namespace simtebd;

namespace {

const fs::path kTmp{SIMTEBD_TEST_TMPDIR};

struct Verdict {
    bool pass{false};
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Columns of a CSV file with a header row, keyed by column name.
std::map<std::string, std::vector<double>> read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    std::vector<std::string> names;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) names.push_back(cell);
    }
    std::map<std::string, std::vector<double>> cols;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        for (const auto& name : names) {
            std::getline(ss, cell, ',');
            cols[name].push_back(std::stod(cell));
        }
    }
    return cols;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Index of the sample at time t on a uniform grid.
std::size_t row_at(const std::vector<double>& ts, double t) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (std::abs(ts[i] - t) < 1e-9) return i;
    }
    throw std::runtime_error(fmt::format("no sample at t = {}", t));
}

// Shared accumulators for the hygiene criterion, filled by the dynamical runs.
struct Hygiene {
    double gauge{0.0};
    double trace{0.0};
    double hermiticity{0.0};
    double min_eigenvalue{1.0};
    long steps{0};

    void observe(const MpsState& state, const SimilarityGenerator& gen) {
        gauge = std::max(gauge, state.gauge_residual());
        const CMatrix rho = observables(state, gen).rho_recovered;
        trace = std::max(trace, std::abs(rho.trace() - cd(1.0)));
        hermiticity = std::max(hermiticity, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
        const CMatrix herm = 0.5 * (rho + rho.adjoint());
        Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
        min_eigenvalue = std::min(min_eigenvalue, es.eigenvalues().minCoeff());
        ++steps;
    }
};

Hygiene hygiene;

ModelConfig small_instance() {
    ModelConfig cfg;
    cfg.n_modes = 4;
    cfg.fock_dim = 4;
    return cfg;
}

EvolutionConfig small_evolution() {
    EvolutionConfig evo;
    evo.dt = 0.005;
    evo.t_final = 2.0;
    evo.policy = {1e-8, std::nullopt};
    evo.record_stride = 1;
    return evo;
}

TrajectoryRecord tracked_run(const ModelConfig& cfg, const SimilarityGenerator& gen,
                             const EvolutionConfig& evo) {
    return run(cfg, gen, evo, [&](const MpsState& s, const StepReport&, long) { hygiene.observe(s, gen); });
}

// The beta = 0 reference is shared between the oracle and frame criteria.
TrajectoryRecord reference;
double reference_seconds = 0.0;

Verdict ghz_reproduction() {
    const auto start = Clock::now();
    fs::create_directories(kTmp / "ghz");
    cli::Options opts;
    opts.n_spins = 10;
    opts.beta = 0.1;
    opts.out_prefix = (kTmp / "ghz" / "bench").string();
    std::ostringstream log;
    const int code = cli::cmd_ghz_bench(opts, log);
    const double elapsed = seconds_since(start);
    if (code != cli::kExitOk) return {false, fmt::format("ghz-bench exited {}: {}", code, log.str())};

    const std::vector<double> listed{1.04, 1.01, 0.93, 0.82, 0.69, 0.57, 0.45, 0.36, 0.28, 0.22, 0.17};
    auto cols = read_csv(cli::ghz_csv_path(*opts.out_prefix));
    if (cols["k"].size() != listed.size()) return {false, "wrong number of rows"};
    double worst_listed = 0.0;
    double worst_pair = 0.0;
    for (std::size_t k = 0; k < listed.size(); ++k) {
        worst_listed = std::max(worst_listed, std::abs(cols["seff_mps"][k] - listed[k]));
        worst_pair = std::max(worst_pair, std::abs(cols["seff_mps"][k] - cols["seff_closed_form"][k]));
    }
    const bool ok = worst_listed <= 0.005 && worst_pair <= 1e-10 && elapsed < 5.0;
    return {ok, fmt::format("max |S_eff - listed| = {:.4f} (tol 0.005), max |mps - closed form| = {:.2e} "
                            "(tol 1e-10), {:.2f} s (limit 5 s)",
                            worst_listed, worst_pair, elapsed)};
}

Verdict oracle_equivalence() {
    const auto start = Clock::now();
    const ModelConfig cfg = small_instance();
    const SimilarityGenerator gen{};
    reference = tracked_run(cfg, gen, small_evolution());
    reference_seconds = seconds_since(start);

    std::vector<double> grid;
    for (const auto& row : reference.rows) grid.push_back(row.t);
    const auto dense = dense_trajectory(cfg, gen, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(reference.rows[i].sz_fict - dense[i].sz_fict));
    }
    const double elapsed = seconds_since(start);
    const bool ok = grid.size() == 401 && worst <= 1e-3 && elapsed < 120.0;
    return {ok, fmt::format("{} samples, max |sz_mps - sz_dense| = {:.2e} (tol 1e-3), {:.1f} s (limit 120 s)",
                            grid.size(), worst, elapsed)};
}

Verdict frame_equivalence() {
    if (reference.rows.empty()) return {false, "beta = 0 reference run missing"};
    const auto start = Clock::now();
    double worst_sz = 0.0;
    double worst_coh = 0.0;
    for (double beta : {-0.4, 0.4, 0.8}) {
        const auto rec = tracked_run(small_instance(), SimilarityGenerator::sigma_z(beta), small_evolution());
        if (rec.rows.size() != reference.rows.size()) return {false, "sample grids differ"};
        for (std::size_t i = 0; i < rec.rows.size(); ++i) {
            worst_sz = std::max(worst_sz, std::abs(rec.rows[i].sz_recovered - reference.rows[i].sz_recovered));
            worst_coh = std::max(worst_coh, std::abs(rec.rows[i].re_rho01_recovered -
                                                     reference.rows[i].re_rho01_recovered));
        }
    }
    const double elapsed = seconds_since(start) + reference_seconds;
    const bool ok = worst_sz <= 5e-3 && worst_coh <= 5e-3 && elapsed < 300.0;
    return {ok, fmt::format("max |d sz| = {:.2e}, max |d Re rho01| = {:.2e} (tol 5e-3), {:.1f} s (limit 300 s)",
                            worst_sz, worst_coh, elapsed)};
}

// Desk-scale sweep shared by the freezing and suppression criteria.
std::map<double, std::map<std::string, std::vector<double>>> desk;
double desk_seconds = 0.0;
std::string desk_error;

void run_desk_sweep() {
    const auto start = Clock::now();
    fs::create_directories(kTmp / "desk");
    const fs::path config = kTmp / "desk" / "desk.cfg";
    {
        std::ofstream out(config);
        out << "model.n_modes = 60\n"
               "model.fock_dim = 6\n"
               "evolution.dt = 0.005\n"
               "evolution.t_final = 2.0\n"
               "evolution.threshold = 1e-5\n"
               "evolution.record_stride = 1\n"
               "sweep.betas = -0.4, 0, 0.4, 0.8\n";
    }
    cli::Options opts;
    opts.config = config;
    opts.out_prefix = (kTmp / "desk" / "sweep").string();
    std::ostringstream log;
    const int code = cli::cmd_sweep_beta(opts, log);
    desk_seconds = seconds_since(start);
    if (code != cli::kExitOk) {
        desk_error = fmt::format("sweep-beta exited {}: {}", code, log.str());
        return;
    }
    for (double beta : {-0.4, 0.0, 0.4, 0.8}) desk[beta] = read_csv(cli::sweep_csv_path(*opts.out_prefix, beta));
}

Verdict freezing_ordering() {
    run_desk_sweep();
    if (!desk_error.empty()) return {false, desk_error};
    const std::vector<double> betas{-0.4, 0.0, 0.4, 0.8};
    bool ordered = true;
    std::string values;
    for (double t : {1.0, 2.0}) {
        values += fmt::format(" t={:g}:", t);
        double prev = -2.0;
        for (double beta : betas) {
            auto& cols = desk[beta];
            const double sz = cols["sz_fict"][row_at(cols["t"], t)];
            values += fmt::format(" {:.3f}", sz);
            if (sz < prev) ordered = false;
            prev = sz;
        }
    }
    const auto& frozen = desk[0.8]["sz_fict"];
    const double floor = *std::min_element(frozen.begin(), frozen.end());
    const bool ok = ordered && floor >= 0.8 && desk_seconds < 900.0;
    return {ok, fmt::format("sz_fict over beta = -0.4, 0, 0.4, 0.8 ->{} ({}); min sz_fict(beta = 0.8) = {:.4f} "
                            "(>= 0.8), {:.0f} s (limit 900 s)",
                            values, ordered ? "nondecreasing" : "NOT ordered", floor, desk_seconds)};
}

Verdict entanglement_suppression() {
    if (!desk_error.empty()) return {false, desk_error};
    if (desk.empty()) return {false, "desk-scale sweep missing"};
    auto seff_end = [](double beta) {
        auto& cols = desk[beta];
        return cols["seff"][row_at(cols["t"], 2.0)];
    };
    const double s0 = seff_end(0.0);
    const double s4 = seff_end(0.4);
    const double s8 = seff_end(0.8);
    const bool ok = s8 <= 0.7 * s0 && s4 <= s0 && s8 <= s4;
    return {ok, fmt::format("S_eff(t=2) at beta = 0, 0.4, 0.8: {:.4f}, {:.4f}, {:.4f}; ratio 0.8/0 = {:.3f} "
                            "(<= 0.7)",
                            s0, s4, s8, s8 / s0)};
}

Eigen::VectorXcd sorted_spectrum(const CMatrix& h) {
    Eigen::ComplexEigenSolver<CMatrix> es(h, false);
    Eigen::VectorXcd ev = es.eigenvalues();
    std::sort(ev.data(), ev.data() + ev.size(), [](cd a, cd b) { return a.real() < b.real(); });
    return ev;
}

Verdict spectrum_invariance() {
    ModelConfig cfg;
    cfg.n_modes = 2;
    cfg.fock_dim = 3;
    const DiscretizedBath bath = discretize(cfg);
    const CMatrix h0 = dense_hamiltonian(cfg, bath, SimilarityGenerator{}).hamiltonian;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h0, Eigen::EigenvaluesOnly);
    const Eigen::VectorXcd reference_ev = es.eigenvalues().cast<cd>();
    double worst = 0.0;
    double departure = 0.0;
    for (double beta : {0.3, 0.8}) {
        for (const auto& gen : {SimilarityGenerator::sigma_z(beta), SimilarityGenerator::sigma_x(beta),
                                SimilarityGenerator::mixed(beta, 1.0, 1.0)}) {
            const CMatrix h = dense_hamiltonian(cfg, bath, gen).hamiltonian;
            departure = std::max(departure, (h - h.adjoint()).cwiseAbs().maxCoeff());
            worst = std::max(worst, (sorted_spectrum(h) - reference_ev).cwiseAbs().maxCoeff());
        }
    }
    // A Hermitian H(beta) would make the check vacuous.
    const bool ok = worst <= 1e-8 && departure > 1e-3;
    return {ok, fmt::format("dim {}, max eigenvalue deviation = {:.2e} (tol 1e-8), non-Hermiticity of H(beta) = "
                            "{:.2f}",
                            h0.rows(), worst, departure)};
}

Verdict trotter_order() {
    ModelConfig cfg;
    cfg.n_modes = 2;
    cfg.fock_dim = 3;
    const SimilarityGenerator gen{};
    const double t_end = 1.0;
    const CMatrix exact = dense_trajectory(cfg, gen, {0.0, t_end}).back().rho_fict;

    auto endpoint_error = [&](double dt) {
        EvolutionConfig evo;
        evo.dt = dt;
        evo.t_final = t_end;
        evo.policy = {0.0, std::nullopt};
        evo.record_stride = 1000000;
        CMatrix rho;
        run(cfg, gen, evo, [&](const MpsState& s, const StepReport&, long step) {
            if (step == evo.n_steps()) rho = reduced_spin_density(s);
        });
        return (rho - exact).norm();
    };
    const double coarse = endpoint_error(0.02);
    const double fine = endpoint_error(0.01);
    const double ratio = coarse / fine;
    const bool ok = ratio >= 3.2 && ratio <= 4.8;
    return {ok, fmt::format("||rho_mps - rho_dense||_F at t = 1: dt 0.02 -> {:.3e}, dt 0.01 -> {:.3e}, ratio {:.3f} "
                            "(4 +/- 20%)",
                            coarse, fine, ratio)};
}

double unitarity_defect() {
    const ModelConfig cfg;  // full default instance
    const HamiltonianTerms terms = build_star_terms(cfg, discretize(cfg), SimilarityGenerator{});
    const TrotterPlan plan = build_trotter2_plan(terms, 0.005);
    double worst = 0.0;
    for (const auto& e : plan.entries) {
        const CMatrix id = CMatrix::Identity(e.gate.cols(), e.gate.cols());
        worst = std::max(worst, (e.gate.adjoint() * e.gate - id).cwiseAbs().maxCoeff());
    }
    return worst;
}

bool identical_reruns(std::string& detail) {
    fs::create_directories(kTmp / "rerun");
    const fs::path config = kTmp / "rerun" / "rerun.cfg";
    {
        std::ofstream out(config);
        out << "model.n_modes = 8\n"
               "model.fock_dim = 4\n"
               "generator.beta = 0.4\n"
               "evolution.dt = 0.01\n"
               "evolution.t_final = 0.5\n"
               "evolution.record_stride = 1\n"
               "sweep.betas = 0, 0.8\n";
    }
    bool same = true;
    std::vector<std::string> files;
    for (const char* tag : {"a", "b"}) {
        cli::Options opts;
        opts.config = config;
        opts.out_prefix = (kTmp / "rerun" / tag).string();
        std::ostringstream log;
        if (cli::cmd_run(opts, log) != cli::kExitOk || cli::cmd_sweep_beta(opts, log) != cli::kExitOk) {
            detail = "rerun command failed: " + log.str();
            return false;
        }
        files.push_back(slurp(cli::run_csv_path(*opts.out_prefix)));
        files.push_back(slurp(cli::sweep_csv_path(*opts.out_prefix, 0.0)));
        files.push_back(slurp(cli::sweep_csv_path(*opts.out_prefix, 0.8)));
    }
    for (std::size_t i = 0; i < 3; ++i) same = same && !files[i].empty() && files[i] == files[i + 3];
    detail = same ? "3 CSV files byte-identical" : "CSV files differ between reruns";
    return same;
}

Verdict numerical_hygiene() {
    // One more non-unitary run with truncation active, on a longer chain.
    ModelConfig cfg;
    cfg.n_modes = 20;
    cfg.fock_dim = 4;
    EvolutionConfig evo;
    evo.t_final = 1.0;
    tracked_run(cfg, SimilarityGenerator::sigma_z(0.8), evo);

    const double unitarity = unitarity_defect();
    std::string rerun_detail;
    const bool reruns = identical_reruns(rerun_detail);
    const bool ok = hygiene.steps > 0 && hygiene.gauge <= 1e-10 && unitarity <= 1e-12 && hygiene.trace <= 1e-10 &&
                    hygiene.hermiticity <= 1e-10 && hygiene.min_eigenvalue >= -1e-10 && reruns;
    return {ok, fmt::format("{} steps: gauge residual {:.1e} (<= 1e-10); beta=0 gate unitarity {:.1e} (<= 1e-12); "
                            "recovered rho |tr-1| {:.1e}, hermiticity {:.1e}, min eigenvalue {:.2e}; {}",
                            hygiene.steps, hygiene.gauge, unitarity, hygiene.trace, hygiene.hermiticity,
                            hygiene.min_eigenvalue, rerun_detail)};
}

}  // namespace

int main() {
    fs::create_directories(kTmp);
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"ghz-reproduction", ghz_reproduction},
        {"oracle-equivalence", oracle_equivalence},
        {"frame-equivalence", frame_equivalence},
        {"freezing-ordering", freezing_ordering},
        {"entanglement-suppression", entanglement_suppression},
        {"spectrum-invariance", spectrum_invariance},
        {"trotter-order", trotter_order},
        {"numerical-hygiene", numerical_hygiene},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failures;
        fmt::print("{} {}: {}\n", v.pass ? "PASS" : "FAIL", name, v.detail);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
