#include "simtebd/tebd.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "simtebd/errors.hpp"

namespace simtebd {

void EvolutionConfig::validate() const {
    policy.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::Config, "evolution.dt must be > 0");
    if (!(t_final >= dt) || !std::isfinite(t_final)) {
        throw Error(ErrorKind::Config, "evolution.t_final must be >= dt");
    }
    if (record_stride < 1) throw Error(ErrorKind::Config, "evolution.record_stride must be >= 1");
    if (bond_cap < 1) throw Error(ErrorKind::Config, "evolution.bond_cap must be >= 1");
}

long EvolutionConfig::n_steps() const {
    return std::max(1L, std::lround(t_final / dt));
}

TrotterPlan build_trotter2_plan(const HamiltonianTerms& terms, double dt) {
    const int n_modes = static_cast<int>(terms.mode_terms.size());
    const int d = terms.fock_dim;
    const cd half_step(0.0, -0.5 * dt);

    TrotterPlan plan;
    plan.n_sites = n_modes + 1;
    plan.fock_dim = d;
    plan.dt = dt;

    const CMatrix local = matrix_exponential(half_step * terms.spin_local);
    std::vector<CMatrix> mode_gates;
    mode_gates.reserve(n_modes);
    for (const auto& h : terms.mode_terms) mode_gates.push_back(matrix_exponential(half_step * h));

    int spin = 0;
    auto push = [&](GateKind kind, int site, CMatrix gate) {
        plan.entries.push_back({kind, site, std::move(gate)});
        if (kind == GateKind::Swap) spin = (spin == site) ? site + 1 : site;
        plan.spin_site.push_back(spin);
    };

    push(GateKind::Local, 0, local);
    // Forward: spin at site n meets mode n + 1 on its right, then hops over it.
    for (int n = 0; n < n_modes; ++n) {
        push(GateKind::TwoSite, n, mode_gates[n]);
        if (n + 1 < n_modes) push(GateKind::Swap, n, swap_matrix(2, d));
    }
    // Backward: mirror image.
    for (int n = n_modes - 1; n >= 0; --n) {
        if (n + 1 < n_modes) push(GateKind::Swap, n, swap_matrix(d, 2));
        push(GateKind::TwoSite, n, mode_gates[n]);
    }
    push(GateKind::Local, 0, local);
    return plan;
}

StepReport step(MpsState& state, const TrotterPlan& plan, const TruncationPolicy& policy,
                int bond_cap) {
    if (state.size() != plan.n_sites) {
        throw Error(ErrorKind::Dimension, "state has " + std::to_string(state.size()) +
                                              " sites, plan expects " + std::to_string(plan.n_sites));
    }
    StepReport report;
    const auto& entries = plan.entries;
    std::size_t i = 0;
    while (i < entries.size()) {
        const PlanEntry& head = entries[i];
        if (head.kind == GateKind::Local) {
            state.apply_single_site_gate(head.site, head.gate);
            ++i;
            continue;
        }
        int left = state.physical_dim(head.site);
        int right = state.physical_dim(head.site + 1);
        CMatrix product = CMatrix::Identity(left * right, left * right);
        bool exchanged = false;
        std::size_t j = i;
        for (; j < entries.size() && entries[j].kind != GateKind::Local && entries[j].site == head.site;
             ++j) {
            if (entries[j].gate.cols() != product.rows()) {
                throw Error(ErrorKind::Gate, "plan entry " + std::to_string(j) +
                                                 " does not match the physical dimensions");
            }
            product = entries[j].gate * product;
            if (entries[j].kind == GateKind::Swap) {
                std::swap(left, right);
                exchanged = !exchanged;
            }
        }
        const bool next_is_right = j < entries.size() && entries[j].site > head.site;
        report.discarded_weight +=
            state.apply_two_site_map(head.site, product, left, right, exchanged, policy,
                                     next_is_right ? SweepDirection::Right : SweepDirection::Left);
        if (state.bond_dim(head.site) > bond_cap) {
            throw Error(ErrorKind::Divergence, "bond dimension " +
                                                   std::to_string(state.bond_dim(head.site)) +
                                                   " exceeds cap " + std::to_string(bond_cap));
        }
        i = j;
    }
    report.norm_factor = state.canonicalize();
    report.max_bond = state.max_bond_dim();
    return report;
}

CMatrix recover_density(const CMatrix& rho_f, const SimilarityGenerator& gen) {
    if (rho_f.rows() != 2 || rho_f.cols() != 2) {
        throw Error(ErrorKind::Dimension, "recover_density expects a 2x2 density matrix");
    }
    if (std::abs(rho_f.trace() - cd(1.0)) > 1e-8) {
        throw Error(ErrorKind::Normalization, "recover_density expects a trace-one input");
    }
    if (gen.beta() == 0.0) return rho_f;
    const CMatrix back = gen.inverse();
    const CMatrix raw = back * rho_f * back;
    const double tr = raw.trace().real();
    if (!(std::abs(tr) > 1e-300) || !std::isfinite(tr)) {
        throw Error(ErrorKind::RecoveryDegenerate, "recovered density has vanishing trace");
    }
    return raw / tr;
}

Observables observables_from_density(const CMatrix& rho_f, const SimilarityGenerator& gen) {
    Observables obs;
    obs.rho_fict = rho_f;
    obs.rho_recovered = recover_density(rho_f, gen);
    obs.sz_fict = (pauli::z() * rho_f).trace().real();
    obs.sz_recovered = (pauli::z() * obs.rho_recovered).trace().real();
    obs.re_rho01_recovered = obs.rho_recovered(0, 1).real();
    return obs;
}

Observables observables(const MpsState& state, const SimilarityGenerator& gen) {
    return observables_from_density(reduced_spin_density(state), gen);
}

MpsState initial_state(const ModelConfig& cfg, const SimilarityGenerator& gen) {
    cfg.validate();
    CVector up = CVector::Zero(2);
    up(0) = 1.0;
    CVector spin = gen.forward() * up;
    spin.normalize();
    CVector vacuum = CVector::Zero(cfg.fock_dim);
    vacuum(0) = 1.0;
    std::vector<CVector> locals{spin};
    locals.insert(locals.end(), static_cast<std::size_t>(cfg.n_modes), vacuum);
    return MpsState::from_product_state(locals);
}

namespace {

TrajectoryRow make_row(const MpsState& state, const SimilarityGenerator& gen, double t,
                       double norm_factor, double discarded, long step_index) {
    TrajectoryRow row;
    row.t = t;
    row.norm_factor = norm_factor;
    const Observables obs = observables(state, gen);
    row.sz_fict = obs.sz_fict;
    row.sz_recovered = obs.sz_recovered;
    row.re_rho01_recovered = obs.re_rho01_recovered;
    row.bond_entropies = bond_entropies(state).entropies;
    row.seff = row.bond_entropies.size() >= 2 ? effective_entanglement(row.bond_entropies)
                                              : std::numeric_limits<double>::quiet_NaN();
    row.max_bond = state.max_bond_dim();
    row.discarded_weight = discarded;
    row.log_norm = state.log_norm();
    if (!std::isfinite(row.sz_fict) || !std::isfinite(row.sz_recovered) ||
        !std::isfinite(row.re_rho01_recovered) || !std::isfinite(norm_factor)) {
        throw Error(ErrorKind::Divergence, "non-finite observable at step " + std::to_string(step_index));
    }
    return row;
}

}  // namespace

TrajectoryRecord run(const ModelConfig& cfg, const SimilarityGenerator& gen,
                     const EvolutionConfig& evo, const StepObserver& observer) {
    TrajectoryRecord record;
    run_into(record, cfg, gen, evo, observer);
    return record;
}

void run_into(TrajectoryRecord& record, const ModelConfig& cfg, const SimilarityGenerator& gen,
              const EvolutionConfig& evo, const StepObserver& observer) {
    cfg.validate();
    evo.validate();
    const DiscretizedBath bath = discretize(cfg);
    const HamiltonianTerms terms = build_star_terms(cfg, bath, gen);
    const TrotterPlan plan = build_trotter2_plan(terms, evo.dt);
    MpsState state = initial_state(cfg, gen);

    record.rows.push_back(make_row(state, gen, 0.0, 1.0, 0.0, 0));

    const long n_steps = evo.n_steps();
    double discarded = 0.0;
    for (long k = 1; k <= n_steps; ++k) {
        StepReport report;
        try {
            report = step(state, plan, evo.policy, evo.bond_cap);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Divergence) throw;
            throw Error(ErrorKind::Divergence,
                        "step " + std::to_string(k) + " (t = " + std::to_string(k * evo.dt) +
                            "): " + e.what());
        }
        discarded += report.discarded_weight;
        if (observer) observer(state, report, k);
        if (k % evo.record_stride == 0 || k == n_steps) {
            record.rows.push_back(
                make_row(state, gen, static_cast<double>(k) * evo.dt, report.norm_factor, discarded, k));
        }
    }
}

}  // namespace simtebd
