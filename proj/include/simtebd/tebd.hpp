#pragma once

#include <functional>
#include <vector>

#include "simtebd/bath.hpp"
#include "simtebd/mps.hpp"

namespace simtebd {

struct EvolutionConfig {
    double dt{0.005};
    double t_final{2.0};
    TruncationPolicy policy{1e-5, std::nullopt};
    int record_stride{10};
    int bond_cap{512};  // divergence guard on the bond dimension

    void validate() const;
    long n_steps() const;
};

enum class GateKind { Local, TwoSite, Swap };

struct PlanEntry {
    GateKind kind;
    int site;      // left site for two-site entries
    CMatrix gate;  // for Swap entries, the permutation matrix
};

/// One symmetric second-order step on the star: the spin walks right through
/// the chain meeting each mode once, then walks back.
struct TrotterPlan {
    std::vector<PlanEntry> entries;
    std::vector<int> spin_site;  // spin position after each entry
    int n_sites{0};
    int fock_dim{0};
    double dt{0.0};
};

TrotterPlan build_trotter2_plan(const HamiltonianTerms& terms, double dt);

struct StepReport {
    double norm_factor{1.0};
    double discarded_weight{0.0};
    int max_bond{1};
};

/// Applies every entry of the plan, then canonicalizes and strips the norm.
/// Consecutive two-site entries on the same bond are applied as one product.
StepReport step(MpsState& state, const TrotterPlan& plan, const TruncationPolicy& policy,
                int bond_cap = 512);

/// rho = e^{-beta D} rho_f e^{-beta D} / tr(...)
CMatrix recover_density(const CMatrix& rho_f, const SimilarityGenerator& gen);

struct Observables {
    double sz_fict{0.0};
    double sz_recovered{0.0};
    double re_rho01_recovered{0.0};
    CMatrix rho_fict;
    CMatrix rho_recovered;
};

Observables observables_from_density(const CMatrix& rho_f, const SimilarityGenerator& gen);
Observables observables(const MpsState& state, const SimilarityGenerator& gen);

/// e^{beta D}|up> (x) |0 ... 0>, normalized; spin on site 0.
MpsState initial_state(const ModelConfig& cfg, const SimilarityGenerator& gen);

struct TrajectoryRow {
    double t{0.0};
    double norm_factor{1.0};
    double sz_fict{0.0};
    double sz_recovered{0.0};
    double re_rho01_recovered{0.0};
    std::vector<double> bond_entropies;
    double seff{0.0};  // NaN when the chain has fewer than two bonds
    int max_bond{1};
    double discarded_weight{0.0};  // cumulative
    double log_norm{0.0};
};

struct TrajectoryRecord {
    std::vector<TrajectoryRow> rows;
};

using StepObserver = std::function<void(const MpsState&, const StepReport&, long step)>;

TrajectoryRecord run(const ModelConfig& cfg, const SimilarityGenerator& gen,
                     const EvolutionConfig& evo, const StepObserver& observer = {});

/// Same as run(), appending rows to `record` as they are produced so that a
/// failed trajectory leaves its completed rows behind.
void run_into(TrajectoryRecord& record, const ModelConfig& cfg, const SimilarityGenerator& gen,
              const EvolutionConfig& evo, const StepObserver& observer = {});

}  // namespace simtebd
