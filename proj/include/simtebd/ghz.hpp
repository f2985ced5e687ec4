#pragma once

#include <optional>

#include "simtebd/mps.hpp"

namespace simtebd {

struct GhzState {
    MpsState mps;
    std::optional<CVector> dense;  // only for chains short enough to store densely
};

/// (|up ... up> + |down ... down>) / sqrt(2) on n_spins >= 2 sites.
GhzState ghz_state(int n_spins);

/// S_eff of the GHZ state after e^{beta sigma_z} acts on the first k spins,
/// computed on the MPS (single-site gates, then canonicalize).
double ghz_transformed_seff(int n_spins, int k_transformed, double beta);

}  // namespace simtebd
