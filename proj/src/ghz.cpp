#include "simtebd/ghz.hpp"

#include <cmath>
#include <string>

#include "simtebd/errors.hpp"

namespace simtebd {

namespace {
constexpr int kMaxDenseSpins = 20;
}

GhzState ghz_state(int n_spins) {
    if (n_spins < 2) throw Error(ErrorKind::Config, "GHZ state needs at least two spins");

    // Bond index carries the common spin orientation.
    std::vector<SiteTensor> tensors(static_cast<std::size_t>(n_spins));
    for (int i = 0; i < n_spins; ++i) {
        const Eigen::Index l = i == 0 ? 1 : 2;
        const Eigen::Index r = i + 1 == n_spins ? 1 : 2;
        for (int s = 0; s < 2; ++s) {
            CMatrix b = CMatrix::Zero(l, r);
            b(l == 1 ? 0 : s, r == 1 ? 0 : s) = 1.0;
            tensors[i].blocks.push_back(std::move(b));
        }
    }
    for (auto& b : tensors.back().blocks) b /= std::sqrt(2.0);

    GhzState out{MpsState::from_tensors(std::move(tensors)), std::nullopt};
    if (n_spins <= kMaxDenseSpins) {
        CVector psi = CVector::Zero(Eigen::Index{1} << n_spins);
        psi(0) = 1.0 / std::sqrt(2.0);
        psi(psi.size() - 1) = 1.0 / std::sqrt(2.0);
        out.dense = std::move(psi);
    }
    return out;
}

double ghz_transformed_seff(int n_spins, int k_transformed, double beta) {
    if (k_transformed < 0 || k_transformed > n_spins) {
        throw Error(ErrorKind::Config, "k must lie in [0, " + std::to_string(n_spins) + "]");
    }
    MpsState state = ghz_state(n_spins).mps;
    const CMatrix gate = matrix_exponential(beta * pauli::z());
    for (int i = 0; i < k_transformed; ++i) state.apply_single_site_gate(i, gate);
    state.canonicalize();
    return effective_entanglement(bond_entropies(state));
}

}  // namespace simtebd
