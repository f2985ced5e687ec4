#pragma once

#include <vector>

#include "simtebd/bath.hpp"
#include "simtebd/tebd.hpp"

namespace simtebd {

/// Dense Hamiltonian on spin (x) mode_1 (x) ... (x) mode_N, spin slowest.
struct DenseInstance {
    CMatrix hamiltonian;
    std::vector<int> dims;
};

inline constexpr int kOracleMaxModes = 6;
inline constexpr int kOracleMaxFock = 6;
inline constexpr long kOracleMaxDim = 1L << 20;
inline constexpr long kOracleMaxBytes = 1L << 31;

DenseInstance dense_hamiltonian(const ModelConfig& cfg, const DiscretizedBath& bath,
                                const SimilarityGenerator& gen);

/// e^{beta D}|up> (x) |0 ... 0>, normalized.
CVector dense_initial_state(const ModelConfig& cfg, const SimilarityGenerator& gen);

struct DenseSample {
    double t;
    CVector psi;      // normalized
    double log_norm;  // accumulated log of stripped norms
};

/// psi(t) = exp(-i H t) psi0 with one dense exponential per distinct interval.
std::vector<DenseSample> propagate_exact(const DenseInstance& instance, const CVector& psi0,
                                         const std::vector<double>& t_grid);

/// Normalized Schmidt values across the cut after the first `cut` sites.
RVector dense_schmidt(const CVector& psi, int cut, const std::vector<int>& dims);

CMatrix dense_reduced_density(const CVector& psi, int site, const std::vector<int>& dims);

/// Observables of a dense trajectory in the transformed frame, recovered
/// with the generator.
std::vector<Observables> dense_trajectory(const ModelConfig& cfg, const SimilarityGenerator& gen,
                                          const std::vector<double>& t_grid);

/// S_eff of the n-spin GHZ state with e^{beta sigma_z} applied to the first
/// k spins: every bond carries the binary entropy of
/// p = e^{2 beta k} / (e^{2 beta k} + e^{-2 beta k}).
double ghz_seff_closed_form(int n_spins, int k_transformed, double beta);

}  // namespace simtebd
