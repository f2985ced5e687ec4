#pragma once

#include <functional>
#include <vector>

#include "simtebd/linalg.hpp"

namespace simtebd {

/// Spin-boson model parameters in units of the spin coupling (hbar = k_B = 1).
/// Defaults are the Drude-bath settings used throughout the project.
struct ModelConfig {
    double delta{1.0};
    double eta{4.0};
    double omega_c{1.0};
    double temperature{2.0};
    double omega_max{12.7324};
    int n_modes{100};
    int fock_dim{6};

    void validate() const;
};

/// Non-unitary similarity transformation e^{beta D} (.) e^{-beta D} acting on
/// the spin, D Hermitian.
class SimilarityGenerator {
public:
    SimilarityGenerator();  // beta = 0, D = sigma_z
    SimilarityGenerator(double beta, CMatrix direction);

    static SimilarityGenerator sigma_z(double beta);
    static SimilarityGenerator sigma_x(double beta);
    /// D = (x sigma_x + z sigma_z) / sqrt(x^2 + z^2).
    static SimilarityGenerator mixed(double beta, double x, double z);
    /// D = (a sigma_+ + b sigma_- + h.c.) / 2.
    static SimilarityGenerator plus_minus(double beta, double a, double b);

    double beta() const noexcept { return beta_; }
    const CMatrix& direction() const noexcept { return direction_; }

    CMatrix forward() const;  // e^{+beta D}
    CMatrix inverse() const;  // e^{-beta D}
    /// e^{beta D} op e^{-beta D}
    CMatrix transform(const CMatrix& op) const;

private:
    double beta_;
    CMatrix direction_;
};

using SpectralDensity = std::function<double(double)>;

struct BathMode {
    double omega;
    double coupling;
};

struct DiscretizedBath {
    std::vector<BathMode> modes;
    int fock_dim{2};
};

struct HamiltonianTerms {
    CMatrix spin_local;               // 2 x 2, non-Hermitian once transformed
    std::vector<CMatrix> mode_terms;  // (2d) x (2d) on spin (x) mode, spin index slow
    int fock_dim{2};
};

double drude_density(double omega, double eta, double omega_c);

SpectralDensity drude(double eta, double omega_c);

/// J_th(w) = J(w) / (1 - exp(-w/T)) with J extended as an odd function,
/// i.e. (1/2)[1 + coth(w / 2T)] J(w). Finite at w = 0.
SpectralDensity thermalize_density(SpectralDensity J, double temperature);

/// Midpoint grid on [-omega_max, omega_max], c_n^2 = J_th(w_n) dw / pi.
DiscretizedBath discretize(const SpectralDensity& J_th, int n_modes, double omega_max,
                           int fock_dim = 2);

DiscretizedBath discretize(const ModelConfig& cfg);

CMatrix transform_spin_term(double delta, const SimilarityGenerator& gen);

HamiltonianTerms build_star_terms(const ModelConfig& cfg, const DiscretizedBath& bath,
                                  const SimilarityGenerator& gen);

namespace boson {
CMatrix annihilation(int d);
CMatrix number(int d);
CMatrix position(int d);  // a + a^dagger
}  // namespace boson

}  // namespace simtebd
