#include "simtebd/bath.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "simtebd/errors.hpp"

namespace simtebd {

void ModelConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw Error(ErrorKind::Config, what);
    };
    require(std::isfinite(delta) && delta > 0.0, "model.delta must be > 0");
    require(std::isfinite(eta) && eta >= 0.0, "model.eta must be >= 0");
    require(std::isfinite(omega_c) && omega_c > 0.0, "model.omega_c must be > 0");
    require(std::isfinite(temperature) && temperature > 0.0, "model.temperature must be > 0");
    require(std::isfinite(omega_max) && omega_max > 0.0, "model.omega_max must be > 0");
    require(n_modes >= 1, "model.n_modes must be >= 1");
    require(fock_dim >= 2, "model.fock_dim must be >= 2");
}

SimilarityGenerator::SimilarityGenerator() : beta_(0.0), direction_(pauli::z()) {}

SimilarityGenerator::SimilarityGenerator(double beta, CMatrix direction)
    : beta_(beta), direction_(std::move(direction)) {
    if (!std::isfinite(beta_)) {
        throw Error(ErrorKind::Config, "generator beta must be finite");
    }
    if (direction_.rows() != 2 || direction_.cols() != 2) {
        throw Error(ErrorKind::Config, "generator direction must be 2x2");
    }
    if (!all_finite(direction_) || hermiticity_residual(direction_) > 1e-12) {
        throw Error(ErrorKind::Config, "generator direction must be Hermitian");
    }
}

SimilarityGenerator SimilarityGenerator::sigma_z(double beta) { return {beta, pauli::z()}; }

SimilarityGenerator SimilarityGenerator::sigma_x(double beta) { return {beta, pauli::x()}; }

SimilarityGenerator SimilarityGenerator::mixed(double beta, double x, double z) {
    const double norm = std::hypot(x, z);
    if (!(norm > 0.0)) {
        throw Error(ErrorKind::Config, "mixed generator needs (x, z) != (0, 0)");
    }
    return {beta, (x * pauli::x() + z * pauli::z()) / norm};
}

SimilarityGenerator SimilarityGenerator::plus_minus(double beta, double a, double b) {
    CMatrix raw = a * pauli::plus() + b * pauli::minus();
    CMatrix herm = 0.5 * (raw + raw.adjoint());
    if (herm.isZero(0.0)) {
        throw Error(ErrorKind::Config, "plus_minus generator is identically zero");
    }
    return {beta, herm};
}

CMatrix SimilarityGenerator::forward() const { return matrix_exponential(beta_ * direction_); }

CMatrix SimilarityGenerator::inverse() const { return matrix_exponential(-beta_ * direction_); }

CMatrix SimilarityGenerator::transform(const CMatrix& op) const {
    if (beta_ == 0.0) return op;
    return forward() * op * inverse();
}

double drude_density(double omega, double eta, double omega_c) {
    if (!(omega_c > 0.0)) {
        throw Error(ErrorKind::Config, "Drude density needs omega_c > 0");
    }
    return eta * omega_c * omega / (omega_c * omega_c + omega * omega);
}

SpectralDensity drude(double eta, double omega_c) {
    if (!(omega_c > 0.0)) {
        throw Error(ErrorKind::Config, "Drude density needs omega_c > 0");
    }
    return [eta, omega_c](double omega) { return drude_density(omega, eta, omega_c); };
}

SpectralDensity thermalize_density(SpectralDensity J, double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw Error(ErrorKind::Config, "thermalization needs temperature > 0");
    }
    return [J = std::move(J), temperature](double omega) {
        if (omega == 0.0) {
            // limit of J(w) / (1 - e^{-w/T}) is J'(0) T
            const double h = 1e-6 * temperature;
            return (J(h) - J(-h)) / (2.0 * h) * temperature;
        }
        const double x = omega / temperature;
        const double value = J(omega) / -std::expm1(-x);
        return std::max(0.0, value);
    };
}

DiscretizedBath discretize(const SpectralDensity& J_th, int n_modes, double omega_max,
                           int fock_dim) {
    if (n_modes < 1) throw Error(ErrorKind::Config, "discretize needs n_modes >= 1");
    if (!(omega_max > 0.0)) throw Error(ErrorKind::Config, "discretize needs omega_max > 0");
    if (fock_dim < 2) throw Error(ErrorKind::Config, "discretize needs fock_dim >= 2");

    DiscretizedBath bath;
    bath.fock_dim = fock_dim;
    bath.modes.reserve(static_cast<std::size_t>(n_modes));
    const double dw = 2.0 * omega_max / n_modes;
    for (int n = 0; n < n_modes; ++n) {
        const double omega = -omega_max + (n + 0.5) * dw;
        const double weight = std::max(0.0, J_th(omega)) * dw / std::numbers::pi;
        bath.modes.push_back({omega, std::sqrt(weight)});
    }
    return bath;
}

DiscretizedBath discretize(const ModelConfig& cfg) {
    cfg.validate();
    auto J_th = thermalize_density(drude(cfg.eta, cfg.omega_c), cfg.temperature);
    return discretize(J_th, cfg.n_modes, cfg.omega_max, cfg.fock_dim);
}

CMatrix transform_spin_term(double delta, const SimilarityGenerator& gen) {
    return gen.transform(delta * pauli::x());
}

namespace boson {

CMatrix annihilation(int d) {
    CMatrix a = CMatrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

CMatrix number(int d) {
    CMatrix m = CMatrix::Zero(d, d);
    for (int n = 0; n < d; ++n) m(n, n) = static_cast<double>(n);
    return m;
}

CMatrix position(int d) {
    CMatrix a = annihilation(d);
    return a + a.adjoint();
}

}  // namespace boson

HamiltonianTerms build_star_terms(const ModelConfig& cfg, const DiscretizedBath& bath,
                                  const SimilarityGenerator& gen) {
    cfg.validate();
    if (bath.fock_dim != cfg.fock_dim) {
        throw Error(ErrorKind::Config, "bath fock_dim " + std::to_string(bath.fock_dim) +
                                           " does not match model fock_dim " +
                                           std::to_string(cfg.fock_dim));
    }
    if (static_cast<int>(bath.modes.size()) != cfg.n_modes) {
        throw Error(ErrorKind::Config, "bath has " + std::to_string(bath.modes.size()) +
                                           " modes, model expects " +
                                           std::to_string(cfg.n_modes));
    }

    const int d = bath.fock_dim;
    const CMatrix coupling = gen.transform(pauli::z());
    const CMatrix x_mode = boson::position(d);
    const CMatrix n_mode = boson::number(d);
    const CMatrix coupling_x = kron(coupling, x_mode);
    const CMatrix energy = kron(pauli::identity(), n_mode);

    HamiltonianTerms terms;
    terms.fock_dim = d;
    terms.spin_local = transform_spin_term(cfg.delta, gen);
    terms.mode_terms.reserve(bath.modes.size());
    for (const auto& mode : bath.modes) {
        terms.mode_terms.push_back(mode.coupling * coupling_x + mode.omega * energy);
    }
    return terms;
}

}  // namespace simtebd
