#include "simtebd/oracle.hpp"

#include <cmath>
#include <string>

#include "simtebd/errors.hpp"

namespace simtebd {

namespace {

CMatrix embed_mode(const CMatrix& op, int mode, int n_modes, int d) {
    const auto before = static_cast<Eigen::Index>(std::pow(d, mode));
    const auto after = static_cast<Eigen::Index>(std::pow(d, n_modes - mode - 1));
    return kron(kron(CMatrix::Identity(before, before), op), CMatrix::Identity(after, after));
}

long product(const std::vector<int>& dims, std::size_t first, std::size_t last) {
    long p = 1;
    for (std::size_t i = first; i < last; ++i) p *= dims[i];
    return p;
}

}  // namespace

DenseInstance dense_hamiltonian(const ModelConfig& cfg, const DiscretizedBath& bath,
                                const SimilarityGenerator& gen) {
    cfg.validate();
    const int n = static_cast<int>(bath.modes.size());
    const int d = bath.fock_dim;
    if (n > kOracleMaxModes || d > kOracleMaxFock) {
        throw Error(ErrorKind::InstanceTooLarge, "dense oracle supports at most " +
                                                     std::to_string(kOracleMaxModes) + " modes and Fock dimension " +
                                                     std::to_string(kOracleMaxFock));
    }
    const long dim = 2 * static_cast<long>(std::pow(d, n));
    if (dim > kOracleMaxDim || dim * dim * static_cast<long>(sizeof(cd)) > kOracleMaxBytes) {
        throw Error(ErrorKind::InstanceTooLarge,
                    "dense dimension " + std::to_string(dim) + " exceeds the oracle guard");
    }

    const CMatrix forward = gen.forward();
    const CMatrix inverse = gen.inverse();
    const CMatrix spin_term = forward * (cfg.delta * pauli::x()) * inverse;
    const CMatrix coupling = forward * pauli::z() * inverse;
    const Eigen::Index bath_dim = dim / 2;

    DenseInstance inst;
    inst.dims.push_back(2);
    inst.dims.insert(inst.dims.end(), static_cast<std::size_t>(n), d);
    inst.hamiltonian = kron(spin_term, CMatrix::Identity(bath_dim, bath_dim));
    const CMatrix x = boson::position(d);
    const CMatrix num = boson::number(d);
    for (int m = 0; m < n; ++m) {
        const auto& mode = bath.modes[m];
        inst.hamiltonian += mode.coupling * kron(coupling, embed_mode(x, m, n, d));
        inst.hamiltonian += mode.omega * kron(pauli::identity(), embed_mode(num, m, n, d));
    }
    return inst;
}

CVector dense_initial_state(const ModelConfig& cfg, const SimilarityGenerator& gen) {
    cfg.validate();
    CVector up = CVector::Zero(2);
    up(0) = 1.0;
    CVector spin = gen.forward() * up;
    spin.normalize();
    const auto bath_dim = static_cast<Eigen::Index>(std::pow(cfg.fock_dim, cfg.n_modes));
    CVector vacuum = CVector::Zero(bath_dim);
    vacuum(0) = 1.0;
    return kron(spin, vacuum).col(0);
}

std::vector<DenseSample> propagate_exact(const DenseInstance& instance, const CVector& psi0,
                                         const std::vector<double>& t_grid) {
    const auto dim = instance.hamiltonian.rows();
    if (psi0.size() != dim) throw Error(ErrorKind::Dimension, "psi0 does not match the instance");
    if (std::abs(psi0.norm() - 1.0) > 1e-10) {
        throw Error(ErrorKind::Normalization, "psi0 must be normalized");
    }

    std::vector<DenseSample> out;
    out.reserve(t_grid.size());
    CVector psi = psi0;
    double log_norm = 0.0;
    double t_prev = 0.0;
    double cached_interval = -1.0;
    CMatrix propagator;
    for (double t : t_grid) {
        const double interval = t - t_prev;
        if (interval < 0.0) throw Error(ErrorKind::Config, "t_grid must be nondecreasing from 0");
        if (interval > 0.0) {
            // Grid times like k * dt differ from each other by rounding noise only.
            if (std::abs(interval - cached_interval) > 1e-10 * interval) {
                propagator = matrix_exponential(cd(0.0, -interval) * instance.hamiltonian);
                cached_interval = interval;
            }
            psi = propagator * psi;
            const double nrm = psi.norm();
            if (!(nrm > 0.0) || !std::isfinite(nrm)) {
                throw Error(ErrorKind::Divergence, "dense propagation lost the state at t = " + std::to_string(t));
            }
            psi /= nrm;
            log_norm += std::log(nrm);
        }
        out.push_back({t, psi, log_norm});
        t_prev = t;
    }
    return out;
}

RVector dense_schmidt(const CVector& psi, int cut, const std::vector<int>& dims) {
    if (cut < 1 || cut >= static_cast<int>(dims.size())) {
        throw Error(ErrorKind::Index, "cut must separate two nonempty blocks");
    }
    const long left = product(dims, 0, cut);
    const long right = product(dims, cut, dims.size());
    if (left * right != psi.size()) throw Error(ErrorKind::Dimension, "dims do not match vector length");
    CMatrix m(left, right);
    for (long i = 0; i < left; ++i)
        for (long j = 0; j < right; ++j) m(i, j) = psi(i * right + j);
    Eigen::BDCSVD<CMatrix> svd(m);
    RVector s = svd.singularValues();
    Eigen::Index keep = 0;
    while (keep < s.size() && s(keep) > 1e-14 * s(0)) ++keep;
    RVector kept = s.head(keep);
    return kept / kept.norm();
}

CMatrix dense_reduced_density(const CVector& psi, int site, const std::vector<int>& dims) {
    if (site < 0 || site >= static_cast<int>(dims.size())) throw Error(ErrorKind::Index, "site out of range");
    const long left = product(dims, 0, site);
    const long p = dims[site];
    const long right = product(dims, site + 1, dims.size());
    if (left * p * right != psi.size()) throw Error(ErrorKind::Dimension, "dims do not match vector length");
    CMatrix rho = CMatrix::Zero(p, p);
    for (long l = 0; l < left; ++l)
        for (long s = 0; s < p; ++s)
            for (long sp = 0; sp < p; ++sp)
                for (long r = 0; r < right; ++r)
                    rho(s, sp) += psi((l * p + s) * right + r) * std::conj(psi((l * p + sp) * right + r));
    return rho / rho.trace().real();
}

std::vector<Observables> dense_trajectory(const ModelConfig& cfg, const SimilarityGenerator& gen,
                                          const std::vector<double>& t_grid) {
    const DiscretizedBath bath = discretize(cfg);
    const DenseInstance inst = dense_hamiltonian(cfg, bath, gen);
    const auto samples = propagate_exact(inst, dense_initial_state(cfg, gen), t_grid);
    std::vector<Observables> out;
    out.reserve(samples.size());
    for (const auto& sample : samples) {
        out.push_back(observables_from_density(dense_reduced_density(sample.psi, 0, inst.dims), gen));
    }
    return out;
}

double ghz_seff_closed_form(int n_spins, int k_transformed, double beta) {
    if (n_spins < 3) {
        throw Error(ErrorKind::MetricUndefined, "GHZ S_eff needs n >= 3 (two or more bonds)");
    }
    if (k_transformed < 0 || k_transformed > n_spins) {
        throw Error(ErrorKind::Config, "k must lie in [0, n]");
    }
    // p = 1 / (1 + e^{-4 beta k}), written to stay finite for large |beta k|.
    const double x = 4.0 * beta * k_transformed;
    const double p = 1.0 / (1.0 + std::exp(-x));
    const double q = 1.0 / (1.0 + std::exp(x));
    double s = 0.0;
    if (p > 0.0) s -= p * std::log2(p);
    if (q > 0.0) s -= q * std::log2(q);
    const double bonds = n_spins - 1;
    return s + std::log(bonds / (bonds - 1.0)) / 3.0;
}

}  // namespace simtebd
