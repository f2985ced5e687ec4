#include "simtebd/mps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/QR>

#include "simtebd/errors.hpp"

namespace simtebd {

namespace {

// Singular values at or below this fraction of the largest are numerical zeros.
constexpr double kZeroCutoff = 1e-15;

CMatrix stack_rows(const SiteTensor& t) {
    const auto l = t.left_dim();
    const auto r = t.right_dim();
    CMatrix m(t.physical_dim() * l, r);
    for (int s = 0; s < t.physical_dim(); ++s) m.middleRows(s * l, l) = t.blocks[s];
    return m;
}

CMatrix stack_cols(const SiteTensor& t) {
    const auto l = t.left_dim();
    const auto r = t.right_dim();
    CMatrix m(l, t.physical_dim() * r);
    for (int s = 0; s < t.physical_dim(); ++s) m.middleCols(s * r, r) = t.blocks[s];
    return m;
}

SiteTensor unstack_rows(const CMatrix& m, int p) {
    SiteTensor t;
    const auto l = m.rows() / p;
    t.blocks.reserve(p);
    for (int s = 0; s < p; ++s) t.blocks.emplace_back(m.middleRows(s * l, l));
    return t;
}

SiteTensor unstack_cols(const CMatrix& m, int p) {
    SiteTensor t;
    const auto r = m.cols() / p;
    t.blocks.reserve(p);
    for (int s = 0; s < p; ++s) t.blocks.emplace_back(m.middleCols(s * r, r));
    return t;
}

double frobenius_squared(const SiteTensor& t) {
    double acc = 0.0;
    for (const auto& b : t.blocks) acc += b.squaredNorm();
    return acc;
}

RVector normalized(const RVector& s) {
    return s / s.norm();
}

}  // namespace

MpsState MpsState::from_product_state(const std::vector<CVector>& locals) {
    if (locals.empty()) throw Error(ErrorKind::Dimension, "product state needs at least one site");
    MpsState state;
    state.tensors_.reserve(locals.size());
    for (std::size_t i = 0; i < locals.size(); ++i) {
        const CVector& v = locals[i];
        if (v.size() < 1 || !v.allFinite()) {
            throw Error(ErrorKind::NumericInput, "local state " + std::to_string(i) + " is invalid");
        }
        if (std::abs(v.norm() - 1.0) > 1e-10) {
            throw Error(ErrorKind::Normalization,
                        "local state " + std::to_string(i) + " is not normalized");
        }
        SiteTensor t;
        for (Eigen::Index s = 0; s < v.size(); ++s) t.blocks.push_back(CMatrix::Constant(1, 1, v(s)));
        state.tensors_.push_back(std::move(t));
    }
    state.weights_.assign(locals.size() - 1, RVector::Ones(1));
    state.labels_.resize(locals.size());
    std::iota(state.labels_.begin(), state.labels_.end(), 0);
    state.center_ = 0;
    state.canonical_ = true;
    return state;
}

MpsState MpsState::from_dense(const CVector& psi, const std::vector<int>& dims) {
    if (dims.empty()) throw Error(ErrorKind::Dimension, "from_dense needs at least one site");
    Eigen::Index total = 1;
    for (int d : dims) {
        if (d < 1) throw Error(ErrorKind::Dimension, "physical dimensions must be positive");
        total *= d;
    }
    if (total != psi.size()) {
        throw Error(ErrorKind::Dimension, "vector length does not match product of dims");
    }

    std::vector<SiteTensor> tensors;
    const TruncationPolicy lossless{kZeroCutoff, std::nullopt};
    // rest(a, j): a is the bond index on the left of the remaining sites,
    // j the combined index of the remaining sites (first remaining site slowest).
    CMatrix rest = psi.transpose();
    Eigen::Index left = 1;
    for (std::size_t i = 0; i + 1 < dims.size(); ++i) {
        const int p = dims[i];
        const Eigen::Index tail = rest.cols() / p;
        CMatrix m(p * left, tail);
        for (int s = 0; s < p; ++s) m.middleRows(s * left, left) = rest.middleCols(s * tail, tail);
        SvdResult svd = truncated_svd(m, lossless);
        tensors.push_back(unstack_rows(svd.U, p));
        rest = svd.s.cast<cd>().asDiagonal() * svd.V.adjoint();
        left = svd.s.size();
    }
    SiteTensor last;
    for (int s = 0; s < dims.back(); ++s) last.blocks.emplace_back(rest.col(s));
    tensors.push_back(std::move(last));
    return from_tensors(std::move(tensors));
}

MpsState MpsState::from_tensors(std::vector<SiteTensor> tensors) {
    if (tensors.empty()) throw Error(ErrorKind::Dimension, "MPS needs at least one site");
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        const auto& t = tensors[i];
        if (t.blocks.empty()) throw Error(ErrorKind::Dimension, "site tensor without physical index");
        for (const auto& b : t.blocks) {
            if (b.rows() != t.left_dim() || b.cols() != t.right_dim()) {
                throw Error(ErrorKind::Dimension, "inconsistent blocks in site tensor");
            }
        }
        if (i + 1 < tensors.size() && t.right_dim() != tensors[i + 1].left_dim()) {
            throw Error(ErrorKind::Dimension, "bond dimension mismatch at bond " + std::to_string(i));
        }
    }
    if (tensors.front().left_dim() != 1 || tensors.back().right_dim() != 1) {
        throw Error(ErrorKind::Dimension, "boundary bond dimensions must be 1");
    }
    MpsState state;
    state.tensors_ = std::move(tensors);
    state.weights_.resize(state.tensors_.size() - 1);
    for (std::size_t b = 0; b + 1 < state.tensors_.size(); ++b) {
        state.weights_[b] = RVector::Ones(state.tensors_[b].right_dim());
    }
    state.labels_.resize(state.tensors_.size());
    std::iota(state.labels_.begin(), state.labels_.end(), 0);
    state.center_ = 0;
    state.canonicalize();
    state.log_norm_ = 0.0;
    return state;
}

void MpsState::check_site(int site) const {
    if (site < 0 || site >= size()) {
        throw Error(ErrorKind::Index, "site " + std::to_string(site) + " out of range");
    }
}

void MpsState::check_bond_site(int site) const {
    if (site < 0 || site + 1 >= size()) {
        throw Error(ErrorKind::Index, "two-site operation at " + std::to_string(site) +
                                          " exceeds chain of length " + std::to_string(size()));
    }
}

int MpsState::physical_dim(int site) const {
    check_site(site);
    return tensors_[site].physical_dim();
}

std::vector<int> MpsState::physical_dims() const {
    std::vector<int> dims;
    dims.reserve(tensors_.size());
    for (const auto& t : tensors_) dims.push_back(t.physical_dim());
    return dims;
}

int MpsState::label(int site) const {
    check_site(site);
    return labels_[site];
}

int MpsState::site_of_label(int label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw Error(ErrorKind::Index, "no site carries label " + std::to_string(label));
    return static_cast<int>(it - labels_.begin());
}

int MpsState::bond_dim(int bond) const {
    check_bond_site(bond);
    return static_cast<int>(tensors_[bond].right_dim());
}

int MpsState::max_bond_dim() const {
    int chi = 1;
    for (int b = 0; b + 1 < size(); ++b) chi = std::max(chi, bond_dim(b));
    return chi;
}

const RVector& MpsState::bond_weights(int bond) const {
    check_bond_site(bond);
    return weights_[bond];
}

const SiteTensor& MpsState::tensor(int site) const {
    check_site(site);
    return tensors_[site];
}

void MpsState::shift_center_right() {
    const int c = center_;
    const int p = tensors_[c].physical_dim();
    SvdResult svd = truncated_svd(stack_rows(tensors_[c]), {kZeroCutoff, std::nullopt});
    tensors_[c] = unstack_rows(svd.U, p);
    const CMatrix carry = svd.s.cast<cd>().asDiagonal() * svd.V.adjoint();
    for (auto& b : tensors_[c + 1].blocks) b = carry * b;
    weights_[c] = normalized(svd.s);
    center_ = c + 1;
}

void MpsState::shift_center_left() {
    const int c = center_;
    const int p = tensors_[c].physical_dim();
    SvdResult svd = truncated_svd(stack_cols(tensors_[c]), {kZeroCutoff, std::nullopt});
    tensors_[c] = unstack_cols(svd.V.adjoint(), p);
    const CMatrix carry = svd.U * svd.s.cast<cd>().asDiagonal();
    for (auto& b : tensors_[c - 1].blocks) b = b * carry;
    weights_[c - 1] = normalized(svd.s);
    center_ = c - 1;
}

void MpsState::move_center(int site) {
    check_site(site);
    while (center_ < site) shift_center_right();
    while (center_ > site) shift_center_left();
}

double MpsState::norm() const {
    return std::sqrt(frobenius_squared(tensors_[center_]));
}

double MpsState::normalize() {
    const double n = norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw Error(ErrorKind::DegenerateState, "state norm is zero or non-finite");
    }
    for (auto& b : tensors_[center_].blocks) b /= n;
    log_norm_ += std::log(n);
    return n;
}

double MpsState::canonicalize() {
    const int L = size();
    // Left-to-right orthogonalization.
    for (int i = 0; i + 1 < L; ++i) {
        const int p = tensors_[i].physical_dim();
        const CMatrix m = stack_rows(tensors_[i]);
        Eigen::HouseholderQR<CMatrix> qr(m);
        const Eigen::Index k = std::min(m.rows(), m.cols());
        const CMatrix q = qr.householderQ() * CMatrix::Identity(m.rows(), k);
        const CMatrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        tensors_[i] = unstack_rows(q, p);
        for (auto& b : tensors_[i + 1].blocks) b = r * b;
    }
    center_ = L - 1;
    if (!(frobenius_squared(tensors_[center_]) > 0.0) ||
        !std::isfinite(frobenius_squared(tensors_[center_]))) {
        throw Error(ErrorKind::DegenerateState, "cannot canonicalize a zero-norm state");
    }
    // Right-to-left SVD sweep; each spectrum is the exact Schmidt spectrum.
    while (center_ > 0) shift_center_left();
    const double n = normalize();
    canonical_ = true;
    return n;
}

double MpsState::apply_two_site_map(int site, const CMatrix& map, int out_left, int out_right,
                                    bool exchange_labels, const TruncationPolicy& policy,
                                    SweepDirection direction) {
    check_bond_site(site);
    const int p = tensors_[site].physical_dim();
    const int q = tensors_[site + 1].physical_dim();
    if (out_left < 1 || out_right < 1 || map.rows() != out_left * out_right || map.cols() != p * q) {
        throw Error(ErrorKind::Gate, "two-site map of shape " + std::to_string(map.rows()) + "x" +
                                         std::to_string(map.cols()) + " does not fit sites (" +
                                         std::to_string(p) + ", " + std::to_string(q) + ")");
    }
    if (!all_finite(map)) throw Error(ErrorKind::NumericInput, "gate has non-finite entries");

    if (center_ < site) move_center(site);
    if (center_ > site + 1) move_center(site + 1);

    const auto l = tensors_[site].left_dim();
    const auto r = tensors_[site + 1].right_dim();
    const CMatrix theta = stack_rows(tensors_[site]) * stack_cols(tensors_[site + 1]);

    CMatrix mapped = CMatrix::Zero(out_left * l, out_right * r);
    for (int so = 0; so < out_left; ++so) {
        for (int to = 0; to < out_right; ++to) {
            auto block = mapped.block(so * l, to * r, l, r);
            for (int s = 0; s < p; ++s) {
                for (int t = 0; t < q; ++t) {
                    const cd g = map(so * out_right + to, s * q + t);
                    if (g != cd(0.0)) block += g * theta.block(s * l, t * r, l, r);
                }
            }
        }
    }

    SvdResult svd = truncated_svd(mapped, policy);
    if (direction == SweepDirection::Right) {
        tensors_[site] = unstack_rows(svd.U, out_left);
        tensors_[site + 1] = unstack_cols(svd.s.cast<cd>().asDiagonal() * svd.V.adjoint(), out_right);
        center_ = site + 1;
    } else {
        tensors_[site] = unstack_rows(svd.U * svd.s.cast<cd>().asDiagonal(), out_left);
        tensors_[site + 1] = unstack_cols(svd.V.adjoint(), out_right);
        center_ = site;
    }
    weights_[site] = normalized(svd.s);
    if (exchange_labels) std::swap(labels_[site], labels_[site + 1]);
    canonical_ = false;
    return svd.discarded_weight;
}

double MpsState::apply_two_site_gate(int site, const CMatrix& gate, const TruncationPolicy& policy,
                                     SweepDirection direction) {
    check_bond_site(site);
    return apply_two_site_map(site, gate, tensors_[site].physical_dim(),
                              tensors_[site + 1].physical_dim(), false, policy, direction);
}

void MpsState::apply_single_site_gate(int site, const CMatrix& gate) {
    check_site(site);
    const int p = tensors_[site].physical_dim();
    if (gate.rows() != p || gate.cols() != p) {
        throw Error(ErrorKind::Gate, "single-site gate does not match physical dimension " +
                                         std::to_string(p));
    }
    if (!all_finite(gate)) throw Error(ErrorKind::NumericInput, "gate has non-finite entries");
    move_center(site);
    const SiteTensor old = tensors_[site];
    for (int so = 0; so < p; ++so) {
        CMatrix acc = CMatrix::Zero(old.left_dim(), old.right_dim());
        for (int s = 0; s < p; ++s) {
            if (gate(so, s) != cd(0.0)) acc += gate(so, s) * old.blocks[s];
        }
        tensors_[site].blocks[so] = std::move(acc);
    }
    canonical_ = false;
}

double MpsState::swap_sites(int site, const TruncationPolicy& policy, SweepDirection direction) {
    check_bond_site(site);
    const int p = tensors_[site].physical_dim();
    const int q = tensors_[site + 1].physical_dim();
    return apply_two_site_map(site, swap_matrix(p, q), q, p, true, policy, direction);
}

CVector MpsState::to_dense() const {
    CMatrix acc = CMatrix::Ones(1, 1);
    for (const auto& t : tensors_) {
        const int p = t.physical_dim();
        CMatrix next(acc.rows() * p, t.right_dim());
        for (Eigen::Index row = 0; row < acc.rows(); ++row) {
            for (int s = 0; s < p; ++s) next.row(row * p + s) = acc.row(row) * t.blocks[s];
        }
        acc = std::move(next);
    }
    return acc.col(0);
}

double MpsState::gauge_residual() const {
    if (!canonical_) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    const int L = size();
    for (int i = 0; i < L; ++i) {
        const auto& t = tensors_[i];
        const RVector left_w = i == 0 ? RVector::Ones(1) : weights_[i - 1];
        const RVector right_w = i + 1 == L ? RVector::Ones(1) : weights_[i];
        CMatrix right_iso = CMatrix::Zero(t.left_dim(), t.left_dim());
        CMatrix left_env = CMatrix::Zero(t.right_dim(), t.right_dim());
        for (const auto& b : t.blocks) {
            right_iso += b * b.adjoint();
            left_env += b.adjoint() * left_w.cwiseAbs2().cast<cd>().asDiagonal() * b;
        }
        right_iso.diagonal().array() -= cd(1.0);
        left_env.diagonal() -= right_w.cwiseAbs2().cast<cd>();
        worst = std::max({worst, right_iso.cwiseAbs().maxCoeff(), left_env.cwiseAbs().maxCoeff()});
    }
    return worst;
}

double entropy_bits(const RVector& schmidt_values) {
    const double total = schmidt_values.squaredNorm();
    if (!(total > 0.0)) return 0.0;
    double s = 0.0;
    for (Eigen::Index i = 0; i < schmidt_values.size(); ++i) {
        const double p = schmidt_values(i) * schmidt_values(i) / total;
        if (p > 0.0) s -= p * std::log2(p);
    }
    return std::max(0.0, s);
}

BondSpectrum bond_entropies(const MpsState& state) {
    if (!state.is_canonical()) {
        throw Error(ErrorKind::StaleGauge, "bond entropies need a canonicalized state");
    }
    BondSpectrum spectrum;
    for (int b = 0; b + 1 < state.size(); ++b) {
        const RVector& w = state.bond_weights(b);
        spectrum.values.push_back(w / w.norm());
        spectrum.entropies.push_back(entropy_bits(w));
    }
    return spectrum;
}

double effective_entanglement(const std::vector<double>& entropies) {
    const auto L = entropies.size();
    if (L < 2) throw Error(ErrorKind::MetricUndefined, "S_eff needs at least two bonds");
    const double top = 3.0 * *std::max_element(entropies.begin(), entropies.end());
    double acc = 0.0;
    for (double s : entropies) acc += std::exp(3.0 * s - top);
    return (top + std::log(acc) - std::log(static_cast<double>(L - 1))) / 3.0;
}

double effective_entanglement(const BondSpectrum& spectrum) {
    return effective_entanglement(spectrum.entropies);
}

CMatrix reduced_density(const MpsState& state, int site) {
    const int p = state.physical_dim(site);
    CMatrix rho(p, p);
    auto trace_of_product = [](const CMatrix& a, const CMatrix& b) {
        return (a.array() * b.conjugate().array()).sum();  // tr(a b^dagger)
    };
    if (state.is_canonical()) {
        const auto& t = state.tensor(site);
        const RVector w = site == 0 ? RVector::Ones(1) : state.bond_weights(site - 1);
        const CMatrix lam = w.cast<cd>().asDiagonal();
        std::vector<CMatrix> weighted;
        for (const auto& b : t.blocks) weighted.push_back(lam * b);
        for (int s = 0; s < p; ++s)
            for (int sp = 0; sp < p; ++sp) rho(s, sp) = trace_of_product(weighted[s], weighted[sp]);
    } else {
        MpsState copy = state;
        copy.move_center(site);
        const auto& t = copy.tensor(site);
        for (int s = 0; s < p; ++s)
            for (int sp = 0; sp < p; ++sp) rho(s, sp) = trace_of_product(t.blocks[s], t.blocks[sp]);
    }
    const cd tr = rho.trace();
    if (!(std::abs(tr) > 0.0)) throw Error(ErrorKind::DegenerateState, "reduced density has zero trace");
    return rho / tr.real();
}

CMatrix reduced_spin_density(const MpsState& state) {
    return reduced_density(state, state.site_of_label(0));
}

CMatrix swap_matrix(int p, int q) {
    CMatrix m = CMatrix::Zero(p * q, p * q);
    for (int s = 0; s < p; ++s)
        for (int t = 0; t < q; ++t) m(t * p + s, s * q + t) = 1.0;
    return m;
}

}  // namespace simtebd
