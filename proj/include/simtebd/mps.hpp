#pragma once

#include <vector>

#include "simtebd/linalg.hpp"

namespace simtebd {

/// Rank-3 site tensor stored as one (left x right) matrix per physical index.
struct SiteTensor {
    std::vector<CMatrix> blocks;

    int physical_dim() const { return static_cast<int>(blocks.size()); }
    Eigen::Index left_dim() const { return blocks.front().rows(); }
    Eigen::Index right_dim() const { return blocks.front().cols(); }
};

enum class SweepDirection { Right, Left };

/// Matrix product state in Vidal form. The Gamma-lambda pair is held as
/// right-canonical tensors B_i = Gamma_i lambda_i together with the bond
/// weights lambda_i, so Gamma never requires dividing by small weights.
///
/// Gate application moves an orthogonality center: sites left of center()
/// are left-isometric, sites right of it are right-isometric. canonicalize()
/// restores the Vidal form with the center on site 0 and the state normalized
/// (the stripped norm goes into log_norm()).
///
/// Each site carries a label naming the degree of freedom that lives there;
/// swaps exchange labels together with the physical indices.
class MpsState {
public:
    static MpsState from_product_state(const std::vector<CVector>& locals);
    /// Exact decomposition of a dense vector (site 0 is the slowest index).
    static MpsState from_dense(const CVector& psi, const std::vector<int>& dims);
    /// Build from arbitrary site tensors; the result is canonicalized.
    static MpsState from_tensors(std::vector<SiteTensor> tensors);

    int size() const { return static_cast<int>(tensors_.size()); }
    int physical_dim(int site) const;
    std::vector<int> physical_dims() const;
    int label(int site) const;
    int site_of_label(int label) const;
    const std::vector<int>& labels() const { return labels_; }

    int bond_dim(int bond) const;
    int max_bond_dim() const;
    const RVector& bond_weights(int bond) const;
    const SiteTensor& tensor(int site) const;

    double log_norm() const { return log_norm_; }
    bool is_canonical() const { return canonical_; }
    int center() const { return center_; }

    /// Applies G (dimension (p q) x (p q), left index slow) to sites
    /// (site, site + 1). Returns the discarded weight of the re-split.
    double apply_two_site_gate(int site, const CMatrix& gate, const TruncationPolicy& policy,
                               SweepDirection direction = SweepDirection::Right);

    /// General two-site map from (p, q) to (out_left, out_right) physical
    /// dimensions. When `exchange_labels` is set the site labels are swapped
    /// (the map includes a permutation of the two sites).
    double apply_two_site_map(int site, const CMatrix& map, int out_left, int out_right,
                              bool exchange_labels, const TruncationPolicy& policy,
                              SweepDirection direction);

    void apply_single_site_gate(int site, const CMatrix& gate);

    double swap_sites(int site, const TruncationPolicy& policy,
                      SweepDirection direction = SweepDirection::Right);

    /// Left-to-right QR sweep followed by a right-to-left SVD sweep. Returns the
    /// norm that was stripped off.
    double canonicalize();

    /// Divides out the norm (held by the center tensor) into log_norm.
    double normalize();

    double norm() const;

    void move_center(int site);

    /// Dense amplitudes ordered by site position, site 0 slowest.
    CVector to_dense() const;

    /// Largest deviation from the Vidal gauge conditions. Infinite if the
    /// state is not in canonical form.
    double gauge_residual() const;

private:
    std::vector<SiteTensor> tensors_;
    std::vector<RVector> weights_;
    std::vector<int> labels_;
    int center_{0};
    bool canonical_{false};
    double log_norm_{0.0};

    void check_site(int site) const;
    void check_bond_site(int site) const;
    void shift_center_right();
    void shift_center_left();
};

/// Per-bond Schmidt values and their binary von Neumann entropies.
struct BondSpectrum {
    std::vector<RVector> values;
    std::vector<double> entropies;
};

double entropy_bits(const RVector& schmidt_values);

BondSpectrum bond_entropies(const MpsState& state);

/// S_eff = (1/3) ln[ (1/(L-1)) sum_n exp(3 S_n) ] over the L bonds.
double effective_entanglement(const BondSpectrum& spectrum);
double effective_entanglement(const std::vector<double>& entropies);

/// Trace-normalized reduced density matrix of the degree of freedom at `site`.
CMatrix reduced_density(const MpsState& state, int site);

/// Reduced density of the spin, which carries label 0.
CMatrix reduced_spin_density(const MpsState& state);

/// Swap gate mapping (p, q) to (q, p).
CMatrix swap_matrix(int p, int q);

}  // namespace simtebd
