#pragma once

// Bell-diagonal two-qubit states, Eve's purification, and the worst-case
// conditional entropy S(X|E) over a set of states compatible with the
// observed error rates.

#include <array>
#include <span>

#include <Eigen/Dense>

#include "finikey/protocol.hpp"

namespace finikey::entropy {

using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kNegativityTolerance = 1e-12;
inline constexpr double kNormalizationTolerance = 1e-10;
inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kEigenvalueClamp = 1e-10;

/// Probability vector over the Bell projectors, ordered (phi+, phi-, psi+, psi-).
class BellDiagonalState {
public:
    /// Throws InvalidStateError unless every entry is >= -1e-12 and the sum is
    /// 1 within 1e-10. Entries in [-1e-12, 0) are stored as 0.
    explicit BellDiagonalState(const std::array<double, 4>& lambda);

    /// The state whose Z, X and Y error rates are (e_z, e_x, e_y):
    /// lambda2 = (e_x + e_y - e_z)/2, lambda3 = (e_z + e_y - e_x)/2,
    /// lambda4 = (e_z + e_x - e_y)/2, lambda1 = 1 - (e_z + e_x + e_y)/2.
    static BellDiagonalState from_error_rates(double e_z, double e_x, double e_y);

    static BellDiagonalState perfect() { return BellDiagonalState({1.0, 0.0, 0.0, 0.0}); }

    const std::array<double, 4>& lambda() const { return lambda_; }
    double operator[](std::size_t i) const { return lambda_[i]; }

    double error_z() const { return lambda_[2] + lambda_[3]; }
    double error_x() const { return lambda_[1] + lambda_[3]; }
    double error_y() const { return lambda_[1] + lambda_[2]; }

private:
    std::array<double, 4> lambda_;
};

/// h(p) in bits with 0 log 0 = 0. Throws DomainError outside [0, 1].
double binary_entropy(double p);

/// Shannon entropy in bits of a probability vector (zeros contribute 0).
double shannon_entropy(std::span<const double> probabilities);

/// Throws InvalidStateError if rho is not Hermitian within 1e-12, does not
/// have unit trace within 1e-10, or has an eigenvalue below -1e-10.
void validate_density_operator(const ComplexMatrix& rho);

/// -tr(rho log2 rho). Eigenvalues in [-1e-10, 0] are treated as 0.
double von_neumann_entropy(const ComplexMatrix& rho);

/// Pure state sum_i sqrt(lambda_i) |Bell_i>_AB |i>_E as a 16-vector with index
/// layout (a, b, e), a and b qubits, e a 4-level ancilla.
Eigen::VectorXcd purification(const BellDiagonalState& state);

/// The 8x8 classical-quantum operator rho_XE obtained from the purification by
/// measuring Alice in Z and discarding Bob. Index layout (x, e).
ComplexMatrix classical_quantum_state(const BellDiagonalState& state);

/// S(X|E) = S(rho_XE) - S(rho_E) from the explicit 8x8 construction.
double conditional_entropy_xe(const BellDiagonalState& state);

/// S(X|E) in closed form: 1 + h(e_z) - H(lambda). Each conditional state of E
/// has eigenvalues {1 - e_z, e_z}, and S(rho_E) = S(rho_AB) = H(lambda) by purity.
/// Used as the objective of the worst-case search; agrees with
/// conditional_entropy_xe to rounding.
double conditional_entropy_xe_closed_form(const BellDiagonalState& state);

/// Bell-diagonal states whose monitored error rates lie within half_width of
/// center (see ConstraintMode). BB84 monitors Z and X; six-state Z, X and Y.
struct ErrorConstraintSet {
    ProtocolKind protocol = ProtocolKind::BB84;
    ConstraintMode mode = ConstraintMode::PerBasis;
    double center = 0.0;
    double half_width = 0.0;
};

struct WorstCase {
    double entropy;    // S(X|E) at the minimizer
    double objective;  // S(X|E) - leak_weight h(e_z) at the minimizer
    BellDiagonalState minimizer;
};

/// inf of S(X|E) over the constraint set: coarse grid on the free error-rate
/// coordinates (step 5e-3) followed by coordinate descent. Results are
/// memoized on (protocol, mode, center, half_width) rounded to 1e-9; the
/// search always runs on the rounded values, so the result does not depend on
/// which caller populated the cache.
/// Throws InfeasibleError if the set is empty, DomainError for negative or
/// non-finite parameters.
WorstCase min_sxe(const ErrorConstraintSet& constraints);

/// inf of S(X|E) - leak_weight * h(e_z) over the constraint set, by the same
/// search and cache as min_sxe. h(e_z) = H(X|Y) for a Bell-diagonal state, so
/// with leak_weight = f this is the infimum of S(X|E) - leak_EC/n with the
/// error-correction cost charged at each candidate state's own error rate.
/// Requires leak_weight >= 0.
WorstCase min_sxe_with_leak(const ErrorConstraintSet& constraints, double leak_weight);

/// Uncached search on the unrounded inputs.
WorstCase min_sxe_uncached(const ErrorConstraintSet& constraints, double leak_weight = 0.0);

/// Cache management, mainly for tests.
std::size_t min_sxe_cache_size();
void clear_min_sxe_cache();

}  // namespace finikey::entropy
