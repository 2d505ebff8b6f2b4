#pragma once

// Independent verification paths. None of these share code with the primary
// evaluation routes they check: S(X|E) is assembled from the post-measurement
// ensemble and diagonalized with a hand-rolled Jacobi solver, the worst case
// is found by exhaustive grid, and the bounds are recomputed with 50-digit
// floating point.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finikey/entropy.hpp"

namespace finikey::oracle {

/// S(X|E) via S(rho_E) = S(rho_AB) = H(lambda) and S(rho_XE) from the blocks
/// p(x) rho_E^x, each built from the ensemble {sqrt(lambda_i) <x b|Bell_i>}.
double sxe_second_path(const entropy::BellDiagonalState& state);

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a);

struct GridResult {
    double value;  // min of S(X|E) - leak_weight h(e_z) over the grid
    entropy::BellDiagonalState minimizer;
    std::size_t points;
};

/// Exhaustive grid at the given resolution (1e-3 by default) over the
/// monitored error rates and the remaining free Bell weight, no refinement.
/// Upper-bounds the infimum. Throws InfeasibleError if no grid point is
/// feasible.
GridResult min_sxe_grid(const entropy::ErrorConstraintSet& constraints, double leak_weight = 0.0,
                        double resolution = 1e-3);

/// 50-digit recomputations of the closed-form bounds, rounded to double.
double xi_pe_hp(double eps, double n, double m);
double xi_att_hp(double eps, int chi, double n);
double leak_ec_hp(double n, double qber, double efficiency, double eps_ec);
double aep_correction_hp(double n, double eps_smooth);
double binary_entropy_hp(double p);

/// Largest relative deviation between double-precision bounds and their
/// 50-digit counterparts on `samples` pseudo-random inputs.
double max_bound_relative_error(std::size_t samples, std::uint64_t seed);

struct FloorCheck {
    std::size_t tested = 0;
    std::size_t failures = 0;
    std::optional<std::array<std::uint64_t, 4>> first_failure;
};

/// Draws `samples` compositions with n uniform in [n_min, n_max] and all
/// compositions of n equally likely, and tests multinomial_floor_holds.
FloorCheck randomized_floor_check(std::size_t samples, std::uint64_t n_min, std::uint64_t n_max, std::uint64_t seed);

/// Smallest composition (by n) violating the floor among all compositions with
/// 2 <= n <= max_n, if any.
std::optional<std::array<std::uint64_t, 4>> smallest_floor_counterexample(std::uint64_t max_n);

/// The (protocol, center, half_width) points on which min_sxe is checked
/// against min_sxe_grid: both protocols, five centers, two widths.
std::vector<entropy::ErrorConstraintSet> agreement_grid();

struct SelfTestResult {
    std::string name;
    bool passed;
    std::string detail;
};

/// Primary paths against the oracles: dual-path S(X|E) on 1e3 random states,
/// min_sxe against the grid on agreement_grid(), 50-digit bounds on 100
/// inputs, and the multinomial floor on 1e4 compositions.
std::vector<SelfTestResult> run_selftest();

}  // namespace finikey::oracle
