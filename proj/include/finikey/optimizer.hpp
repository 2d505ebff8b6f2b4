#pragma once

#include "finikey/protocol.hpp"
#include "finikey/rates.hpp"

namespace finikey::opt {

struct OptimizationSpec {
    AttackModel model = AttackModel::Collective;
    ProtocolSpec protocol;
    double N = 0.0;
    double qber = 0.0;
    double eps_total = 1e-9;
    int m_grid_density = 32;
    int eps_grid_density = 8;
    int refine_iterations = 200;

    /// Throws DomainError on an out-of-range field.
    void validate() const;
};

/// Maximizes the key rate of spec.model over the PE sample size m and the
/// split of eps_total among (eps_pe, eps_ec, eps_pa, eps_bar).
///
/// Search, fully deterministic:
///  1. m/N_s on a log-spaced grid over [1/N_s, (N_s-1)/N_s], rounded to counts;
///  2. eps_pe, eps_pa, eps_bar as shares of eps_total on a log grid over
///     [1e-3, 1] (eps_pe additionally 0 for the coherent model, where it does
///     not enter the rate); eps_ec takes the remainder and must stay positive;
///  3. coordinate descent in the log of m and of each positive grid component,
///     halving the step whenever a pass gains less than 1e-12.
/// Ties are broken by (rate desc, m asc, components asc).
///
/// If no point has a positive rate the best (non-positive) point is returned
/// with a diagnostic.
rates::RatePoint optimize_rate(const OptimizationSpec& spec);

}  // namespace finikey::opt
