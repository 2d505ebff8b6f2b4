#pragma once

// Closed-form finite-size corrections. Every bound taking a failure
// probability eps also has a *_ln variant taking ln(1/eps) directly, so that
// budgets shrunk by the post-selection factor (N+1)^-15 never underflow.

#include <array>
#include <cstdint>

namespace finikey::bounds {

/// Audit trail of the corrections applied to one rate evaluation.
struct FluctuationBounds {
    double xi_pe = 0.0;                // PE deviation entering the model's constraint set
    double xi_att = 0.0;               // xi_att(eps_bar, 2, n)
    double xi_coh = 0.0;               // xi_att/2 + xi(eps_bar/2, n, m)
    double half_width = 0.0;           // deviation actually used for the constraint set
    double leak_bits = 0.0;            // leak_EC
    double aep_bits_per_signal = 0.0;  // smoothing correction per key bit
};

/// sqrt((n + m)(m + 1) ln(1/eps) / (8 m^2 n)). Requires 0 < eps <= 1, n, m >= 1.
double xi_pe(double eps, double n, double m);
double xi_pe_ln(double ln_inv_eps, double n, double m);

/// sqrt((8 ln(2) chi + 8 ln(1/eps)) / n). Requires 0 < eps <= 1, chi >= 2, n >= 1.
double xi_att(double eps, int chi, double n);
double xi_att_ln(double ln_inv_eps, int chi, double n);

/// xi_att(eps_bar, 2, n)/2 + xi_pe(eps_bar/2, n, m).
double xi_coh(double eps_bar, double n, double m);
double xi_coh_ln(double ln_inv_eps_bar, double n, double m);

/// n * efficiency * h(qber) + log2(2/eps_ec).
double leak_ec(double n, double qber, double efficiency, double eps_ec);
double leak_ec_ln(double n, double qber, double efficiency, double ln_inv_eps_ec);

/// 5 sqrt(log2(2/eps_smooth) / n), per signal. Requires 0 < eps_smooth <= 2.
double aep_correction(double n, double eps_smooth);
double aep_correction_ln(double n, double ln_inv_eps_smooth);

/// Whether multinomial(n; counts) * prod (n_i/n)^{n_i} > 1/n^2, evaluated in
/// log space with lgamma. Requires sum(counts) >= 1.
bool multinomial_floor_holds(const std::array<std::uint64_t, 4>& counts);

/// ln(multinomial(n; counts) * prod (n_i/n)^{n_i}).
double log_multinomial_mass(const std::array<std::uint64_t, 4>& counts);

}  // namespace finikey::bounds
