#pragma once

#include <array>
#include <string>

#include "finikey/bounds.hpp"
#include "finikey/protocol.hpp"

namespace finikey::rates {

/// Failure probabilities of parameter estimation, error correction, privacy
/// amplification and smoothing.
///
/// Composition: collective and post-selection total = pe + ec + pa + bar;
/// coherent total = pe + ec + pa + 2 bar. In the coherent model the constraint
/// set depends only on bar, so pe may be 0 there.
struct SecurityBudget {
    double eps_pe = 0.0;
    double eps_ec = 0.0;
    double eps_pa = 0.0;
    double eps_bar = 0.0;

    double total(AttackModel model) const;

    /// Throws DomainError unless every component lies in (0, 1) (pe in [0, 1)
    /// for the coherent model).
    void validate(AttackModel model) const;
};

struct RatePoint {
    ProtocolSpec protocol;
    AttackModel attack = AttackModel::Collective;
    double N = 0.0;
    double m = 0.0;
    double qber = 0.0;
    /// For post-selection this is the budget before the (N+1)^-15 shrink; it
    /// sums to eps_post.
    SecurityBudget budget;
    /// Bits per initial signal, unclamped.
    double rate = 0.0;
    bounds::FluctuationBounds bounds;
    std::array<double, 4> minimizer_lambda{1.0, 0.0, 0.0, 0.0};
    double min_entropy = 0.0;
    bool infeasible = false;
    std::string diagnostic;

    double key_rate() const { return rate > 0.0 ? rate : 0.0; }
    double n() const { return protocol.sifted_signals(N) - m; }
};

/// Collective attacks:
///   (n/N)[inf S(X|E) - leak_EC/n - 5 sqrt(log2(2/eps_bar)/n)] + (2/N) log2(2 eps_pa)
/// with the infimum over states within xi(eps_pe, n, m) of qber.
RatePoint rate_collective(const ProtocolSpec& protocol, double N, double m, double qber,
                          const SecurityBudget& budget);

/// Coherent attacks via the reduction to tensor-product states:
///   (n/N)[inf S(X|E) - leak_EC/n - 5 sqrt(log2(4 n^2/eps_bar)/n)] - 1/N + (2/N) log2(2 eps_pa)
/// with the infimum over states within xi_coh(eps_bar, n, m) of qber.
RatePoint rate_coherent(const ProtocolSpec& protocol, double N, double m, double qber,
                        const SecurityBudget& budget);

/// Post-selection: the collective rate under the budget scaled by (N+1)^-15,
/// minus 30 log2(N+1)/N. `budget` sums to eps_post.
RatePoint rate_postselection(const ProtocolSpec& protocol, double N, double m, double qber,
                             const SecurityBudget& budget);

RatePoint evaluate_rate(AttackModel model, const ProtocolSpec& protocol, double N, double m, double qber,
                        const SecurityBudget& budget);

/// 30 log2(N+1)/N.
double postselection_penalty(double N);

}  // namespace finikey::rates
