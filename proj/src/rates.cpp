#include "finikey/rates.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "finikey/entropy.hpp"
#include "finikey/errors.hpp"

namespace finikey::rates {

namespace {

struct LogBudget {
    double pe;
    double ec;
    double pa;
    double bar;
};

double ln_inv(double eps) { return eps > 0.0 ? -std::log(eps) : std::numeric_limits<double>::infinity(); }

void check_inputs(const ProtocolSpec& protocol, double N, double m, double qber) {
    protocol.validate();
    if (!std::isfinite(N) || N < 1.0) throw DomainError("N must be a finite count >= 1");
    const double sifted = protocol.sifted_signals(N);
    if (sifted < 2.0) throw DomainError("fewer than 2 sifted signals");
    if (!std::isfinite(m) || m < 1.0 || m > sifted - 1.0) {
        throw DomainError("m must lie in [1, N_s - 1] = [1, " + std::to_string(sifted - 1.0) + "], got " +
                          std::to_string(m));
    }
    if (!(qber >= 0.0 && qber <= 0.5)) throw DomainError("QBER must lie in [0, 1/2]");
}

RatePoint evaluate(AttackModel model, const ProtocolSpec& protocol, double N, double m, double qber,
                   const SecurityBudget& budget) {
    check_inputs(protocol, N, m, qber);
    budget.validate(model);

    RatePoint point;
    point.protocol = protocol;
    point.attack = model;
    point.N = N;
    point.m = m;
    point.qber = qber;
    point.budget = budget;

    const double n = protocol.sifted_signals(N) - m;
    LogBudget ln{ln_inv(budget.eps_pe), ln_inv(budget.eps_ec), ln_inv(budget.eps_pa), ln_inv(budget.eps_bar)};
    if (model == AttackModel::PostSelection) {
        // Scaling every component by (N+1)^-15 keeps the proportions and
        // brings the total to eps_post (N+1)^-15.
        const double shrink = 15.0 * std::log1p(N);
        ln.pe += shrink;
        ln.ec += shrink;
        ln.pa += shrink;
        ln.bar += shrink;
    }

    auto& b = point.bounds;
    b.xi_att = bounds::xi_att_ln(ln.bar, protocol.povm_outcomes, n);
    b.xi_coh = bounds::xi_coh_ln(ln.bar, n, m);
    double extra = 0.0;
    if (model == AttackModel::Coherent) {
        b.xi_pe = bounds::xi_pe_ln(ln.bar + std::numbers::ln2, n, m);
        b.half_width = b.xi_coh;
        // Smoothing eps_bar / (2 n^2).
        b.aep_bits_per_signal = bounds::aep_correction_ln(n, ln.bar + std::log(2.0 * n * n));
        extra = -1.0 / N;
    } else {
        b.xi_pe = bounds::xi_pe_ln(ln.pe, n, m);
        b.half_width = b.xi_pe;
        b.aep_bits_per_signal = bounds::aep_correction_ln(n, ln.bar);
        if (model == AttackModel::PostSelection) extra = -postselection_penalty(N);
    }

    // (2/N) log2(2 eps_pa)
    const double pa_term = (2.0 / N) * (1.0 - ln.pa / std::numbers::ln2);
    const entropy::ErrorConstraintSet constraints{protocol.kind, protocol.constraint_mode, qber, b.half_width};

    try {
        if (protocol.leak_charge == LeakCharge::WorstCase) {
            // inf over the set of S(X|E) - leak_EC/n, with H(X|Y) = h(e_z).
            const auto worst = entropy::min_sxe_with_leak(constraints, protocol.ec_efficiency);
            const double e_z = worst.minimizer.error_z();
            b.leak_bits = bounds::leak_ec_ln(n, std::min(e_z, 1.0 - e_z), protocol.ec_efficiency, ln.ec);
            point.min_entropy = worst.entropy;
            point.minimizer_lambda = worst.minimizer.lambda();
            const double verification_bits = 1.0 + ln.ec / std::numbers::ln2;
            point.rate =
                (n / N) * (worst.objective - verification_bits / n - b.aep_bits_per_signal) + extra + pa_term;
        } else {
            b.leak_bits = bounds::leak_ec_ln(n, qber, protocol.ec_efficiency, ln.ec);
            const auto worst = entropy::min_sxe(constraints);
            point.min_entropy = worst.entropy;
            point.minimizer_lambda = worst.minimizer.lambda();
            point.rate = (n / N) * (worst.entropy - b.leak_bits / n - b.aep_bits_per_signal) + extra + pa_term;
        }
    } catch (const InfeasibleError& e) {
        point.infeasible = true;
        point.rate = 0.0;
        point.diagnostic = e.what();
    }
    return point;
}

}  // namespace

double SecurityBudget::total(AttackModel model) const {
    const double bar_weight = model == AttackModel::Coherent ? 2.0 : 1.0;
    return eps_pe + eps_ec + eps_pa + bar_weight * eps_bar;
}

void SecurityBudget::validate(AttackModel model) const {
    auto in_open_unit = [](double v) { return v > 0.0 && v < 1.0; };
    const bool pe_ok = model == AttackModel::Coherent ? (eps_pe >= 0.0 && eps_pe < 1.0) : in_open_unit(eps_pe);
    if (!pe_ok) throw DomainError("eps_pe out of range: " + std::to_string(eps_pe));
    if (!in_open_unit(eps_ec)) throw DomainError("eps_ec out of range: " + std::to_string(eps_ec));
    if (!in_open_unit(eps_pa)) throw DomainError("eps_pa out of range: " + std::to_string(eps_pa));
    if (!in_open_unit(eps_bar)) throw DomainError("eps_bar out of range: " + std::to_string(eps_bar));
}

double postselection_penalty(double N) { return 30.0 * std::log2(N + 1.0) / N; }

RatePoint rate_collective(const ProtocolSpec& protocol, double N, double m, double qber,
                          const SecurityBudget& budget) {
    return evaluate(AttackModel::Collective, protocol, N, m, qber, budget);
}

RatePoint rate_coherent(const ProtocolSpec& protocol, double N, double m, double qber,
                        const SecurityBudget& budget) {
    return evaluate(AttackModel::Coherent, protocol, N, m, qber, budget);
}

RatePoint rate_postselection(const ProtocolSpec& protocol, double N, double m, double qber,
                             const SecurityBudget& budget) {
    return evaluate(AttackModel::PostSelection, protocol, N, m, qber, budget);
}

RatePoint evaluate_rate(AttackModel model, const ProtocolSpec& protocol, double N, double m, double qber,
                        const SecurityBudget& budget) {
    return evaluate(model, protocol, N, m, qber, budget);
}

}  // namespace finikey::rates
