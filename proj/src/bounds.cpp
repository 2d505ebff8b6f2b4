#include "finikey/bounds.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "finikey/entropy.hpp"
#include "finikey/errors.hpp"

namespace finikey::bounds {

namespace {

double ln_inv(double eps, const char* name) {
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw DomainError(std::string(name) + " must lie in (0, 1], got " + std::to_string(eps));
    }
    return -std::log(eps);
}

void require_count(double value, const char* name) {
    if (!(value >= 1.0) || !std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be a finite count >= 1, got " + std::to_string(value));
    }
}

void require_log(double ln_inv_eps, const char* name) {
    if (!(ln_inv_eps >= 0.0) || std::isnan(ln_inv_eps)) {
        throw DomainError(std::string(name) + " must correspond to a probability in (0, 1]");
    }
}

}  // namespace

double xi_pe_ln(double ln_inv_eps, double n, double m) {
    require_log(ln_inv_eps, "eps_pe");
    require_count(n, "n");
    require_count(m, "m");
    return std::sqrt((n + m) * (m + 1.0) * ln_inv_eps / (8.0 * m * m * n));
}

double xi_pe(double eps, double n, double m) { return xi_pe_ln(ln_inv(eps, "eps_pe"), n, m); }

double xi_att_ln(double ln_inv_eps, int chi, double n) {
    require_log(ln_inv_eps, "eps_att");
    require_count(n, "n");
    if (chi < 2) throw DomainError("POVM outcome count must be >= 2");
    return std::sqrt((8.0 * std::numbers::ln2 * chi + 8.0 * ln_inv_eps) / n);
}

double xi_att(double eps, int chi, double n) { return xi_att_ln(ln_inv(eps, "eps_att"), chi, n); }

double xi_coh_ln(double ln_inv_eps_bar, double n, double m) {
    return 0.5 * xi_att_ln(ln_inv_eps_bar, 2, n) + xi_pe_ln(ln_inv_eps_bar + std::numbers::ln2, n, m);
}

double xi_coh(double eps_bar, double n, double m) { return xi_coh_ln(ln_inv(eps_bar, "eps_bar"), n, m); }

double leak_ec_ln(double n, double qber, double efficiency, double ln_inv_eps_ec) {
    require_count(n, "n");
    if (!(qber >= 0.0 && qber <= 0.5)) throw DomainError("QBER must lie in [0, 1/2]");
    if (!(efficiency >= 1.0) || !std::isfinite(efficiency)) throw DomainError("EC efficiency must be >= 1");
    if (!(ln_inv_eps_ec > 0.0) || !std::isfinite(ln_inv_eps_ec)) throw DomainError("eps_ec must lie in (0, 1)");
    return n * efficiency * entropy::binary_entropy(qber) + 1.0 + ln_inv_eps_ec / std::numbers::ln2;
}

double leak_ec(double n, double qber, double efficiency, double eps_ec) {
    if (!(eps_ec > 0.0 && eps_ec < 1.0)) throw DomainError("eps_ec must lie in (0, 1)");
    return leak_ec_ln(n, qber, efficiency, -std::log(eps_ec));
}

double aep_correction_ln(double n, double ln_inv_eps_smooth) {
    require_count(n, "n");
    // log2(2/eps) >= 0 iff eps <= 2.
    const double bits = 1.0 + ln_inv_eps_smooth / std::numbers::ln2;
    if (!(bits >= 0.0) || !std::isfinite(bits)) throw DomainError("smoothing parameter must lie in (0, 2]");
    return 5.0 * std::sqrt(bits / n);
}

double aep_correction(double n, double eps_smooth) {
    if (!(eps_smooth > 0.0 && eps_smooth <= 2.0)) {
        throw DomainError("smoothing parameter must lie in (0, 2], got " + std::to_string(eps_smooth));
    }
    return aep_correction_ln(n, -std::log(eps_smooth));
}

double log_multinomial_mass(const std::array<std::uint64_t, 4>& counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw DomainError("composition must have at least one element");
    const double n = static_cast<double>(total);
    double value = std::lgamma(n + 1.0);
    for (auto c : counts) {
        if (c == 0) continue;
        const double k = static_cast<double>(c);
        value += -std::lgamma(k + 1.0) + k * std::log(k / n);
    }
    return value;
}

bool multinomial_floor_holds(const std::array<std::uint64_t, 4>& counts) {
    const double log_mass = log_multinomial_mass(counts);
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    return log_mass > -2.0 * std::log(static_cast<double>(total));
}

}  // namespace finikey::bounds
