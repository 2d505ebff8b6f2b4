#include "finikey/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "finikey/bounds.hpp"
#include "finikey/entropy.hpp"
#include "finikey/errors.hpp"

namespace finikey::oracle {

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;

// <a b | Bell_i> for the basis order (phi+, phi-, psi+, psi-), row index 2a + b.
constexpr double kS = 0.70710678118654752440;
constexpr double kBell[4][4] = {
    {kS, kS, 0.0, 0.0},    // |00>
    {0.0, 0.0, kS, kS},    // |01>
    {0.0, 0.0, kS, -kS},   // |10>
    {kS, -kS, 0.0, 0.0},   // |11>
};

double entropy_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

Real h2(const Real& x) {
    const Real ln2 = log(Real(2));
    Real h = 0;
    if (x > 0) h -= x * log(x) / ln2;
    if (x < 1) h -= (1 - x) * log(1 - x) / ln2;
    return h;
}

}  // namespace

std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i][i];
    return eig;
}

double sxe_second_path(const entropy::BellDiagonalState& state) {
    double s_e = 0.0;
    for (double l : state.lambda()) s_e += entropy_term(l);

    // Unnormalized E-state for outcome x: sum_b |v_xb><v_xb| with
    // v_xb[i] = sqrt(lambda_i) <x b|Bell_i>.
    double s_xe = 0.0;
    for (int x = 0; x < 2; ++x) {
        std::vector<std::vector<double>> block(4, std::vector<double>(4, 0.0));
        for (int b = 0; b < 2; ++b) {
            std::array<double, 4> v;
            for (int i = 0; i < 4; ++i) v[i] = std::sqrt(state[i]) * kBell[2 * x + b][i];
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) block[i][j] += v[i] * v[j];
        }
        for (double ev : jacobi_eigenvalues(block)) {
            if (ev < -1e-10) throw InvalidStateError("negative eigenvalue in post-measurement block");
            s_xe += entropy_term(std::max(ev, 0.0));
        }
    }
    return s_xe - s_e;
}

GridResult min_sxe_grid(const entropy::ErrorConstraintSet& c, double leak_weight, double resolution) {
    if (!std::isfinite(c.center) || c.center < 0.0 || c.center > 1.0) {
        throw DomainError("constraint center must lie in [0, 1]");
    }
    if (!std::isfinite(c.half_width) || c.half_width < 0.0) {
        throw DomainError("constraint half-width must be finite and non-negative");
    }
    if (!(resolution > 0.0)) throw DomainError("grid resolution must be positive");

    const double lo = std::max(0.0, c.center - c.half_width);
    const double hi = std::min(1.0, c.center + c.half_width);
    auto axis = [resolution](double a, double b) {
        std::vector<double> v;
        if (a > b) return v;
        const auto steps = static_cast<long>(std::floor((b - a) / resolution + 1e-9));
        for (long k = 0; k <= steps; ++k) v.push_back(a + k * resolution);
        if (b - v.back() > 1e-12) v.push_back(b);
        return v;
    };
    const std::vector<double> monitored = axis(lo, hi);
    const bool six = c.protocol == ProtocolKind::SixState;
    const bool tied = c.mode == ConstraintMode::Symmetric;

    GridResult best{std::numeric_limits<double>::infinity(), entropy::BellDiagonalState::perfect(), 0};
    auto consider = [&](const std::array<double, 4>& raw) {
        std::array<double, 4> lambda;
        for (int i = 0; i < 4; ++i) {
            if (raw[i] < -1e-12) return;
            lambda[i] = std::max(raw[i], 0.0);
        }
        const double sum = lambda[0] + lambda[1] + lambda[2] + lambda[3];
        if (std::abs(sum - 1.0) > 1e-10) return;
        const entropy::BellDiagonalState state(lambda);
        const double e_z = std::clamp(state.error_z(), 0.0, 1.0);
        const double value = sxe_second_path(state) - leak_weight * entropy::binary_entropy(e_z);
        ++best.points;
        if (value < best.value) {
            best.value = value;
            best.minimizer = state;
        }
    };

    for (double e_z : monitored) {
        const std::vector<double> xs = tied ? std::vector<double>{e_z} : monitored;
        for (double e_x : xs) {
            if (six) {
                const std::vector<double> ys = tied ? std::vector<double>{e_z} : monitored;
                for (double e_y : ys) {
                    const double l4 = 0.5 * (e_z + e_x - e_y);
                    consider({1.0 - e_z - e_x + l4, e_x - l4, e_z - l4, l4});
                }
            } else {
                // lambda4 is free between positivity limits.
                for (double l4 : axis(std::max(0.0, e_z + e_x - 1.0), std::min(e_z, e_x))) {
                    consider({1.0 - e_z - e_x + l4, e_x - l4, e_z - l4, l4});
                }
            }
        }
    }
    if (best.points == 0) {
        std::ostringstream os;
        os << "no grid state has " << to_string(c.protocol) << " error rates within " << c.half_width << " of "
           << c.center;
        throw InfeasibleError(os.str());
    }
    return best;
}

double binary_entropy_hp(double p) { return static_cast<double>(h2(Real(p))); }

double xi_pe_hp(double eps, double n, double m) {
    const Real N(n), M(m);
    const Real v = sqrt((N + M) * (M + 1) * log(1 / Real(eps)) / (8 * M * M * N));
    return static_cast<double>(v);
}

double xi_att_hp(double eps, int chi, double n) {
    const Real v = sqrt((8 * log(Real(2)) * chi + 8 * log(1 / Real(eps))) / Real(n));
    return static_cast<double>(v);
}

double leak_ec_hp(double n, double qber, double efficiency, double eps_ec) {
    const Real v = Real(n) * Real(efficiency) * h2(Real(qber)) + log(2 / Real(eps_ec)) / log(Real(2));
    return static_cast<double>(v);
}

double aep_correction_hp(double n, double eps_smooth) {
    const Real v = 5 * sqrt(log(2 / Real(eps_smooth)) / log(Real(2)) / Real(n));
    return static_cast<double>(v);
}

double max_bound_relative_error(std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto log_uniform = [&](double a, double b) { return std::exp(std::log(a) + (std::log(b) - std::log(a)) * unit(rng)); };
    auto rel = [](double got, double want) { return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want); };

    double worst = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double eps = log_uniform(1e-15, 0.5);
        const double n = std::round(log_uniform(1e2, 1e12));
        const double m = std::round(log_uniform(1.0, 1e8));
        const double q = 0.5 * unit(rng);
        const double f = 1.0 + 0.5 * unit(rng);
        worst = std::max(worst, rel(bounds::xi_pe(eps, n, m), xi_pe_hp(eps, n, m)));
        worst = std::max(worst, rel(bounds::xi_att(eps, 2, n), xi_att_hp(eps, 2, n)));
        worst = std::max(worst, rel(bounds::leak_ec(n, q, f, eps), leak_ec_hp(n, q, f, eps)));
        worst = std::max(worst, rel(bounds::aep_correction(n, eps), aep_correction_hp(n, eps)));
    }
    return worst;
}

FloorCheck randomized_floor_check(std::size_t samples, std::uint64_t n_min, std::uint64_t n_max, std::uint64_t seed) {
    if (n_min < 1 || n_max < n_min) throw DomainError("need 1 <= n_min <= n_max");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick_n(n_min, n_max);
    FloorCheck result;
    for (std::size_t s = 0; s < samples; ++s) {
        const std::uint64_t n = pick_n(rng);
        // Stars and bars: three distinct cuts among n + 3 slots.
        std::uniform_int_distribution<std::uint64_t> pick_slot(0, n + 2);
        std::array<std::uint64_t, 3> cuts{};
        for (int k = 0; k < 3; ++k) {
            std::uint64_t slot;
            do {
                slot = pick_slot(rng);
            } while (std::find(cuts.begin(), cuts.begin() + k, slot) != cuts.begin() + k);
            cuts[k] = slot;
        }
        std::sort(cuts.begin(), cuts.end());
        const std::array<std::uint64_t, 4> counts{cuts[0], cuts[1] - cuts[0] - 1, cuts[2] - cuts[1] - 1,
                                                  n + 2 - cuts[2]};
        ++result.tested;
        if (!bounds::multinomial_floor_holds(counts)) {
            ++result.failures;
            if (!result.first_failure) result.first_failure = counts;
        }
    }
    return result;
}

std::optional<std::array<std::uint64_t, 4>> smallest_floor_counterexample(std::uint64_t max_n) {
    // The mass is symmetric in the counts, so sorted compositions suffice.
    // n = 1 is skipped: the mass there is exactly 1 = 1/n^2.
    for (std::uint64_t n = 2; n <= max_n; ++n) {
        for (std::uint64_t a = (n + 3) / 4; a <= n; ++a) {
            for (std::uint64_t b = 0; b <= std::min(a, n - a); ++b) {
                for (std::uint64_t c = 0; c <= std::min(b, n - a - b); ++c) {
                    const std::uint64_t d = n - a - b - c;
                    if (d > c) continue;
                    const std::array<std::uint64_t, 4> counts{a, b, c, d};
                    if (!bounds::multinomial_floor_holds(counts)) return counts;
                }
            }
        }
    }
    return std::nullopt;
}

std::vector<entropy::ErrorConstraintSet> agreement_grid() {
    std::vector<entropy::ErrorConstraintSet> grid;
    for (ProtocolKind kind : {ProtocolKind::BB84, ProtocolKind::SixState})
        for (double center : {0.0, 0.02, 0.05, 0.1, 0.15})
            for (double width : {0.0, 0.02}) grid.push_back({kind, ConstraintMode::PerBasis, center, width});
    return grid;
}

std::vector<SelfTestResult> run_selftest() {
    std::vector<SelfTestResult> results;
    auto report = [&](std::string name, bool ok, double metric) {
        std::ostringstream os;
        os.precision(3);
        os << metric;
        results.push_back({std::move(name), ok, os.str()});
    };

    {
        std::mt19937_64 rng(20240601);
        std::exponential_distribution<double> draw(1.0);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            std::array<double, 4> w;
            double sum = 0.0;
            for (double& x : w) sum += (x = draw(rng));
            for (double& x : w) x /= sum;
            const entropy::BellDiagonalState state(w);
            worst = std::max(worst, std::abs(entropy::conditional_entropy_xe(state) - sxe_second_path(state)));
        }
        report("dual-path S(X|E), max abs diff", worst < 1e-9, worst);
    }
    {
        double worst = -std::numeric_limits<double>::infinity();
        bool ok = true;
        for (const auto& c : agreement_grid()) {
            const double primary = entropy::min_sxe(c).entropy;
            const double grid = min_sxe_grid(c).value;
            ok = ok && primary <= grid + 1e-6 && primary >= grid - 5e-3;
            worst = std::max(worst, primary - grid);
        }
        report("min_sxe vs grid, max (primary - grid)", ok, worst);
    }
    {
        const double worst = max_bound_relative_error(100, 7);
        report("bounds vs 50-digit, max rel error", worst <= 1e-12, worst);
    }
    {
        const auto check = randomized_floor_check(10000, 501, 1000000, 11);
        report("multinomial floor, failures of 1e4", check.failures == 0, static_cast<double>(check.failures));
    }
    return results;
}

}  // namespace finikey::oracle
