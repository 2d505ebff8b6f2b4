#include "finikey/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>
#include <numbers>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "finikey/errors.hpp"

namespace finikey::entropy {

namespace {

constexpr double kGridStep = 5e-3;
constexpr double kMinStep = 1e-10;
constexpr double kCacheResolution = 1e9;

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

std::string describe(const std::array<double, 4>& lambda) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << lambda[0] << ", " << lambda[1] << ", " << lambda[2] << ", " << lambda[3] << ")";
    return os.str();
}

}  // namespace

BellDiagonalState::BellDiagonalState(const std::array<double, 4>& lambda) : lambda_(lambda) {
    double sum = 0.0;
    for (double& l : lambda_) {
        if (!std::isfinite(l) || l < -kNegativityTolerance) {
            throw InvalidStateError("Bell-diagonal weights must be non-negative: " + describe(lambda));
        }
        if (l < 0.0) l = 0.0;
        sum += l;
    }
    if (std::abs(sum - 1.0) > kNormalizationTolerance) {
        throw InvalidStateError("Bell-diagonal weights must sum to 1: " + describe(lambda));
    }
}

BellDiagonalState BellDiagonalState::from_error_rates(double e_z, double e_x, double e_y) {
    return BellDiagonalState({1.0 - 0.5 * (e_z + e_x + e_y),
                              0.5 * (e_x + e_y - e_z),
                              0.5 * (e_z + e_y - e_x),
                              0.5 * (e_z + e_x - e_y)});
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("binary entropy argument must lie in [0, 1], got " + std::to_string(p));
    }
    return -xlog2x(p) - xlog2x(1.0 - p);
}

double shannon_entropy(std::span<const double> probabilities) {
    double h = 0.0;
    for (double p : probabilities) h -= xlog2x(p);
    return h;
}

void validate_density_operator(const ComplexMatrix& rho) {
    if (rho.rows() == 0 || rho.rows() != rho.cols()) {
        throw InvalidStateError("density operator must be a non-empty square matrix");
    }
    const double asymmetry = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (asymmetry > kHermiticityTolerance) {
        throw InvalidStateError("operator is not Hermitian (deviation " + std::to_string(asymmetry) + ")");
    }
    const auto trace = rho.trace();
    if (std::abs(trace.real() - 1.0) > kNormalizationTolerance || std::abs(trace.imag()) > kNormalizationTolerance) {
        throw InvalidStateError("density operator must have unit trace");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kEigenvalueClamp) {
        throw InvalidStateError("density operator has a negative eigenvalue");
    }
}

double von_neumann_entropy(const ComplexMatrix& rho) {
    validate_density_operator(rho);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        s -= xlog2x(std::max(solver.eigenvalues()[i], 0.0));
    }
    return s;
}

Eigen::VectorXcd purification(const BellDiagonalState& state) {
    const double r = std::numbers::sqrt2 / 2.0;
    // Bell vectors in the computational basis |ab>, index 2a + b.
    const double bell[4][4] = {
        {r, 0.0, 0.0, r},    // phi+
        {r, 0.0, 0.0, -r},   // phi-
        {0.0, r, r, 0.0},    // psi+
        {0.0, r, -r, 0.0},   // psi-
    };
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(16);
    for (int i = 0; i < 4; ++i) {
        const double amplitude = std::sqrt(state[i]);
        for (int ab = 0; ab < 4; ++ab) phi[4 * ab + i] += amplitude * bell[i][ab];
    }
    return phi;
}

ComplexMatrix classical_quantum_state(const BellDiagonalState& state) {
    const Eigen::VectorXcd phi = purification(state);
    const ComplexMatrix rho_abe = phi * phi.adjoint();

    // Z measurement on A removes coherences between x != x'; then trace out B.
    ComplexMatrix rho_xe = ComplexMatrix::Zero(8, 8);
    for (int x = 0; x < 2; ++x) {
        for (int b = 0; b < 2; ++b) {
            const int offset = 8 * x + 4 * b;
            rho_xe.block(4 * x, 4 * x, 4, 4) += rho_abe.block(offset, offset, 4, 4);
        }
    }
    return rho_xe;
}

double conditional_entropy_xe(const BellDiagonalState& state) {
    const ComplexMatrix rho_xe = classical_quantum_state(state);
    const ComplexMatrix rho_e = rho_xe.block(0, 0, 4, 4) + rho_xe.block(4, 4, 4, 4);
    return von_neumann_entropy(rho_xe) - von_neumann_entropy(rho_e);
}

double conditional_entropy_xe_closed_form(const BellDiagonalState& state) {
    const double e_z = std::clamp(state.error_z(), 0.0, 1.0);
    return 1.0 + binary_entropy(e_z) - shannon_entropy(state.lambda());
}

// ---------------------------------------------------------------------------
// Worst-case search.
//
// Coordinates are the error rates (e_z, e_x, e_y), an invertible linear image
// of the simplex. Monitored bases are confined to [Q - w, Q + w] ∩ [0, 1];
// unmonitored ones only by positivity of lambda. In symmetric mode the
// monitored rates are tied to e_z.

namespace {

struct Interval {
    double lo;
    double hi;
    bool contains(double v) const { return v >= lo && v <= hi; }
};

struct SearchSpace {
    std::array<Interval, 3> box;
    bool tie_x = false;
    bool tie_y = false;
};

struct Point {
    std::array<double, 3> e;
    double value;
};

constexpr double kFeasibilityTolerance = 1e-13;

SearchSpace make_search_space(const ErrorConstraintSet& c) {
    const Interval monitored{std::max(0.0, c.center - c.half_width), std::min(1.0, c.center + c.half_width)};
    SearchSpace space;
    space.box = {monitored, monitored, Interval{0.0, 1.0}};
    const bool six = c.protocol == ProtocolKind::SixState;
    if (six) space.box[2] = monitored;
    if (c.mode == ConstraintMode::Symmetric) {
        space.tie_x = true;
        space.tie_y = six;
    }
    return space;
}

std::array<double, 4> lambda_from_errors(const std::array<double, 3>& e) {
    return {1.0 - 0.5 * (e[0] + e[1] + e[2]), 0.5 * (e[1] + e[2] - e[0]), 0.5 * (e[0] + e[2] - e[1]),
            0.5 * (e[0] + e[1] - e[2])};
}

// S(X|E) - leak_weight h(e_z); +inf outside the feasible set.
double objective(const SearchSpace& space, const std::array<double, 3>& e, double leak_weight) {
    for (int b = 0; b < 3; ++b) {
        if (!space.box[b].contains(e[b])) return std::numeric_limits<double>::infinity();
    }
    auto lambda = lambda_from_errors(e);
    double h_lambda = 0.0;
    for (double& l : lambda) {
        if (l < -kFeasibilityTolerance) return std::numeric_limits<double>::infinity();
        l = std::max(l, 0.0);
        h_lambda -= xlog2x(l);
    }
    const double e_z = std::clamp(e[0], 0.0, 1.0);
    const double h_z = -xlog2x(e_z) - xlog2x(1.0 - e_z);
    return 1.0 + (1.0 - leak_weight) * h_z - h_lambda;
}

std::vector<double> axis(Interval iv, double step) {
    std::vector<double> points;
    if (iv.hi < iv.lo) return points;
    const auto count = static_cast<long>(std::floor((iv.hi - iv.lo) / step));
    points.reserve(static_cast<std::size_t>(count) + 2);
    for (long k = 0; k <= count; ++k) points.push_back(iv.lo + static_cast<double>(k) * step);
    if (iv.hi - points.back() > 1e-15) points.push_back(iv.hi);
    return points;
}

std::optional<Point> grid_search(const SearchSpace& space, double leak_weight) {
    std::optional<Point> best;
    auto consider = [&](const std::array<double, 3>& e) {
        const double v = objective(space, e, leak_weight);
        if (std::isfinite(v) && (!best || v < best->value)) best = Point{e, v};
    };
    for (double e_z : axis(space.box[0], kGridStep)) {
        const std::vector<double> xs = space.tie_x ? std::vector<double>{e_z} : axis(space.box[1], kGridStep);
        for (double e_x : xs) {
            if (space.tie_y) {
                consider({e_z, e_x, e_z});
                continue;
            }
            // Positivity of lambda restricts e_y to [|e_z - e_x|, min(e_z + e_x, 2 - e_z - e_x)].
            const Interval y{std::max(space.box[2].lo, std::abs(e_z - e_x)),
                             std::min({space.box[2].hi, e_z + e_x, 2.0 - e_z - e_x})};
            for (double e_y : axis(y, kGridStep)) consider({e_z, e_x, e_y});
        }
    }
    return best;
}

void coordinate_descent(const SearchSpace& space, double leak_weight, Point& best) {
    std::vector<int> free_coords{0};
    if (!space.tie_x) free_coords.push_back(1);
    if (!space.tie_y) free_coords.push_back(2);

    auto with_ties = [&](std::array<double, 3> e) {
        if (space.tie_x) e[1] = e[0];
        if (space.tie_y) e[2] = e[0];
        return e;
    };

    double step = kGridStep;
    while (step >= kMinStep) {
        bool improved = false;
        for (int c : free_coords) {
            for (double direction : {-1.0, 1.0}) {
                auto e = best.e;
                e[c] = std::clamp(e[c] + direction * step, space.box[c].lo, space.box[c].hi);
                e = with_ties(e);
                const double v = objective(space, e, leak_weight);
                if (v < best.value) {
                    best = Point{e, v};
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
}

void check_constraints(const ErrorConstraintSet& c, double leak_weight) {
    if (!(leak_weight >= 0.0) || !std::isfinite(leak_weight)) {
        throw DomainError("leak weight must be finite and non-negative");
    }
    if (!std::isfinite(c.center) || !std::isfinite(c.half_width) || c.half_width < 0.0) {
        throw DomainError("constraint half-width must be finite and non-negative");
    }
    if (c.center < 0.0 || c.center > 1.0) {
        throw DomainError("constraint center must lie in [0, 1], got " + std::to_string(c.center));
    }
}

struct CacheKey {
    int protocol;
    int mode;
    long long center;
    long long half_width;
    long long leak_weight;
    bool operator==(const CacheKey&) const = default;
};

struct CacheKeyHash {
    std::size_t operator()(const CacheKey& k) const noexcept {
        std::size_t h = std::hash<long long>{}(k.center);
        h ^= std::hash<long long>{}(k.half_width) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<long long>{}(k.leak_weight) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h ^ static_cast<std::size_t>(k.protocol * 4 + k.mode);
    }
};

class MinEntropyCache {
public:
    std::optional<WorstCase> find(const CacheKey& key) const {
        std::shared_lock lock(mutex_);
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }
    void insert(const CacheKey& key, const WorstCase& value) {
        std::unique_lock lock(mutex_);
        entries_.emplace(key, value);
    }
    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return entries_.size();
    }
    void clear() {
        std::unique_lock lock(mutex_);
        entries_.clear();
    }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<CacheKey, WorstCase, CacheKeyHash> entries_;
};

MinEntropyCache& cache() {
    static MinEntropyCache instance;
    return instance;
}

}  // namespace

WorstCase min_sxe_uncached(const ErrorConstraintSet& constraints, double leak_weight) {
    check_constraints(constraints, leak_weight);
    const SearchSpace space = make_search_space(constraints);

    // The maximally mixed state has S(X|E) = 0 and h(e_z) = 1, the global
    // minimum of the objective for any non-negative leak weight.
    if (space.box[0].contains(0.5) && space.box[1].contains(0.5) && space.box[2].contains(0.5)) {
        return {0.0, -leak_weight, BellDiagonalState({0.25, 0.25, 0.25, 0.25})};
    }

    auto best = grid_search(space, leak_weight);
    if (!best) {
        std::ostringstream os;
        os << "no Bell-diagonal state has " << to_string(constraints.protocol) << " error rates within "
           << constraints.half_width << " of " << constraints.center;
        throw InfeasibleError(os.str());
    }
    coordinate_descent(space, leak_weight, *best);
    const auto lambda = lambda_from_errors(best->e);
    std::array<double, 4> clamped;
    std::transform(lambda.begin(), lambda.end(), clamped.begin(), [](double l) { return std::max(l, 0.0); });
    const BellDiagonalState minimizer(clamped);
    const double entropy = std::clamp(best->value + leak_weight * binary_entropy(minimizer.error_z()), 0.0, 1.0);
    return {entropy, best->value, minimizer};
}

WorstCase min_sxe_with_leak(const ErrorConstraintSet& constraints, double leak_weight) {
    check_constraints(constraints, leak_weight);
    // Beyond a width of 1 the monitored box is all of [0, 1].
    const CacheKey key{static_cast<int>(constraints.protocol), static_cast<int>(constraints.mode),
                       std::llround(constraints.center * kCacheResolution),
                       std::llround(std::min(constraints.half_width, 1.0) * kCacheResolution),
                       std::llround(leak_weight * kCacheResolution)};
    if (auto hit = cache().find(key)) return *hit;

    ErrorConstraintSet rounded = constraints;
    rounded.center = static_cast<double>(key.center) / kCacheResolution;
    rounded.half_width = static_cast<double>(key.half_width) / kCacheResolution;
    WorstCase result = min_sxe_uncached(rounded, static_cast<double>(key.leak_weight) / kCacheResolution);
    cache().insert(key, result);
    return result;
}

WorstCase min_sxe(const ErrorConstraintSet& constraints) { return min_sxe_with_leak(constraints, 0.0); }

std::size_t min_sxe_cache_size() { return cache().size(); }

void clear_min_sxe_cache() { cache().clear(); }

}  // namespace finikey::entropy
