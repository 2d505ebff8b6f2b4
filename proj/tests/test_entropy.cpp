#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "finikey/entropy.hpp"
#include "finikey/errors.hpp"

using namespace finikey;
using namespace finikey::entropy;

namespace {

BellDiagonalState random_state(std::mt19937_64& rng) {
    std::exponential_distribution<double> draw(1.0);
    std::array<double, 4> w;
    double sum = 0.0;
    for (double& x : w) sum += (x = draw(rng));
    for (double& x : w) x /= sum;
    return BellDiagonalState(w);
}

}  // namespace

TEST(BinaryEntropy, KnownValues) {
    EXPECT_EQ(binary_entropy(0.0), 0.0);
    EXPECT_EQ(binary_entropy(1.0), 0.0);
    EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
    EXPECT_NEAR(binary_entropy(0.01), 0.080793135895911173, 1e-15);
    EXPECT_NEAR(binary_entropy(0.05), 0.28639695711595613, 1e-15);
}

TEST(BinaryEntropy, RejectsOutOfRange) {
    EXPECT_THROW(binary_entropy(-1e-3), DomainError);
    EXPECT_THROW(binary_entropy(1.0 + 1e-9), DomainError);
    EXPECT_THROW(binary_entropy(std::nan("")), DomainError);
}

TEST(VonNeumann, MaximallyMixedQubit) {
    ComplexMatrix rho = ComplexMatrix::Identity(2, 2) / 2.0;
    EXPECT_NEAR(von_neumann_entropy(rho), 1.0, 1e-14);
}

TEST(VonNeumann, PureProjectorIsZero) {
    Eigen::VectorXcd v(3);
    v << std::complex<double>(1, 1), 2.0, std::complex<double>(0, -1);
    v.normalize();
    EXPECT_NEAR(von_neumann_entropy(v * v.adjoint()), 0.0, 1e-12);
}

TEST(VonNeumann, DiagonalSpectrum) {
    ComplexMatrix rho = ComplexMatrix::Zero(3, 3);
    rho(0, 0) = 0.5;
    rho(1, 1) = 0.25;
    rho(2, 2) = 0.25;
    EXPECT_NEAR(von_neumann_entropy(rho), 1.5, 1e-14);
}

TEST(VonNeumann, RejectsInvalidOperators) {
    ComplexMatrix skew = ComplexMatrix::Identity(2, 2) / 2.0;
    skew(0, 1) = 0.1;
    EXPECT_THROW(von_neumann_entropy(skew), InvalidStateError);
    ComplexMatrix heavy = ComplexMatrix::Identity(2, 2);
    EXPECT_THROW(von_neumann_entropy(heavy), InvalidStateError);
    ComplexMatrix negative = ComplexMatrix::Zero(2, 2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    EXPECT_THROW(von_neumann_entropy(negative), InvalidStateError);
}

TEST(BellState, Validation) {
    EXPECT_THROW(BellDiagonalState({0.5, 0.5, 0.1, -0.1}), InvalidStateError);
    EXPECT_THROW(BellDiagonalState({0.5, 0.5, 0.1, 0.0}), InvalidStateError);
    const BellDiagonalState tiny({1.0, 0.0, 0.0, -1e-13});
    EXPECT_EQ(tiny[3], 0.0);
}

TEST(BellState, ErrorRateRoundTrip) {
    const auto s = BellDiagonalState::from_error_rates(0.1, 0.2, 0.15);
    EXPECT_NEAR(s.error_z(), 0.1, 1e-15);
    EXPECT_NEAR(s.error_x(), 0.2, 1e-15);
    EXPECT_NEAR(s.error_y(), 0.15, 1e-15);
    EXPECT_THROW(BellDiagonalState::from_error_rates(1.0, 1.0, 1.0), InvalidStateError);
}

TEST(ConditionalEntropy, KnownStates) {
    EXPECT_NEAR(conditional_entropy_xe(BellDiagonalState::perfect()), 1.0, 1e-12);
    EXPECT_NEAR(conditional_entropy_xe(BellDiagonalState({0.25, 0.25, 0.25, 0.25})), 0.0, 1e-12);
    EXPECT_NEAR(conditional_entropy_xe(BellDiagonalState({0.9, 0.0, 0.0, 0.1})), 1.0, 1e-12);
    EXPECT_NEAR(conditional_entropy_xe(BellDiagonalState({0.5, 0.5, 0.0, 0.0})), 0.0, 1e-12);
    EXPECT_NEAR(conditional_entropy_xe(BellDiagonalState({0.7, 0.1, 0.15, 0.05})), 0.40289282054849630, 1e-12);
}

TEST(ConditionalEntropy, ClassicalQuantumStateIsValid) {
    const auto rho = classical_quantum_state(BellDiagonalState({0.7, 0.1, 0.15, 0.05}));
    ASSERT_EQ(rho.rows(), 8);
    EXPECT_NO_THROW(validate_density_operator(rho));
    // X is uniform for every Bell-diagonal state.
    EXPECT_NEAR(rho.topLeftCorner(4, 4).trace().real(), 0.5, 1e-14);
}

TEST(ConditionalEntropy, ClosedFormMatchesExplicitConstruction) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        const auto s = random_state(rng);
        EXPECT_NEAR(conditional_entropy_xe_closed_form(s), conditional_entropy_xe(s), 1e-12);
    }
}

TEST(MinSxe, PerfectCorrelations) {
    EXPECT_NEAR(min_sxe({ProtocolKind::BB84, ConstraintMode::PerBasis, 0.0, 0.0}).entropy, 1.0, 1e-12);
}

TEST(MinSxe, Bb84AtTenPercent) {
    const auto w = min_sxe({ProtocolKind::BB84, ConstraintMode::PerBasis, 0.1, 0.0});
    EXPECT_NEAR(w.entropy, 0.53100440641071878, 1e-9);
    EXPECT_NEAR(w.minimizer.error_z(), 0.1, 1e-12);
    EXPECT_NEAR(w.minimizer.error_x(), 0.1, 1e-12);
}

TEST(MinSxe, SixStateNotBelowBb84) {
    for (double q : {0.02, 0.1, 0.2}) {
        for (double w : {0.0, 0.03}) {
            const double bb84 = min_sxe({ProtocolKind::BB84, ConstraintMode::PerBasis, q, w}).entropy;
            const double six = min_sxe({ProtocolKind::SixState, ConstraintMode::PerBasis, q, w}).entropy;
            EXPECT_GE(six, bb84 - 1e-12) << q << ' ' << w;
        }
    }
    EXPECT_GT(min_sxe({ProtocolKind::SixState, ConstraintMode::PerBasis, 0.1, 0.0}).entropy,
              min_sxe({ProtocolKind::BB84, ConstraintMode::PerBasis, 0.1, 0.0}).entropy + 1e-3);
}

TEST(MinSxe, NonIncreasingInWidth) {
    for (auto kind : {ProtocolKind::BB84, ProtocolKind::SixState}) {
        double previous = 2.0;
        for (double w : {0.0, 0.005, 0.01, 0.03, 0.1, 0.3}) {
            const double v = min_sxe({kind, ConstraintMode::PerBasis, 0.05, w}).entropy;
            EXPECT_LE(v, previous + 1e-12);
            previous = v;
        }
    }
}

TEST(MinSxe, SymmetricModeIsASubset) {
    for (auto kind : {ProtocolKind::BB84, ProtocolKind::SixState}) {
        const double per = min_sxe({kind, ConstraintMode::PerBasis, 0.05, 0.02}).entropy;
        const double sym = min_sxe({kind, ConstraintMode::Symmetric, 0.05, 0.02}).entropy;
        EXPECT_GE(sym, per - 1e-12);
    }
}

TEST(MinSxe, UniformStateReachable) {
    const auto w = min_sxe_with_leak({ProtocolKind::SixState, ConstraintMode::PerBasis, 0.45, 0.1}, 1.1);
    EXPECT_EQ(w.entropy, 0.0);
    EXPECT_DOUBLE_EQ(w.objective, -1.1);
}

TEST(MinSxe, Errors) {
    EXPECT_THROW(min_sxe({ProtocolKind::BB84, ConstraintMode::PerBasis, 0.1, -0.01}), DomainError);
    EXPECT_THROW(min_sxe({ProtocolKind::BB84, ConstraintMode::PerBasis, 1.2, 0.0}), DomainError);
    EXPECT_THROW(min_sxe({ProtocolKind::SixState, ConstraintMode::PerBasis, 1.0, 0.0}), InfeasibleError);
    EXPECT_THROW(min_sxe_with_leak({ProtocolKind::BB84, ConstraintMode::PerBasis, 0.1, 0.0}, -1.0), DomainError);
}

TEST(MinSxe, LeakWeightedObjective) {
    const ErrorConstraintSet c{ProtocolKind::BB84, ConstraintMode::PerBasis, 0.05, 0.02};
    const auto plain = min_sxe(c);
    EXPECT_DOUBLE_EQ(plain.objective, plain.entropy);
    const auto leaky = min_sxe_with_leak(c, 1.1);
    EXPECT_NEAR(leaky.objective, leaky.entropy - 1.1 * binary_entropy(leaky.minimizer.error_z()), 1e-12);
    // The worst state for S - f h(e_z) sits at the largest tolerated error.
    EXPECT_NEAR(leaky.minimizer.error_z(), 0.07, 1e-9);
    EXPECT_LE(leaky.objective, plain.entropy - 1.1 * binary_entropy(0.05) + 1e-12);
}

TEST(MinSxe, CacheIsDeterministic) {
    clear_min_sxe_cache();
    const ErrorConstraintSet c{ProtocolKind::BB84, ConstraintMode::PerBasis, 0.0312345678901, 0.0123456789012};
    const auto first = min_sxe(c);
    EXPECT_EQ(min_sxe_cache_size(), 1u);
    ErrorConstraintSet nearby = c;
    nearby.center += 1e-12;
    const auto second = min_sxe(nearby);
    EXPECT_EQ(min_sxe_cache_size(), 1u);
    EXPECT_EQ(first.entropy, second.entropy);

    clear_min_sxe_cache();
    const auto recomputed = min_sxe(nearby);
    EXPECT_EQ(first.entropy, recomputed.entropy);
    EXPECT_EQ(first.minimizer.lambda(), recomputed.minimizer.lambda());
}

TEST(MinSxe, ConcurrentCallsAgree) {
    clear_min_sxe_cache();
    std::vector<double> out(8);
    std::vector<std::thread> pool;
    for (int t = 0; t < 8; ++t) {
        pool.emplace_back([&out, t] {
            out[t] = min_sxe({ProtocolKind::BB84, ConstraintMode::PerBasis, 0.08, 0.011 + 0.001 * (t % 2)}).entropy;
        });
    }
    for (auto& th : pool) th.join();
    for (int t = 2; t < 8; ++t) EXPECT_EQ(out[t], out[t % 2]);
}
