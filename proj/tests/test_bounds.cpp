#include <gtest/gtest.h>

#include <cmath>

#include "finikey/bounds.hpp"
#include "finikey/errors.hpp"

using namespace finikey;
using namespace finikey::bounds;

TEST(XiPe, Values) {
    EXPECT_EQ(xi_pe(1.0, 1e5, 1e5), 0.0);
    EXPECT_EQ(xi_pe(1.0, 37.0, 3.0), 0.0);
    EXPECT_NEAR(xi_pe(1e-9, 1e5, 1e5), 7.1978248571364913e-3, 1e-17);
    EXPECT_NEAR(xi_pe(1e-9, 9e5, 1e5), 5.3649418902316356e-3, 1e-17);
}

TEST(XiPe, Domain) {
    EXPECT_THROW(xi_pe(0.0, 10, 10), DomainError);
    EXPECT_THROW(xi_pe(-0.1, 10, 10), DomainError);
    EXPECT_THROW(xi_pe(1.5, 10, 10), DomainError);
    EXPECT_THROW(xi_pe(0.1, 0, 10), DomainError);
    EXPECT_THROW(xi_pe(0.1, 10, 0), DomainError);
}

TEST(XiAtt, Values) {
    EXPECT_NEAR(xi_att(1.0, 2, 1e4), std::sqrt(16.0 * std::log(2.0) / 1e4), 1e-16);
    EXPECT_NEAR(xi_att(1e-9, 2, 1e6), 1.3299491779182031e-2, 1e-16);
    EXPECT_NEAR(xi_att(1e-7, 2, 4e6), xi_att(1e-7, 2, 1e6) / 2.0, 1e-16);
    EXPECT_THROW(xi_att(1e-9, 1, 1e6), DomainError);
    EXPECT_THROW(xi_att(0.0, 2, 1e6), DomainError);
    EXPECT_THROW(xi_att(1e-9, 2, 0.0), DomainError);
}

TEST(XiCoh, IsAttackPlusEstimationTerm) {
    EXPECT_NEAR(xi_att(1e-9, 2, 1e5) / 2.0, 2.1028342872450174e-2, 1e-16);
    EXPECT_NEAR(xi_coh(1e-9, 1e5, 1e5), 2.8345553266725531e-2, 1e-15);
    for (double eps : {1e-3, 1e-9, 1e-20}) {
        for (double n : {1e3, 1e7}) {
            EXPECT_NEAR(xi_coh(eps, n, 500.0), xi_att(eps, 2, n) / 2.0 + xi_pe(eps / 2.0, n, 500.0), 1e-15);
        }
    }
}

TEST(LogVariants, AgreeWithPlainForms) {
    for (double eps : {0.5, 1e-9, 1e-200}) {
        const double l = -std::log(eps);
        EXPECT_NEAR(xi_pe_ln(l, 1e6, 1e4), xi_pe(eps, 1e6, 1e4), 1e-14);
        EXPECT_NEAR(xi_att_ln(l, 2, 1e6), xi_att(eps, 2, 1e6), 1e-14);
        EXPECT_NEAR(xi_coh_ln(l, 1e6, 1e4), xi_coh(eps, 1e6, 1e4), 1e-14);
        EXPECT_NEAR(leak_ec_ln(1e5, 0.03, 1.1, l), leak_ec(1e5, 0.03, 1.1, eps), 1e-8);
        EXPECT_NEAR(aep_correction_ln(1e6, l), aep_correction(1e6, eps), 1e-14);
    }
    // Far below the smallest double.
    EXPECT_TRUE(std::isfinite(aep_correction_ln(1e8, 1e4)));
    EXPECT_GT(xi_pe_ln(3000.0, 1e8, 1e6), xi_pe(1e-300, 1e8, 1e6));
}

TEST(LeakEc, Values) {
    EXPECT_DOUBLE_EQ(leak_ec(1e4, 0.0, 1.1, 0.5), 2.0);
    EXPECT_NEAR(leak_ec(1e4, 0.05, 1.1, 1e-10), 3184.5858092243910, 1e-9);
    EXPECT_THROW(leak_ec(1e4, 0.6, 1.1, 1e-10), DomainError);
    EXPECT_THROW(leak_ec(1e4, 0.05, 0.9, 1e-10), DomainError);
    EXPECT_THROW(leak_ec(1e4, 0.05, 1.1, 0.0), DomainError);
}

TEST(Aep, Values) {
    EXPECT_EQ(aep_correction(1e6, 2.0), 0.0);
    EXPECT_NEAR(aep_correction(1e6, 1e-9), 2.7792693668474391e-2, 1e-16);
    const double n = 1e6;
    const double eps_bar = 1e-9;
    EXPECT_NEAR(aep_correction(n, eps_bar / (2.0 * n * n)), 4.2355781775524640e-2, 1e-15);
    EXPECT_THROW(aep_correction(1e6, 2.5), DomainError);
    EXPECT_THROW(aep_correction(0.0, 1e-9), DomainError);
}

TEST(Bounds, VanishAsymptotically) {
    double previous_pe = 1.0, previous_att = 1.0, previous_aep = 1.0;
    for (double n : {1e6, 1e8, 1e10, 1e12, 1e14}) {
        const double pe = xi_pe(1e-9, n, n);
        const double att = xi_att(1e-9, 2, n);
        const double aep = aep_correction(n, 1e-9);
        EXPECT_LT(pe, previous_pe);
        EXPECT_LT(att, previous_att);
        EXPECT_LT(aep, previous_aep);
        previous_pe = pe;
        previous_att = att;
        previous_aep = aep;
    }
    EXPECT_LT(xi_pe(1e-9, 1e14, 1e14), 1e-5);
    EXPECT_LT(xi_att(1e-9, 2, 1e14), 1e-5);
    EXPECT_LT(xi_coh(1e-9, 1e14, 1e14), 1e-5);
    EXPECT_LT(aep_correction(1e14, 1e-9), 1e-5);
}

TEST(Multinomial, Floor) {
    EXPECT_TRUE(multinomial_floor_holds({501, 0, 0, 0}));
    EXPECT_NEAR(log_multinomial_mass({501, 0, 0, 0}), 0.0, 1e-12);
    EXPECT_TRUE(multinomial_floor_holds({150, 150, 150, 51}));
    EXPECT_NEAR(log_multinomial_mass({150, 150, 150, 51}), -9.1335126027890225, 1e-9);
    EXPECT_TRUE(multinomial_floor_holds({1000000, 1, 1, 1}));
    EXPECT_THROW(log_multinomial_mass({0, 0, 0, 0}), DomainError);
}

TEST(Multinomial, MassIsAProbability) {
    // Two-outcome case: the mass at the mode of Binomial(10, 3/10).
    const double expected = std::log(120.0 * std::pow(0.3, 3) * std::pow(0.7, 7));
    EXPECT_NEAR(log_multinomial_mass({3, 7, 0, 0}), expected, 1e-12);
    EXPECT_LT(log_multinomial_mass({3, 7, 2, 9}), 0.0);
}
