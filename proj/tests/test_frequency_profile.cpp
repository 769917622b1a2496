#include <gtest/gtest.h>

#include <cmath>

#include "refrig/frequency_profile.hpp"

using namespace refrig;

TEST(SineOpening, Endpoints) {
    const auto p = FrequencyProfile::sine_opening(2.0);
    EXPECT_EQ(omega_at(p, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(omega_at(p, 1.0), 0.5);
    EXPECT_NEAR(omega_at(p, 0.5), 1.0 - 0.5 * std::sin(constants::pi / 4.0), 1e-15);
    EXPECT_NEAR(omega_at(p, 0.5), 0.64645, 1e-5);
    EXPECT_EQ(omega_at(p, 3.7), 0.5);
}

TEST(SineOpening, MonotoneNonincreasing) {
    const auto p = FrequencyProfile::sine_opening(3.0);
    double prev = omega_at(p, 0.0);
    for (int i = 1; i <= 2000; ++i) {
        const double w = omega_at(p, i * 1e-3);
        EXPECT_LE(w, prev);
        prev = w;
    }
}

TEST(ReversedSineClosing, IsTimeReverseOfOpening) {
    const auto open = FrequencyProfile::sine_opening(2.5);
    const auto close = FrequencyProfile::reversed_sine_closing(2.5);
    for (int i = 0; i <= 100; ++i) {
        const double s = i * 0.01;
        EXPECT_NEAR(omega_at(close, s), omega_at(open, 1.0 - s), 1e-15);
    }
    EXPECT_EQ(omega_at(close, 5.0), 1.0);
}

TEST(PiecewiseLinear, InterpolatesAndHolds) {
    const auto p = FrequencyProfile::piecewise_linear(2.0, {{0.0, 1.0}, {0.5, 0.8}, {1.0, 0.5}});
    EXPECT_NO_THROW(validate(p));
    EXPECT_DOUBLE_EQ(omega_at(p, 0.25), 0.9);
    EXPECT_DOUBLE_EQ(omega_at(p, 0.75), 0.65);
    EXPECT_DOUBLE_EQ(omega_at(p, 4.0), 0.5);
    const auto k = kinks(p, 2.0);
    ASSERT_EQ(k.size(), 2u);
    EXPECT_EQ(k[0], 0.5);
    EXPECT_EQ(k[1], 1.0);
    EXPECT_DOUBLE_EQ(min_omega_over(p, 2.0), 0.5);
}

TEST(FrequencyProfile, Validation) {
    EXPECT_THROW(validate(FrequencyProfile::sine_opening(0.5)), Error);
    EXPECT_THROW(validate(FrequencyProfile::sine_opening(2.0, 0.0)), Error);
    EXPECT_THROW(validate(FrequencyProfile::constant(2.0, 0.0)), Error);
    EXPECT_THROW(validate(FrequencyProfile::piecewise_linear(2.0, {})), Error);
    EXPECT_THROW(validate(FrequencyProfile::piecewise_linear(2.0, {{0.1, 1.0}})), Error);
    EXPECT_THROW(validate(FrequencyProfile::piecewise_linear(2.0, {{0.0, 1.0}, {0.0, 0.5}})), Error);
}
