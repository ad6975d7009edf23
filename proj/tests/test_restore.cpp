#include <astroimg/fourier.h>
#include <astroimg/restore.h>
#include <astroimg/synth.h>
#include <gtest/gtest.h>

#include "oracles.h"

#include <cmath>

namespace astroimg {
namespace {

Kernel mildPsf() {
    // 1-D taps (0.1, 0.8, 0.1) in both directions: |H| >= 0.36 everywhere.
    const std::vector<double> taps{0.1, 0.8, 0.1};
    return Kernel::outer(taps, taps);
}

TEST(Wiener, ZeroNsrInvertsCircularBlur) {
    std::mt19937_64 rng(61);
    const Image img = oracle::randomImage(12, 10, rng);
    const Image blurred = circularConvolve(img, mildPsf());
    const Image restored = wienerDeconvolve(blurred, {mildPsf(), 0.0});
    EXPECT_LT(oracle::maxAbsDiff(restored, img), 1e-10);
}

TEST(Wiener, CircularBlurMatchesDirectWrappedSum) {
    std::mt19937_64 rng(62);
    const Image img = oracle::randomImage(9, 7, rng);
    const Kernel k = oracle::randomKernel(3, 5, rng);
    const Image got = circularConvolve(img, k);
    for (int y = 0; y < 7; ++y) {
        for (int x = 0; x < 9; ++x) {
            double acc = 0.0;
            for (int j = 0; j < 5; ++j) {
                for (int i = 0; i < 3; ++i) {
                    acc += k(i, j) * img(((x + 1 - i) % 9 + 9) % 9, ((y + 2 - j) % 7 + 7) % 7);
                }
            }
            EXPECT_NEAR(got(x, y), acc, 1e-12);
        }
    }
}

TEST(Wiener, GainMatchesNaiveTransfer) {
    const Kernel psf = gaussianPsf(1.2, 3);
    const int w = 10;
    const int h = 9;
    Image frame(w, h, 0.0);
    for (int j = -3; j <= 3; ++j) {
        for (int i = -3; i <= 3; ++i) frame((i + w) % w, (j + h) % h) = psf.at(i, j);
    }
    const auto transfer = oracle::dft(frame);
    const double nsr = 0.03;
    const Image gain = wienerGainMagnitude(psf, w, h, nsr);
    for (std::size_t i = 0; i < transfer.size(); ++i) {
        const double mag2 = std::norm(transfer[i]);
        EXPECT_NEAR(gain.values()[i], std::sqrt(mag2) / (mag2 + nsr), 1e-12);
    }
}

TEST(Wiener, GainIsBoundedByHalfInverseRootNsr) {
    const double nsr = 1e-2;
    const Image gain = wienerGainMagnitude(gaussianPsf(2.0, 6), 32, 32, nsr);
    EXPECT_LE(gain.max(), 0.5 / std::sqrt(nsr) + 1e-12);
}

TEST(Wiener, SingularTransferNeedsPositiveNsr) {
    // Box of width 2 (zero padded to 3) has a transfer zero at Nyquist on an even frame.
    const Kernel box(3, 1, {0.5, 0.5, 0.0});
    const Image img(8, 4, 0.3);
    EXPECT_THROW(wienerDeconvolve(img, {box, 0.0}), SingularError);
    EXPECT_NO_THROW(wienerDeconvolve(img, {box, 1e-3}));
}

TEST(Wiener, ContractViolations) {
    const Image img(8, 8, 0.0);
    EXPECT_THROW(wienerDeconvolve(img, {Kernel(1, 1, {0.0}), 0.1}), ContractError);
    EXPECT_THROW(wienerDeconvolve(img, {mildPsf(), -1.0}), ContractError);
    EXPECT_THROW(selfTunedWiener(img, mildPsf(), {}), ParameterError);
    EXPECT_THROW(selfTunedWiener(img, mildPsf(), {0.1, 0.0}), ParameterError);
}

TEST(Whiteness, WhiteNoiseScoresLowStructureScoresHigh) {
    std::mt19937_64 rng(63);
    std::normal_distribution<double> g(0.0, 1.0);
    Image white(64, 64);
    for (double& v : white.data()) v = g(rng);
    const double whiteScore = whitenessScore(white);
    EXPECT_LT(whiteScore, 20.0 * 8.0 / 4096.0);
    const Image smooth = circularConvolve(white, gaussianPsf(2.0, 6));
    EXPECT_GT(whitenessScore(smooth), 1.0);
    EXPECT_EQ(whitenessScore(Image(8, 8, 1.0)), 0.0);
}

TEST(Whiteness, MatchesDirectAutocorrelation) {
    std::mt19937_64 rng(64);
    const Image r = oracle::randomImage(11, 9, rng, -1.0, 1.0);
    const double mean = r.sum() / static_cast<double>(r.size());
    auto acf = [&](int dx, int dy) {
        double acc = 0.0;
        for (int y = 0; y < 9; ++y) {
            for (int x = 0; x < 11; ++x) {
                acc += (r(x, y) - mean) * (r((x + dx) % 11, (y + dy) % 9) - mean);
            }
        }
        return acc;
    };
    const double zero = acf(0, 0);
    double expected = 0.0;
    for (int dy = -2; dy <= 2; ++dy) {
        for (int dx = -2; dx <= 2; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const double c = acf((dx + 11) % 11, (dy + 9) % 9) / zero;
            expected += c * c;
        }
    }
    EXPECT_NEAR(whitenessScore(r, 2), expected, 1e-10);
}

TEST(SelfTuned, ReportListsEveryCandidateAndPicksMinimum) {
    SynthGalaxySpec spec;
    spec.width = spec.height = 48;
    spec.cx = spec.cy = 23.5;
    spec.scaleLength = 5.0;
    const Kernel psf = gaussianPsf(1.5, 6);
    const Image observed = addNoise(circularConvolve(synthGalaxy(spec), psf), {NoiseKind::Gaussian, 0.05, 0.0}, 3);
    const auto grid = logspace(1e-4, 1.0, 9);
    const auto [restored, report] = selfTunedWiener(observed, psf, grid);
    ASSERT_EQ(report.candidates.size(), grid.size());
    double best = report.candidates[0].score;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_EQ(report.candidates[i].nsr, grid[i]);
        best = std::min(best, report.candidates[i].score);
    }
    EXPECT_EQ(report.residualWhitenessScore, best);
    const Image direct = wienerDeconvolve(observed, {psf, report.chosenNsr});
    EXPECT_LT(oracle::maxAbsDiff(restored, direct), 1e-12);
}

TEST(Logspace, EndpointsAndRatio) {
    const auto g = logspace(1e-4, 1.0, 25);
    ASSERT_EQ(g.size(), 25u);
    EXPECT_NEAR(g.front(), 1e-4, 1e-18);
    EXPECT_NEAR(g.back(), 1.0, 1e-14);
    EXPECT_NEAR(g[1] / g[0], g[24] / g[23], 1e-12);
    EXPECT_THROW(logspace(0.0, 1.0, 3), ParameterError);
}

}  // namespace
}  // namespace astroimg
