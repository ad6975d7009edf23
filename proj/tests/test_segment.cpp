#include <astroimg/segment.h>
#include <astroimg/synth.h>
#include <gtest/gtest.h>

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace astroimg {
namespace {

double agreement(const LabelMap& got, const Image& truth) {
    std::size_t same = 0;
    for (std::size_t i = 0; i < got.labels.size(); ++i) {
        same += (got.labels[i] != 0) == (truth.values()[i] > 0.5);
    }
    return static_cast<double>(same) / static_cast<double>(got.labels.size());
}

// =============================================================================
// Chan-Vese
// =============================================================================

TEST(ChanVese, CheckerboardInitialisation) {
    const Image phi = checkerboardLevelSet(11, 11);
    EXPECT_DOUBLE_EQ(phi(0, 3), 0.0);
    EXPECT_NEAR(phi(2, 2), std::sin(0.4 * M_PI) * std::sin(0.4 * M_PI), 1e-15);
    EXPECT_LT(phi(7, 2), 0.0);
}

TEST(ChanVese, EnergyMatchesDirectSum) {
    std::mt19937_64 rng(71);
    const Image img = oracle::randomImage(7, 6, rng);
    const Image phi = oracle::randomImage(7, 6, rng, -2.0, 2.0);
    ChanVeseParams p;
    auto H = [&](double v) { return 0.5 * (1.0 + 2.0 / M_PI * std::atan(v / p.epsilon)); };
    auto D = [&](double v) { return p.epsilon / (M_PI * (p.epsilon * p.epsilon + v * v)); };
    double a = 0, b = 0, sa = 0, sb = 0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        a += H(phi.values()[i]);
        b += 1 - H(phi.values()[i]);
        sa += H(phi.values()[i]) * img.values()[i];
        sb += (1 - H(phi.values()[i])) * img.values()[i];
    }
    const double c1 = sa / a;
    const double c2 = sb / b;
    double e = 0.0;
    for (int y = 0; y < 6; ++y) {
        for (int x = 0; x < 7; ++x) {
            const double gx = 0.5 * (phi(std::min(x + 1, 6), y) - phi(std::max(x - 1, 0), y));
            const double gy = 0.5 * (phi(x, std::min(y + 1, 5)) - phi(x, std::max(y - 1, 0)));
            const double v = phi(x, y);
            const double f = img(x, y);
            e += p.mu * D(v) * std::hypot(gx, gy) + p.lambda1 * H(v) * (f - c1) * (f - c1) +
                 p.lambda2 * (1 - H(v)) * (f - c2) * (f - c2);
        }
    }
    EXPECT_NEAR(chanVeseEnergy(img, phi, p), e, 1e-12);
}

TEST(ChanVese, SegmentsDiskWithMonotoneEnergy) {
    const Image disk = synthDisk(48, 48, 23.5, 23.5, 12.0);
    const ChanVeseResult r = chanVese(disk);
    EXPECT_GE(agreement(r.mask, disk), 0.99);
    for (std::size_t i = 1; i < r.energyTrace.size(); ++i) {
        EXPECT_LE(r.energyTrace[i], r.energyTrace[i - 1] + 1e-9 * std::abs(r.energyTrace[i - 1]));
    }
    EXPECT_EQ(static_cast<int>(r.energyTrace.size()), r.iterationsRun);
}

TEST(ChanVese, MaskIsBrighterRegionRegardlessOfPhiSign) {
    const Image disk = synthDisk(40, 40, 19.5, 19.5, 9.0);
    const Image inverted = (-1.0) * disk + 1.0;
    const ChanVeseResult a = chanVese(disk);
    const ChanVeseResult b = chanVese(inverted);
    EXPECT_GE(agreement(a.mask, disk), 0.99);
    EXPECT_GE(agreement(b.mask, inverted), 0.99);
}

TEST(ChanVese, ConstantImageTerminatesWithEqualMeans) {
    const ChanVeseResult r = chanVese(Image(24, 24, 0.3));
    EXPECT_NEAR(r.c1, 0.3, 1e-12);
    EXPECT_NEAR(r.c2, 0.3, 1e-12);
    EXPECT_LE(r.iterationsRun, 200);
}

TEST(ChanVese, ParameterValidation) {
    ChanVeseParams p;
    p.dt = 0.0;
    EXPECT_THROW(chanVese(Image(8, 8, 0.0), p), ParameterError);
    p = ChanVeseParams{};
    p.maxIter = 0;
    EXPECT_THROW(chanVese(Image(8, 8, 0.0), p), ParameterError);
    EXPECT_THROW(chanVeseEnergy(Image(8, 8, 0.0), Image(4, 4, 0.0), ChanVeseParams{}), DimensionError);
}

// =============================================================================
// Random walker
// =============================================================================

// Probabilities for one label from the dense Dirichlet system L_U x = -B^T m.
Image denseRandomWalker(const Image& img, const std::map<std::pair<int, int>, int>& seeds, int label, double beta) {
    const int w = img.width();
    const int h = img.height();
    const Image unit = rescaleUnit(img, 0.0);
    auto weight = [&](int x0, int y0, int x1, int y1) {
        const double d = unit(x0, y0) - unit(x1, y1);
        return std::exp(-beta * d * d) + kWalkerWeightFloor;
    };
    std::vector<int> index(img.size(), -1);
    std::vector<std::pair<int, int>> unknown;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!seeds.count({x, y})) {
                index[img.index(x, y)] = static_cast<int>(unknown.size());
                unknown.push_back({x, y});
            }
        }
    }
    const std::size_t m = unknown.size();
    std::vector<double> a(m * m, 0.0);
    std::vector<double> b(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto [x, y] = unknown[i];
        const int nx[4] = {x + 1, x - 1, x, x};
        const int ny[4] = {y, y, y + 1, y - 1};
        for (int k = 0; k < 4; ++k) {
            if (nx[k] < 0 || ny[k] < 0 || nx[k] >= w || ny[k] >= h) continue;
            const double wt = weight(x, y, nx[k], ny[k]);
            a[i * m + i] += wt;
            const int j = index[img.index(nx[k], ny[k])];
            if (j >= 0) {
                a[i * m + static_cast<std::size_t>(j)] -= wt;
            } else if (seeds.at({nx[k], ny[k]}) == label) {
                b[i] += wt;
            }
        }
    }
    const auto x = oracle::denseSolve(a, b);
    Image prob(w, h, 0.0);
    for (const auto& [pos, l] : seeds) prob(pos.first, pos.second) = l == label ? 1.0 : 0.0;
    for (std::size_t i = 0; i < m; ++i) prob(unknown[i].first, unknown[i].second) = x[i];
    return prob;
}

TEST(RandomWalker, MatchesDenseDirichletSolve) {
    std::mt19937_64 rng(72);
    for (int trial = 0; trial < 10; ++trial) {
        const int w = 3 + trial % 5;
        const int h = 4 + trial % 3;
        const Image img = oracle::randomImage(w, h, rng);
        MarkerSet markers;
        std::map<std::pair<int, int>, int> seeds;
        const int labels = 2 + trial % 2;
        for (int l = 1; l <= labels; ++l) {
            const int x = (l * 3 + trial) % w;
            const int y = (l * 5 + trial) % h;
            if (seeds.count({x, y})) continue;
            seeds[{x, y}] = l;
            markers.markers.push_back({x, y, l});
        }
        std::set<int> used;
        for (const auto& [pos, l] : seeds) used.insert(l);
        if (used.size() < 2) continue;
        const double beta = 5.0;
        const RandomWalkerResult r = randomWalker(img, markers, beta);
        ASSERT_EQ(r.labelIds, std::vector<int>(used.begin(), used.end()));
        for (std::size_t k = 0; k < r.labelIds.size(); ++k) {
            const Image ref = denseRandomWalker(img, seeds, r.labelIds[k], beta);
            EXPECT_LT(oracle::maxAbsDiff(r.probabilities[k], ref), 1e-6) << "trial " << trial;
        }
    }
}

TEST(RandomWalker, ProbabilitiesPartitionUnity) {
    const Image disk = synthDisk(32, 32, 15.5, 15.5, 8.0);
    const Image noisy = addNoise(disk, {NoiseKind::Gaussian, 0.2, 0.0}, 4);
    const RandomWalkerResult r = randomWalker(noisy, markersFromHistogram(noisy));
    for (std::size_t i = 0; i < noisy.size(); ++i) {
        double s = 0.0;
        for (const Image& p : r.probabilities) s += p.values()[i];
        EXPECT_NEAR(s, 1.0, 1e-6);
    }
}

TEST(RandomWalker, SegmentsCleanDisk) {
    const Image disk = synthDisk(40, 40, 19.5, 19.5, 10.0);
    MarkerSet m;
    m.markers.push_back({0, 0, 1});
    m.markers.push_back({20, 20, 2});
    const RandomWalkerResult r = randomWalker(disk, m);
    std::size_t same = 0;
    for (std::size_t i = 0; i < disk.size(); ++i) same += (r.labels.labels[i] == 2) == (disk.values()[i] > 0.5);
    EXPECT_GE(static_cast<double>(same) / disk.size(), 0.99);
}

TEST(RandomWalker, ContractViolations) {
    const Image img(6, 6, 0.0);
    EXPECT_THROW(randomWalker(img, MarkerSet{{{0, 0, 1}}}), ParameterError);
    EXPECT_THROW(randomWalker(img, MarkerSet{{{0, 0, 1}, {9, 0, 2}}}), ParameterError);
    EXPECT_THROW(randomWalker(img, MarkerSet{{{0, 0, 1}, {0, 0, 2}}}), ParameterError);
    EXPECT_THROW(randomWalker(img, MarkerSet{{{0, 0, 1}, {1, 0, 2}}}, 0.0), ParameterError);
}

TEST(RandomWalker, DisconnectedRegionIsSingular) {
    // A bright wall with an enormous beta cuts the lattice: weights underflow to zero.
    Image img(7, 5, 0.0);
    for (int y = 0; y < 5; ++y) img(3, y) = 1.0;
    MarkerSet m;
    m.markers.push_back({0, 0, 1});
    m.markers.push_back({1, 1, 2});
    EXPECT_THROW(randomWalker(img, m, 1e6), SingularError);
}

TEST(RandomWalker, IsolatedBrightPairStillSumsToOne) {
    // Two adjacent outliers couple to the rest only through e^-90 edges.
    Image img(9, 9, 0.0);
    img(4, 4) = 1.0;
    img(5, 4) = 1.0;
    MarkerSet m;
    for (int i = 0; i < 9; ++i) m.markers.push_back({i, 0, 1});
    for (int i = 0; i < 9; ++i) m.markers.push_back({i, 8, 2});
    const RandomWalkerResult r = randomWalker(img, m);
    for (std::size_t i = 0; i < img.size(); ++i) {
        EXPECT_NEAR(r.probabilities[0].values()[i] + r.probabilities[1].values()[i], 1.0, 1e-6);
    }
    // By symmetry the pair sits halfway between the two marker rows.
    EXPECT_NEAR(r.probabilities[0](4, 4), 0.5, 1e-6);
}

TEST(Markers, QuantilesAndDegenerateInput) {
    Image img(10, 1);
    for (int x = 0; x < 10; ++x) img(x, 0) = x;
    EXPECT_DOUBLE_EQ(quantileMidpoint(img, 0.5), 4.5);
    EXPECT_DOUBLE_EQ(quantileMidpoint(img, 0.0), 0.0);
    const MarkerSet m = markersFromHistogram(img, 0.2, 0.8);
    // lo = midpoint(1, 2) = 1.5, hi = midpoint(7, 8) = 7.5
    int ones = 0;
    int twos = 0;
    for (const auto& mk : m.markers) (mk.label == 1 ? ones : twos)++;
    EXPECT_EQ(ones, 2);
    EXPECT_EQ(twos, 2);
    EXPECT_THROW(markersFromHistogram(Image(5, 5, 0.2)), DegenerateError);
    EXPECT_THROW(markersFromHistogram(img, 0.6, 0.4), ParameterError);
}

// =============================================================================
// Distance transform and watershed
// =============================================================================

TEST(DistanceTransform, MatchesExhaustiveScan) {
    std::mt19937_64 rng(73);
    std::bernoulli_distribution fg(0.7);
    for (int trial = 0; trial < 50; ++trial) {
        LabelMap mask(1 + trial % 16, 1 + (trial * 7) % 16, 0);
        for (int& v : mask.labels) v = fg(rng) ? 1 : 0;
        const Image got = distanceTransform(mask);
        const Image ref = oracle::distance(mask);
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (std::isinf(ref.values()[i])) {
                EXPECT_EQ(got.values()[i], kNoBackground);
            } else {
                EXPECT_NEAR(got.values()[i], ref.values()[i], 1e-12);
            }
        }
    }
}

// Priority flood by linear scans: repeatedly claim the queued pixel with the
// smallest (relief, insertion order).
LabelMap floodOracle(const Image& relief, const MarkerSet& markers, bool eight) {
    const int w = relief.width();
    const int h = relief.height();
    struct Item {
        double v;
        long seq;
        int p;
        int label;
    };
    std::vector<Item> pending;
    long seq = 0;
    for (const auto& m : markers.markers) pending.push_back({relief(m.x, m.y), seq++, m.y * w + m.x, m.label});
    LabelMap out(w, h, 0);
    while (!pending.empty()) {
        auto it = std::min_element(pending.begin(), pending.end(), [](const Item& a, const Item& b) {
            return a.v != b.v ? a.v < b.v : a.seq < b.seq;
        });
        const Item top = *it;
        pending.erase(it);
        if (out.labels[top.p] != 0) continue;
        out.labels[top.p] = top.label;
        const int x = top.p % w;
        const int y = top.p / w;
        const int dx[8] = {1, -1, 0, 0, 1, -1, 1, -1};
        const int dy[8] = {0, 0, 1, -1, 1, -1, -1, 1};
        for (int k = 0; k < (eight ? 8 : 4); ++k) {
            const int nx = x + dx[k];
            const int ny = y + dy[k];
            if (nx < 0 || ny < 0 || nx >= w || ny >= h || out(nx, ny) != 0) continue;
            pending.push_back({relief(nx, ny), seq++, ny * w + nx, top.label});
        }
    }
    return out;
}

TEST(Watershed, MatchesLinearScanFlood) {
    std::mt19937_64 rng(74);
    for (int trial = 0; trial < 40; ++trial) {
        const Image relief = oracle::randomLevels(2 + trial % 12, 2 + (trial * 5) % 12, 5, rng);
        MarkerSet markers;
        std::uniform_int_distribution<int> ux(0, relief.width() - 1);
        std::uniform_int_distribution<int> uy(0, relief.height() - 1);
        for (int l = 1; l <= 3; ++l) markers.markers.push_back({ux(rng), uy(rng), l});
        for (bool eight : {true, false}) {
            const LabelMap got = watershed(relief, markers, eight ? Connectivity::Eight : Connectivity::Four);
            EXPECT_EQ(got.labels, floodOracle(relief, markers, eight).labels) << "trial " << trial;
        }
    }
}

TEST(Watershed, TwoBasinsSplitAtRidge) {
    Image relief(9, 1);
    const double v[9] = {0, 1, 2, 3, 4, 3, 2, 1, 0};
    for (int x = 0; x < 9; ++x) relief(x, 0) = v[x];
    const LabelMap l = watershed(relief, MarkerSet{{{0, 0, 1}, {8, 0, 2}}});
    for (int x = 0; x < 4; ++x) EXPECT_EQ(l(x, 0), 1);
    for (int x = 5; x < 9; ++x) EXPECT_EQ(l(x, 0), 2);
}

TEST(Watershed, DomainRestrictsFlooding) {
    const Image relief(6, 6, 0.0);
    LabelMap domain(6, 6, 0);
    for (int y = 0; y < 3; ++y) {
        for (int x = 0; x < 6; ++x) domain(x, y) = 1;
    }
    const LabelMap l = watershed(relief, MarkerSet{{{0, 0, 4}}}, Connectivity::Eight, &domain);
    for (int y = 0; y < 6; ++y) {
        for (int x = 0; x < 6; ++x) EXPECT_EQ(l(x, y), y < 3 ? 4 : 0);
    }
    EXPECT_THROW(watershed(relief, MarkerSet{}), ParameterError);
}

TEST(SplitOverlapping, TwoDisksGetTwoLabelsAlongBisector) {
    Image img(60, 40, 0.0);
    const Image a = synthDisk(60, 40, 22.0, 20.0, 10.0);
    const Image b = synthDisk(60, 40, 36.0, 20.0, 10.0);
    LabelMap mask(60, 40, 0);
    for (std::size_t i = 0; i < mask.labels.size(); ++i) {
        mask.labels[i] = (a.values()[i] > 0.5 || b.values()[i] > 0.5) ? 1 : 0;
    }
    const SplitResult r = splitOverlapping(mask, 5.0);
    std::set<int> labels;
    for (int v : r.labels.labels) {
        if (v != 0) labels.insert(v);
    }
    EXPECT_EQ(labels.size(), 2u);
    // Every pixel whose horizontal neighbour carries the other label sits within 1 px of x = 29.
    for (int y = 0; y < 40; ++y) {
        for (int x = 0; x + 1 < 60; ++x) {
            const int l0 = r.labels(x, y);
            const int l1 = r.labels(x + 1, y);
            if (l0 != 0 && l1 != 0 && l0 != l1) EXPECT_LE(std::abs(x + 0.5 - 29.0), 1.0);
        }
    }
    for (std::size_t i = 0; i < mask.labels.size(); ++i) EXPECT_EQ(mask.labels[i] != 0, r.labels.labels[i] != 0);
}

TEST(SplitOverlapping, SingleDiskAndEmptyMask) {
    const Image d = synthDisk(30, 30, 14.5, 14.5, 8.0);
    const SplitResult r = splitOverlapping(threshold(d, 0.5));
    EXPECT_EQ(r.labels.maxLabel(), 1);
    EXPECT_THROW(splitOverlapping(LabelMap(5, 5, 0)), DegenerateError);
}

TEST(SplitOverlapping, SeparateComponentsEachLabelled) {
    LabelMap mask(20, 5, 0);
    for (int y = 1; y < 4; ++y) {
        for (int x = 1; x < 4; ++x) mask(x, y) = 1;
        for (int x = 15; x < 18; ++x) mask(x, y) = 1;
    }
    const SplitResult r = splitOverlapping(mask, 50.0);
    EXPECT_NE(r.labels(2, 2), 0);
    EXPECT_NE(r.labels(16, 2), 0);
    EXPECT_NE(r.labels(2, 2), r.labels(16, 2));
}

}  // namespace
}  // namespace astroimg
