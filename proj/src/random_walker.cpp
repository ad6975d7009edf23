#include <astroimg/segment.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace astroimg {

namespace {

struct Lattice {
    int width;
    int height;
    std::vector<double> right;  // weight of edge (x,y)-(x+1,y)
    std::vector<double> down;   // weight of edge (x,y)-(x,y+1)

    template <typename F>
    void forEachNeighbor(int p, F&& f) const {
        const int x = p % width;
        const int y = p / width;
        if (x + 1 < width) f(p + 1, right[p]);
        if (x > 0) f(p - 1, right[p - 1]);
        if (y + 1 < height) f(p + width, down[p]);
        if (y > 0) f(p - width, down[p - width]);
    }
};

Lattice buildLattice(const Image& unit, double beta, double floor) {
    const int w = unit.width();
    const int h = unit.height();
    Lattice g{w, h, std::vector<double>(unit.size(), 0.0), std::vector<double>(unit.size(), 0.0)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t p = unit.index(x, y);
            if (x + 1 < w) {
                const double d = unit(x, y) - unit(x + 1, y);
                g.right[p] = std::exp(-beta * d * d) + floor;
            }
            if (y + 1 < h) {
                const double d = unit(x, y) - unit(x, y + 1);
                g.down[p] = std::exp(-beta * d * d) + floor;
            }
        }
    }
    return g;
}

}  // namespace

RandomWalkerResult randomWalker(const Image& img, const MarkerSet& markers, double beta) {
    if (!(beta > 0.0)) throw ParameterError("beta must be positive");
    const int w = img.width();
    const int h = img.height();
    const int n = static_cast<int>(img.size());

    std::vector<int> seed(static_cast<std::size_t>(n), 0);
    std::set<int> distinct;
    for (const auto& m : markers.markers) {
        if (m.x < 0 || m.y < 0 || m.x >= w || m.y >= h) throw ParameterError("marker outside the image");
        if (m.label < 1) throw ParameterError("marker labels must be >= 1");
        int& slot = seed[img.index(m.x, m.y)];
        if (slot != 0 && slot != m.label) throw ParameterError("conflicting labels on one pixel");
        slot = m.label;
        distinct.insert(m.label);
    }
    if (distinct.size() < 2) throw ParameterError("random walker needs at least two labels");

    const Image unit = rescaleUnit(img, 0.0);
    const Lattice g = buildLattice(unit, beta, kWalkerWeightFloor);

    // Every unmarked pixel must reach a marker through edges whose unfloored weight is positive.
    {
        const Lattice raw = buildLattice(unit, beta, 0.0);
        std::vector<std::uint8_t> reached(static_cast<std::size_t>(n), 0);
        std::deque<int> queue;
        for (int p = 0; p < n; ++p) {
            if (seed[p] != 0) {
                reached[p] = 1;
                queue.push_back(p);
            }
        }
        while (!queue.empty()) {
            const int p = queue.front();
            queue.pop_front();
            raw.forEachNeighbor(p, [&](int q, double wt) {
                if (wt > 0.0 && !reached[q]) {
                    reached[q] = 1;
                    queue.push_back(q);
                }
            });
        }
        if (std::find(reached.begin(), reached.end(), 0) != reached.end()) {
            throw SingularError("an unmarked region is not connected to any marker");
        }
    }

    std::vector<int> unknownIndex(static_cast<std::size_t>(n), -1);
    std::vector<int> unknowns;
    for (int p = 0; p < n; ++p) {
        if (seed[p] == 0) {
            unknownIndex[p] = static_cast<int>(unknowns.size());
            unknowns.push_back(p);
        }
    }
    const std::size_t m = unknowns.size();

    std::vector<double> diag(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        g.forEachNeighbor(unknowns[i], [&](int, double wt) { diag[i] += wt; });
    }

    // y = L_U x
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (std::size_t i = 0; i < m; ++i) {
            double acc = diag[i] * x[i];
            g.forEachNeighbor(unknowns[i], [&](int q, double wt) {
                const int j = unknownIndex[q];
                if (j >= 0) acc -= wt * x[static_cast<std::size_t>(j)];
            });
            y[i] = acc;
        }
    };

    RandomWalkerResult result;
    result.labelIds.assign(distinct.begin(), distinct.end());
    // Scaled by the floor so weakly coupled clusters are solved to 1e-8 in probability, not just residual.
    const double tolerance = 1e-8 * kWalkerWeightFloor;
    const int maxIter = std::max(1, 10 * n);

    for (int label : result.labelIds) {
        Image prob(w, h, 0.0);
        for (int p = 0; p < n; ++p) {
            if (seed[p] == label) prob.data()[p] = 1.0;
        }

        std::vector<double> b(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            g.forEachNeighbor(unknowns[i], [&](int q, double wt) {
                if (seed[q] == label) b[i] += wt;
            });
        }

        // Jacobi-preconditioned conjugate gradient from x = 0.
        std::vector<double> x(m, 0.0);
        std::vector<double> r = b;
        std::vector<double> z(m);
        std::vector<double> dir(m);
        std::vector<double> ad(m);
        auto scaledResidual = [&] {
            double worst = 0.0;
            for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(r[i]) / diag[i]);
            return worst;
        };
        for (std::size_t i = 0; i < m; ++i) z[i] = r[i] / diag[i];
        dir = z;
        double rz = 0.0;
        for (std::size_t i = 0; i < m; ++i) rz += r[i] * z[i];
        int iterations = 0;
        while (m > 0 && scaledResidual() > tolerance && iterations < maxIter) {
            apply(dir, ad);
            double denom = 0.0;
            for (std::size_t i = 0; i < m; ++i) denom += dir[i] * ad[i];
            if (!(denom > 0.0)) break;
            const double alpha = rz / denom;
            for (std::size_t i = 0; i < m; ++i) {
                x[i] += alpha * dir[i];
                r[i] -= alpha * ad[i];
            }
            double rzNext = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                z[i] = r[i] / diag[i];
                rzNext += r[i] * z[i];
            }
            const double betaCg = rzNext / rz;
            rz = rzNext;
            for (std::size_t i = 0; i < m; ++i) dir[i] = z[i] + betaCg * dir[i];
            ++iterations;
        }
        for (std::size_t i = 0; i < m; ++i) prob.data()[unknowns[i]] = x[i];
        result.probabilities.push_back(std::move(prob));
        result.cgIterations.push_back(iterations);
    }

    result.labels = LabelMap(w, h, 0);
    for (int p = 0; p < n; ++p) {
        if (seed[p] != 0) {
            result.labels.labels[p] = seed[p];
            continue;
        }
        std::size_t best = 0;
        for (std::size_t l = 1; l < result.labelIds.size(); ++l) {
            if (result.probabilities[l].values()[p] > result.probabilities[best].values()[p]) best = l;
        }
        result.labels.labels[p] = result.labelIds[best];
    }
    return result;
}

double quantileMidpoint(const Image& img, double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("quantile must lie in [0, 1]");
    std::vector<double> v(img.values());
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return 0.5 * (v[lo] + v[hi]);
}

MarkerSet markersFromHistogram(const Image& img, double lowQ, double highQ) {
    if (!(lowQ > 0.0 && lowQ < highQ && highQ < 1.0)) {
        throw ParameterError("quantiles must satisfy 0 < low < high < 1");
    }
    const double lo = quantileMidpoint(img, lowQ);
    const double hi = quantileMidpoint(img, highQ);
    if (!(lo < hi)) throw DegenerateError("histogram tails coincide; image has no contrast");
    MarkerSet set;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const double v = img(x, y);
            if (v <= lo) {
                set.markers.push_back({x, y, 1});
            } else if (v >= hi) {
                set.markers.push_back({x, y, 2});
            }
        }
    }
    return set;
}

}  // namespace astroimg
