#include <astroimg/filterbank.h>
#include <astroimg/convolve.h>
#include <astroimg/parallel.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace astroimg {

void GaborParams::validate() const {
    if (!(lambda > 0.0) || !(sigma > 0.0) || !(gamma > 0.0)) {
        throw ParameterError("gabor lambda, sigma and gamma must be positive");
    }
}

void DoGParams::validate() const {
    if (!(t > 0.0) || !(dt > 0.0)) throw ParameterError("DoG t and dt must be positive");
}

Kernel gaussianKernel(double sigma, int radius) {
    const auto taps = gaussianTaps(sigma, radius);
    Kernel k = Kernel::outer(taps, taps);
    // Product of two unit-sum vectors; renormalize away the last rounding.
    const double total = k.sum();
    std::vector<double> w(k.weights().begin(), k.weights().end());
    for (double& v : w) v /= total;
    return Kernel(k.width(), k.height(), std::move(w));
}

GaborPair gaborKernel(const GaborParams& p, int radius) {
    p.validate();
    if (radius < 0) throw ParameterError("gabor radius must be non-negative");
    const int side = 2 * radius + 1;
    std::vector<double> even(static_cast<std::size_t>(side) * side);
    std::vector<double> odd(even.size());
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);
    for (int j = 0; j < side; ++j) {
        const double y = j - radius;
        for (int i = 0; i < side; ++i) {
            const double x = i - radius;
            const double xr = x * c + y * s;
            const double yr = -x * s + y * c;
            const double envelope =
                std::exp(-(xr * xr + p.gamma * p.gamma * yr * yr) / (2.0 * p.sigma * p.sigma));
            const double phase = 2.0 * std::numbers::pi * xr / p.lambda + p.psi;
            even[static_cast<std::size_t>(j) * side + i] = envelope * std::cos(phase);
            odd[static_cast<std::size_t>(j) * side + i] = envelope * std::sin(phase);
        }
    }
    return {Kernel(side, side, std::move(even)), Kernel(side, side, std::move(odd))};
}

Kernel unitNorm(const Kernel& k) {
    double ss = 0.0;
    for (double v : k.weights()) ss += v * v;
    std::vector<double> w(k.weights().begin(), k.weights().end());
    if (ss > 0.0) {
        const double inv = 1.0 / std::sqrt(ss);
        for (double& v : w) v *= inv;
    }
    return Kernel(k.width(), k.height(), std::move(w));
}

Image dogResponse(const Image& img, const DoGParams& p) {
    p.validate();
    const Image inner = gaussianSmooth(img, std::sqrt(p.t));
    const Image outer = gaussianSmooth(img, std::sqrt(p.t + p.dt));
    return (p.t / p.dt) * (outer - inner);
}

Image lgnImage(const Image& img, const DoGParams& p) { return rescaleUnit(dogResponse(img, p), 0.5); }

PatchSet extractPatches(const Image& img, int patch, int stride) {
    if (patch < 1 || patch % 2 == 0) throw ParameterError("patch side must be odd and positive");
    if (stride < 1) throw ParameterError("stride must be >= 1");
    if (patch > std::min(img.width(), img.height())) throw DimensionError("patch larger than image");

    PatchSet set;
    set.side = patch;
    const std::size_t dim = set.dim();
    std::vector<double> buf(dim);
    for (int y0 = 0; y0 + patch <= img.height(); y0 += stride) {
        for (int x0 = 0; x0 + patch <= img.width(); x0 += stride) {
            double mean = 0.0;
            double scale = 0.0;
            for (int j = 0; j < patch; ++j) {
                for (int i = 0; i < patch; ++i) {
                    const double v = img(x0 + i, y0 + j);
                    buf[static_cast<std::size_t>(j) * patch + i] = v;
                    mean += v;
                    scale = std::max(scale, std::abs(v));
                }
            }
            mean /= static_cast<double>(dim);
            double ss = 0.0;
            for (double& v : buf) {
                v -= mean;
                ss += v * v;
            }
            const double norm = std::sqrt(ss);
            if (norm <= 1e-10 * std::max(1.0, scale) * std::sqrt(static_cast<double>(dim))) continue;
            for (double v : buf) set.values.push_back(v / norm);
        }
    }
    return set;
}

namespace {

double squaredDistance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

std::vector<double> sortedPatches(const PatchSet& patches) {
    std::vector<std::size_t> order(patches.count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto pa = patches.patch(a);
        auto pb = patches.patch(b);
        return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
    });
    std::vector<double> out;
    out.reserve(patches.values.size());
    for (std::size_t i : order) {
        auto p = patches.patch(i);
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

}  // namespace

FilterBank kmeansFilterBank(const PatchSet& patches, int k, std::uint64_t seed, int maxIter) {
    if (patches.count() == 0) throw ContractError("k-means needs a non-empty patch set");
    if (k < 1) throw ParameterError("k must be >= 1");
    if (static_cast<std::size_t>(k) > patches.count()) {
        throw ParameterError("k exceeds the number of patches");
    }
    if (maxIter < 1) throw ParameterError("max_iter must be >= 1");

    const std::size_t n = patches.count();
    const std::size_t dim = patches.dim();
    const std::vector<double> data = sortedPatches(patches);
    auto point = [&](std::size_t i) { return std::span<const double>(data).subspan(i * dim, dim); };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // k-means++ seeding.
    std::vector<double> centers;
    centers.reserve(static_cast<std::size_t>(k) * dim);
    auto center = [&](std::size_t c) { return std::span<const double>(centers).subspan(c * dim, dim); };
    {
        const auto first = std::min(n - 1, static_cast<std::size_t>(unit(rng) * static_cast<double>(n)));
        auto p = point(first);
        centers.insert(centers.end(), p.begin(), p.end());
        std::vector<double> d2(n);
        for (std::size_t i = 0; i < n; ++i) d2[i] = squaredDistance(point(i), center(0));
        for (int c = 1; c < k; ++c) {
            const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
            std::size_t pick = n - 1;
            if (total > 0.0) {
                const double target = unit(rng) * total;
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (d2[i] <= 0.0) continue;
                    acc += d2[i];
                    pick = i;
                    if (acc > target) break;
                }
            } else {
                pick = std::min(n - 1, static_cast<std::size_t>(unit(rng) * static_cast<double>(n)));
            }
            auto q = point(pick);
            centers.insert(centers.end(), q.begin(), q.end());
            for (std::size_t i = 0; i < n; ++i) {
                d2[i] = std::min(d2[i], squaredDistance(point(i), center(static_cast<std::size_t>(c))));
            }
        }
    }

    FilterBank bank;
    bank.k = k;
    bank.patch = patches.side;

    std::vector<int> assign(n, -1);
    std::vector<int> next(n, 0);
    std::vector<double> sums(static_cast<std::size_t>(k) * dim);
    std::vector<std::size_t> counts(static_cast<std::size_t>(k));

    for (int iter = 0; iter < maxIter; ++iter) {
        parallelFor(static_cast<int>(n), [&](int b, int e) {
            for (int i = b; i < e; ++i) {
                double best = std::numeric_limits<double>::infinity();
                int arg = 0;
                for (int c = 0; c < k; ++c) {
                    const double d = squaredDistance(point(static_cast<std::size_t>(i)), center(static_cast<std::size_t>(c)));
                    if (d < best) {
                        best = d;
                        arg = c;
                    }
                }
                next[static_cast<std::size_t>(i)] = arg;
            }
        });
        const bool stable = next == assign;
        assign = next;
        if (stable && iter > 0) break;

        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(assign[i]);
            auto p = point(i);
            for (std::size_t d = 0; d < dim; ++d) sums[c * dim + d] += p[d];
            ++counts[c];
        }
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (counts[c] == 0) continue;  // empty cluster keeps its previous centroid
            for (std::size_t d = 0; d < dim; ++d) {
                centers[c * dim + d] = sums[c * dim + d] / static_cast<double>(counts[c]);
            }
        }
        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            objective += squaredDistance(point(i), center(static_cast<std::size_t>(assign[i])));
        }
        bank.objectiveTrace.push_back(objective);
        bank.iterations = iter + 1;
    }

    for (int c = 0; c < k; ++c) {
        std::vector<double> w(center(static_cast<std::size_t>(c)).begin(), center(static_cast<std::size_t>(c)).end());
        const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(dim);
        double ss = 0.0;
        for (double& v : w) {
            v -= mean;
            ss += v * v;
        }
        const double norm = std::sqrt(ss);
        if (norm > 1e-12) {
            for (double& v : w) v /= norm;
        } else {
            std::fill(w.begin(), w.end(), 0.0);
        }
        bank.centroids.emplace_back(patches.side, patches.side, std::move(w));
    }
    return bank;
}

Image montage(const FilterBank& bank, int cols) {
    const int count = static_cast<int>(bank.centroids.size());
    cols = std::max(1, std::min(cols, count));
    const int rows = (count + cols - 1) / cols;
    const int cell = bank.patch + 1;
    Image out(cols * cell + 1, rows * cell + 1, 0.0);
    for (int f = 0; f < count; ++f) {
        const Kernel& kern = bank.centroids[static_cast<std::size_t>(f)];
        const Image tile = rescaleUnit(Image(kern.width(), kern.height(),
                                             std::vector<double>(kern.weights().begin(), kern.weights().end())),
                                       0.5);
        const int ox = (f % cols) * cell + 1;
        const int oy = (f / cols) * cell + 1;
        for (int j = 0; j < bank.patch; ++j) {
            for (int i = 0; i < bank.patch; ++i) out(ox + i, oy + j) = tile(i, j);
        }
    }
    return out;
}

}  // namespace astroimg
