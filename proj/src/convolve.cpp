#include <astroimg/convolve.h>
#include <astroimg/parallel.h>

#include <algorithm>
#include <cmath>

namespace astroimg {

Image convolve2d(const Image& img, const Kernel& k, BoundaryMode mode) {
    if (k.width() > img.width() || k.height() > img.height()) {
        throw DimensionError("kernel larger than image");
    }
    const int w = img.width();
    const int h = img.height();
    const int rx = k.radiusX();
    const int ry = k.radiusY();
    Image out(w, h);

    parallelFor(h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int dy = -ry; dy <= ry; ++dy) {
                    const int sy = boundaryIndex(y - dy, h, mode);
                    if (sy < 0) continue;
                    for (int dx = -rx; dx <= rx; ++dx) {
                        const int sx = boundaryIndex(x - dx, w, mode);
                        if (sx < 0) continue;
                        acc += k.at(dx, dy) * img(sx, sy);
                    }
                }
                out(x, y) = acc;
            }
        }
    });
    return out;
}

Image separableConvolve(const Image& img, std::span<const double> row,
                        std::span<const double> col, BoundaryMode mode) {
    if (row.size() % 2 == 0 || col.size() % 2 == 0) {
        throw ContractError("separable weights must have odd length");
    }
    const int w = img.width();
    const int h = img.height();
    const int rx = static_cast<int>(row.size() / 2);
    const int ry = static_cast<int>(col.size() / 2);
    if (2 * rx + 1 > w || 2 * ry + 1 > h) throw DimensionError("kernel larger than image");

    // Horizontal pass, then vertical. Each output pixel accumulates in a fixed order.
    Image tmp(w, h);
    parallelFor(h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int dx = -rx; dx <= rx; ++dx) {
                    const int sx = boundaryIndex(x - dx, w, mode);
                    if (sx < 0) continue;
                    acc += row[static_cast<std::size_t>(dx + rx)] * img(sx, y);
                }
                tmp(x, y) = acc;
            }
        }
    });

    Image out(w, h);
    parallelFor(h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int dy = -ry; dy <= ry; ++dy) {
                    const int sy = boundaryIndex(y - dy, h, mode);
                    if (sy < 0) continue;
                    acc += col[static_cast<std::size_t>(dy + ry)] * tmp(x, sy);
                }
                out(x, y) = acc;
            }
        }
    });
    return out;
}

std::vector<double> gaussianTaps(double sigma, int radius) {
    if (!(sigma > 0.0)) throw ParameterError("gaussian sigma must be positive");
    if (radius < 0) throw ParameterError("gaussian radius must be non-negative");
    std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        taps[static_cast<std::size_t>(i + radius)] = v;
        total += v;
    }
    for (double& v : taps) v /= total;
    return taps;
}

Image gaussianSmooth(const Image& img, double sigma, BoundaryMode mode) {
    const int limit = (std::min(img.width(), img.height()) - 1) / 2;
    const int radius = std::min(static_cast<int>(std::ceil(4.0 * sigma)), limit);
    const auto taps = gaussianTaps(sigma, radius);
    return separableConvolve(img, taps, taps, mode);
}

}  // namespace astroimg
