#include <astroimg/differential.h>
#include <astroimg/convolve.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace astroimg {

GradientField gradient(const Image& img) {
    const int w = img.width();
    const int h = img.height();
    if (w < 2 || h < 2) throw DimensionError("gradient needs at least 2x2 pixels");
    Image gx(w, h);
    Image gy(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (x == 0) {
                gx(x, y) = img(1, y) - img(0, y);
            } else if (x == w - 1) {
                gx(x, y) = img(x, y) - img(x - 1, y);
            } else {
                gx(x, y) = (img(x + 1, y) - img(x - 1, y)) / 2.0;
            }
            if (y == 0) {
                gy(x, y) = img(x, 1) - img(x, 0);
            } else if (y == h - 1) {
                gy(x, y) = img(x, y) - img(x, y - 1);
            } else {
                gy(x, y) = (img(x, y + 1) - img(x, y - 1)) / 2.0;
            }
        }
    }
    return {std::move(gx), std::move(gy)};
}

Image gradientMagnitude(const GradientField& g) {
    if (!g.gx.sameShape(g.gy)) throw DimensionError("gradient components differ in shape");
    Image out(g.gx.width(), g.gx.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.data()[i] = std::hypot(g.gx.values()[i], g.gy.values()[i]);
    }
    return out;
}

Image gradientOrientation(const GradientField& g) {
    if (!g.gx.sameShape(g.gy)) throw DimensionError("gradient components differ in shape");
    Image out(g.gx.width(), g.gx.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double gx = g.gx.values()[i];
        const double gy = g.gy.values()[i];
        double theta = (gx == 0.0 && gy == 0.0) ? 0.0 : std::atan2(gy, gx);
        if (theta == -std::numbers::pi) theta = std::numbers::pi;
        out.data()[i] = theta;
    }
    return out;
}

HessianField hessian(const Image& img, double sigma) {
    if (!(sigma >= 0.5)) throw ParameterError("hessian sigma must be >= 0.5");
    const Image s = gaussianSmooth(img, sigma, BoundaryMode::Reflect);
    const int w = img.width();
    const int h = img.height();
    constexpr auto mode = BoundaryMode::Reflect;
    Image ixx(w, h);
    Image ixy(w, h);
    Image iyy(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double c = s(x, y);
            ixx(x, y) = sample(s, x + 1, y, mode) - 2.0 * c + sample(s, x - 1, y, mode);
            iyy(x, y) = sample(s, x, y + 1, mode) - 2.0 * c + sample(s, x, y - 1, mode);
            ixy(x, y) = (sample(s, x + 1, y + 1, mode) - sample(s, x + 1, y - 1, mode) -
                         sample(s, x - 1, y + 1, mode) + sample(s, x - 1, y - 1, mode)) /
                        4.0;
        }
    }
    return {std::move(ixx), std::move(ixy), std::move(iyy)};
}

Image shapeIndex(const HessianField& hf) {
    const std::size_t n = hf.ixx.size();
    std::vector<double> l1(n);
    std::vector<double> l2(n);
    double largest = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = hf.ixx.values()[i];
        const double b = hf.ixy.values()[i];
        const double d = hf.iyy.values()[i];
        const double mean = 0.5 * (a + d);
        const double radius = std::hypot(0.5 * (a - d), b);
        l1[i] = mean + radius;
        l2[i] = mean - radius;
        largest = std::max({largest, std::abs(l1[i]), std::abs(l2[i])});
    }

    const double flat = 1e-10 * largest;
    Image out(hf.ixx.width(), hf.ixx.height());
    for (std::size_t i = 0; i < n; ++i) {
        const double hi = l1[i];
        const double lo = l2[i];
        double s;
        if (largest == 0.0 || (std::abs(hi) <= flat && std::abs(lo) <= flat)) {
            s = kShapeIndexUndefined;
        } else if (hi == lo) {
            s = hi < 0.0 ? 1.0 : -1.0;
        } else {
            s = (2.0 / std::numbers::pi) * std::atan((lo + hi) / (lo - hi));
        }
        out.data()[i] = s;
    }
    return out;
}

Image shapeIndex(const Image& img, double sigma) { return shapeIndex(hessian(img, sigma)); }

Mask capMask(const Image& si, double target, double tol) {
    if (!(tol > 0.0)) throw ParameterError("cap tolerance must be positive");
    Mask out(si.width(), si.height());
    for (std::size_t i = 0; i < si.size(); ++i) {
        const double s = si.values()[i];
        out.bits[i] = shapeIndexDefined(s) && std::abs(s - target) <= tol;
    }
    return out;
}

}  // namespace astroimg
