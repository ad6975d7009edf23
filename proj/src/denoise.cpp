#include <astroimg/denoise.h>
#include <astroimg/parallel.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace astroimg {

void NlmParams::validate() const {
    if (patchRadius < 0) throw ParameterError("patch radius must be >= 0");
    if (searchRadius < patchRadius) throw ParameterError("search radius must be >= patch radius");
    if (!(h > 0.0)) throw ParameterError("NLM strength h must be positive");
    if (weighting == PatchWeighting::GaussianSpatial && !(sigmaPatch > 0.0)) {
        throw ParameterError("patch sigma must be positive");
    }
    if (!(sigma >= 0.0)) throw ParameterError("noise sigma must be non-negative");
}

double defaultStrengthFactor(PatchWeighting weighting) {
    return weighting == PatchWeighting::Uniform ? 1.15 : 0.8;
}

double estimateNoiseSigma(const Image& img) {
    const int w = img.width();
    const int h = img.height();
    if (w < 3 || h < 3) throw DimensionError("noise estimation needs at least 3x3 pixels");
    double total = 0.0;
    for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
            const double corners = img(x - 1, y - 1) + img(x + 1, y - 1) + img(x - 1, y + 1) + img(x + 1, y + 1);
            const double edges = img(x, y - 1) + img(x - 1, y) + img(x + 1, y) + img(x, y + 1);
            total += std::abs(corners - 2.0 * edges + 4.0 * img(x, y));
        }
    }
    const double interior = static_cast<double>(w - 2) * static_cast<double>(h - 2);
    return std::sqrt(std::numbers::pi / 2.0) * total / (6.0 * interior);
}

Image nlmDenoise(const Image& img, const NlmParams& p) {
    p.validate();
    const int w = img.width();
    const int h = img.height();
    const int pr = p.patchRadius;
    const int sr = p.searchRadius;
    const int pad = pr + sr;
    const int pw = w + 2 * pad;
    const int ph = h + 2 * pad;

    std::vector<double> padded(static_cast<std::size_t>(pw) * ph);
    for (int y = 0; y < ph; ++y) {
        const int sy = boundaryIndex(y - pad, h, BoundaryMode::Reflect);
        for (int x = 0; x < pw; ++x) {
            const int sx = boundaryIndex(x - pad, w, BoundaryMode::Reflect);
            padded[static_cast<std::size_t>(y) * pw + x] = img(sx, sy);
        }
    }
    auto at = [&](int x, int y) { return padded[static_cast<std::size_t>(y) * pw + x]; };

    const int side = 2 * pr + 1;
    std::vector<double> patchWeights(static_cast<std::size_t>(side) * side, 1.0);
    if (p.weighting == PatchWeighting::GaussianSpatial) {
        for (int j = -pr; j <= pr; ++j) {
            for (int i = -pr; i <= pr; ++i) {
                patchWeights[static_cast<std::size_t>(j + pr) * side + (i + pr)] =
                    std::exp(-(i * i + j * j) / (2.0 * p.sigmaPatch * p.sigmaPatch));
            }
        }
    }
    double weightTotal = 0.0;
    for (double v : patchWeights) weightTotal += v;
    for (double& v : patchWeights) v /= weightTotal;

    const double bias = 2.0 * p.sigma * p.sigma;
    const double invH2 = 1.0 / (p.h * p.h);
    const double lo = img.min();
    const double hi = img.max();

    Image out(w, h);
    parallelFor(h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < w; ++x) {
                const int cx = x + pad;
                const int cy = y + pad;
                double acc = 0.0;
                double norm = 0.0;
                for (int sy = -sr; sy <= sr; ++sy) {
                    for (int sx = -sr; sx <= sr; ++sx) {
                        const int qx = cx + sx;
                        const int qy = cy + sy;
                        double d2 = 0.0;
                        for (int j = -pr; j <= pr; ++j) {
                            const double* wrow = &patchWeights[static_cast<std::size_t>(j + pr) * side];
                            for (int i = -pr; i <= pr; ++i) {
                                const double diff = at(cx + i, cy + j) - at(qx + i, qy + j);
                                d2 += wrow[i + pr] * diff * diff;
                            }
                        }
                        const double weight = std::exp(-std::max(d2 - bias, 0.0) * invH2);
                        acc += weight * at(qx, qy);
                        norm += weight;
                    }
                }
                out(x, y) = std::clamp(acc / norm, lo, hi);
            }
        }
    });
    return out;
}

double psnr(const Image& reference, const Image& test, double peak) {
    if (!reference.sameShape(test)) throw DimensionError("PSNR inputs differ in shape");
    double mse = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double d = reference.values()[i] - test.values()[i];
        mse += d * d;
    }
    mse /= static_cast<double>(reference.size());
    return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace astroimg
