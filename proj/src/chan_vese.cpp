#include <astroimg/segment.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace astroimg {

void ChanVeseParams::validate() const {
    if (!(mu >= 0.0)) throw ParameterError("mu must be >= 0");
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) throw ParameterError("lambda1, lambda2 must be > 0");
    if (!(dt > 0.0)) throw ParameterError("dt must be > 0");
    if (!(tol >= 0.0)) throw ParameterError("tol must be >= 0");
    if (maxIter < 1) throw ParameterError("max_iter must be >= 1");
    if (!(epsilon > 0.0)) throw ParameterError("epsilon must be > 0");
}

Image checkerboardLevelSet(int width, int height) {
    Image phi(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            phi(x, y) = std::sin(std::numbers::pi / 5.0 * x) * std::sin(std::numbers::pi / 5.0 * y);
        }
    }
    return phi;
}

namespace {

double heaviside(double phi, double eps) { return 0.5 * (1.0 + (2.0 / std::numbers::pi) * std::atan(phi / eps)); }

double dirac(double phi, double eps) { return eps / (std::numbers::pi * (eps * eps + phi * phi)); }

// Edge-padded read.
double clampedAt(const Image& img, int x, int y) {
    x = std::clamp(x, 0, img.width() - 1);
    y = std::clamp(y, 0, img.height() - 1);
    return img(x, y);
}

std::pair<double, double> sharpMeans(const Image& img, const Image& phi) {
    double inSum = 0.0;
    double outSum = 0.0;
    std::size_t inCount = 0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        if (phi.values()[i] > 0.0) {
            inSum += img.values()[i];
            ++inCount;
        } else {
            outSum += img.values()[i];
        }
    }
    const std::size_t outCount = img.size() - inCount;
    const double overall = (inSum + outSum) / static_cast<double>(img.size());
    // An empty region takes the global mean so c1, c2 stay within [min, max].
    const double c1 = inCount > 0 ? inSum / static_cast<double>(inCount) : overall;
    const double c2 = outCount > 0 ? outSum / static_cast<double>(outCount) : overall;
    return {c1, c2};
}

}  // namespace

double chanVeseEnergy(const Image& img, const Image& phi, const ChanVeseParams& p) {
    if (!img.sameShape(phi)) throw DimensionError("level set shape differs from image");
    double hIn = 0.0;
    double hOut = 0.0;
    double sIn = 0.0;
    double sOut = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double hv = heaviside(phi.values()[i], p.epsilon);
        hIn += hv;
        hOut += 1.0 - hv;
        sIn += hv * img.values()[i];
        sOut += (1.0 - hv) * img.values()[i];
    }
    const double c1 = hIn > 0.0 ? sIn / hIn : 0.0;
    const double c2 = hOut > 0.0 ? sOut / hOut : 0.0;

    double length = 0.0;
    double fidelity = 0.0;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const double v = phi(x, y);
            const double gx = 0.5 * (clampedAt(phi, x + 1, y) - clampedAt(phi, x - 1, y));
            const double gy = 0.5 * (clampedAt(phi, x, y + 1) - clampedAt(phi, x, y - 1));
            length += dirac(v, p.epsilon) * std::sqrt(gx * gx + gy * gy);
            const double hv = heaviside(v, p.epsilon);
            const double f = img(x, y);
            fidelity += p.lambda1 * hv * (f - c1) * (f - c1) + p.lambda2 * (1.0 - hv) * (f - c2) * (f - c2);
        }
    }
    return p.mu * length + fidelity;
}

ChanVeseResult chanVese(const Image& img, const ChanVeseParams& p) {
    p.validate();
    if (!img.allFinite()) throw ContractError("Chan-Vese input contains non-finite pixels");
    const int w = img.width();
    const int h = img.height();
    constexpr double eta = 1e-16;

    ChanVeseResult result;
    Image phi = checkerboardLevelSet(w, h);
    Image next(w, h);

    for (int iter = 0; iter < p.maxIter; ++iter) {
        const auto [c1, c2] = sharpMeans(img, phi);
        double change = 0.0;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double c = phi(x, y);
                const double xp = clampedAt(phi, x + 1, y);
                const double xn = clampedAt(phi, x - 1, y);
                const double yp = clampedAt(phi, x, y + 1);
                const double yn = clampedAt(phi, x, y - 1);
                const double x0 = 0.5 * (xp - xn);
                const double y0 = 0.5 * (yp - yn);
                const double k1 = 1.0 / std::sqrt(eta + (xp - c) * (xp - c) + y0 * y0);
                const double k2 = 1.0 / std::sqrt(eta + (c - xn) * (c - xn) + y0 * y0);
                const double k3 = 1.0 / std::sqrt(eta + x0 * x0 + (yp - c) * (yp - c));
                const double k4 = 1.0 / std::sqrt(eta + x0 * x0 + (c - yn) * (c - yn));
                const double curvature = xp * k1 + xn * k2 + yp * k3 + yn * k4;
                const double f = img(x, y);
                const double force = -p.lambda1 * (f - c1) * (f - c1) + p.lambda2 * (f - c2) * (f - c2);
                const double step = p.dt * dirac(c, p.epsilon);
                const double updated = (c + step * (p.mu * curvature + force)) /
                                       (1.0 + p.mu * step * (k1 + k2 + k3 + k4));
                next(x, y) = updated;
                change += std::abs(updated - c);
            }
        }
        std::swap(phi, next);
        result.energyTrace.push_back(chanVeseEnergy(img, phi, p));
        result.iterationsRun = iter + 1;
        if (change / static_cast<double>(img.size()) < p.tol) {
            result.converged = true;
            break;
        }
    }

    const auto [c1, c2] = sharpMeans(img, phi);
    result.c1 = c1;
    result.c2 = c2;
    const bool insideIsForeground = c1 >= c2;
    result.mask = LabelMap(w, h, 0);
    for (std::size_t i = 0; i < img.size(); ++i) {
        const bool inside = phi.values()[i] > 0.0;
        result.mask.labels[i] = (inside == insideIsForeground) ? 1 : 0;
    }
    result.phi = std::move(phi);
    return result;
}

}  // namespace astroimg
