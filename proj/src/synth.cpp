#include <astroimg/synth.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace astroimg {

void SynthGalaxySpec::validate() const {
    if (width < 1 || height < 1) throw ParameterError("synthetic image must be at least 1x1");
    if (!(axisRatio > 0.0 && axisRatio <= 1.0)) throw ParameterError("axis ratio must lie in (0, 1]");
    if (!(scaleLength > 0.0)) throw ParameterError("scale length must be positive");
    if (!(peak > 0.0 && peak <= 1.0)) throw ParameterError("peak must lie in (0, 1]");
    if (noise.kind == NoiseKind::Gaussian && !(noise.sigma >= 0.0)) throw ParameterError("noise sigma must be >= 0");
    if (noise.kind == NoiseKind::SaltPepper && !(noise.amount >= 0.0 && noise.amount <= 1.0)) {
        throw ParameterError("salt-and-pepper amount must lie in [0, 1]");
    }
}

Image synthGalaxy(const SynthGalaxySpec& spec) {
    spec.validate();
    Image img(spec.width, spec.height);
    const double c = std::cos(spec.positionAngle);
    const double s = std::sin(spec.positionAngle);
    for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
            const double dx = x - spec.cx;
            const double dy = y - spec.cy;
            const double major = dx * c + dy * s;
            const double minor = (-dx * s + dy * c) / spec.axisRatio;
            const double r = std::sqrt(major * major + minor * minor);
            img(x, y) = std::clamp(spec.peak * std::exp(-r / spec.scaleLength), 0.0, 1.0);
        }
    }
    return addNoise(img, spec.noise, spec.seed);
}

Image synthDisk(int width, int height, double cx, double cy, double radius) {
    Image img(width, height, 0.0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            if (dx * dx + dy * dy <= radius * radius) img(x, y) = 1.0;
        }
    }
    return img;
}

Image addNoise(const Image& img, const NoiseSpec& noise, std::uint64_t seed) {
    Image out = img;
    std::mt19937_64 rng(seed);
    switch (noise.kind) {
        case NoiseKind::None:
            break;
        case NoiseKind::Gaussian: {
            std::normal_distribution<double> gauss(0.0, noise.sigma);
            for (double& v : out.data()) v += gauss(rng);
            break;
        }
        case NoiseKind::SaltPepper: {
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            for (double& v : out.data()) {
                const double u = unit(rng);
                const double coin = unit(rng);
                if (u < noise.amount) v = coin < 0.5 ? 0.0 : 1.0;
            }
            break;
        }
    }
    return out;
}

}  // namespace astroimg
