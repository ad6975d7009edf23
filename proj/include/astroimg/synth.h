/**
 * @file synth.h
 * @brief Synthetic galaxy and disk fixtures with seeded noise
 */
#pragma once

#include <astroimg/image.h>

#include <cstdint>

namespace astroimg {

enum class NoiseKind { None, Gaussian, SaltPepper };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::None;
    double sigma = 0.0;   ///< Gaussian std
    double amount = 0.0;  ///< salt-and-pepper fraction in [0, 1]
};

struct SynthGalaxySpec {
    int width = 128;
    int height = 128;
    double cx = 63.5;
    double cy = 63.5;
    double axisRatio = 0.6;      ///< minor/major, (0, 1]
    double positionAngle = 0.5;  ///< radians
    double scaleLength = 12.0;   ///< pixels
    double peak = 1.0;           ///< (0, 1]
    NoiseSpec noise;
    std::uint64_t seed = 0;

    void validate() const;
};

/**
 * peak * exp(-r_ell / scaleLength), r_ell the elliptical radius in the frame
 * rotated by positionAngle with the minor axis scaled by axisRatio. The
 * noiseless profile lies in [0, 1]. Gaussian noise is added on top without
 * clipping so the sample stays additive-Gaussian; salt-and-pepper sets the
 * selected pixels to 0 or 1 with equal probability.
 */
Image synthGalaxy(const SynthGalaxySpec& spec);

/// Two-tone disk: 1 inside radius r of (cx, cy), 0 outside.
Image synthDisk(int width, int height, double cx, double cy, double radius);

/// Applies @p noise to a copy of @p img under @p seed.
Image addNoise(const Image& img, const NoiseSpec& noise, std::uint64_t seed);

}  // namespace astroimg
