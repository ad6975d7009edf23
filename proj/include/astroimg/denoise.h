/**
 * @file denoise.h
 * @brief Noise-level estimation and pixel-wise non-local means
 */
#pragma once

#include <astroimg/image.h>

namespace astroimg {

enum class PatchWeighting {
    Uniform,         ///< "fast" variant: every patch pixel counts equally
    GaussianSpatial  ///< "slow" variant: patch pixels weighted by exp(-|o|^2 / (2 sigmaPatch^2))
};

struct NlmParams {
    int patchRadius = 3;    ///< 7x7 patches
    int searchRadius = 10;  ///< 21x21 search window
    double h = 0.1;         ///< filtering strength, intensity units
    PatchWeighting weighting = PatchWeighting::Uniform;
    double sigmaPatch = 1.5;  ///< only used by GaussianSpatial
    double sigma = 0.0;       ///< noise std for the 2 sigma^2 variance cancellation (0 disables)

    void validate() const;
};

/// Filtering strength as a multiple of the estimated noise std: 1.15 (uniform) or 0.8 (gaussian).
double defaultStrengthFactor(PatchWeighting weighting);

/**
 * Immerkaer's fast estimator: sqrt(pi/2) * mean|I * L| / 6 over interior
 * pixels, with L the 3x3 Laplacian-difference mask [1 -2 1; -2 4 -2; 1 -2 1].
 * DimensionError for images smaller than 3x3.
 */
double estimateNoiseSigma(const Image& img);

/**
 * @brief Non-local means with Reflect padding
 *
 * For each pixel i, every pixel j of the (2s+1)^2 search window contributes
 * with weight exp(-max(d^2(i,j) - 2 sigma^2, 0) / h^2), where d^2 is the
 * (uniformly or Gaussian) weighted mean squared difference between the
 * patches centered at i and j. Weights are normalized per pixel, so the
 * output is a convex combination of input pixels.
 */
Image nlmDenoise(const Image& img, const NlmParams& p);

/// Peak signal-to-noise ratio in dB for a signal with unit peak.
double psnr(const Image& reference, const Image& test, double peak = 1.0);

}  // namespace astroimg
