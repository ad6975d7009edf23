/**
 * @file filterbank.h
 * @brief Gaussian, Gabor and DoG kernels, the LGN transform and k-means filter banks
 */
#pragma once

#include <astroimg/image.h>

#include <cstdint>
#include <span>
#include <vector>

namespace astroimg {

struct GaborParams {
    double lambda = 8.0;  ///< wavelength of the carrier, pixels
    double theta = 0.0;   ///< orientation, radians
    double psi = 0.0;     ///< phase offset, radians
    double sigma = 3.0;   ///< envelope standard deviation, pixels
    double gamma = 1.0;   ///< spatial aspect ratio

    void validate() const;
};

/// Scales are variances (pixels^2): the two smoothings use std sqrt(t) and sqrt(t + dt).
struct DoGParams {
    double t = 1.0;
    double dt = 1.0;

    void validate() const;
};

struct GaborPair {
    Kernel even;  ///< envelope * cos(2 pi x'/lambda + psi)
    Kernel odd;   ///< envelope * sin(2 pi x'/lambda + psi)
};

/// Zero-mean, unit-norm patches of side `side`, stored back to back.
struct PatchSet {
    int side = 0;
    std::vector<double> values;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(side) * side; }
    std::size_t count() const noexcept { return dim() == 0 ? 0 : values.size() / dim(); }
    std::span<const double> patch(std::size_t i) const noexcept {
        return std::span<const double>(values).subspan(i * dim(), dim());
    }
};

/// Learned filters; each centroid is zero-mean and has unit l2 norm, or is all zero (dead unit).
struct FilterBank {
    int k = 0;
    int patch = 0;
    std::vector<Kernel> centroids;
    std::vector<double> objectiveTrace;  ///< within-cluster sum of squares after each Lloyd iteration
    int iterations = 0;
};

/// Sampled 2-D Gaussian of size (2r+1)^2, normalized to unit sum. ParameterError if sigma <= 0.
Kernel gaussianKernel(double sigma, int radius);

/// Unnormalized quadrature pair; the envelope is exp(-(x'^2 + gamma^2 y'^2) / (2 sigma^2)).
GaborPair gaborKernel(const GaborParams& p, int radius);

/// Rescales a kernel to unit l2 norm (the B/C normalizing factors of a discrete Gabor pair).
Kernel unitNorm(const Kernel& k);

/// (t / dt) * (L(sqrt(t + dt)) - L(sqrt(t))) with Reflect boundaries.
Image dogResponse(const Image& img, const DoGParams& p);

/// DoG response rescaled to [0, 1]; a constant response maps to 0.5.
Image lgnImage(const Image& img, const DoGParams& p);

/**
 * All fully interior patches on the stride grid in row-major order of their
 * top-left corner, each normalized to zero mean and unit l2 norm. Patches
 * with (numerically) zero variance are dropped.
 */
PatchSet extractPatches(const Image& img, int patch, int stride = 1);

/**
 * @brief Lloyd's k-means with k-means++ seeding
 *
 * Patches are sorted lexicographically before clustering, so the result is a
 * function of the patch multiset and the seed only. Iteration stops when
 * assignments no longer change or after @p maxIter iterations. Final centroids
 * are re-centered and re-normalized.
 */
FilterBank kmeansFilterBank(const PatchSet& patches, int k, std::uint64_t seed, int maxIter = 100);

/// Tiles the bank into one image (each filter rescaled to [0,1]), `cols` filters per row, 1-pixel gaps.
Image montage(const FilterBank& bank, int cols = 4);

}  // namespace astroimg
