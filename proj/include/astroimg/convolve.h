/**
 * @file convolve.h
 * @brief Spatial convolution with explicit boundary handling
 */
#pragma once

#include <astroimg/image.h>

#include <span>

namespace astroimg {

/**
 * @brief True 2-D convolution (kernel flipped), same-size output
 *
 * out(x, y) = sum_{dx,dy} k(dx, dy) * img(x - dx, y - dy), with out-of-frame
 * reads resolved by @p mode. Throws DimensionError if the kernel is larger
 * than the image in either dimension.
 */
Image convolve2d(const Image& img, const Kernel& k, BoundaryMode mode = BoundaryMode::Reflect);

/**
 * @brief Separable convolution: @p row along x, then @p col along y
 *
 * Equivalent to convolve2d with Kernel::outer(row, col). Both vectors must be
 * odd-length (ContractError otherwise).
 */
Image separableConvolve(const Image& img, std::span<const double> row,
                        std::span<const double> col, BoundaryMode mode = BoundaryMode::Reflect);

/// Normalized 1-D Gaussian taps of length 2*radius+1 (sum exactly renormalized to 1).
std::vector<double> gaussianTaps(double sigma, int radius);

/// Gaussian smoothing at standard deviation @p sigma, radius ceil(4 sigma) clipped to the image.
Image gaussianSmooth(const Image& img, double sigma, BoundaryMode mode = BoundaryMode::Reflect);

}  // namespace astroimg
