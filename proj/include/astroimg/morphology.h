/**
 * @file morphology.h
 * @brief Regional maxima, grayscale reconstruction and the h-maxima transform
 *
 * Maxima use plateau semantics: a connected set of equal-valued pixels is a
 * regional maximum when none of its neighbors is strictly greater.
 */
#pragma once

#include <astroimg/image.h>

namespace astroimg {

/// Marks every pixel belonging to a regional-maximum plateau.
Mask regionalMaxima(const Image& img, Connectivity conn = Connectivity::Eight);

/**
 * @brief Grayscale reconstruction by dilation of @p marker under @p mask
 *
 * Raster/anti-raster sweeps followed by FIFO propagation (Vincent 1993).
 * Throws ContractError if marker exceeds mask anywhere or shapes differ.
 */
Image reconstructByDilation(const Image& marker, const Image& mask,
                            Connectivity conn = Connectivity::Eight);

/**
 * @brief h-maxima: peaks whose dynamic (contrast to the nearest higher ground) is at least h
 *
 * Computes rec = reconstructByDilation(img - h, img) and marks the regional
 * maxima of rec whose value was not raised by the reconstruction, i.e. the
 * peak plateaus of img that stand at least h above every saddle leading to a
 * higher peak. The global-maximum plateau always survives. @p h is in raw
 * intensity units; ParameterError if h <= 0.
 */
Mask hMaxima(const Image& img, double h, Connectivity conn = Connectivity::Eight);

/// The h-maxima reconstruction itself (img - h reconstructed under img).
Image hMaxTransform(const Image& img, double h, Connectivity conn = Connectivity::Eight);

}  // namespace astroimg
