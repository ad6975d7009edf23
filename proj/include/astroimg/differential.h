/**
 * @file differential.h
 * @brief Gradients, Hessian and the shape index
 */
#pragma once

#include <astroimg/image.h>

namespace astroimg {

struct GradientField {
    Image gx;  ///< d/dx, intensity per pixel
    Image gy;  ///< d/dy, intensity per pixel
};

struct HessianField {
    Image ixx;
    Image ixy;
    Image iyy;
};

/// Value stored where the shape index is undefined (flat neighbourhood).
inline constexpr double kShapeIndexUndefined = -2.0;

inline bool shapeIndexDefined(double s) noexcept { return s >= -1.0 && s <= 1.0; }

/// Central differences inside, one-sided at the borders. DimensionError if width or height < 2.
GradientField gradient(const Image& img);

/// sqrt(gx^2 + gy^2) per pixel.
Image gradientMagnitude(const GradientField& g);

/// atan2(gy, gx) per pixel in (-pi, pi]; a zero vector maps to 0.
Image gradientOrientation(const GradientField& g);

/**
 * Gaussian smoothing at @p sigma followed by second central differences
 * (Reflect boundary). ParameterError if sigma < 0.5.
 */
HessianField hessian(const Image& img, double sigma);

/**
 * @brief Shape index from the ordered Hessian eigenvalues l1 >= l2
 *
 * S = (2/pi) * atan((l2 + l1) / (l2 - l1)); bright caps map to +1, dark cups
 * to -1. Where both eigenvalues vanish (relative to the largest Hessian
 * magnitude in the image) the entry is kShapeIndexUndefined.
 */
Image shapeIndex(const Image& img, double sigma = 1.0);

/// Shape index computed from an existing Hessian.
Image shapeIndex(const HessianField& hf);

/// Pixels with a defined shape index within @p tol of @p target. ParameterError if tol <= 0.
Mask capMask(const Image& shapeIndexMap, double target = 1.0, double tol = 0.05);

}  // namespace astroimg
