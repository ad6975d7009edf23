/**
 * @file segment.h
 * @brief Chan-Vese level sets, random-walker segmentation and marker watershed
 */
#pragma once

#include <astroimg/image.h>

#include <limits>
#include <utility>
#include <vector>

namespace astroimg {

// ---------------------------------------------------------------------------
// Chan-Vese
// ---------------------------------------------------------------------------

struct ChanVeseParams {
    double mu = 0.5;       ///< boundary-length weight
    double lambda1 = 1.0;  ///< fidelity weight inside (phi > 0)
    double lambda2 = 2.0;  ///< fidelity weight outside
    double dt = 0.5;
    double tol = 1e-3;     ///< stop when mean |delta phi| < tol
    int maxIter = 200;
    double epsilon = 1.0;  ///< width of the regularized Heaviside / Dirac

    void validate() const;
};

struct ChanVeseResult {
    LabelMap mask;                   ///< 1 = brighter region, 0 = the other
    Image phi;                       ///< final level set
    std::vector<double> energyTrace; ///< energy after each iteration
    int iterationsRun = 0;
    bool converged = false;
    double c1 = 0.0;                 ///< mean over phi > 0
    double c2 = 0.0;                 ///< mean over phi <= 0
};

/// sin(pi x / 5) * sin(pi y / 5) initial level set.
Image checkerboardLevelSet(int width, int height);

/**
 * Regularized Chan-Vese functional:
 *   mu * sum delta_eps(phi) |grad phi|
 *   + lambda1 * sum H_eps(phi) (I - c1)^2 + lambda2 * sum (1 - H_eps(phi)) (I - c2)^2
 * with c1, c2 the H_eps-weighted means and central-difference gradients (edge padding).
 */
double chanVeseEnergy(const Image& img, const Image& phi, const ChanVeseParams& p);

/**
 * Two-phase Chan-Vese from a checkerboard start using the semi-implicit
 * curvature discretization (Jacobi update). Region means use the sharp
 * partition phi > 0. The returned mask labels the region with the larger
 * mean as 1. ContractError for non-finite input.
 */
ChanVeseResult chanVese(const Image& img, const ChanVeseParams& p = {});

// ---------------------------------------------------------------------------
// Random walker
// ---------------------------------------------------------------------------

struct Marker {
    int x;
    int y;
    int label;  ///< >= 1
};

struct MarkerSet {
    std::vector<Marker> markers;
};

struct RandomWalkerResult {
    LabelMap labels;
    std::vector<int> labelIds;          ///< sorted distinct marker labels
    std::vector<Image> probabilities;   ///< one per labelIds entry
    std::vector<int> cgIterations;      ///< per-label solver iterations
};

/// Added to every random-walker edge weight so strongly isolated pixels stay solvable.
inline constexpr double kWalkerWeightFloor = 1e-6;

/**
 * @brief Random walker on the 4-connected lattice
 *
 * Intensities are rescaled to [0, 1]; edge weights exp(-beta (I_i - I_j)^2) + kWalkerWeightFloor.
 * One Dirichlet problem per label is solved by Jacobi-preconditioned
 * conjugate gradient to a row-scaled residual of 1e-8 (cap 10 N iterations).
 * Each pixel takes the label of maximal probability (lowest label on ties).
 *
 * ParameterError for fewer than two labels, out-of-range markers or
 * beta <= 0; SingularError when an unmarked connected component has no marker.
 */
RandomWalkerResult randomWalker(const Image& img, const MarkerSet& markers, double beta = 90.0);

/// numpy-style "midpoint" quantile of the pixel values.
double quantileMidpoint(const Image& img, double q);

/**
 * Label 1 for pixels <= the low quantile, label 2 for pixels >= the high
 * quantile. ParameterError unless 0 < low < high < 1; DegenerateError when the
 * two thresholds coincide.
 */
MarkerSet markersFromHistogram(const Image& img, double lowQ = 0.05, double highQ = 0.95);

// ---------------------------------------------------------------------------
// Distance transform and watershed
// ---------------------------------------------------------------------------

/// Stored where no background pixel exists.
inline constexpr double kNoBackground = std::numeric_limits<double>::infinity();

/**
 * Exact Euclidean distance from each foreground pixel (label != 0) to the
 * nearest background pixel; background pixels read 0. The frame border is
 * not background: an all-foreground mask yields kNoBackground everywhere.
 */
Image distanceTransform(const LabelMap& mask);

/**
 * @brief Marker-based priority flood
 *
 * Markers enter a min-queue keyed by (relief, insertion sequence). A popped
 * entry claims its pixel if still unlabeled and pushes the unlabeled
 * neighbours with its label. When @p domain is given, pixels with domain 0
 * are never flooded and stay 0. ParameterError without markers.
 */
LabelMap watershed(const Image& relief, const MarkerSet& markers,
                   Connectivity conn = Connectivity::Eight, const LabelMap* domain = nullptr);

struct SplitResult {
    LabelMap labels;
    Image distance;
    MarkerSet peaks;
};

/**
 * Separates touching blobs: distance transform, peak plateaus of the distance
 * field (dynamic >= 0.5 px, greedily thinned so accepted peaks are at least
 * @p peakMinDistance apart), then watershed of the negated distance inside the
 * foreground. DegenerateError for an empty foreground.
 */
SplitResult splitOverlapping(const LabelMap& mask, double peakMinDistance = 5.0);

/// Binary LabelMap from a predicate on pixel values.
LabelMap threshold(const Image& img, double level);

}  // namespace astroimg
