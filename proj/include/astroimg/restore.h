/**
 * @file restore.h
 * @brief Frequency-domain Wiener deconvolution and a self-tuned variant
 *
 * The blur model is circular: the PSF is zero-padded to the image size with
 * its anchor moved to (0, 0). Signal and noise spectra collapse to a single
 * frequency-independent noise-to-signal ratio (nsr), giving the gain
 * G = conj(H) / (|H|^2 + nsr).
 */
#pragma once

#include <astroimg/image.h>

#include <utility>
#include <vector>

namespace astroimg {

struct WienerSpec {
    Kernel psf;
    double nsr = 1e-2;
};

struct NsrCandidate {
    double nsr;
    double score;  ///< residual whiteness, lower is whiter
};

struct RestoreReport {
    double chosenNsr = 0.0;
    double residualWhitenessScore = 0.0;
    std::vector<NsrCandidate> candidates;  ///< input-grid order
};

/// Normalized Gaussian PSF of size (2r+1)^2.
Kernel gaussianPsf(double sigma, int radius);

/**
 * Wiener estimate of the unblurred image. SingularError when nsr == 0 and
 * the PSF transfer function vanishes at some frequency; ContractError for a
 * PSF with non-positive sum or negative nsr.
 */
Image wienerDeconvolve(const Image& img, const WienerSpec& spec);

/// Wiener gain |G| = |H| / (|H|^2 + nsr) at every frequency of an image-sized frame.
Image wienerGainMagnitude(const Kernel& psf, int width, int height, double nsr);

/**
 * Normalized autocorrelation energy of @p residual: the sum of squared
 * circular autocorrelation coefficients over lags 0 < max(|dx|,|dy|) <= maxLag.
 * White noise scores near ((2 maxLag + 1)^2 - 1) / N; structure scores higher.
 * The default uses the 8 nearest lags, where under- and over-regularized
 * residuals differ most.
 */
double whitenessScore(const Image& residual, int maxLag = 1);

/**
 * Evaluates every nsr candidate, scores the residual img - psf (*) x_hat by
 * whitenessScore and returns the restoration with the lowest score (first
 * on ties) together with the full report. ParameterError for an empty grid
 * or non-positive candidates.
 */
std::pair<Image, RestoreReport> selfTunedWiener(const Image& img, const Kernel& psf,
                                                const std::vector<double>& nsrGrid);

/// n points log-spaced over [lo, hi] (the default grid is 25 points over [1e-4, 1]).
std::vector<double> logspace(double lo, double hi, int n);

}  // namespace astroimg
