/**
 * @file spectrum.h
 * @brief 2-D power spectrum and its azimuthal average
 */
#pragma once

#include <astroimg/image.h>

#include <vector>

namespace astroimg {

struct Spectrum {
    Image power2d;                   ///< DC at (floor(W/2), floor(H/2))
    std::vector<double> radialFreq;  ///< bin centers, cycles per image
    std::vector<double> radialPower; ///< mean power per annulus (0 for empty bins)
    std::vector<std::size_t> counts;
};

/// |DFT|^2 with the zero-frequency bin shifted to (floor(W/2), floor(H/2)).
Image powerSpectrum2d(const Image& img);

/**
 * Azimuthal mean of a centered power map. Radii are measured from the DC
 * pixel and rounded half-up to unit-width bins; radii beyond the last bin are
 * accumulated into it so the bins partition the map. ParameterError if nbins < 1.
 */
Spectrum radialAverage(const Image& power2d, int nbins);

/// Default bin count floor(min(W, H) / 2), at least 1.
int defaultRadialBins(int width, int height);

/// Separable Hann window applied multiplicatively.
Image hannWindow(const Image& img);

}  // namespace astroimg
