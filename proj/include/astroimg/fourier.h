/**
 * @file fourier.h
 * @brief Discrete Fourier transforms of arbitrary size
 *
 * Power-of-two lengths use an iterative radix-2 Cooley-Tukey transform; all
 * other lengths use Bluestein's chirp-z algorithm on a power-of-two work
 * buffer. Both compute the exact DFT of the unpadded array (no cropping or
 * zero-extension of the result).
 *
 * Normalization: the forward transform is unnormalized, the inverse divides
 * by width*height.
 */
#pragma once

#include <astroimg/image.h>

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace astroimg {

/// Reusable 1-D transform of a fixed length.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);
    ~FftPlan();
    FftPlan(FftPlan&&) noexcept;
    FftPlan& operator=(FftPlan&&) noexcept;

    std::size_t size() const noexcept { return n_; }

    /// In-place unnormalized transform; inverse uses exp(+i...) and does not scale.
    void transform(std::span<std::complex<double>> data, bool inverse) const;

private:
    struct Bluestein;
    std::size_t n_;
    std::vector<std::complex<double>> twiddles_;  // radix-2 only
    std::unique_ptr<Bluestein> bluestein_;

    void radix2(std::span<std::complex<double>> data, bool inverse) const;
};

/// Forward 2-D DFT of a real image.
ComplexField dft2(const Image& img);

/// Forward or inverse 2-D DFT of a complex field (inverse divides by width*height).
ComplexField dft2(const ComplexField& field, bool inverse);

/// Inverse 2-D DFT returning the real part.
Image idft2(const ComplexField& field);

/// Inverse 2-D DFT keeping the imaginary residue.
ComplexField idft2Complex(const ComplexField& field);

/// Pointwise product of two same-shape spectra.
ComplexField multiply(const ComplexField& a, const ComplexField& b);

/// Embeds @p k in a width x height frame with its anchor at (0, 0), wrapping negative offsets.
Image embedCentered(const Kernel& k, int width, int height);

/// Circular convolution through the frequency domain.
Image circularConvolve(const Image& img, const Kernel& k);

}  // namespace astroimg
