/**
 * @file image.h
 * @brief Core raster types shared by every module
 *
 * All pixel data is double precision, row-major, indexed (x, y) with x the
 * column. Images are value types; operations never mutate their inputs.
 */
#pragma once

#include <astroimg/error.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace astroimg {

enum class BoundaryMode {
    Reflect,    ///< mirror without repeating the edge pixel (dcb|abcd|cba)
    Replicate,  ///< clamp to the edge pixel
    Zero        ///< pixels outside the frame read as 0
};

enum class Connectivity { Four, Eight };

/// 2-D scalar field. Invariant: width, height >= 1 and data.size() == width*height.
class Image {
public:
    Image() = default;
    Image(int width, int height, double fill = 0.0);
    Image(int width, int height, std::vector<double> data);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double operator()(int x, int y) const noexcept { return data_[index(x, y)]; }
    double& operator()(int x, int y) noexcept { return data_[index(x, y)]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    std::size_t index(int x, int y) const noexcept {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    bool sameShape(const Image& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    double min() const;
    double max() const;
    double sum() const;
    bool allFinite() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

/// Odd-sized weight array anchored at its center.
class Kernel {
public:
    Kernel() = default;
    Kernel(int width, int height, std::vector<double> weights);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int radiusX() const noexcept { return width_ / 2; }
    int radiusY() const noexcept { return height_ / 2; }

    double operator()(int i, int j) const noexcept {
        return weights_[static_cast<std::size_t>(j) * width_ + i];
    }
    /// Weight at offset (dx, dy) from the anchor.
    double at(int dx, int dy) const noexcept {
        return (*this)(dx + radiusX(), dy + radiusY());
    }

    std::span<const double> weights() const noexcept { return weights_; }
    double sum() const;

    /// Outer product col (vertical) x row (horizontal).
    static Kernel outer(std::span<const double> row, std::span<const double> col);

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> weights_;
};

/// Frequency-domain field; same shape contract as Image.
struct ComplexField {
    int width = 0;
    int height = 0;
    std::vector<double> re;
    std::vector<double> im;

    ComplexField() = default;
    ComplexField(int w, int h)
        : width(w), height(h),
          re(static_cast<std::size_t>(w) * h, 0.0),
          im(static_cast<std::size_t>(w) * h, 0.0) {}

    std::size_t index(int u, int v) const noexcept {
        return static_cast<std::size_t>(v) * width + u;
    }
};

/// Binary per-pixel mask (extrema, caps, thresholds).
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    Mask() = default;
    Mask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    bool operator()(int x, int y) const noexcept {
        return bits[static_cast<std::size_t>(y) * width + x] != 0;
    }
    std::size_t count() const;
};

/// Per-pixel region labels; 0 is background / unlabeled where applicable.
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<int> labels;

    LabelMap() = default;
    LabelMap(int w, int h, int fill = 0)
        : width(w), height(h), labels(static_cast<std::size_t>(w) * h, fill) {}

    int operator()(int x, int y) const noexcept {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
    int& operator()(int x, int y) noexcept {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
    int maxLabel() const;
};

/// Maps an out-of-frame coordinate into [0, n) under a Reflect or Replicate rule.
/// Returns -1 for Zero mode when the coordinate is outside.
int boundaryIndex(int i, int n, BoundaryMode mode) noexcept;

/// Pixel read with boundary handling.
double sample(const Image& img, int x, int y, BoundaryMode mode) noexcept;

/// Affine rescale to [0, 1]; a constant image maps to all `degenerate`.
Image rescaleUnit(const Image& img, double degenerate = 0.5);

/// 90 degree counter-clockwise rotation (used by symmetry tests and the CLI).
Image rotate90(const Image& img);

Image operator+(const Image& a, const Image& b);
Image operator-(const Image& a, const Image& b);
Image operator*(double s, const Image& a);
Image operator+(const Image& a, double c);

}  // namespace astroimg
