#include <astroimg/image.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace astroimg {

Image::Image(int width, int height, double fill) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw DimensionError("image dimensions must be at least 1x1");
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Image::Image(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1) {
        throw DimensionError("image dimensions must be at least 1x1");
    }
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw DimensionError("image data length does not match width*height");
    }
}

double Image::min() const { return *std::min_element(data_.begin(), data_.end()); }
double Image::max() const { return *std::max_element(data_.begin(), data_.end()); }
double Image::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

bool Image::allFinite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Kernel::Kernel(int width, int height, std::vector<double> weights)
    : width_(width), height_(height), weights_(std::move(weights)) {
    if (width < 1 || height < 1 || width % 2 == 0 || height % 2 == 0) {
        throw ContractError("kernel dimensions must be odd and positive");
    }
    if (weights_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw DimensionError("kernel weight count does not match width*height");
    }
    for (double w : weights_) {
        if (!std::isfinite(w)) throw ContractError("kernel weights must be finite");
    }
}

double Kernel::sum() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

Kernel Kernel::outer(std::span<const double> row, std::span<const double> col) {
    std::vector<double> w(row.size() * col.size());
    for (std::size_t j = 0; j < col.size(); ++j) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            w[j * row.size() + i] = col[j] * row[i];
        }
    }
    return Kernel(static_cast<int>(row.size()), static_cast<int>(col.size()), std::move(w));
}

std::size_t Mask::count() const {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(),
                                                  [](std::uint8_t b) { return b != 0; }));
}

int LabelMap::maxLabel() const {
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
}

int boundaryIndex(int i, int n, BoundaryMode mode) noexcept {
    if (i >= 0 && i < n) return i;
    switch (mode) {
        case BoundaryMode::Zero:
            return -1;
        case BoundaryMode::Replicate:
            return i < 0 ? 0 : n - 1;
        case BoundaryMode::Reflect: {
            if (n == 1) return 0;
            const int period = 2 * (n - 1);
            int m = i % period;
            if (m < 0) m += period;
            return m < n ? m : period - m;
        }
    }
    return -1;
}

double sample(const Image& img, int x, int y, BoundaryMode mode) noexcept {
    const int xi = boundaryIndex(x, img.width(), mode);
    const int yi = boundaryIndex(y, img.height(), mode);
    if (xi < 0 || yi < 0) return 0.0;
    return img(xi, yi);
}

Image rescaleUnit(const Image& img, double degenerate) {
    const double lo = img.min();
    const double hi = img.max();
    const double scale = std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    Image out(img.width(), img.height(), degenerate);
    if (hi - lo <= 1e-12 * scale) return out;
    const double inv = 1.0 / (hi - lo);
    auto src = img.data();
    auto dst = out.data();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[i] = std::clamp((src[i] - lo) * inv, 0.0, 1.0);
    }
    return out;
}

Image rotate90(const Image& img) {
    // (x, y) -> (y, W-1-x): counter-clockwise in image coordinates with y down.
    Image out(img.height(), img.width());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            out(y, img.width() - 1 - x) = img(x, y);
        }
    }
    return out;
}

namespace {
void requireSameShape(const Image& a, const Image& b) {
    if (!a.sameShape(b)) throw DimensionError("image shapes differ");
}
}  // namespace

Image operator+(const Image& a, const Image& b) {
    requireSameShape(a, b);
    Image out = a;
    auto d = out.data();
    auto s = b.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
    return out;
}

Image operator-(const Image& a, const Image& b) {
    requireSameShape(a, b);
    Image out = a;
    auto d = out.data();
    auto s = b.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= s[i];
    return out;
}

Image operator*(double s, const Image& a) {
    Image out = a;
    for (double& v : out.data()) v *= s;
    return out;
}

Image operator+(const Image& a, double c) {
    Image out = a;
    for (double& v : out.data()) v += c;
    return out;
}

}  // namespace astroimg
