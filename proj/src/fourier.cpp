#include <astroimg/fourier.h>
#include <astroimg/parallel.h>

#include <cmath>
#include <numbers>

namespace astroimg {

namespace {

bool isPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t nextPowerOfTwo(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

struct FftPlan::Bluestein {
    std::size_t m;
    std::vector<std::complex<double>> chirp;     // exp(-i pi k^2 / n)
    std::vector<std::complex<double>> filterHat; // FFT of the conjugate chirp, length m
    FftPlan inner;

    explicit Bluestein(std::size_t n) : m(nextPowerOfTwo(2 * n - 1)), inner(m) {
        chirp.resize(n);
        const std::size_t period = 2 * n;
        for (std::size_t k = 0; k < n; ++k) {
            // k^2 mod 2n keeps the angle small and exact for large k
            const std::size_t q = (k * k) % period;
            const double angle = std::numbers::pi * static_cast<double>(q) / static_cast<double>(n);
            chirp[k] = {std::cos(angle), -std::sin(angle)};
        }
        filterHat.assign(m, {0.0, 0.0});
        filterHat[0] = std::conj(chirp[0]);
        for (std::size_t k = 1; k < n; ++k) {
            filterHat[k] = std::conj(chirp[k]);
            filterHat[m - k] = std::conj(chirp[k]);
        }
        inner.transform(filterHat, false);
    }
};

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw DimensionError("transform length must be positive");
    if (isPowerOfTwo(n)) {
        twiddles_.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
            twiddles_[k] = {std::cos(angle), std::sin(angle)};
        }
    } else {
        bluestein_ = std::make_unique<Bluestein>(n);
    }
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::radix2(std::span<std::complex<double>> data, bool inverse) const {
    const std::size_t n = n_;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t step = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                std::complex<double> w = twiddles_[k * step];
                if (inverse) w = std::conj(w);
                const auto u = data[start + k];
                const auto v = data[start + k + half] * w;
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
    }
}

void FftPlan::transform(std::span<std::complex<double>> data, bool inverse) const {
    if (data.size() != n_) throw DimensionError("transform buffer length mismatch");
    if (n_ == 1) return;
    if (!bluestein_) {
        radix2(data, inverse);
        return;
    }
    // inverse(x) = conj(forward(conj(x)))
    if (inverse) {
        for (auto& v : data) v = std::conj(v);
    }
    const auto& b = *bluestein_;
    std::vector<std::complex<double>> work(b.m, {0.0, 0.0});
    for (std::size_t k = 0; k < n_; ++k) work[k] = data[k] * b.chirp[k];
    b.inner.transform(work, false);
    for (std::size_t k = 0; k < b.m; ++k) work[k] *= b.filterHat[k];
    b.inner.transform(work, true);
    const double scale = 1.0 / static_cast<double>(b.m);
    for (std::size_t k = 0; k < n_; ++k) data[k] = work[k] * scale * b.chirp[k];
    if (inverse) {
        for (auto& v : data) v = std::conj(v);
    }
}

ComplexField dft2(const ComplexField& field, bool inverse) {
    const int w = field.width;
    const int h = field.height;
    if (w < 1 || h < 1) throw DimensionError("empty field");
    const FftPlan rowPlan(static_cast<std::size_t>(w));
    const FftPlan colPlan(static_cast<std::size_t>(h));

    std::vector<std::complex<double>> buf(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = {field.re[i], field.im[i]};

    parallelFor(h, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            rowPlan.transform(std::span(buf).subspan(static_cast<std::size_t>(y) * w, w), inverse);
        }
    });
    parallelFor(w, [&](int x0, int x1) {
        std::vector<std::complex<double>> column(static_cast<std::size_t>(h));
        for (int x = x0; x < x1; ++x) {
            for (int y = 0; y < h; ++y) column[y] = buf[static_cast<std::size_t>(y) * w + x];
            colPlan.transform(column, inverse);
            for (int y = 0; y < h; ++y) buf[static_cast<std::size_t>(y) * w + x] = column[y];
        }
    });

    ComplexField out(w, h);
    const double scale = inverse ? 1.0 / (static_cast<double>(w) * h) : 1.0;
    for (std::size_t i = 0; i < buf.size(); ++i) {
        out.re[i] = buf[i].real() * scale;
        out.im[i] = buf[i].imag() * scale;
    }
    return out;
}

ComplexField dft2(const Image& img) {
    ComplexField field(img.width(), img.height());
    auto src = img.data();
    std::copy(src.begin(), src.end(), field.re.begin());
    return dft2(field, false);
}

ComplexField idft2Complex(const ComplexField& field) { return dft2(field, true); }

Image idft2(const ComplexField& field) {
    ComplexField spatial = dft2(field, true);
    return Image(spatial.width, spatial.height, std::move(spatial.re));
}

ComplexField multiply(const ComplexField& a, const ComplexField& b) {
    if (a.width != b.width || a.height != b.height) throw DimensionError("spectrum shapes differ");
    ComplexField out(a.width, a.height);
    for (std::size_t i = 0; i < a.re.size(); ++i) {
        out.re[i] = a.re[i] * b.re[i] - a.im[i] * b.im[i];
        out.im[i] = a.re[i] * b.im[i] + a.im[i] * b.re[i];
    }
    return out;
}

Image embedCentered(const Kernel& k, int width, int height) {
    if (k.width() > width || k.height() > height) throw DimensionError("kernel larger than frame");
    Image frame(width, height, 0.0);
    for (int dy = -k.radiusY(); dy <= k.radiusY(); ++dy) {
        for (int dx = -k.radiusX(); dx <= k.radiusX(); ++dx) {
            const int x = (dx + width) % width;
            const int y = (dy + height) % height;
            frame(x, y) += k.at(dx, dy);
        }
    }
    return frame;
}

Image circularConvolve(const Image& img, const Kernel& k) {
    const auto kernelHat = dft2(embedCentered(k, img.width(), img.height()));
    return idft2(multiply(dft2(img), kernelHat));
}

}  // namespace astroimg
