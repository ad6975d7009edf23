#include <astroimg/spectrum.h>
#include <astroimg/fourier.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace astroimg {

Image powerSpectrum2d(const Image& img) {
    const ComplexField f = dft2(img);
    const int w = img.width();
    const int h = img.height();
    Image out(w, h);
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const std::size_t i = f.index(u, v);
            out((u + w / 2) % w, (v + h / 2) % h) = f.re[i] * f.re[i] + f.im[i] * f.im[i];
        }
    }
    return out;
}

int defaultRadialBins(int width, int height) { return std::max(1, std::min(width, height) / 2); }

Spectrum radialAverage(const Image& power2d, int nbins) {
    if (nbins < 1) throw ParameterError("nbins must be >= 1");
    const int w = power2d.width();
    const int h = power2d.height();
    const int cx = w / 2;
    const int cy = h / 2;
    Spectrum s;
    s.power2d = power2d;
    std::vector<double> sums(static_cast<std::size_t>(nbins), 0.0);
    s.counts.assign(static_cast<std::size_t>(nbins), 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double r = std::hypot(static_cast<double>(x - cx), static_cast<double>(y - cy));
            const int bin = std::min(static_cast<int>(std::floor(r + 0.5)), nbins - 1);
            sums[static_cast<std::size_t>(bin)] += power2d(x, y);
            ++s.counts[static_cast<std::size_t>(bin)];
        }
    }
    s.radialFreq.resize(static_cast<std::size_t>(nbins));
    s.radialPower.resize(static_cast<std::size_t>(nbins));
    for (std::size_t b = 0; b < sums.size(); ++b) {
        s.radialFreq[b] = static_cast<double>(b);
        s.radialPower[b] = s.counts[b] ? sums[b] / static_cast<double>(s.counts[b]) : 0.0;
    }
    return s;
}

Image hannWindow(const Image& img) {
    const int w = img.width();
    const int h = img.height();
    auto taper = [](int i, int n) {
        return n == 1 ? 1.0 : 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
    };
    Image out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) out(x, y) = img(x, y) * taper(x, w) * taper(y, h);
    }
    return out;
}

}  // namespace astroimg
