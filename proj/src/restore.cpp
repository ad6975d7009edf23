#include <astroimg/restore.h>
#include <astroimg/filterbank.h>
#include <astroimg/fourier.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace astroimg {

Kernel gaussianPsf(double sigma, int radius) { return gaussianKernel(sigma, radius); }

namespace {

void checkPsf(const Kernel& psf) {
    if (!(psf.sum() > 0.0)) throw ContractError("PSF weights must have a positive sum");
}

ComplexField applyWiener(const ComplexField& observed, const ComplexField& transfer, double nsr) {
    ComplexField out(observed.width, observed.height);
    for (std::size_t i = 0; i < observed.re.size(); ++i) {
        const double hr = transfer.re[i];
        const double hi = transfer.im[i];
        const double denom = hr * hr + hi * hi + nsr;
        // conj(H) * Y / denom
        out.re[i] = (hr * observed.re[i] + hi * observed.im[i]) / denom;
        out.im[i] = (hr * observed.im[i] - hi * observed.re[i]) / denom;
    }
    return out;
}

}  // namespace

Image wienerDeconvolve(const Image& img, const WienerSpec& spec) {
    checkPsf(spec.psf);
    if (!(spec.nsr >= 0.0)) throw ContractError("nsr must be non-negative");
    const ComplexField transfer = dft2(embedCentered(spec.psf, img.width(), img.height()));
    if (spec.nsr == 0.0) {
        double peak = 0.0;
        double smallest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < transfer.re.size(); ++i) {
            const double p = transfer.re[i] * transfer.re[i] + transfer.im[i] * transfer.im[i];
            peak = std::max(peak, p);
            smallest = std::min(smallest, p);
        }
        if (smallest <= 1e-24 * peak) {
            throw SingularError("PSF transfer function vanishes; use nsr > 0");
        }
    }
    return idft2(applyWiener(dft2(img), transfer, spec.nsr));
}

Image wienerGainMagnitude(const Kernel& psf, int width, int height, double nsr) {
    checkPsf(psf);
    const ComplexField transfer = dft2(embedCentered(psf, width, height));
    Image gain(width, height);
    for (std::size_t i = 0; i < gain.size(); ++i) {
        const double mag2 = transfer.re[i] * transfer.re[i] + transfer.im[i] * transfer.im[i];
        gain.data()[i] = std::sqrt(mag2) / (mag2 + nsr);
    }
    return gain;
}

double whitenessScore(const Image& residual, int maxLag) {
    if (maxLag < 1) throw ParameterError("maxLag must be >= 1");
    const double mean = residual.sum() / static_cast<double>(residual.size());
    const Image centered = residual + (-mean);
    const ComplexField spectrum = dft2(centered);
    ComplexField power(spectrum.width, spectrum.height);
    for (std::size_t i = 0; i < power.re.size(); ++i) {
        power.re[i] = spectrum.re[i] * spectrum.re[i] + spectrum.im[i] * spectrum.im[i];
    }
    const Image acf = idft2(power);
    const double zeroLag = acf(0, 0);
    if (!(zeroLag > 0.0)) return 0.0;

    const int w = residual.width();
    const int h = residual.height();
    const int lx = std::min(maxLag, (w - 1) / 2);
    const int ly = std::min(maxLag, (h - 1) / 2);
    double score = 0.0;
    for (int dy = -ly; dy <= ly; ++dy) {
        for (int dx = -lx; dx <= lx; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const double r = acf((dx + w) % w, (dy + h) % h) / zeroLag;
            score += r * r;
        }
    }
    return score;
}

std::pair<Image, RestoreReport> selfTunedWiener(const Image& img, const Kernel& psf,
                                                const std::vector<double>& nsrGrid) {
    if (nsrGrid.empty()) throw ParameterError("nsr grid is empty");
    for (double v : nsrGrid) {
        if (!(v > 0.0)) throw ParameterError("nsr candidates must be positive");
    }
    checkPsf(psf);
    const ComplexField transfer = dft2(embedCentered(psf, img.width(), img.height()));
    const ComplexField observed = dft2(img);

    RestoreReport report;
    Image best;
    double bestScore = std::numeric_limits<double>::infinity();
    for (double nsr : nsrGrid) {
        const ComplexField estimateHat = applyWiener(observed, transfer, nsr);
        Image estimate = idft2(estimateHat);
        const Image reblurred = idft2(multiply(estimateHat, transfer));
        const double score = whitenessScore(img - reblurred);
        report.candidates.push_back({nsr, score});
        if (score < bestScore) {
            bestScore = score;
            best = std::move(estimate);
            report.chosenNsr = nsr;
            report.residualWhitenessScore = score;
        }
    }
    return {std::move(best), std::move(report)};
}

std::vector<double> logspace(double lo, double hi, int n) {
    if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw ParameterError("invalid logspace range");
    std::vector<double> out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (n - 1));
    return out;
}

}  // namespace astroimg
