// astroimg command-line front end: one subcommand per processing stage plus
// an end-to-end `pipeline`. Exit codes: 0 success, 2 usage error, 3 data error.

#include <astroimg/astroimg.h>

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace astroimg;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

// Bad flag values detected after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void writeText(const fs::path& path, const std::string& text) {
    writeBytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hashOf(const Image& img) {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << fnv1a(encodeImage(img, RasterFormat::F32Raw));
    return "fnv1a64:" + os.str();
}

// Masks and label maps are written as images holding the label values; PGM
// output rescales labels by the largest label so they stay distinguishable.
void writeLabels(const fs::path& path, const LabelMap& labels) {
    Image img(labels.width, labels.height);
    const int top = std::max(1, labels.maxLabel());
    const bool pgm = formatFromPath(path) == RasterFormat::Pgm8;
    for (std::size_t i = 0; i < img.size(); ++i) {
        img.data()[i] = pgm ? static_cast<double>(labels.labels[i]) / top : labels.labels[i];
    }
    writeImage(path, img);
}

LabelMap maskToLabels(const Mask& m) {
    LabelMap out(m.width, m.height, 0);
    for (std::size_t i = 0; i < m.bits.size(); ++i) out.labels[i] = m.bits[i];
    return out;
}

// HSV with hue = orientation, saturation 1, value = normalized magnitude.
std::vector<std::uint8_t> orientationHsv(const Image& orientation, const Image& magnitude) {
    const double peak = magnitude.max();
    std::vector<std::uint8_t> rgb;
    rgb.reserve(orientation.size() * 3);
    for (std::size_t i = 0; i < orientation.size(); ++i) {
        double hue = (orientation.values()[i] + std::numbers::pi) / (2.0 * std::numbers::pi) * 6.0;
        if (hue >= 6.0) hue -= 6.0;
        const double v = peak > 0.0 ? magnitude.values()[i] / peak : 0.0;
        const int sector = static_cast<int>(hue);
        const double f = hue - sector;
        const double p = 0.0;
        const double q = v * (1.0 - f);
        const double t = v * f;
        double r = 0, g = 0, b = 0;
        switch (sector) {
            case 0: r = v, g = t, b = p; break;
            case 1: r = q, g = v, b = p; break;
            case 2: r = p, g = v, b = t; break;
            case 3: r = p, g = q, b = v; break;
            case 4: r = t, g = p, b = v; break;
            default: r = v, g = p, b = q; break;
        }
        for (double c : {r, g, b}) rgb.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0)));
    }
    return rgb;
}

std::string energyCsv(const std::vector<double>& trace) {
    std::string out = "iteration,energy\n";
    for (std::size_t i = 0; i < trace.size(); ++i) out += std::to_string(i + 1) + "," + num(trace[i]) + "\n";
    return out;
}

std::string spectrumCsv(const Spectrum& s) {
    std::string out = "bin,freq,power,count\n";
    for (std::size_t b = 0; b < s.radialPower.size(); ++b) {
        out += std::to_string(b) + "," + num(s.radialFreq[b]) + "," + num(s.radialPower[b]) + "," +
               std::to_string(s.counts[b]) + "\n";
    }
    return out;
}

std::string nsrCsv(const RestoreReport& r) {
    std::string out = "nsr,score\n";
    for (const auto& c : r.candidates) out += num(c.nsr) + "," + num(c.score) + "\n";
    return out;
}

std::string centroidsCsv(const FilterBank& bank) {
    std::string out = "filter";
    for (int i = 0; i < bank.patch * bank.patch; ++i) out += ",w" + std::to_string(i);
    out += "\n";
    for (std::size_t c = 0; c < bank.centroids.size(); ++c) {
        out += std::to_string(c);
        for (double v : bank.centroids[c].weights()) out += "," + num(v);
        out += "\n";
    }
    return out;
}

NoiseSpec parseNoise(const std::string& text, double amount) {
    if (text == "none") return {};
    if (text == "sp") return {NoiseKind::SaltPepper, 0.0, amount};
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("--noise expects none, gauss:<sigma>, sp:<amount> or sp");
    const std::string kind = text.substr(0, colon);
    double value = 0.0;
    const std::string rest = text.substr(colon + 1);
    const auto res = std::from_chars(rest.data(), rest.data() + rest.size(), value);
    if (res.ec != std::errc{} || res.ptr != rest.data() + rest.size()) {
        throw UsageError("--noise value is not a number: " + rest);
    }
    if (kind == "gauss") return {NoiseKind::Gaussian, value, 0.0};
    if (kind == "sp") return {NoiseKind::SaltPepper, 0.0, value};
    throw UsageError("unknown noise kind: " + kind);
}

Kernel psfFor(double sigma, int radius) {
    if (radius <= 0) radius = static_cast<int>(std::ceil(3.0 * sigma));
    return gaussianPsf(sigma, radius);
}

// ---------------------------------------------------------------------------
// Stage implementations shared by the subcommands and the pipeline
// ---------------------------------------------------------------------------

struct HMaxOpts {
    double h = 0.05;
    int conn = 8;
};

Mask runHMaxima(const Image& img, const HMaxOpts& o) {
    return hMaxima(rescaleUnit(img, 0.5), o.h, o.conn == 4 ? Connectivity::Four : Connectivity::Eight);
}

struct FilterBankOpts {
    int k = 16;
    int patch = 7;
    int stride = 2;
    double dogT = 1.0;
    double dogDt = 1.0;
    int maxIter = 100;
};

FilterBank runFilterBank(const Image& img, const FilterBankOpts& o, std::uint64_t seed) {
    const Image lgn = lgnImage(img, DoGParams{o.dogT, o.dogDt});
    const PatchSet patches = extractPatches(lgn, o.patch, o.stride);
    if (patches.count() < static_cast<std::size_t>(o.k)) {
        throw DegenerateError("image yields " + std::to_string(patches.count()) + " patches, fewer than k");
    }
    return kmeansFilterBank(patches, o.k, seed, o.maxIter);
}

struct DenoiseOpts {
    std::string variant = "fast";
    double h = 0.0;  // 0: factor * estimated sigma
    int patchRadius = 3;
    int searchRadius = 10;
    double sigmaPatch = 1.5;
};

std::pair<Image, double> runDenoise(const Image& img, const DenoiseOpts& o) {
    if (o.variant != "fast" && o.variant != "slow") throw UsageError("--variant must be fast or slow");
    const double sigma = estimateNoiseSigma(img);
    NlmParams p;
    p.weighting = o.variant == "fast" ? PatchWeighting::Uniform : PatchWeighting::GaussianSpatial;
    p.patchRadius = o.patchRadius;
    p.searchRadius = o.searchRadius;
    p.sigmaPatch = o.sigmaPatch;
    p.sigma = sigma;
    p.h = o.h > 0.0 ? o.h : defaultStrengthFactor(p.weighting) * sigma;
    if (!(p.h > 0.0)) p.h = 1e-3;  // noiseless input: keep the filter well defined
    return {nlmDenoise(img, p), sigma};
}

struct DeconvOpts {
    double psfSigma = 2.0;
    int psfRadius = 0;
    std::optional<double> nsr;
    double gridLo = 1e-4;
    double gridHi = 1.0;
    int gridN = 25;
};

std::pair<Image, std::optional<RestoreReport>> runDeconvolve(const Image& img, const DeconvOpts& o) {
    const Kernel psf = psfFor(o.psfSigma, o.psfRadius);
    if (o.nsr) return {wienerDeconvolve(img, {psf, *o.nsr}), std::nullopt};
    auto [restored, report] = selfTunedWiener(img, psf, logspace(o.gridLo, o.gridHi, o.gridN));
    return {std::move(restored), std::move(report)};
}

ChanVeseResult runChanVese(const Image& img, const ChanVeseParams& p) { return chanVese(rescaleUnit(img, 0.5), p); }

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct PipelineOpts {
    std::string input;
    bool demo = false;
    std::string outDir = "pipeline_out";
    std::uint64_t seed = 7;
    HMaxOpts hmax;
    double siSigma = 1.0;
    FilterBankOpts bank;
    DenoiseOpts denoise;
    DeconvOpts deconv;
    ChanVeseParams cv;
    double rwBeta = 90.0;
    double splitMinDistance = 5.0;
};

Image demoGalaxy(std::uint64_t seed) {
    SynthGalaxySpec spec;
    spec.noise = {NoiseKind::Gaussian, 0.05, 0.0};
    spec.seed = seed;
    return synthGalaxy(spec);
}

int runPipeline(const PipelineOpts& o) {
    if (o.demo == !o.input.empty()) throw UsageError("pipeline needs exactly one of an input path or --demo");
    const fs::path dir(o.outDir);
    fs::create_directories(dir);
    const Image input = o.demo ? demoGalaxy(o.seed) : readImage(o.input);

    std::string manifest;
    auto record = [&](const std::string& stage, const Image& in, const std::string& output, nlohmann::ordered_json params) {
        nlohmann::ordered_json line;
        line["stage"] = stage;
        line["input_hash"] = hashOf(in);
        line["output"] = output;
        line["params"] = std::move(params);
        manifest += line.dump() + "\n";
        std::cout << stage << " -> " << (dir / output).string() << "\n";
    };

    writeImage(dir / "input.f32", input);
    record("input", input, "input.f32", {{"demo", o.demo}, {"seed", o.seed}});

    writeLabels(dir / "hmaxima.pgm", maskToLabels(runHMaxima(input, o.hmax)));
    record("hmaxima", input, "hmaxima.pgm", {{"h", o.hmax.h}, {"connectivity", o.hmax.conn}});

    writeImage(dir / "shape_index.f32", shapeIndex(input, o.siSigma));
    record("shape-index", input, "shape_index.f32", {{"sigma", o.siSigma}});

    {
        const GradientField g = gradient(input);
        writePpm(dir / "gradients.ppm", input.width(), input.height(),
                 orientationHsv(gradientOrientation(g), gradientMagnitude(g)));
        record("gradients", input, "gradients.ppm", nlohmann::ordered_json::object());
    }

    {
        const FilterBank bank = runFilterBank(input, o.bank, o.seed);
        writeImage(dir / "filterbank.pgm", montage(bank));
        record("filterbank", input, "filterbank.pgm",
               {{"k", o.bank.k}, {"patch", o.bank.patch}, {"stride", o.bank.stride}, {"dog_t", o.bank.dogT},
                {"dog_dt", o.bank.dogDt}, {"seed", o.seed}, {"iterations", bank.iterations}});
    }

    {
        const auto [denoised, sigma] = runDenoise(input, o.denoise);
        writeImage(dir / "denoised.f32", denoised);
        record("denoise", input, "denoised.f32", {{"variant", o.denoise.variant}, {"sigma_est", sigma}});
    }

    {
        const auto [restored, report] = runDeconvolve(input, o.deconv);
        writeImage(dir / "restored.f32", restored);
        writeText(dir / "restore_nsr.csv", nsrCsv(*report));
        record("deconvolve", input, "restored.f32",
               {{"psf_sigma", o.deconv.psfSigma}, {"chosen_nsr", report->chosenNsr}, {"report", "restore_nsr.csv"}});
    }

    const ChanVeseResult cv = runChanVese(input, o.cv);
    writeLabels(dir / "chan_vese.pgm", cv.mask);
    writeText(dir / "chan_vese_energy.csv", energyCsv(cv.energyTrace));
    record("segment-cv", input, "chan_vese.pgm",
           {{"mu", o.cv.mu}, {"lambda1", o.cv.lambda1}, {"lambda2", o.cv.lambda2}, {"max_iter", o.cv.maxIter},
            {"iterations", cv.iterationsRun}, {"converged", cv.converged}, {"energy", "chan_vese_energy.csv"}});

    {
        const RandomWalkerResult rw = randomWalker(input, markersFromHistogram(input), o.rwBeta);
        writeLabels(dir / "random_walker.pgm", rw.labels);
        record("segment-rw", input, "random_walker.pgm", {{"beta", o.rwBeta}});
    }

    {
        const Spectrum s = radialAverage(powerSpectrum2d(input), defaultRadialBins(input.width(), input.height()));
        writeText(dir / "power_spectrum.csv", spectrumCsv(s));
        record("power-spectrum", input, "power_spectrum.csv", {{"bins", s.counts.size()}});
    }

    {
        Image maskImage(cv.mask.width, cv.mask.height);
        for (std::size_t i = 0; i < maskImage.size(); ++i) maskImage.data()[i] = cv.mask.labels[i];
        const SplitResult split = splitOverlapping(cv.mask, o.splitMinDistance);
        writeLabels(dir / "watershed_split.pgm", split.labels);
        record("watershed-split", maskImage, "watershed_split.pgm", {{"min_distance", o.splitMinDistance}});
    }

    writeText(dir / "manifest.jsonl", manifest);
    std::cout << "chan-vese: " << cv.iterationsRun << " iterations, converged=" << (cv.converged ? "yes" : "no") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"astroimg: astronomical image processing toolkit"};
    app.require_subcommand(1);
    // -h is taken by --h (height, h-maxima dynamic), so help is long-form only.
    app.set_help_flag("--help", "Print this help message and exit");
    app.option_defaults()->always_capture_default();
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("--threads", threads, "Worker threads (results do not depend on this)")->check(CLI::PositiveNumber);

    std::function<int()> action;

    // synth ------------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "Generate a synthetic galaxy or disk fixture");
    SynthGalaxySpec gs;
    std::string profile = "exp";
    std::string noise = "none";
    double amount = 0.05;
    std::optional<std::uint64_t> synthSeed;
    double radius = 0.0;
    double separation = 14.0;
    std::string synthOut;
    synth->add_option("--w", gs.width, "Width in pixels");
    synth->add_option("--h", gs.height, "Height in pixels");
    synth->add_option("--profile", profile, "exp | disk | two-disks")->check(CLI::IsMember({"exp", "disk", "two-disks"}));
    synth->add_option("--noise", noise, "none | gauss:<sigma> | sp:<amount> | sp");
    synth->add_option("--amount", amount, "Salt-and-pepper fraction when --noise sp");
    synth->add_option("--seed", synthSeed, "RNG seed (required whenever noise is applied)");
    synth->add_option("--axis-ratio", gs.axisRatio, "Minor/major axis ratio (exp)");
    synth->add_option("--angle", gs.positionAngle, "Position angle in radians (exp)");
    synth->add_option("--scale", gs.scaleLength, "Scale length in pixels (exp)");
    synth->add_option("--peak", gs.peak, "Peak intensity (exp)");
    synth->add_option("--radius", radius, "Disk radius in pixels, 0 = min(w,h)/4 (disk, two-disks)");
    synth->add_option("--separation", separation, "Center distance in pixels (two-disks)");
    synth->add_option("-o,--output", synthOut, "Output raster")->required();
    synth->callback([&] {
        action = [&] {
            const NoiseSpec ns = parseNoise(noise, amount);
            if (ns.kind != NoiseKind::None && !synthSeed) throw UsageError("--seed is required when noise is applied");
            const std::uint64_t seed = synthSeed.value_or(0);
            const double cx = (gs.width - 1) / 2.0;
            const double cy = (gs.height - 1) / 2.0;
            const double r = radius > 0.0 ? radius : std::min(gs.width, gs.height) / 4.0;
            Image img;
            if (profile == "exp") {
                gs.cx = cx;
                gs.cy = cy;
                gs.noise = ns;
                gs.seed = seed;
                img = synthGalaxy(gs);
            } else {
                if (gs.width < 1 || gs.height < 1) throw UsageError("--w and --h must be positive");
                Image clean = profile == "disk" ? synthDisk(gs.width, gs.height, cx, cy, r)
                                                : synthDisk(gs.width, gs.height, cx - separation / 2, cy, r);
                if (profile == "two-disks") {
                    const Image other = synthDisk(gs.width, gs.height, cx + separation / 2, cy, r);
                    for (std::size_t i = 0; i < clean.size(); ++i) {
                        clean.data()[i] = std::max(clean.values()[i], other.values()[i]);
                    }
                }
                img = addNoise(clean, ns, seed);
            }
            writeImage(synthOut, img);
            return 0;
        };
    });

    // hmaxima ----------------------------------------------------------------
    auto* hmax = app.add_subcommand("hmaxima", "Mark peaks with dynamic >= h (input rescaled to [0,1])");
    std::string hIn, hOut;
    HMaxOpts ho;
    hmax->add_option("input", hIn, "Input raster")->required()->check(CLI::ExistingFile);
    hmax->add_option("-o,--output", hOut, "Output mask")->required();
    hmax->add_option("--h", ho.h, "Minimum peak dynamic");
    hmax->add_option("--conn", ho.conn, "Connectivity, 4 or 8")->check(CLI::IsMember({4, 8}));
    hmax->callback([&] {
        action = [&] {
            const Mask m = runHMaxima(readImage(hIn), ho);
            writeLabels(hOut, maskToLabels(m));
            std::cout << "maxima pixels: " << m.count() << "\n";
            return 0;
        };
    });

    // shape-index ------------------------------------------------------------
    auto* si = app.add_subcommand("shape-index", "Hessian shape index map");
    std::string siIn, siOut, siCaps;
    double siSigma = 1.0;
    double capTarget = 1.0;
    double capTol = 0.05;
    si->add_option("input", siIn, "Input raster")->required()->check(CLI::ExistingFile);
    si->add_option("-o,--output", siOut, "Shape index map (undefined pixels hold -2)")->required();
    si->add_option("--sigma", siSigma, "Smoothing scale in pixels");
    si->add_option("--caps", siCaps, "Optional cap mask output");
    si->add_option("--target", capTarget, "Cap mask target value");
    si->add_option("--tol", capTol, "Cap mask half-width");
    si->callback([&] {
        action = [&] {
            const Image map = shapeIndex(readImage(siIn), siSigma);
            writeImage(siOut, map);
            if (!siCaps.empty()) writeLabels(siCaps, maskToLabels(capMask(map, capTarget, capTol)));
            return 0;
        };
    });

    // gradients --------------------------------------------------------------
    auto* grad = app.add_subcommand("gradients", "Gradient magnitude, orientation and HSV orientation export");
    std::string gIn, gOut, gOri, gHsv;
    grad->add_option("input", gIn, "Input raster")->required()->check(CLI::ExistingFile);
    grad->add_option("-o,--output", gOut, "Gradient magnitude")->required();
    grad->add_option("--orientation", gOri, "Orientation map in radians");
    grad->add_option("--hsv", gHsv, "PPM with hue = orientation, value = magnitude");
    grad->callback([&] {
        action = [&] {
            const GradientField g = gradient(readImage(gIn));
            const Image mag = gradientMagnitude(g);
            writeImage(gOut, mag);
            const Image ori = gradientOrientation(g);
            if (!gOri.empty()) writeImage(gOri, ori);
            if (!gHsv.empty()) writePpm(gHsv, mag.width(), mag.height(), orientationHsv(ori, mag));
            return 0;
        };
    });

    // filterbank -------------------------------------------------------------
    auto* fb = app.add_subcommand("filterbank", "Learn a k-means filter bank from DoG-transformed patches");
    std::string fbIn, fbOut, fbCsv, fbLgn;
    FilterBankOpts fo;
    std::uint64_t fbSeed = 0;
    fb->add_option("input", fbIn, "Input raster")->required()->check(CLI::ExistingFile);
    fb->add_option("-o,--output", fbOut, "Montage of the learned filters")->required();
    fb->add_option("--seed", fbSeed, "k-means++ seed")->required();
    fb->add_option("--k", fo.k, "Number of filters");
    fb->add_option("--patch", fo.patch, "Odd patch side");
    fb->add_option("--stride", fo.stride, "Patch sampling stride");
    fb->add_option("--dog-t", fo.dogT, "DoG inner variance t");
    fb->add_option("--dog-dt", fo.dogDt, "DoG variance step dt");
    fb->add_option("--max-iter", fo.maxIter, "Lloyd iteration cap");
    fb->add_option("--csv", fbCsv, "Centroid weights as CSV");
    fb->add_option("--lgn", fbLgn, "LGN (DoG) image output");
    fb->callback([&] {
        action = [&] {
            const Image img = readImage(fbIn);
            const FilterBank bank = runFilterBank(img, fo, fbSeed);
            writeImage(fbOut, montage(bank));
            if (!fbCsv.empty()) writeText(fbCsv, centroidsCsv(bank));
            if (!fbLgn.empty()) writeImage(fbLgn, lgnImage(img, DoGParams{fo.dogT, fo.dogDt}));
            std::cout << "k-means iterations: " << bank.iterations << "\n";
            return 0;
        };
    });

    // denoise ----------------------------------------------------------------
    auto* dn = app.add_subcommand("denoise", "Non-local means with an estimated noise level");
    std::string dIn, dOut, dReport;
    DenoiseOpts dopt;
    dn->add_option("input", dIn, "Input raster")->required()->check(CLI::ExistingFile);
    dn->add_option("-o,--output", dOut, "Denoised raster")->required();
    dn->add_option("--variant", dopt.variant, "fast (uniform patch) | slow (Gaussian patch)");
    dn->add_option("--strength", dopt.h, "Filtering strength h, 0 = 1.15 (fast) / 0.8 (slow) x sigma_est");
    dn->add_option("--patch-radius", dopt.patchRadius, "Patch radius");
    dn->add_option("--search-radius", dopt.searchRadius, "Search window radius");
    dn->add_option("--sigma-patch", dopt.sigmaPatch, "Patch Gaussian std (slow)");
    dn->add_option("--report", dReport, "Write the estimated noise sigma to this file");
    dn->callback([&] {
        action = [&] {
            const auto [out, sigma] = runDenoise(readImage(dIn), dopt);
            writeImage(dOut, out);
            std::cout << "sigma_est=" << num(sigma) << "\n";
            if (!dReport.empty()) writeText(dReport, num(sigma) + "\n");
            return 0;
        };
    });

    // deconvolve -------------------------------------------------------------
    auto* dc = app.add_subcommand("deconvolve", "Wiener deconvolution with a Gaussian PSF");
    std::string cIn, cOut, cReport;
    DeconvOpts copt;
    double nsrValue = 0.0;
    bool autoNsr = false;
    dc->add_option("input", cIn, "Input raster")->required()->check(CLI::ExistingFile);
    dc->add_option("-o,--output", cOut, "Restored raster")->required();
    dc->add_option("--psf-sigma", copt.psfSigma, "Gaussian PSF std in pixels");
    dc->add_option("--psf-radius", copt.psfRadius, "PSF radius, 0 = ceil(3 sigma)");
    auto* nsrOpt = dc->add_option("--nsr", nsrValue, "Fixed noise-to-signal ratio");
    auto* autoOpt = dc->add_flag("--auto", autoNsr, "Pick nsr by residual whiteness over the grid");
    nsrOpt->excludes(autoOpt);
    dc->add_option("--grid-lo", copt.gridLo, "Smallest nsr candidate");
    dc->add_option("--grid-hi", copt.gridHi, "Largest nsr candidate");
    dc->add_option("--grid-n", copt.gridN, "Number of log-spaced candidates");
    dc->add_option("--report", cReport, "CSV of nsr,score per candidate (--auto)");
    dc->callback([&] {
        action = [&] {
            if (nsrOpt->count() == 0 && !autoNsr) throw UsageError("deconvolve needs --nsr <value> or --auto");
            if (nsrOpt->count() > 0) copt.nsr = nsrValue;
            const auto [out, report] = runDeconvolve(readImage(cIn), copt);
            writeImage(cOut, out);
            if (report) {
                std::cout << "chosen_nsr=" << num(report->chosenNsr) << "\n";
                if (!cReport.empty()) writeText(cReport, nsrCsv(*report));
            }
            return 0;
        };
    });

    // segment-cv -------------------------------------------------------------
    auto* cvCmd = app.add_subcommand("segment-cv", "Chan-Vese two-phase segmentation (input rescaled to [0,1])");
    std::string cvIn, cvOut, cvEnergy;
    ChanVeseParams cvp;
    cvCmd->add_option("input", cvIn, "Input raster")->required()->check(CLI::ExistingFile);
    cvCmd->add_option("-o,--output", cvOut, "Mask, 1 = brighter region")->required();
    cvCmd->add_option("--mu", cvp.mu, "Boundary length weight");
    cvCmd->add_option("--lambda1", cvp.lambda1, "Inside fidelity weight");
    cvCmd->add_option("--lambda2", cvp.lambda2, "Outside fidelity weight");
    cvCmd->add_option("--dt", cvp.dt, "Time step");
    cvCmd->add_option("--tol", cvp.tol, "Mean |delta phi| stopping tolerance");
    cvCmd->add_option("--max-iter", cvp.maxIter, "Iteration cap");
    cvCmd->add_option("--energy", cvEnergy, "Energy trace CSV (iteration,energy)");
    cvCmd->callback([&] {
        action = [&] {
            const ChanVeseResult r = runChanVese(readImage(cvIn), cvp);
            writeLabels(cvOut, r.mask);
            if (!cvEnergy.empty()) writeText(cvEnergy, energyCsv(r.energyTrace));
            std::cout << "iterations=" << r.iterationsRun << " converged=" << (r.converged ? "yes" : "no") << "\n";
            return 0;
        };
    });

    // segment-rw -------------------------------------------------------------
    auto* rwCmd = app.add_subcommand("segment-rw", "Random walker with histogram-tail markers");
    std::string rwIn, rwOut, rwProb;
    double beta = 90.0;
    double lowQ = 0.05;
    double highQ = 0.95;
    rwCmd->add_option("input", rwIn, "Input raster")->required()->check(CLI::ExistingFile);
    rwCmd->add_option("-o,--output", rwOut, "Label map (1 = dark tail, 2 = bright tail)")->required();
    rwCmd->add_option("--beta", beta, "Edge weight sharpness");
    rwCmd->add_option("--low-q", lowQ, "Quantile for label 1 markers");
    rwCmd->add_option("--high-q", highQ, "Quantile for label 2 markers");
    rwCmd->add_option("--prob", rwProb, "Probability map of label 2");
    rwCmd->callback([&] {
        action = [&] {
            const Image img = readImage(rwIn);
            const RandomWalkerResult r = randomWalker(img, markersFromHistogram(img, lowQ, highQ), beta);
            writeLabels(rwOut, r.labels);
            if (!rwProb.empty()) writeImage(rwProb, r.probabilities.back());
            return 0;
        };
    });

    // watershed-split --------------------------------------------------------
    auto* ws = app.add_subcommand("watershed-split", "Split touching objects by watershed on the distance map");
    std::string wsIn, wsOut, wsDist;
    double level = 0.5;
    double minDistance = 5.0;
    ws->add_option("input", wsIn, "Input raster (foreground = value > level)")->required()->check(CLI::ExistingFile);
    ws->add_option("-o,--output", wsOut, "Label map")->required();
    ws->add_option("--level", level, "Foreground threshold");
    ws->add_option("--min-distance", minDistance, "Minimum separation between seeds in pixels");
    ws->add_option("--distance", wsDist, "Distance transform output");
    ws->callback([&] {
        action = [&] {
            const SplitResult r = splitOverlapping(threshold(readImage(wsIn), level), minDistance);
            writeLabels(wsOut, r.labels);
            if (!wsDist.empty()) writeImage(wsDist, r.distance);
            std::cout << "labels=" << r.labels.maxLabel() << "\n";
            return 0;
        };
    });

    // power-spectrum ---------------------------------------------------------
    auto* ps = app.add_subcommand("power-spectrum", "Radially averaged power spectrum");
    std::string psIn, psOut, ps2d;
    int bins = 0;
    bool hann = false;
    ps->add_option("input", psIn, "Input raster")->required()->check(CLI::ExistingFile);
    ps->add_option("-o,--output", psOut, "CSV of bin,freq,power,count")->required();
    ps->add_option("--bins", bins, "Radial bins, 0 = min(W,H)/2");
    ps->add_flag("--hann", hann, "Apply a Hann window first");
    ps->add_option("--power2d", ps2d, "Centered 2-D power spectrum raster");
    ps->callback([&] {
        action = [&] {
            Image img = readImage(psIn);
            if (hann) img = hannWindow(img);
            const Image power = powerSpectrum2d(img);
            const Spectrum s = radialAverage(power, bins > 0 ? bins : defaultRadialBins(img.width(), img.height()));
            writeText(psOut, spectrumCsv(s));
            if (!ps2d.empty()) writeImage(ps2d, power);
            return 0;
        };
    });

    // pipeline ---------------------------------------------------------------
    auto* pl = app.add_subcommand("pipeline", "Run every stage in order, one artifact per stage plus a manifest");
    PipelineOpts po;
    pl->add_option("input", po.input, "Input raster (omit with --demo)")->check(CLI::ExistingFile);
    pl->add_flag("--demo", po.demo, "Use the built-in synthetic galaxy");
    pl->add_option("-o,--out-dir", po.outDir, "Artifact directory");
    pl->add_option("--seed", po.seed, "Seed for the demo noise and the k-means filter bank");
    pl->add_option("--h", po.hmax.h, "h-maxima dynamic");
    pl->add_option("--si-sigma", po.siSigma, "Shape index scale");
    pl->add_option("--k", po.bank.k, "Filter bank size");
    pl->add_option("--patch", po.bank.patch, "Filter bank patch side");
    pl->add_option("--psf-sigma", po.deconv.psfSigma, "Gaussian PSF std for restoration");
    pl->add_option("--mu", po.cv.mu, "Chan-Vese boundary weight");
    pl->add_option("--lambda1", po.cv.lambda1, "Chan-Vese inside weight");
    pl->add_option("--lambda2", po.cv.lambda2, "Chan-Vese outside weight");
    pl->add_option("--max-iter", po.cv.maxIter, "Chan-Vese iteration cap");
    pl->add_option("--beta", po.rwBeta, "Random walker beta");
    pl->add_option("--min-distance", po.splitMinDistance, "Watershed seed separation");
    pl->callback([&] { action = [&] { return runPipeline(po); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    setThreadCount(threads);
    try {
        return action ? action() : kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParameterError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
