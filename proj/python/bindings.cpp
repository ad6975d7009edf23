#include <astroimg/astroimg.h>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

namespace py = pybind11;
using namespace astroimg;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Image toImage(const Array& a) {
    if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
    const auto h = static_cast<int>(a.shape(0));
    const auto w = static_cast<int>(a.shape(1));
    return Image(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

Array fromImage(const Image& img) {
    Array out({img.height(), img.width()});
    std::copy(img.values().begin(), img.values().end(), out.mutable_data());
    return out;
}

py::array_t<int> fromLabels(const LabelMap& m) {
    py::array_t<int> out({m.height, m.width});
    std::copy(m.labels.begin(), m.labels.end(), out.mutable_data());
    return out;
}

py::array_t<bool> fromMask(const Mask& m) {
    py::array_t<bool> out({m.height, m.width});
    std::transform(m.bits.begin(), m.bits.end(), out.mutable_data(), [](std::uint8_t b) { return b != 0; });
    return out;
}

LabelMap toLabels(const py::array_t<int, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
    LabelMap m(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    std::copy(a.data(), a.data() + a.size(), m.labels.begin());
    return m;
}

MarkerSet toMarkers(const py::array_t<int, py::array::c_style | py::array::forcecast>& a) {
    const LabelMap m = toLabels(a);
    MarkerSet out;
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (m(x, y) > 0) out.markers.push_back({x, y, m(x, y)});
        }
    }
    return out;
}

Connectivity toConn(int conn) {
    if (conn == 4) return Connectivity::Four;
    if (conn == 8) return Connectivity::Eight;
    throw ParameterError("connectivity must be 4 or 8");
}

NoiseSpec toNoise(const std::string& kind, double sigma, double amount) {
    if (kind == "none") return {};
    if (kind == "gauss") return {NoiseKind::Gaussian, sigma, 0.0};
    if (kind == "sp") return {NoiseKind::SaltPepper, 0.0, amount};
    throw ParameterError("noise must be none, gauss or sp");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Astronomical image processing primitives";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DimensionError>(m, "DimensionError", error.ptr());
    py::register_exception<ParameterError>(m, "ParameterError", error.ptr());
    py::register_exception<ContractError>(m, "ContractError", error.ptr());
    py::register_exception<SingularError>(m, "SingularError", error.ptr());
    py::register_exception<DegenerateError>(m, "DegenerateError", error.ptr());
    py::register_exception<ParseError>(m, "ParseError", error.ptr());

    m.def("set_thread_count", &setThreadCount, py::arg("n"));
    m.def("thread_count", &threadCount);

    m.def(
        "synth_galaxy",
        [](int width, int height, double axisRatio, double angle, double scale, double peak,
           const std::string& noise, double sigma, double amount, std::uint64_t seed) {
            SynthGalaxySpec spec;
            spec.width = width;
            spec.height = height;
            spec.cx = (width - 1) / 2.0;
            spec.cy = (height - 1) / 2.0;
            spec.axisRatio = axisRatio;
            spec.positionAngle = angle;
            spec.scaleLength = scale;
            spec.peak = peak;
            spec.noise = toNoise(noise, sigma, amount);
            spec.seed = seed;
            return fromImage(synthGalaxy(spec));
        },
        py::arg("width") = 128, py::arg("height") = 128, py::arg("axis_ratio") = 0.6, py::arg("angle") = 0.5,
        py::arg("scale") = 12.0, py::arg("peak") = 1.0, py::arg("noise") = "none", py::arg("sigma") = 0.0,
        py::arg("amount") = 0.0, py::arg("seed") = 0);
    m.def(
        "synth_disk",
        [](int width, int height, double cx, double cy, double radius) {
            return fromImage(synthDisk(width, height, cx, cy, radius));
        },
        py::arg("width"), py::arg("height"), py::arg("cx"), py::arg("cy"), py::arg("radius"));
    m.def(
        "add_noise",
        [](const Array& img, const std::string& noise, double sigma, double amount, std::uint64_t seed) {
            return fromImage(addNoise(toImage(img), toNoise(noise, sigma, amount), seed));
        },
        py::arg("img"), py::arg("noise"), py::arg("sigma") = 0.0, py::arg("amount") = 0.0, py::arg("seed"));

    m.def(
        "hmaxima",
        [](const Array& img, double h, int conn) { return fromMask(hMaxima(toImage(img), h, toConn(conn))); },
        py::arg("img"), py::arg("h"), py::arg("conn") = 8);
    m.def(
        "shape_index", [](const Array& img, double sigma) { return fromImage(shapeIndex(toImage(img), sigma)); },
        py::arg("img"), py::arg("sigma") = 1.0);
    m.def(
        "gradients",
        [](const Array& img) {
            const GradientField g = gradient(toImage(img));
            return py::make_tuple(fromImage(gradientMagnitude(g)), fromImage(gradientOrientation(g)));
        },
        py::arg("img"));

    m.def("estimate_noise_sigma", [](const Array& img) { return estimateNoiseSigma(toImage(img)); }, py::arg("img"));
    m.def(
        "nlm_denoise",
        [](const Array& img, double h, int patchRadius, int searchRadius, bool gaussian, double sigmaPatch,
           double sigma) {
            NlmParams p;
            p.h = h;
            p.patchRadius = patchRadius;
            p.searchRadius = searchRadius;
            p.weighting = gaussian ? PatchWeighting::GaussianSpatial : PatchWeighting::Uniform;
            p.sigmaPatch = sigmaPatch;
            p.sigma = sigma;
            return fromImage(nlmDenoise(toImage(img), p));
        },
        py::arg("img"), py::arg("h"), py::arg("patch_radius") = 3, py::arg("search_radius") = 10,
        py::arg("gaussian") = false, py::arg("sigma_patch") = 1.5, py::arg("sigma") = 0.0);
    m.def(
        "wiener_deconvolve",
        [](const Array& img, double psfSigma, int psfRadius, double nsr) {
            return fromImage(wienerDeconvolve(toImage(img), {gaussianPsf(psfSigma, psfRadius), nsr}));
        },
        py::arg("img"), py::arg("psf_sigma"), py::arg("psf_radius"), py::arg("nsr"));

    m.def(
        "chan_vese",
        [](const Array& img, double mu, double lambda1, double lambda2, double dt, double tol, int maxIter) {
            ChanVeseParams p;
            p.mu = mu;
            p.lambda1 = lambda1;
            p.lambda2 = lambda2;
            p.dt = dt;
            p.tol = tol;
            p.maxIter = maxIter;
            const ChanVeseResult r = chanVese(toImage(img), p);
            return py::make_tuple(fromLabels(r.mask), r.energyTrace, r.converged);
        },
        py::arg("img"), py::arg("mu") = 0.5, py::arg("lambda1") = 1.0, py::arg("lambda2") = 2.0, py::arg("dt") = 0.5,
        py::arg("tol") = 1e-3, py::arg("max_iter") = 200);
    m.def(
        "random_walker",
        [](const Array& img, const py::array_t<int, py::array::c_style | py::array::forcecast>& markers,
           double beta) {
            const RandomWalkerResult r = randomWalker(toImage(img), toMarkers(markers), beta);
            py::list probs;
            for (const Image& p : r.probabilities) probs.append(fromImage(p));
            return py::make_tuple(fromLabels(r.labels), probs);
        },
        py::arg("img"), py::arg("markers"), py::arg("beta") = 90.0);
    m.def(
        "markers_from_histogram",
        [](const Array& img, double lowQ, double highQ) {
            const Image im = toImage(img);
            LabelMap out(im.width(), im.height(), 0);
            for (const Marker& mk : markersFromHistogram(im, lowQ, highQ).markers) out(mk.x, mk.y) = mk.label;
            return fromLabels(out);
        },
        py::arg("img"), py::arg("low_q") = 0.05, py::arg("high_q") = 0.95);
    m.def(
        "distance_transform",
        [](const py::array_t<int, py::array::c_style | py::array::forcecast>& mask) {
            return fromImage(distanceTransform(toLabels(mask)));
        },
        py::arg("mask"));
    m.def(
        "split_overlapping",
        [](const py::array_t<int, py::array::c_style | py::array::forcecast>& mask, double minDistance) {
            const SplitResult r = splitOverlapping(toLabels(mask), minDistance);
            return py::make_tuple(fromLabels(r.labels), fromImage(r.distance));
        },
        py::arg("mask"), py::arg("min_distance") = 5.0);

    m.def(
        "power_spectrum",
        [](const Array& img, int bins, bool hann) {
            Image im = toImage(img);
            if (hann) im = hannWindow(im);
            const Image p2 = powerSpectrum2d(im);
            const Spectrum s = radialAverage(p2, bins > 0 ? bins : defaultRadialBins(im.width(), im.height()));
            return py::make_tuple(s.radialFreq, s.radialPower, fromImage(p2));
        },
        py::arg("img"), py::arg("bins") = 0, py::arg("hann") = false);
}
