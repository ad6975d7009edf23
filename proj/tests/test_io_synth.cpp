#include <astroimg/raster_io.h>
#include <astroimg/synth.h>
#include <gtest/gtest.h>

#include "oracles.h"

#include <cmath>
#include <filesystem>
#include <string>

using namespace std::string_literals;

namespace astroimg {
namespace {

std::vector<std::uint8_t> bytesOf(const std::string& s) { return {s.begin(), s.end()}; }

TEST(RasterIo, F32RoundTripIsFloatExact) {
    std::mt19937_64 rng(91);
    const Image img = oracle::randomImage(7, 3, rng, -2.0, 5.0);
    const Image back = decodeImage(encodeImage(img, RasterFormat::F32Raw));
    ASSERT_TRUE(back.sameShape(img));
    for (std::size_t i = 0; i < img.size(); ++i) {
        EXPECT_EQ(back.values()[i], static_cast<double>(static_cast<float>(img.values()[i])));
    }
}

TEST(RasterIo, PgmQuantizesAndClamps) {
    Image img(4, 1);
    img(0, 0) = -0.5;
    img(1, 0) = 0.5;
    img(2, 0) = 1.0;
    img(3, 0) = 7.0;
    const auto bytes = encodeImage(img, RasterFormat::Pgm8);
    const std::string header = "P5\n4 1\n255\n";
    ASSERT_EQ(std::string(bytes.begin(), bytes.begin() + header.size()), header);
    EXPECT_EQ(bytes[header.size() + 0], 0);
    EXPECT_EQ(bytes[header.size() + 1], 128);
    EXPECT_EQ(bytes[header.size() + 3], 255);
    const Image back = decodeImage(bytes);
    EXPECT_DOUBLE_EQ(back(1, 0), 128.0 / 255.0);
    EXPECT_EQ(decodeImage(encodePgmAscii(img)).values(), back.values());
}

TEST(RasterIo, AsciiPgmWithComments) {
    const Image img = decodeImage(bytesOf("P2\n# comment\n2 2\n255\n0 255\n51 102\n"));
    EXPECT_DOUBLE_EQ(img(1, 0), 1.0);
    EXPECT_DOUBLE_EQ(img(0, 1), 0.2);
}

TEST(RasterIo, ParseErrorsCarryOffsets) {
    auto offsetOf = [](const std::string& s) {
        try {
            decodeImage(bytesOf(s));
        } catch (const ParseError& e) {
            return static_cast<long>(e.offset());
        }
        return -1L;
    };
    EXPECT_EQ(offsetOf("P7\n1 1\n255\n"), 0);
    EXPECT_EQ(offsetOf("P5\n2 2\n65535\n"), 7);
    EXPECT_EQ(offsetOf("P5\n2 2\n255\nab"), 13);
    EXPECT_EQ(offsetOf("P2\n2 1\n255\n4 300\n"), 13);
    EXPECT_EQ(offsetOf("P5\n0 2\n255\n"), 3);
    EXPECT_EQ(offsetOf("IMGF32 1 1\n\x00\x00\x80\x3f\x00"s), 15);
    EXPECT_EQ(offsetOf("IMGF32 1 1\n\x00\x00"s), 13);
}

TEST(RasterIo, FormatFromExtension) {
    EXPECT_EQ(formatFromPath("a/b.PGM"), RasterFormat::Pgm8);
    EXPECT_EQ(formatFromPath("a/b.f32"), RasterFormat::F32Raw);
}

TEST(RasterIo, FileRoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "astroimg_io_test";
    std::filesystem::create_directories(dir);
    const Image img(5, 4, 0.25);
    writeImage(dir / "x.f32", img);
    EXPECT_EQ(readImage(dir / "x.f32").values(), img.values());
    writeImage(dir / "x.pgm", img);
    EXPECT_NEAR(readImage(dir / "x.pgm")(2, 2), 64.0 / 255.0, 1e-15);
    EXPECT_THROW(readImage(dir / "missing.f32"), Error);
    std::filesystem::remove_all(dir);
}

TEST(Synth, GalaxyProfileMatchesFormula) {
    SynthGalaxySpec spec;
    spec.width = 32;
    spec.height = 24;
    spec.cx = 15.0;
    spec.cy = 11.0;
    spec.axisRatio = 0.5;
    spec.positionAngle = 0.0;
    spec.scaleLength = 4.0;
    const Image img = synthGalaxy(spec);
    EXPECT_DOUBLE_EQ(img(15, 11), 1.0);
    EXPECT_NEAR(img(19, 11), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(img(15, 13), std::exp(-1.0), 1e-15);  // minor axis stretched by 1/q
}

TEST(Synth, SeededNoiseIsReproducible) {
    SynthGalaxySpec spec;
    spec.width = spec.height = 16;
    spec.noise = {NoiseKind::Gaussian, 0.1, 0.0};
    spec.seed = 4;
    EXPECT_EQ(synthGalaxy(spec).values(), synthGalaxy(spec).values());
    SynthGalaxySpec other = spec;
    other.seed = 5;
    EXPECT_NE(synthGalaxy(spec).values(), synthGalaxy(other).values());
}

TEST(Synth, SaltPepperFraction) {
    const Image base(100, 100, 0.5);
    const Image out = addNoise(base, {NoiseKind::SaltPepper, 0.0, 0.1}, 8);
    int changed = 0;
    for (double v : out.data()) {
        if (v != 0.5) {
            ++changed;
            EXPECT_TRUE(v == 0.0 || v == 1.0);
        }
    }
    EXPECT_NEAR(changed / 10000.0, 0.1, 0.01);
}

TEST(Synth, Validation) {
    SynthGalaxySpec spec;
    spec.axisRatio = 1.5;
    EXPECT_THROW(synthGalaxy(spec), ParameterError);
    spec = SynthGalaxySpec{};
    spec.noise = {NoiseKind::SaltPepper, 0.0, 2.0};
    EXPECT_THROW(synthGalaxy(spec), ParameterError);
}

TEST(Synth, DiskIncludesBoundary) {
    const Image d = synthDisk(11, 11, 5.0, 5.0, 3.0);
    EXPECT_EQ(d(8, 5), 1.0);
    EXPECT_EQ(d(9, 5), 0.0);
    EXPECT_EQ(d(7, 7), 1.0);  // r^2 = 8 <= 9
}

}  // namespace
}  // namespace astroimg
