#include <astroimg/raster_io.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

namespace astroimg {

namespace {

class Cursor {
public:
    explicit Cursor(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }
    bool atEnd() const { return pos_ >= bytes_.size(); }

    // Skips whitespace and '#' comments (PGM header rules).
    void skipSpace() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    long readUnsigned(const char* what) {
        skipSpace();
        const std::size_t start = pos_;
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000L) throw ParseError(std::string(what) + " out of range", start);
            ++pos_;
        }
        if (pos_ == start) throw ParseError(std::string("expected ") + what, start);
        return value;
    }

    void expectSingleWhitespace() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw ParseError("expected whitespace after header", pos_);
        }
        ++pos_;
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }
    const std::uint8_t* here() const { return bytes_.data() + pos_; }
    void advance(std::size_t n) { pos_ += n; }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

void checkDimensions(long w, long h, std::size_t offset) {
    if (w < 1 || h < 1) throw ParseError("image dimensions must be positive", offset);
    if (w * h > 1'000'000'000L / 4) throw ParseError("image dimensions too large", offset);
}

Image decodePgm(const std::vector<std::uint8_t>& bytes, bool binary) {
    Cursor cur(bytes);
    cur.advance(2);
    cur.skipSpace();
    const std::size_t dimOffset = cur.offset();
    const long w = cur.readUnsigned("width");
    const long h = cur.readUnsigned("height");
    checkDimensions(w, h, dimOffset);
    cur.skipSpace();
    const std::size_t maxOffset = cur.offset();
    const long maxval = cur.readUnsigned("maxval");
    if (maxval != 255) throw ParseError("only maxval 255 is supported", maxOffset);

    const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    std::vector<double> data(count);
    if (binary) {
        cur.expectSingleWhitespace();
        if (cur.remaining() < count) throw ParseError("truncated P5 payload", bytes.size());
        for (std::size_t i = 0; i < count; ++i) data[i] = cur.here()[i] / 255.0;
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            cur.skipSpace();
            if (cur.atEnd()) throw ParseError("truncated P2 payload", cur.offset());
            const std::size_t at = cur.offset();
            const long v = cur.readUnsigned("pixel value");
            if (v > 255) throw ParseError("pixel value exceeds maxval", at);
            data[i] = static_cast<double>(v) / 255.0;
        }
    }
    return Image(static_cast<int>(w), static_cast<int>(h), std::move(data));
}

Image decodeF32(const std::vector<std::uint8_t>& bytes) {
    Cursor cur(bytes);
    cur.advance(6);
    if (cur.atEnd() || bytes[cur.offset()] != ' ') throw ParseError("expected space after IMGF32", cur.offset());
    cur.skipSpace();
    const std::size_t dimOffset = cur.offset();
    const long w = cur.readUnsigned("width");
    const long h = cur.readUnsigned("height");
    checkDimensions(w, h, dimOffset);
    if (cur.atEnd() || bytes[cur.offset()] != '\n') throw ParseError("expected newline after header", cur.offset());
    cur.advance(1);

    const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (cur.remaining() < count * 4) throw ParseError("truncated IMGF32 payload", bytes.size());
    if (cur.remaining() > count * 4) throw ParseError("trailing bytes after IMGF32 payload", cur.offset() + count * 4);
    std::vector<double> data(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint8_t* p = cur.here() + 4 * i;
        const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                                   (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
        data[i] = static_cast<double>(std::bit_cast<float>(bits));
    }
    return Image(static_cast<int>(w), static_cast<int>(h), std::move(data));
}

std::uint8_t quantize(double v) {
    if (std::isnan(v)) return 0;
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void appendText(std::vector<std::uint8_t>& out, const std::string& s) { out.insert(out.end(), s.begin(), s.end()); }

}  // namespace

RasterFormat formatFromPath(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".pgm" ? RasterFormat::Pgm8 : RasterFormat::F32Raw;
}

Image decodeImage(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decodePgm(bytes, true);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '2') return decodePgm(bytes, false);
    if (bytes.size() >= 6 && std::memcmp(bytes.data(), "IMGF32", 6) == 0) return decodeF32(bytes);
    throw ParseError("unsupported magic number", 0);
}

std::vector<std::uint8_t> encodeImage(const Image& img, RasterFormat format) {
    std::vector<std::uint8_t> out;
    if (format == RasterFormat::Pgm8) {
        appendText(out, "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n");
        for (double v : img.data()) out.push_back(quantize(v));
        return out;
    }
    appendText(out, "IMGF32 " + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n");
    out.reserve(out.size() + img.size() * 4);
    for (double v : img.data()) {
        const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        out.push_back(static_cast<std::uint8_t>(bits & 0xFF));
        out.push_back(static_cast<std::uint8_t>((bits >> 8) & 0xFF));
        out.push_back(static_cast<std::uint8_t>((bits >> 16) & 0xFF));
        out.push_back(static_cast<std::uint8_t>((bits >> 24) & 0xFF));
    }
    return out;
}

std::vector<std::uint8_t> encodePgmAscii(const Image& img) {
    std::vector<std::uint8_t> out;
    appendText(out, "P2\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n");
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            appendText(out, std::to_string(quantize(img(x, y))));
            out.push_back(x + 1 == img.width() ? '\n' : ' ');
        }
    }
    return out;
}

std::vector<std::uint8_t> readBytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void writeBytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for " + path.string());
}

Image readImage(const std::filesystem::path& path) { return decodeImage(readBytes(path)); }

void writeImage(const std::filesystem::path& path, const Image& img, RasterFormat format) {
    writeBytes(path, encodeImage(img, format));
}

void writeImage(const std::filesystem::path& path, const Image& img) { writeImage(path, img, formatFromPath(path)); }

void writePpm(const std::filesystem::path& path, int width, int height, const std::vector<std::uint8_t>& rgb) {
    if (rgb.size() != static_cast<std::size_t>(width) * height * 3) throw DimensionError("PPM buffer size mismatch");
    std::vector<std::uint8_t> out;
    appendText(out, "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n");
    out.insert(out.end(), rgb.begin(), rgb.end());
    writeBytes(path, out);
}

}  // namespace astroimg
