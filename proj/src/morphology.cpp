#include <astroimg/morphology.h>

#include <algorithm>
#include <deque>
#include <span>
#include <vector>

namespace astroimg {

namespace {

struct Offset {
    int dx;
    int dy;
};

constexpr Offset kFour[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
constexpr Offset kEight[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};

// Neighbors already visited by a forward raster scan.
constexpr Offset kFourBefore[] = {{-1, 0}, {0, -1}};
constexpr Offset kEightBefore[] = {{-1, 0}, {0, -1}, {-1, -1}, {1, -1}};
constexpr Offset kFourAfter[] = {{1, 0}, {0, 1}};
constexpr Offset kEightAfter[] = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}};

std::span<const Offset> neighbors(Connectivity conn) {
    return conn == Connectivity::Four ? std::span<const Offset>(kFour) : std::span<const Offset>(kEight);
}

}  // namespace

Mask regionalMaxima(const Image& img, Connectivity conn) {
    const int w = img.width();
    const int h = img.height();
    Mask out(w, h);
    std::vector<std::uint8_t> visited(img.size(), 0);
    std::vector<int> plateau;
    std::vector<int> stack;

    for (int start = 0; start < static_cast<int>(img.size()); ++start) {
        if (visited[start]) continue;
        const double level = img.values()[start];
        bool isMax = true;
        plateau.clear();
        stack.assign(1, start);
        visited[start] = 1;
        while (!stack.empty()) {
            const int p = stack.back();
            stack.pop_back();
            plateau.push_back(p);
            const int px = p % w;
            const int py = p / w;
            for (const auto& o : neighbors(conn)) {
                const int nx = px + o.dx;
                const int ny = py + o.dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const int q = ny * w + nx;
                const double v = img.values()[q];
                if (v > level) {
                    isMax = false;
                } else if (v == level && !visited[q]) {
                    visited[q] = 1;
                    stack.push_back(q);
                }
            }
        }
        if (isMax) {
            for (int p : plateau) out.bits[p] = 1;
        }
    }
    return out;
}

Image reconstructByDilation(const Image& marker, const Image& mask, Connectivity conn) {
    if (!marker.sameShape(mask)) throw DimensionError("marker and mask shapes differ");
    for (std::size_t i = 0; i < marker.size(); ++i) {
        if (marker.values()[i] > mask.values()[i]) {
            throw ContractError("reconstruction marker exceeds mask");
        }
    }
    const int w = mask.width();
    const int h = mask.height();
    Image rec = marker;
    auto r = rec.data();
    auto m = mask.data();

    const std::span<const Offset> before =
        conn == Connectivity::Four ? std::span<const Offset>(kFourBefore) : std::span<const Offset>(kEightBefore);
    const std::span<const Offset> after =
        conn == Connectivity::Four ? std::span<const Offset>(kFourAfter) : std::span<const Offset>(kEightAfter);

    auto inside = [w, h](int x, int y) { return x >= 0 && y >= 0 && x < w && y < h; };

    // Forward sweep.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int p = y * w + x;
            double v = r[p];
            for (const auto& o : before) {
                if (inside(x + o.dx, y + o.dy)) v = std::max(v, r[(y + o.dy) * w + x + o.dx]);
            }
            r[p] = std::min(v, m[p]);
        }
    }

    // Backward sweep; seed the queue with pixels that can still propagate.
    std::deque<int> fifo;
    for (int y = h - 1; y >= 0; --y) {
        for (int x = w - 1; x >= 0; --x) {
            const int p = y * w + x;
            double v = r[p];
            for (const auto& o : after) {
                if (inside(x + o.dx, y + o.dy)) v = std::max(v, r[(y + o.dy) * w + x + o.dx]);
            }
            r[p] = std::min(v, m[p]);
            for (const auto& o : after) {
                const int nx = x + o.dx;
                const int ny = y + o.dy;
                if (!inside(nx, ny)) continue;
                const int q = ny * w + nx;
                if (r[q] < r[p] && r[q] < m[q]) {
                    fifo.push_back(p);
                    break;
                }
            }
        }
    }

    while (!fifo.empty()) {
        const int p = fifo.front();
        fifo.pop_front();
        const int px = p % w;
        const int py = p / w;
        for (const auto& o : neighbors(conn)) {
            const int nx = px + o.dx;
            const int ny = py + o.dy;
            if (!inside(nx, ny)) continue;
            const int q = ny * w + nx;
            if (r[q] < r[p] && r[q] != m[q]) {
                r[q] = std::min(r[p], m[q]);
                fifo.push_back(q);
            }
        }
    }
    return rec;
}

Image hMaxTransform(const Image& img, double h, Connectivity conn) {
    if (!(h > 0.0)) throw ParameterError("h must be positive");
    return reconstructByDilation(img + (-h), img, conn);
}

Mask hMaxima(const Image& img, double h, Connectivity conn) {
    if (!(h > 0.0)) throw ParameterError("h must be positive");
    const Image marker = img + (-h);
    const Image rec = reconstructByDilation(marker, img, conn);
    Mask peaks = regionalMaxima(rec, conn);
    for (std::size_t i = 0; i < peaks.bits.size(); ++i) {
        if (peaks.bits[i] && rec.values()[i] != marker.values()[i]) peaks.bits[i] = 0;
    }
    return peaks;
}

}  // namespace astroimg
