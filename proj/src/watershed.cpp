#include <astroimg/segment.h>
#include <astroimg/morphology.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

namespace astroimg {

namespace {

// Squared distance to the nearest site along one line (Felzenszwalb & Huttenlocher).
// Sites are the finite entries of f; the output is +inf when the line has none.
void lowerEnvelope(const std::vector<double>& f, std::vector<double>& out,
                   std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (!std::isfinite(f[q])) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kNoBackground;
            z[1] = kNoBackground;
            continue;
        }
        double s;
        while (true) {
            const int p = v[k];
            s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
                (2.0 * (q - p));
            if (s <= z[k] && k > 0) {
                --k;
            } else {
                break;
            }
        }
        if (s <= z[k]) {
            // k == 0 and the new parabola dominates everywhere.
            v[0] = q;
            z[0] = -kNoBackground;
            z[1] = kNoBackground;
            continue;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kNoBackground;
    }
    if (k < 0) {
        std::fill(out.begin(), out.end(), kNoBackground);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < q) ++j;
        const double d = q - v[j];
        out[q] = d * d + f[v[j]];
    }
}

}  // namespace

Image distanceTransform(const LabelMap& mask) {
    const int w = mask.width;
    const int h = mask.height;
    Image sq(w, h);
    for (std::size_t i = 0; i < sq.size(); ++i) {
        sq.data()[i] = mask.labels[i] == 0 ? 0.0 : kNoBackground;
    }

    const int longest = std::max(w, h);
    std::vector<double> f;
    std::vector<double> out;
    std::vector<int> v(static_cast<std::size_t>(longest));
    std::vector<double> z(static_cast<std::size_t>(longest) + 1);

    f.resize(static_cast<std::size_t>(h));
    out.resize(static_cast<std::size_t>(h));
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) f[y] = sq(x, y);
        lowerEnvelope(f, out, v, z);
        for (int y = 0; y < h; ++y) sq(x, y) = out[y];
    }
    f.resize(static_cast<std::size_t>(w));
    out.resize(static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) f[x] = sq(x, y);
        lowerEnvelope(f, out, v, z);
        for (int x = 0; x < w; ++x) sq(x, y) = out[x];
    }
    for (double& d : sq.data()) d = std::sqrt(d);
    return sq;
}

LabelMap watershed(const Image& relief, const MarkerSet& markers, Connectivity conn, const LabelMap* domain) {
    if (markers.markers.empty()) throw ParameterError("watershed needs at least one marker");
    const int w = relief.width();
    const int h = relief.height();
    if (domain && (domain->width != w || domain->height != h)) {
        throw DimensionError("watershed domain shape differs from relief");
    }
    auto allowed = [&](int p) { return !domain || domain->labels[p] != 0; };

    using Entry = std::tuple<double, std::uint64_t, int, int>;  // relief, sequence, pixel, label
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    std::uint64_t sequence = 0;
    for (const auto& m : markers.markers) {
        if (m.x < 0 || m.y < 0 || m.x >= w || m.y >= h) throw ParameterError("marker outside the image");
        if (m.label < 1) throw ParameterError("marker labels must be >= 1");
        const int p = m.y * w + m.x;
        if (!allowed(p)) continue;
        queue.emplace(relief.values()[p], sequence++, p, m.label);
    }

    LabelMap labels(w, h, 0);
    const int dx8[] = {1, -1, 0, 0, 1, -1, 1, -1};
    const int dy8[] = {0, 0, 1, -1, 1, -1, -1, 1};
    const int count = conn == Connectivity::Four ? 4 : 8;

    while (!queue.empty()) {
        const auto [value, seq, p, label] = queue.top();
        queue.pop();
        if (labels.labels[p] != 0) continue;
        labels.labels[p] = label;
        const int x = p % w;
        const int y = p / w;
        for (int k = 0; k < count; ++k) {
            const int nx = x + dx8[k];
            const int ny = y + dy8[k];
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const int q = ny * w + nx;
            if (labels.labels[q] != 0 || !allowed(q)) continue;
            queue.emplace(relief.values()[q], sequence++, q, label);
        }
    }
    return labels;
}

SplitResult splitOverlapping(const LabelMap& mask, double peakMinDistance) {
    const int w = mask.width;
    const int h = mask.height;
    if (std::all_of(mask.labels.begin(), mask.labels.end(), [](int v) { return v == 0; })) {
        throw DegenerateError("mask has no foreground");
    }
    SplitResult result;
    result.distance = distanceTransform(mask);

    constexpr double kPeakDynamic = 0.5;
    const Mask peakMask = hMaxima(result.distance, kPeakDynamic, Connectivity::Eight);

    // Group peak pixels into plateaus.
    struct Plateau {
        double value;
        int first;
        std::vector<int> pixels;
    };
    std::vector<Plateau> plateaus;
    std::vector<std::uint8_t> seen(mask.labels.size(), 0);
    for (int p = 0; p < w * h; ++p) {
        if (!peakMask.bits[p] || seen[p] || mask.labels[p] == 0) continue;
        Plateau pl{result.distance.values()[p], p, {}};
        std::vector<int> stack{p};
        seen[p] = 1;
        while (!stack.empty()) {
            const int q = stack.back();
            stack.pop_back();
            pl.pixels.push_back(q);
            const int qx = q % w;
            const int qy = q / w;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = qx + dx;
                    const int ny = qy + dy;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const int r = ny * w + nx;
                    if (peakMask.bits[r] && !seen[r] && mask.labels[r] != 0) {
                        seen[r] = 1;
                        stack.push_back(r);
                    }
                }
            }
        }
        plateaus.push_back(std::move(pl));
    }
    std::stable_sort(plateaus.begin(), plateaus.end(), [](const Plateau& a, const Plateau& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.first < b.first;
    });

    auto separation = [w](const Plateau& a, const Plateau& b) {
        double best = kNoBackground;
        for (int p : a.pixels) {
            for (int q : b.pixels) {
                const double dx = p % w - q % w;
                const double dy = p / w - q / w;
                best = std::min(best, std::hypot(dx, dy));
            }
        }
        return best;
    };

    std::vector<const Plateau*> accepted;
    for (const auto& pl : plateaus) {
        const bool farEnough = std::all_of(accepted.begin(), accepted.end(), [&](const Plateau* a) {
            return separation(pl, *a) >= peakMinDistance;
        });
        if (!farEnough) continue;
        accepted.push_back(&pl);
        const int label = static_cast<int>(accepted.size());
        for (int p : pl.pixels) result.peaks.markers.push_back({p % w, p / w, label});
    }

    // Every foreground component needs a seed; components without an accepted peak get their maximum.
    {
        LabelMap seeded(w, h, 0);
        for (const auto& m : result.peaks.markers) seeded(m.x, m.y) = 1;
        std::vector<std::uint8_t> visited(mask.labels.size(), 0);
        for (int p = 0; p < w * h; ++p) {
            if (mask.labels[p] == 0 || visited[p]) continue;
            std::vector<int> component;
            std::vector<int> stack{p};
            visited[p] = 1;
            bool hasSeed = false;
            while (!stack.empty()) {
                const int q = stack.back();
                stack.pop_back();
                component.push_back(q);
                hasSeed = hasSeed || seeded.labels[q] != 0;
                const int qx = q % w;
                const int qy = q / w;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = qx + dx;
                        const int ny = qy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const int r = ny * w + nx;
                        if (mask.labels[r] != 0 && !visited[r]) {
                            visited[r] = 1;
                            stack.push_back(r);
                        }
                    }
                }
            }
            if (hasSeed) continue;
            std::sort(component.begin(), component.end());
            const int top = *std::max_element(component.begin(), component.end(), [&](int a, int b) {
                return result.distance.values()[a] < result.distance.values()[b];
            });
            const int label = result.peaks.markers.empty()
                                  ? 1
                                  : std::max_element(result.peaks.markers.begin(), result.peaks.markers.end(),
                                                     [](const Marker& a, const Marker& b) { return a.label < b.label; })
                                            ->label + 1;
            result.peaks.markers.push_back({top % w, top / w, label});
        }
    }

    Image relief(w, h);
    for (std::size_t i = 0; i < relief.size(); ++i) relief.data()[i] = -result.distance.values()[i];
    result.labels = watershed(relief, result.peaks, Connectivity::Eight, &mask);
    return result;
}

LabelMap threshold(const Image& img, double level) {
    LabelMap out(img.width(), img.height(), 0);
    for (std::size_t i = 0; i < img.size(); ++i) out.labels[i] = img.values()[i] > level ? 1 : 0;
    return out;
}

}  // namespace astroimg
