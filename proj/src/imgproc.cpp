#include "thermtouch/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace thermtouch {

namespace {

// Neighbour offsets, clockwise on screen (y grows downward) starting east.
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

int direction_of(Point from, Point to) {
    const int dx = to.x - from.x;
    const int dy = to.y - from.y;
    for (int d = 0; d < 8; ++d) {
        if (kDx[d] == dx && kDy[d] == dy) return d;
    }
    return -1;
}

long long cross(Point o, Point a, Point b) {
    return static_cast<long long>(a.x - o.x) * (b.y - o.y) - static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

}  // namespace

GrayImage to_gray(const ThermalFrame& frame) {
    GrayImage img(frame.width, frame.height);
    for (std::size_t i = 0; i < frame.counts.size(); ++i) {
        img.values[i] = static_cast<float>(frame.counts[i] / 65535.0);
    }
    return img;
}

std::vector<double> gaussian_kernel(double sigma, int radius) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_kernel: sigma must be positive");
    if (radius < 1) throw std::invalid_argument("gaussian_kernel: radius must be >= 1");
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-(i * i) / (2.0 * sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = w;
        sum += w;
    }
    for (double& w : k) w /= sum;
    return k;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma, int radius) {
    const auto k = gaussian_kernel(sigma, radius);
    const int w = img.width;
    const int h = img.height;
    std::vector<double> tmp(img.size());
    for (int y = 0; y < h; ++y) {
        const float* row = img.values.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int xx = std::clamp(x + i, 0, w - 1);
                acc += k[static_cast<std::size_t>(i + radius)] * row[xx];
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int yy = std::clamp(y + i, 0, h - 1);
                acc += k[static_cast<std::size_t>(i + radius)] * tmp[static_cast<std::size_t>(yy) * w + x];
            }
            out.at(x, y) = static_cast<float>(acc);
        }
    }
    return out;
}

float median_value(const GrayImage& img) {
    if (img.values.empty()) throw std::invalid_argument("median_value: empty image");
    std::vector<float> v = img.values;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>((v.size() - 1) / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

GrayImage normalize(const GrayImage& img) {
    const double m = median_value(img);
    if (!(m > 0.0)) throw DegenerateFrame("normalize: median is zero");
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double v = (img.values[i] - m) / m;
        out.values[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
    return out;
}

BinaryMask threshold(const GrayImage& img, float t) {
    BinaryMask m(img.width, img.height);
    for (std::size_t i = 0; i < img.size(); ++i) m.bits[i] = img.values[i] > t ? 1 : 0;
    return m;
}

BinaryMask erode(const BinaryMask& mask) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool all = mask.at(x, y);
            for (int dy = -1; dy <= 1 && all; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (mask.inside(x + dx, y + dy) && !mask.at(x + dx, y + dy)) {
                        all = false;
                        break;
                    }
                }
            }
            out.set(x, y, all);
        }
    }
    return out;
}

BinaryMask dilate(const BinaryMask& mask) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (out.inside(x + dx, y + dy)) out.set(x + dx, y + dy, true);
                }
            }
        }
    }
    return out;
}

BinaryMask morph_open(const BinaryMask& mask) { return dilate(erode(mask)); }

BinaryMask morph_close(const BinaryMask& mask) { return erode(dilate(mask)); }

BinaryMask dilate_disk(const BinaryMask& mask, int radius) {
    if (radius <= 0) return mask;
    std::vector<Point> offsets;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            if (dx * dx + dy * dy <= radius * radius) offsets.push_back({dx, dy});
        }
    }
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            for (const Point o : offsets) {
                if (out.inside(x + o.x, y + o.y)) out.set(x + o.x, y + o.y, true);
            }
        }
    }
    return out;
}

int label_components(const BinaryMask& mask, std::vector<int>& labels) {
    labels.assign(mask.bits.size(), 0);
    int next = 0;
    std::vector<Point> stack;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * mask.width + x;
            if (!mask.bits[i] || labels[i] != 0) continue;
            ++next;
            labels[i] = next;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const Point p = stack.back();
                stack.pop_back();
                for (int d = 0; d < 8; ++d) {
                    const int nx = p.x + kDx[d];
                    const int ny = p.y + kDy[d];
                    if (!mask.inside(nx, ny)) continue;
                    const std::size_t j = static_cast<std::size_t>(ny) * mask.width + nx;
                    if (mask.bits[j] && labels[j] == 0) {
                        labels[j] = next;
                        stack.push_back({nx, ny});
                    }
                }
            }
        }
    }
    return next;
}

double polygon_area(std::span<const Point> poly) {
    if (poly.size() < 3) return 0.0;
    long long twice = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point a = poly[i];
        const Point b = poly[(i + 1) % poly.size()];
        twice += static_cast<long long>(a.x) * b.y - static_cast<long long>(b.x) * a.y;
    }
    return std::abs(static_cast<double>(twice)) / 2.0;
}

bool point_in_polygon(std::span<const Point> poly, double x, double y) {
    const std::size_t n = poly.size();
    if (n == 0) return false;
    // Boundary first: the even-odd rule alone is ambiguous on edges.
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = poly[i];
        const Point b = poly[(i + 1) % n];
        const double cr = (b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x);
        if (std::abs(cr) < 1e-12 && x >= std::min(a.x, b.x) && x <= std::max(a.x, b.x) &&
            y >= std::min(a.y, b.y) && y <= std::max(a.y, b.y)) {
            return true;
        }
    }
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point a = poly[i];
        const Point b = poly[j];
        if ((a.y > y) != (b.y > y)) {
            const double xi = a.x + (y - a.y) * static_cast<double>(b.x - a.x) / (b.y - a.y);
            if (x < xi) inside = !inside;
        }
    }
    return inside;
}

std::vector<Contour> find_contours(const BinaryMask& mask) {
    std::vector<int> labels;
    const int n = label_components(mask, labels);
    std::vector<Contour> out;
    out.reserve(static_cast<std::size_t>(n));
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);

    auto fg = [&](Point p) { return mask.inside(p.x, p.y) && mask.at(p.x, p.y); };

    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const int label = labels[static_cast<std::size_t>(y) * mask.width + x];
            if (label == 0 || seen[static_cast<std::size_t>(label)]) continue;
            seen[static_cast<std::size_t>(label)] = true;

            // The first raster pixel of a component always sits on its outer
            // border with a background pixel to the west.
            const Point start{x, y};
            Contour c;
            int d1 = -1;
            for (int k = 0; k < 8; ++k) {
                const int d = (4 + k) % 8;
                if (fg({x + kDx[d], y + kDy[d]})) {
                    d1 = d;
                    break;
                }
            }
            if (d1 < 0) {
                c.points.push_back(start);
                out.push_back(std::move(c));
                continue;
            }
            const Point first{x + kDx[d1], y + kDy[d1]};
            Point prev = first;
            Point cur = start;
            for (;;) {
                c.points.push_back(cur);
                // Counter-clockwise sweep around cur, starting just past prev.
                const int back = direction_of(cur, prev);
                Point next = cur;
                for (int k = 1; k <= 8; ++k) {
                    const int d = ((back - k) % 8 + 8) % 8;
                    const Point q{cur.x + kDx[d], cur.y + kDy[d]};
                    if (fg(q)) {
                        next = q;
                        break;
                    }
                }
                if (next == start && cur == first) break;
                prev = cur;
                cur = next;
            }
            c.area = polygon_area(c.points);
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<Point> convex_hull(std::span<const Point> points) {
    std::vector<Point> p(points.begin(), points.end());
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() <= 2) return p;

    std::vector<Point> hull(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
        hull[k++] = p[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
        hull[k++] = p[i];
    }
    hull.resize(k - 1);
    return hull;
}

std::vector<ConvexityDefect> convexity_defects(const Contour& contour, std::span<const Point> hull) {
    const auto& pts = contour.points;
    const int n = static_cast<int>(pts.size());
    std::vector<int> idx;
    idx.reserve(hull.size());
    for (const Point h : hull) {
        const auto it = std::find(pts.begin(), pts.end(), h);
        if (it == pts.end()) throw std::invalid_argument("convexity_defects: hull vertex not on contour");
        idx.push_back(static_cast<int>(it - pts.begin()));
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

    std::vector<ConvexityDefect> out;
    if (idx.size() < 2) return out;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const int s = idx[k];
        const int e = idx[(k + 1) % idx.size()];
        const Point a = pts[static_cast<std::size_t>(s)];
        const Point b = pts[static_cast<std::size_t>(e)];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        if (len == 0.0) continue;
        const int span = ((e - s) % n + n) % n;
        double best = 0.0;
        int best_idx = -1;
        for (int step = 1; step < span; ++step) {
            const int i = (s + step) % n;
            const Point p = pts[static_cast<std::size_t>(i)];
            const double dist = std::abs(static_cast<double>(cross(a, b, p))) / len;
            if (dist > best) {
                best = dist;
                best_idx = i;
            }
        }
        if (best_idx >= 0) out.push_back({s, e, best_idx, best});
    }
    return out;
}

GrayImage crop(const GrayImage& img, int x, int y, int w, int h) {
    if (x < 0 || y < 0 || w <= 0 || h <= 0 || x + w > img.width || y + h > img.height) {
        throw std::invalid_argument("crop: block outside image");
    }
    GrayImage out(w, h);
    for (int r = 0; r < h; ++r) {
        std::copy_n(img.values.begin() + static_cast<std::ptrdiff_t>((y + r) * img.width + x), w,
                    out.values.begin() + static_cast<std::ptrdiff_t>(r) * w);
    }
    return out;
}

}  // namespace thermtouch
