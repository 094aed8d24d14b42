#include "pgt/detector_post.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "pgt/io.hpp"

namespace pgt {

void PredictionMaps::validate() const
{
    const std::size_t n = width * height;
    if (tr.size() != n || tcl.size() != n || radius.size() != n || angle.size() != n) {
        throw std::invalid_argument("prediction map planes do not match width x height");
    }
}

std::size_t Mask::count() const
{
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

Mask binarize(const PredictionMaps& maps, double thr_tr, double thr_tcl)
{
    maps.validate();
    Mask m{maps.width, maps.height, std::vector<std::uint8_t>(maps.width * maps.height)};
    for (std::size_t i = 0; i < m.bits.size(); ++i) {
        m.bits[i] = (maps.tr[i] >= thr_tr && maps.tcl[i] >= thr_tcl) ? 1 : 0;
    }
    return m;
}

std::vector<Component> connected_components(const Mask& mask)
{
    const auto w = static_cast<int>(mask.width);
    const auto h = static_cast<int>(mask.height);
    std::vector<std::uint8_t> seen(mask.bits.size());
    std::vector<Component> out;
    std::vector<Pixel> stack;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto idx = static_cast<std::size_t>(y * w + x);
            if (!mask.bits[idx] || seen[idx]) continue;
            Component comp;
            seen[idx] = 1;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const Pixel p = stack.back();
                stack.pop_back();
                comp.push_back(p);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = p.x + dx;
                        const int ny = p.y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const auto n = static_cast<std::size_t>(ny * w + nx);
                        if (!mask.bits[n] || seen[n]) continue;
                        seen[n] = 1;
                        stack.push_back({nx, ny});
                    }
                }
            }
            std::sort(comp.begin(), comp.end(),
                      [](Pixel a, Pixel b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
            out.push_back(std::move(comp));
        }
    }

    auto key = [](const Component& c) {
        int min_x = c.front().x;
        for (const Pixel& p : c) min_x = std::min(min_x, p.x);
        return std::pair{c.front().y, min_x};
    };
    std::stable_sort(out.begin(), out.end(),
                     [&](const Component& a, const Component& b) { return key(a) < key(b); });
    return out;
}

OrientedBox fit_box(const Component& component, const std::vector<float>& radius, std::size_t width)
{
    if (component.empty()) throw std::invalid_argument("cannot fit a box to an empty component");

    double mx = 0.0, my = 0.0;
    double r_max = 0.0;
    for (const Pixel& p : component) {
        mx += p.x;
        my += p.y;
        const auto idx = static_cast<std::size_t>(p.y) * width + static_cast<std::size_t>(p.x);
        if (idx >= radius.size()) throw std::out_of_range("component pixel outside radius map");
        r_max = std::max(r_max, static_cast<double>(radius[idx]));
    }
    const double n = static_cast<double>(component.size());
    mx /= n;
    my /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const Pixel& p : component) {
        const double dx = p.x - mx;
        const double dy = p.y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // Principal axis of the 2x2 scatter matrix.
    const double a = 0.5 * (sxx - syy);
    double alpha = 0.0;
    if (a * a + sxy * sxy > 1e-18) alpha = 0.5 * std::atan2(sxy, a);
    alpha = normalize_angle(alpha);

    const double ux = std::cos(alpha);
    const double uy = std::sin(alpha);
    double p_min = 1e300, p_max = -1e300;
    for (const Pixel& p : component) {
        const double proj = (p.x - mx) * ux + (p.y - my) * uy;
        p_min = std::min(p_min, proj);
        p_max = std::max(p_max, proj);
    }

    const double h = 2.0 * r_max;
    const double mid = (p_max + p_min) / 2;
    OrientedBox box;
    box.cx = mx + ux * mid;
    box.cy = my + uy * mid;
    box.w = (p_max - p_min) + h;
    box.h = h;
    box.alpha = alpha;
    if (!(box.w > 0.0) || !(box.h > 0.0)) {
        throw DegenerateBoxError("component has zero radius");
    }
    return box;
}

std::vector<OrientedBox> boxes_from_maps(const PredictionMaps& maps, double thr_tr, double thr_tcl)
{
    std::vector<OrientedBox> out;
    for (const Component& c : connected_components(binarize(maps, thr_tr, thr_tcl))) {
        try {
            out.push_back(fit_box(c, maps.radius, maps.width));
        } catch (const DegenerateBoxError&) {
            // Zero-radius components carry no box.
        }
    }
    return out;
}

namespace {

std::filesystem::path planes_path(const std::filesystem::path& sidecar)
{
    auto p = sidecar;
    p.replace_extension(".bin");
    return p;
}

float load_le_float(const unsigned char* b)
{
    std::uint32_t v = std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) |
                      (std::uint32_t(b[2]) << 16) | (std::uint32_t(b[3]) << 24);
    return std::bit_cast<float>(v);
}

void store_le_float(float f, unsigned char* b)
{
    const auto v = std::bit_cast<std::uint32_t>(f);
    b[0] = static_cast<unsigned char>(v);
    b[1] = static_cast<unsigned char>(v >> 8);
    b[2] = static_cast<unsigned char>(v >> 16);
    b[3] = static_cast<unsigned char>(v >> 24);
}

}  // namespace

PredictionMaps read_maps(const std::filesystem::path& sidecar_json)
{
    const nlohmann::json meta = read_json_file(sidecar_json);
    PredictionMaps maps;
    try {
        maps.width = meta.at("width").get<std::size_t>();
        maps.height = meta.at("height").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(sidecar_json.string() + ": " + e.what());
    }

    const auto bin = planes_path(sidecar_json);
    std::ifstream in(bin, std::ios::binary);
    if (!in) throw IoError("cannot open " + bin.string());
    const std::size_t n = maps.width * maps.height;
    std::vector<unsigned char> raw(n * 4 * 4);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
        throw FormatError(bin.string() + ": expected " + std::to_string(raw.size()) + " bytes");
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw FormatError(bin.string() + ": trailing bytes after four planes");
    }

    std::vector<float>* planes[] = {&maps.tr, &maps.tcl, &maps.radius, &maps.angle};
    for (std::size_t p = 0; p < 4; ++p) {
        planes[p]->resize(n);
        for (std::size_t i = 0; i < n; ++i) (*planes[p])[i] = load_le_float(&raw[(p * n + i) * 4]);
    }
    return maps;
}

void write_maps(const PredictionMaps& maps, const std::filesystem::path& sidecar_json)
{
    maps.validate();
    const std::size_t n = maps.width * maps.height;
    std::vector<unsigned char> raw(n * 4 * 4);
    const std::vector<float>* planes[] = {&maps.tr, &maps.tcl, &maps.radius, &maps.angle};
    for (std::size_t p = 0; p < 4; ++p) {
        for (std::size_t i = 0; i < n; ++i) store_le_float((*planes[p])[i], &raw[(p * n + i) * 4]);
    }
    const auto bin = planes_path(sidecar_json);
    std::ofstream out(bin, std::ios::binary);
    if (!out) throw IoError("cannot write " + bin.string());
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    nlohmann::json meta{{"width", maps.width}, {"height", maps.height}};
    write_text_file(sidecar_json, meta.dump() + "\n");
}

}  // namespace pgt
