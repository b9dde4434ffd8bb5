#include "nvlab/render.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "nvlab/util.hpp"

namespace nvlab {

namespace {

// Fixed fill palette, cycled by site index.
const char* const kPalette[10] = {"#7eb3d8", "#e8a87c", "#a8d8a8", "#d8a8d0", "#d8d08a",
                                  "#9ac2c2", "#d89a9a", "#b0a8e0", "#a0c890", "#c8b098"};

std::string px(double v) {
    if (!std::isfinite(v)) throw validation_error("nonfinite coordinate in SVG output");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::string render_svg(const Diagram& diagram, const RenderStyle& style) {
    if (diagram.scene == nullptr) {
        throw validation_error("diagram has no scene attached");
    }
    const Scene& scene = *diagram.scene;
    if (style.width < 64) throw validation_error("render width must be at least 64");

    const double scale = (style.width - 2.0 * style.margin) / scene.box.width();
    const int height =
        static_cast<int>(std::lround(scene.box.height() * scale + 2.0 * style.margin));
    auto map = [&](Vec2 p) {
        return Vec2{style.margin + (p.x - scene.box.lo.x) * scale,
                    height - style.margin - (p.y - scene.box.lo.y) * scale};
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << style.width << ' ' << height
        << "\">\n";
    svg << "<rect width=\"" << style.width << "\" height=\"" << height
        << "\" fill=\"#ffffff\"/>\n";

    for (const Cell& cell : diagram.cells) {
        const char* color = kPalette[cell.k % 10];
        for (const RayBundle& bundle : cell.bundles) {
            if (bundle.rays.size() >= 3) {
                svg << "<polygon points=\"";
                for (std::size_t i = 0; i < bundle.rays.size(); ++i) {
                    const Vec2 tip =
                        map(bundle.p + bundle.rays[i].T * bundle.rays[i].theta);
                    if (i > 0) svg << ' ';
                    svg << px(tip.x) << ',' << px(tip.y);
                }
                // Stroking the outline keeps knife-edge slivers visible where
                // the filled area collapses to zero width.
                svg << "\" fill=\"" << color << "\" fill-opacity=\"0.45\" stroke=\""
                    << color << "\" stroke-width=\"1\"/>\n";
            } else {
                for (const Ray& ray : bundle.rays) {
                    const Vec2 a = map(bundle.p);
                    const Vec2 b = map(bundle.p + ray.T * ray.theta);
                    svg << "<line x1=\"" << px(a.x) << "\" y1=\"" << px(a.y) << "\" x2=\""
                        << px(b.x) << "\" y2=\"" << px(b.y) << "\" stroke=\"" << color
                        << "\" stroke-width=\"1\"/>\n";
                }
            }
        }
    }

    if (style.draw_box) {
        const Vec2 a = map({scene.box.lo.x, scene.box.hi.y});
        svg << "<rect x=\"" << px(a.x) << "\" y=\"" << px(a.y) << "\" width=\""
            << px(scene.box.width() * scale) << "\" height=\""
            << px(scene.box.height() * scale)
            << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";
    }

    for (const Vec2 b : style.bisector_overlay) {
        const Vec2 q = map(b);
        svg << "<circle cx=\"" << px(q.x) << "\" cy=\"" << px(q.y)
            << "\" r=\"1.2\" fill=\"#222222\"/>\n";
    }

    if (style.draw_sites) {
        for (const auto& site : scene.sites) {
            for (const Vec2 p : site.points) {
                const Vec2 q = map(p);
                svg << "<circle cx=\"" << px(q.x) << "\" cy=\"" << px(q.y)
                    << "\" r=\"3\" fill=\"#000000\"/>\n";
            }
        }
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace nvlab
