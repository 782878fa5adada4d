#include "floation/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "floation/error.hpp"

namespace flo {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    std::string s = buf;
    return s == "-0.0000" ? "0.0000" : s;
}

struct Canvas {
    double half;
    std::string x(double u) const { return num(half + half * 0.95 * u); }
    std::string y(double v) const { return num(half - half * 0.95 * v); }
    double scale() const { return half * 0.95; }
};

}  // namespace

std::string svg_geodesic(double a, double b, int size) {
    const Canvas c{size / 2.0};
    a = wrap_angle(a);
    b = wrap_angle(b);
    // order so that b follows a counterclockwise by at most pi
    if (wrap_angle(b - a) > std::numbers::pi) std::swap(a, b);
    const double theta = wrap_angle(b - a);
    std::ostringstream out;
    const double xa = std::cos(a), ya = std::sin(a), xb = std::cos(b), yb = std::sin(b);
    if (std::abs(theta - std::numbers::pi) < 1e-9) {
        out << "<line x1=\"" << c.x(xa) << "\" y1=\"" << c.y(ya) << "\" x2=\"" << c.x(xb) << "\" y2=\"" << c.y(yb)
            << "\" class=\"leaf\"/>";
        return out.str();
    }
    const double r = std::tan(theta / 2) * c.scale();
    out << "<path d=\"M " << c.x(xa) << ' ' << c.y(ya) << " A " << num(r) << ' ' << num(r) << " 0 0 1 " << c.x(xb) << ' '
        << c.y(yb) << "\" class=\"leaf\"/>";
    return out.str();
}

std::string render_lamination_svg(const Lamination& l, const HyperbolicModel* model, const SvgOptions& opt) {
    if (l.leaves.empty()) throw Error(ErrorCode::Usage, "EmptyScene", "lamination has no converged leaves");
    const Canvas c{opt.size / 2.0};
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.size << "\" height=\"" << opt.size
        << "\" viewBox=\"0 0 " << opt.size << ' ' << opt.size << "\">\n";
    out << "<style>.leaf{fill:none;stroke:#b22;stroke-width:1}.poly{fill:none;stroke:#888;stroke-width:1}"
           ".path{fill:none;stroke:#27c;stroke-width:0.5}</style>\n";
    out << "<circle cx=\"" << num(c.half) << "\" cy=\"" << num(c.half) << "\" r=\"" << num(c.scale())
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    if (model) {
        out << "<polygon class=\"poly\" points=\"";
        const auto& v = model->vertices;
        for (std::size_t k = 0; k < v.size(); ++k)
            for (int s = 0; s < 16; ++s) {
                Cx z = geodesic_point(v[k], v[(k + 1) % v.size()], s / 16.0);
                out << (k || s ? " " : "") << c.x(z.real()) << ',' << c.y(z.imag());
            }
        out << "\"/>\n";
    }
    if (opt.polylines)
        for (const auto& d : l.developed) {
            out << "<polyline class=\"path\" points=\"";
            for (std::size_t k = 0; k < d.polyline.size(); ++k)
                out << (k ? " " : "") << c.x(d.polyline[k].real()) << ',' << c.y(d.polyline[k].imag());
            out << "\"/>\n";
        }
    std::vector<std::pair<double, double>> leaves;
    for (const auto& g : l.leaves) leaves.emplace_back(std::min(g.a, g.b), std::max(g.a, g.b));
    std::sort(leaves.begin(), leaves.end());
    for (auto [a, b] : leaves) out << svg_geodesic(a, b, opt.size) << "\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace flo
