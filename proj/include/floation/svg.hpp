#pragma once

#include <string>

#include "floation/hyperbolic.hpp"
#include "floation/straighten.hpp"

namespace flo {

struct SvgOptions {
    int size = 600;
    bool polylines = false;  // developed leaf paths under the geodesics
};

/// One geodesic of the Poincare disk: a circular arc orthogonal to the unit
/// circle, or a line when the endpoints are antipodal.
std::string svg_geodesic(double a, double b, int size);

/// Unit circle, optional fundamental polygon, geodesics sorted by endpoints.
/// Throws Usage/EmptyScene when there is nothing to draw.
std::string render_lamination_svg(const Lamination& l, const HyperbolicModel* model, const SvgOptions& opt = {});

}  // namespace flo
