#pragma once
#include <vector>

namespace gdnls {

// Derivative of a uniformly spaced series, 4th order everywhere (central
// 5-point stencil inside, one-sided 5-point at the edges). Needs >= 5 points.
std::vector<double> series_derivative(const std::vector<double>& y, double h);

}  // namespace gdnls
