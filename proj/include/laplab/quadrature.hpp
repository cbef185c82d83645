#pragma once

#include <utility>
#include <vector>

namespace laplab {

// Gauss-Legendre nodes and weights on [a, b].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n, double a,
                                                                   double b);

} // namespace laplab
