#include "sfj/errors.hpp"

#include <sstream>
#include <string>
#include <utility>

namespace sfj {

namespace {

std::string join_ids(const std::vector<NodeId>& ids) {
    std::ostringstream out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i != 0) out << ", ";
        out << ids[i];
    }
    return out.str();
}

}  // namespace

UnreachableNodes::UnreachableNodes(std::vector<NodeId> nodes)
    : Error("non-stubborn agents without a path from a stubborn agent: " + join_ids(nodes)),
      nodes_(std::move(nodes)) {}

SpectralRadiusNotConverged::SpectralRadiusNotConverged(double estimate, double upper_bound)
    : Error("spectral radius did not converge (estimate " + std::to_string(estimate) +
            ", bound from abs(M) " + std::to_string(upper_bound) + ")"),
      estimate_(estimate),
      upper_bound_(upper_bound) {}

}  // namespace sfj
