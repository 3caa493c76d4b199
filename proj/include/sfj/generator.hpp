#pragma once

#include <cstddef>
#include <cstdint>

#include "sfj/graph.hpp"

namespace sfj {

/// Random signed digraph whose certificate has exactly z LTP agents and
/// satisfies C1 and C2.
///
/// Nodes split into z clusters of at least two agents. Every cluster has a
/// head; at least two heads are stubborn. Members only receive positive
/// edges from inside their cluster, so the head dominates them. Non-stubborn
/// heads get in-edges from two stubborn heads, which keeps their immediate
/// dominator at the virtual root. Any other cross-cluster edge points into
/// a head and carries a random sign.
///
/// Requires 2 <= z and 2z <= n (each LTP agent needs a persuaded agent);
/// throws Error otherwise.
SignedDigraph generate_network(std::size_t n, std::size_t z, std::uint64_t seed);

}  // namespace sfj
