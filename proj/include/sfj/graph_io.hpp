#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sfj/graph.hpp"

namespace sfj {

/// Graph file schema:
///
///   {"schema": 1,                                   (optional on input)
///    "n": int,
///    "agents": [{"id": int, "beta": float, "x0": float}, ...],
///    "edges":  [{"from": int, "to": int, "w": float}, ...]}
///
/// Every id 1..n must be listed exactly once in "agents". Parse failures
/// carry the line and column of the offending byte; schema failures name
/// the JSON path.
SignedDigraph parse_graph(std::string_view text);
SignedDigraph load_graph(const std::filesystem::path& path);

std::string dump_graph(const SignedDigraph& g);
void save_graph(const SignedDigraph& g, const std::filesystem::path& path);

}  // namespace sfj
