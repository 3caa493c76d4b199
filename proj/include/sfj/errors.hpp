#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sfj {

/// 1-based agent identifier, as it appears in graph files and reports.
using NodeId = int;

/// Root of the error hierarchy. Everything the library throws derives from it.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed graph input: bad JSON, missing fields, or a violated
/// SignedDigraph invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class NoStubbornAgents : public Error {
public:
    NoStubbornAgents() : Error("network has no stubborn agent (every beta is 0)") {}
};

/// Some non-stubborn agents have no path from any stubborn agent.
class UnreachableNodes : public Error {
public:
    explicit UnreachableNodes(std::vector<NodeId> nodes);
    const std::vector<NodeId>& nodes() const noexcept { return nodes_; }

private:
    std::vector<NodeId> nodes_;
};

class SizeLimit : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

class SingularBlock : public Error {
public:
    using Error::Error;
};

class HypothesisViolated : public Error {
public:
    using Error::Error;
};

/// C1 or C2 fails where a strict guarantee was requested.
class ConditionsNotMet : public Error {
public:
    using Error::Error;
};

/// Power iteration and the eigen-decomposition fallback both failed.
/// Carries the last estimate and an upper bound taken from abs(M).
class SpectralRadiusNotConverged : public Error {
public:
    SpectralRadiusNotConverged(double estimate, double upper_bound);
    double estimate() const noexcept { return estimate_; }
    double upper_bound() const noexcept { return upper_bound_; }

private:
    double estimate_;
    double upper_bound_;
};

}  // namespace sfj
