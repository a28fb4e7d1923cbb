#pragma once

#include <stdexcept>
#include <string>

namespace biorth {

// A factor of the point sits too close to the chart's projection pole;
// the caller must switch charts.
struct PoleProximityError : std::runtime_error {
  explicit PoleProximityError(const std::string& what) : std::runtime_error(what) {}
};

// Metric value matrix failed the positive-definiteness floor (bad MetricSpec).
struct SingularMetricError : std::runtime_error {
  explicit SingularMetricError(const std::string& what) : std::runtime_error(what) {}
};

// Spanning vectors of a would-be plane are (numerically) dependent.
struct DegeneratePlaneError : std::runtime_error {
  explicit DegeneratePlaneError(const std::string& what) : std::runtime_error(what) {}
};

// Operation requires a flat plane (|sec| below the flatness threshold).
struct NotFlatError : std::runtime_error {
  explicit NotFlatError(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownPropositionError : std::runtime_error {
  explicit UnknownPropositionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace biorth
