#pragma once

#include <memory>

#include "geoconn/axis_reporter.hpp"
#include "geoconn/membership_reporter.hpp"

namespace geoconn {

/// Reporter backend for one family. `bound` is the coordinate limit the
/// axis backend clips its decomposition to.
inline std::unique_ptr<Reporter> make_reporter(Family family, Coord bound = kCoordLimit) {
  switch (family) {
    case Family::axis:
      return std::make_unique<AxisReporter>(bound);
    case Family::segment:
      return std::make_unique<SegmentReporter>();
    case Family::disk:
      return std::make_unique<DiskReporter>();
  }
  throw Error("unknown family");
}

inline ReporterFactory reporter_factory(Family family, Coord bound = kCoordLimit) {
  return [family, bound] { return make_reporter(family, bound); };
}

}  // namespace geoconn
