#pragma once

#include <span>
#include <string>
#include <vector>

#include "gnnsim/pipeline.hpp"

namespace gnnsim {

enum class SweepParameter { Workers, CoalesceGranularity, FanoutScale, Path };
std::string to_string(SweepParameter p);
SweepParameter parse_sweep_parameter(const std::string& s);  // throws ConfigError

struct SweepPoint {
  double value = 0;
  std::string label;
  bool ok = false;
  std::string error;  // set when the point's run failed
  RunMetrics metrics;
};

struct SweepResult {
  SweepParameter parameter = SweepParameter::Workers;
  std::vector<SweepPoint> points;
};

// Reruns the base setup once per value, varying only the swept parameter.
// A failing point is recorded and the sweep continues. For Path, values
// 0..3 select in_memory, mmap, direct, isp.
SweepResult run_sweep(const CsrGraph& g, const SimSetup& base, SweepParameter parameter,
                      std::span<const double> values);

// Applies one sweep value to a copy of the base setup (exposed for tests).
SimSetup apply_sweep_value(const SimSetup& base, SweepParameter parameter, double value);

std::string sweep_csv(const SweepResult& r);
std::string sweep_json(const SweepResult& r);

}  // namespace gnnsim
