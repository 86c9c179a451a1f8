#include "gnnsim/sweep.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace gnnsim {

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Workers: return "workers";
    case SweepParameter::CoalesceGranularity: return "coalesce_granularity";
    case SweepParameter::FanoutScale: return "fanout_scale";
    case SweepParameter::Path: return "path";
  }
  return "?";
}

SweepParameter parse_sweep_parameter(const std::string& s) {
  if (s == "workers") return SweepParameter::Workers;
  if (s == "coalesce_granularity") return SweepParameter::CoalesceGranularity;
  if (s == "fanout_scale") return SweepParameter::FanoutScale;
  if (s == "path") return SweepParameter::Path;
  throw ConfigError("unknown sweep parameter '" + s + "'");
}

SimSetup apply_sweep_value(const SimSetup& base, SweepParameter parameter, double value) {
  SimSetup s = base;
  switch (parameter) {
    case SweepParameter::Workers: {
      const long long n = std::llround(value);
      if (n < 1 || double(n) != value) throw ConfigError("workers value must be a positive integer");
      s.pipeline.workers = std::uint32_t(n);
      break;
    }
    case SweepParameter::CoalesceGranularity: {
      const long long n = std::llround(value);
      if (n < 1 || double(n) != value)
        throw ConfigError("granularity value must be a positive integer");
      s.isp.coalesce_granularity = std::uint32_t(n);
      break;
    }
    case SweepParameter::FanoutScale: {
      if (!(value > 0)) throw ConfigError("fanout scale must be positive");
      for (auto& f : s.sampling.fanouts)
        f = std::uint32_t(std::max<long long>(1, std::llround(double(f) * value)));
      break;
    }
    case SweepParameter::Path: {
      const long long n = std::llround(value);
      if (n < 0 || n > 3 || double(n) != value)
        throw ConfigError("path value must be 0 (in_memory), 1 (mmap), 2 (direct) or 3 (isp)");
      s.pipeline.path = static_cast<AccessPath>(n);
      break;
    }
  }
  return s;
}

SweepResult run_sweep(const CsrGraph& g, const SimSetup& base, SweepParameter parameter,
                      std::span<const double> values) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  SweepResult out;
  out.parameter = parameter;
  for (double v : values) {
    SweepPoint pt;
    pt.value = v;
    try {
      SimSetup s = apply_sweep_value(base, parameter, v);
      pt.label = parameter == SweepParameter::Path ? to_string(s.pipeline.path)
                                                   : std::to_string(v);
      pt.metrics = run_pipeline(g, s);
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
      if (pt.label.empty()) pt.label = std::to_string(v);
    }
    out.points.push_back(std::move(pt));
  }
  return out;
}

std::string sweep_csv(const SweepResult& r) {
  std::ostringstream os;
  os << "parameter,value,label,ok,error," << metrics_csv_header() << "\n";
  for (const auto& pt : r.points) {
    std::string err = pt.error;
    for (char& c : err) {
      if (c == ',' || c == '\n') c = ';';
    }
    os << to_string(r.parameter) << ',' << pt.value << ',' << pt.label << ','
       << (pt.ok ? 1 : 0) << ',' << err << ',';
    if (pt.ok)
      os << metrics_csv_row(pt.metrics);
    else
      os << metrics_csv_row(RunMetrics{});
    os << "\n";
  }
  return os.str();
}

std::string sweep_json(const SweepResult& r) {
  nlohmann::ordered_json j;
  j["parameter"] = to_string(r.parameter);
  j["points"] = nlohmann::ordered_json::array();
  for (const auto& pt : r.points) {
    nlohmann::ordered_json p;
    p["value"] = pt.value;
    p["label"] = pt.label;
    p["ok"] = pt.ok;
    if (!pt.ok) p["error"] = pt.error;
    if (pt.ok) p["metrics"] = nlohmann::ordered_json::parse(metrics_json(pt.metrics));
    j["points"].push_back(std::move(p));
  }
  return j.dump(2) + "\n";
}

}  // namespace gnnsim
