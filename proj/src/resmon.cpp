// SPDX-License-Identifier: Apache-2.0
#include "crange/resmon.hpp"

#include <yaml-cpp/yaml.h>

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "crange/builtin_data.hpp"
#include "crange/error.hpp"

namespace crange {

namespace {

double ratio(double vm, double ct) {
  if (ct == 0.0) return vm == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return vm / ct;
}

struct Averaged {
  double memory = 0, storage = 0, cpu = 0;
  std::size_t n = 0;
};

std::map<std::size_t, Averaged> by_count(const std::vector<ResourceSample>& series) {
  std::map<std::size_t, Averaged> out;
  for (const auto& s : series) {
    auto& a = out[s.instance_count];
    a.memory += s.memory_mb;
    a.storage += s.storage_mb;
    a.cpu += s.cpu_pct;
    ++a.n;
  }
  for (auto& [count, a] : out) {
    a.memory /= static_cast<double>(a.n);
    a.storage /= static_cast<double>(a.n);
    a.cpu /= static_cast<double>(a.n);
  }
  return out;
}

LinearFit fit_series(const std::vector<ResourceSample>& series, double ResourceSample::*field) {
  std::vector<double> x, y;
  for (const auto& s : series) {
    x.push_back(static_cast<double>(s.instance_count));
    y.push_back(s.*field);
  }
  return fit_line(x, y);
}

}  // namespace

void check(const ResourceProfile& p) {
  const std::string b(to_string(p.backend));
  auto non_negative = [&](double v, const char* field) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw SchemaError(b + "." + field, "must be a non-negative number");
    }
  };
  non_negative(p.base_mb, "base_mb");
  non_negative(p.idle_mb, "idle_mb");
  non_negative(p.storage_mb, "storage_mb");
  non_negative(p.cpu_idle_pct, "cpu_idle_pct");
  if (p.backend == Backend::vm && p.base_mb <= 0.0) {
    throw SchemaError(b + ".base_mb", "vm profiles preallocate memory: base_mb must be > 0");
  }
  if (p.backend == Backend::container && p.base_mb != 0.0) {
    throw SchemaError(b + ".base_mb", "container profiles do not preallocate: base_mb must be 0");
  }
}

ProfileSet parse_profiles(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, static_cast<std::size_t>(e.mark.line) + 1,
                     static_cast<std::size_t>(e.mark.column) + 1);
  }
  if (!root.IsMap() || !root["profiles"] || !root["profiles"].IsSequence()) {
    throw SchemaError("profiles", "expected a top-level 'profiles' list");
  }

  std::optional<ResourceProfile> vm, ct;
  const auto list = root["profiles"];
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto node = list[i];
    const std::string field = "profiles[" + std::to_string(i) + "]";
    if (!node.IsMap()) throw SchemaError(field, "expected a mapping");
    static const std::set<std::string> keys = {"backend", "base_mb", "idle_mb", "storage_mb",
                                               "cpu_idle_pct"};
    for (const auto& kv : node) {
      if (!keys.count(kv.first.Scalar())) {
        throw SchemaError(field + "." + kv.first.Scalar(), "unknown key");
      }
    }
    auto number = [&](const char* key) {
      if (!node[key]) throw SchemaError(field + "." + key, "missing required key");
      try {
        return node[key].as<double>();
      } catch (const YAML::Exception&) {
        throw SchemaError(field + "." + key, "expected a number");
      }
    };
    if (!node["backend"] || !node["backend"].IsScalar()) {
      throw SchemaError(field + ".backend", "missing required key");
    }
    ResourceProfile p;
    p.backend = backend_from_string(node["backend"].Scalar());
    p.base_mb = number("base_mb");
    p.idle_mb = number("idle_mb");
    p.storage_mb = number("storage_mb");
    p.cpu_idle_pct = number("cpu_idle_pct");
    check(p);
    auto& slot = p.backend == Backend::vm ? vm : ct;
    if (slot) throw SchemaError(field + ".backend", "duplicate profile for this backend");
    slot = p;
  }
  if (!vm) throw SchemaError("profiles", "no vm profile");
  if (!ct) throw SchemaError("profiles", "no container profile");
  return {*vm, *ct};
}

const ProfileSet& default_profiles() {
  static const ProfileSet p = parse_profiles(builtin::profiles_yaml());
  return p;
}

ResourceSample simulate_usage(const ResourceProfile& p, std::size_t n) {
  const double k = static_cast<double>(n);
  ResourceSample s;
  s.instance_count = n;
  s.memory_mb = k * (p.base_mb + p.idle_mb);
  s.storage_mb = k * p.storage_mb;
  s.cpu_pct = k * p.cpu_idle_pct;
  return s;
}

std::vector<ResourceSample> simulate_series(const ResourceProfile& p, std::size_t first,
                                            std::size_t last, std::size_t step) {
  if (step == 0) throw PreconditionError("step must be positive");
  if (first > last) throw PreconditionError("empty instance range");
  std::vector<ResourceSample> out;
  for (std::size_t n = first; n <= last; n += step) out.push_back(simulate_usage(p, n));
  return out;
}

StatsResult collect_stats(Driver& driver, const EnvironmentState& env,
                          const CollectOptions& options) {
  StatsResult result;
  std::vector<std::string> running;
  for (const auto& [id, status] : env) {
    if (status == InstanceStatus::running) running.push_back(id);
  }
  if (running.empty()) return result;

  const auto start = std::chrono::steady_clock::now();
  std::function<double()> clock = options.clock;
  if (!clock) {
    clock = [start] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
  }
  std::function<void(double)> sleep = options.sleep;
  if (!sleep) {
    sleep = [](double s) { std::this_thread::sleep_for(std::chrono::duration<double>(s)); };
  }

  double last_ts = -std::numeric_limits<double>::infinity();
  for (std::size_t tick = 0; tick < options.ticks; ++tick) {
    if (tick > 0) sleep(options.interval_s);
    ResourceSample agg;
    for (const auto& id : running) {
      try {
        const ResourceSample s = driver.stats(id);
        agg.memory_mb += s.memory_mb;
        agg.storage_mb += s.storage_mb;
        agg.cpu_pct += s.cpu_pct;
        ++agg.instance_count;
      } catch (const DriverError& e) {
        result.warnings.push_back("tick " + std::to_string(tick + 1) + ": instance " + id + ": " +
                                  e.what());
      }
    }
    agg.timestamp = std::max(clock(), last_ts);
    last_ts = agg.timestamp;
    result.samples.push_back(agg);
  }
  return result;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.empty() || x.size() != y.size()) {
    throw PreconditionError("fit_line needs equally sized, non-empty inputs");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return {0.0, my};
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

ComparisonSummary compare_backends(const std::vector<ResourceSample>& vm,
                                   const std::vector<ResourceSample>& ct) {
  if (vm.empty() || ct.empty()) throw PreconditionError("both sample series must be non-empty");
  const auto a = by_count(vm);
  const auto b = by_count(ct);

  ComparisonSummary out;
  for (const auto& [count, v] : a) {
    auto it = b.find(count);
    if (it == b.end()) continue;
    const auto& c = it->second;
    out.points.push_back({count, v.memory, c.memory, ratio(v.memory, c.memory),
                          ratio(v.storage, c.storage), ratio(v.cpu, c.cpu)});
  }
  if (out.points.empty()) throw PreconditionError("the series share no instance count");

  out.vm_memory = fit_series(vm, &ResourceSample::memory_mb);
  out.ct_memory = fit_series(ct, &ResourceSample::memory_mb);
  out.vm_storage = fit_series(vm, &ResourceSample::storage_mb);
  out.ct_storage = fit_series(ct, &ResourceSample::storage_mb);
  out.vm_cpu = fit_series(vm, &ResourceSample::cpu_pct);
  out.ct_cpu = fit_series(ct, &ResourceSample::cpu_pct);
  return out;
}

}  // namespace crange
