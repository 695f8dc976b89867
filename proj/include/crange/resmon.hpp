// SPDX-License-Identifier: Apache-2.0
//
// Resource consumption versus instance count. simulate_usage is a linear
// per-instance model; collect_stats polls a live driver; compare_backends
// lines the two series up by instance count.
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "crange/driver.hpp"
#include "crange/provision.hpp"
#include "crange/resources.hpp"

namespace crange {

// Per-instance costs. VMs preallocate (base_mb > 0); containers do not
// (base_mb == 0) and pay only idle_mb.
struct ResourceProfile {
  Backend backend = Backend::container;
  double base_mb = 0.0;
  double idle_mb = 0.0;
  double storage_mb = 0.0;
  double cpu_idle_pct = 0.0;

  friend bool operator==(const ResourceProfile&, const ResourceProfile&) = default;
};

// Throws SchemaError naming the offending field.
void check(const ResourceProfile& p);

struct ProfileSet {
  ResourceProfile vm;
  ResourceProfile container;
};

// profiles: list of {backend, base_mb, idle_mb, storage_mb, cpu_idle_pct},
// one per backend. Throws ParseError / SchemaError.
ProfileSet parse_profiles(std::string_view yaml);
const ProfileSet& default_profiles();

// n × per-instance cost for every field; timestamp 0.
ResourceSample simulate_usage(const ResourceProfile& p, std::size_t n);

// Usage of a simulated backend at n = first, first + step, ... <= last.
std::vector<ResourceSample> simulate_series(const ResourceProfile& p, std::size_t first,
                                            std::size_t last, std::size_t step = 1);

struct CollectOptions {
  std::size_t ticks = 1;
  double interval_s = 1.0;
  // Seconds since an arbitrary epoch. Defaults to a steady clock.
  std::function<double()> clock;
  // Called between ticks. Defaults to sleeping interval_s.
  std::function<void(double)> sleep;
};

struct StatsResult {
  std::vector<ResourceSample> samples;
  std::vector<std::string> warnings;
};

// One aggregate sample per tick over the running instances. An instance
// whose stats call fails is left out of that tick's sample and reported in
// warnings. Timestamps never decrease. No running instance, no samples.
StatsResult collect_stats(Driver& driver, const EnvironmentState& env,
                          const CollectOptions& options = {});

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;

  friend bool operator==(const LinearFit&, const LinearFit&) = default;
};

// Ordinary least squares of y on x. A single distinct x gives slope 0 and
// the mean as intercept. Throws PreconditionError for empty input.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ComparisonPoint {
  std::size_t instance_count = 0;
  double vm_memory_mb = 0.0;
  double ct_memory_mb = 0.0;
  double memory_ratio = 1.0;
  double storage_ratio = 1.0;
  double cpu_ratio = 1.0;

  friend bool operator==(const ComparisonPoint&, const ComparisonPoint&) = default;
};

struct ComparisonSummary {
  std::vector<ComparisonPoint> points;  // ascending instance_count
  LinearFit vm_memory, ct_memory;
  LinearFit vm_storage, ct_storage;
  LinearFit vm_cpu, ct_cpu;

  friend bool operator==(const ComparisonSummary&, const ComparisonSummary&) = default;
};

// Ratios are vm / ct at every instance count present in both series
// (samples sharing a count are averaged first); 0/0 counts as 1 and x/0 as
// infinity. Fits use every sample of a series. Throws PreconditionError for
// an empty series or when no instance count is shared.
ComparisonSummary compare_backends(const std::vector<ResourceSample>& vm,
                                   const std::vector<ResourceSample>& ct);

}  // namespace crange
