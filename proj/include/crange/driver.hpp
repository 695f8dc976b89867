// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "crange/resources.hpp"
#include "crange/scenario.hpp"

namespace crange {

struct InstanceSpec {
  std::string image;
  Backend backend = Backend::container;
  std::vector<std::string> networks;
  long storage_mb = 0;  // 0 = no storage quota
};

// Backend contract used by execute_plan and collect_stats. Operations throw
// DriverError on failure. Implementations require create before start, serve
// stats only for started instances, and treat destroy / remove_network of an
// unknown id as a no-op. Calls arrive from one thread at a time.
class Driver {
public:
  virtual ~Driver() = default;

  virtual void create_network(const std::string& id, const std::map<std::string, std::string>& params) = 0;
  virtual void remove_network(const std::string& id) = 0;

  virtual void create(const std::string& id, const InstanceSpec& spec) = 0;
  virtual void apply_limits(const std::string& id, const ResourceCaps& caps) = 0;
  virtual void start(const std::string& id) = 0;
  virtual void start_service(const std::string& id, const ServiceSpec& service) = 0;
  virtual void stop(const std::string& id) = 0;
  virtual ResourceSample stats(const std::string& id) = 0;
  virtual void destroy(const std::string& id) = 0;
};

}  // namespace crange
