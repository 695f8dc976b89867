// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "crange/driver.hpp"

namespace crange {

// In-memory Driver for tests and dry runs. Enforces the driver contract,
// records every call, and fails on request.
class MockDriver : public Driver {
public:
  // Operation names used by fail_on and the journal: create_network,
  // remove_network, create, apply_limits, start, start_service, stop, stats,
  // destroy.
  void fail_on(std::string op, std::string subject);
  // Fails the n-th call (1-based, counted over every operation).
  void fail_on_call(std::size_t n);
  void clear_failures();

  // Usage reported by stats for one instance, or for every instance without
  // its own entry when id is "*".
  void set_usage(const std::string& id, ResourceSample per_instance);

  void create_network(const std::string& id,
                      const std::map<std::string, std::string>& params) override;
  void remove_network(const std::string& id) override;
  void create(const std::string& id, const InstanceSpec& spec) override;
  void apply_limits(const std::string& id, const ResourceCaps& caps) override;
  void start(const std::string& id) override;
  void start_service(const std::string& id, const ServiceSpec& service) override;
  void stop(const std::string& id) override;
  ResourceSample stats(const std::string& id) override;
  void destroy(const std::string& id) override;

  std::vector<std::string> live_instances() const;
  std::vector<std::string> live_networks() const;
  bool is_running(const std::string& id) const;
  std::optional<ResourceCaps> limits(const std::string& id) const;
  std::vector<ServiceSpec> services(const std::string& id) const;

  // "<op> <subject>" per call, failed calls included.
  const std::vector<std::string>& journal() const noexcept { return journal_; }
  std::size_t calls() const noexcept { return journal_.size(); }

private:
  struct Instance {
    InstanceSpec spec;
    bool running = false;
    std::optional<ResourceCaps> caps;
    std::vector<ServiceSpec> services;
  };

  void enter(const char* op, const std::string& subject);
  Instance& require(const std::string& id, const char* op);

  std::set<std::pair<std::string, std::string>> fail_ops_;
  std::set<std::size_t> fail_calls_;
  std::map<std::string, ResourceSample> usage_;
  std::map<std::string, std::map<std::string, std::string>> networks_;
  std::map<std::string, Instance> instances_;
  std::vector<std::string> journal_;
};

// Renders each call as a docker command line instead of executing it.
// stats is unsupported and throws DriverError.
class CommandPlanDriver : public Driver {
public:
  void create_network(const std::string& id,
                      const std::map<std::string, std::string>& params) override;
  void remove_network(const std::string& id) override;
  void create(const std::string& id, const InstanceSpec& spec) override;
  void apply_limits(const std::string& id, const ResourceCaps& caps) override;
  void start(const std::string& id) override;
  void start_service(const std::string& id, const ServiceSpec& service) override;
  void stop(const std::string& id) override;
  ResourceSample stats(const std::string& id) override;
  void destroy(const std::string& id) override;

  const std::vector<std::string>& commands() const noexcept { return commands_; }
  std::string script() const;

private:
  std::vector<std::string> commands_;
};

}  // namespace crange
