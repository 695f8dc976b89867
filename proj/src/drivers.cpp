// SPDX-License-Identifier: Apache-2.0
#include "crange/drivers.hpp"

#include <cstdio>

#include "crange/error.hpp"
#include "shell_quote.hpp"

namespace crange {

using detail::shell_word;

void MockDriver::fail_on(std::string op, std::string subject) {
  fail_ops_.emplace(std::move(op), std::move(subject));
}

void MockDriver::fail_on_call(std::size_t n) { fail_calls_.insert(n); }

void MockDriver::clear_failures() {
  fail_ops_.clear();
  fail_calls_.clear();
}

void MockDriver::set_usage(const std::string& id, ResourceSample per_instance) {
  usage_[id] = per_instance;
}

void MockDriver::enter(const char* op, const std::string& subject) {
  journal_.push_back(std::string(op) + " " + subject);
  if (fail_calls_.count(journal_.size()) || fail_ops_.count({op, subject})) {
    throw DriverError(std::string("scripted failure: ") + op + " " + subject);
  }
}

MockDriver::Instance& MockDriver::require(const std::string& id, const char* op) {
  auto it = instances_.find(id);
  if (it == instances_.end()) {
    throw DriverError(std::string(op) + ": no instance '" + id + "'");
  }
  return it->second;
}

void MockDriver::create_network(const std::string& id,
                                const std::map<std::string, std::string>& params) {
  enter("create_network", id);
  if (networks_.count(id)) throw DriverError("create_network: '" + id + "' already exists");
  networks_[id] = params;
}

void MockDriver::remove_network(const std::string& id) {
  enter("remove_network", id);
  networks_.erase(id);
}

void MockDriver::create(const std::string& id, const InstanceSpec& spec) {
  enter("create", id);
  if (instances_.count(id)) throw DriverError("create: '" + id + "' already exists");
  for (const auto& net : spec.networks) {
    if (!networks_.count(net)) throw DriverError("create: unknown network '" + net + "'");
  }
  instances_[id] = Instance{spec, false, std::nullopt, {}};
}

void MockDriver::apply_limits(const std::string& id, const ResourceCaps& caps) {
  enter("apply_limits", id);
  require(id, "apply_limits").caps = caps;
}

void MockDriver::start(const std::string& id) {
  enter("start", id);
  require(id, "start").running = true;
}

void MockDriver::start_service(const std::string& id, const ServiceSpec& service) {
  enter("start_service", id);
  auto& inst = require(id, "start_service");
  if (!inst.running) throw DriverError("start_service: '" + id + "' is not running");
  inst.services.push_back(service);
}

void MockDriver::stop(const std::string& id) {
  enter("stop", id);
  require(id, "stop").running = false;
}

ResourceSample MockDriver::stats(const std::string& id) {
  enter("stats", id);
  const auto& inst = require(id, "stats");
  if (!inst.running) throw DriverError("stats: '" + id + "' is not running");
  ResourceSample s;
  if (auto it = usage_.find(id); it != usage_.end())
    s = it->second;
  else if (auto all = usage_.find("*"); all != usage_.end())
    s = all->second;
  s.instance_count = 1;
  return s;
}

void MockDriver::destroy(const std::string& id) {
  enter("destroy", id);
  instances_.erase(id);
}

std::vector<std::string> MockDriver::live_instances() const {
  std::vector<std::string> out;
  for (const auto& [id, inst] : instances_) out.push_back(id);
  return out;
}

std::vector<std::string> MockDriver::live_networks() const {
  std::vector<std::string> out;
  for (const auto& [id, params] : networks_) out.push_back(id);
  return out;
}

bool MockDriver::is_running(const std::string& id) const {
  auto it = instances_.find(id);
  return it != instances_.end() && it->second.running;
}

std::optional<ResourceCaps> MockDriver::limits(const std::string& id) const {
  auto it = instances_.find(id);
  return it == instances_.end() ? std::nullopt : it->second.caps;
}

std::vector<ServiceSpec> MockDriver::services(const std::string& id) const {
  auto it = instances_.find(id);
  return it == instances_.end() ? std::vector<ServiceSpec>{} : it->second.services;
}

void CommandPlanDriver::create_network(const std::string& id,
                                       const std::map<std::string, std::string>& params) {
  auto it = params.find("attach");
  const bool host = it != params.end() && it->second == "host-segment";
  commands_.push_back("docker network create --driver " + std::string(host ? "macvlan" : "bridge") +
                      " " + shell_word(id));
}

void CommandPlanDriver::remove_network(const std::string& id) {
  commands_.push_back("docker network rm " + shell_word(id));
}

void CommandPlanDriver::create(const std::string& id, const InstanceSpec& spec) {
  std::string cmd = "docker create --name " + shell_word(id);
  if (!spec.networks.empty()) cmd += " --network " + shell_word(spec.networks.front());
  if (spec.storage_mb > 0) cmd += " --storage-opt size=" + std::to_string(spec.storage_mb) + "m";
  cmd += " " + shell_word(spec.image);
  commands_.push_back(cmd);
  for (std::size_t i = 1; i < spec.networks.size(); ++i) {
    commands_.push_back("docker network connect " + shell_word(spec.networks[i]) + " " +
                        shell_word(id));
  }
}

void CommandPlanDriver::apply_limits(const std::string& id, const ResourceCaps& caps) {
  char cpus[32];
  std::snprintf(cpus, sizeof cpus, "%.2f", caps.cpu_pct / 100.0);
  commands_.push_back("docker update --memory " + std::to_string(caps.memory_mb) + "m --cpus " +
                      cpus + " " + shell_word(id));
}

void CommandPlanDriver::start(const std::string& id) {
  commands_.push_back("docker start " + shell_word(id));
}

void CommandPlanDriver::start_service(const std::string& id, const ServiceSpec& service) {
  std::string cmd = "docker exec " + shell_word(id) + " crange-start-service " +
                    shell_word(service.name) + " " + std::to_string(service.port) + "/" +
                    shell_word(service.protocol);
  if (!service.version.empty()) cmd += " " + shell_word(service.version);
  commands_.push_back(cmd);
}

void CommandPlanDriver::stop(const std::string& id) {
  commands_.push_back("docker stop " + shell_word(id));
}

ResourceSample CommandPlanDriver::stats(const std::string& id) {
  throw DriverError("stats: the command-plan driver does not run '" + id + "'");
}

void CommandPlanDriver::destroy(const std::string& id) {
  commands_.push_back("docker rm -f " + shell_word(id));
}

std::string CommandPlanDriver::script() const {
  std::string out;
  for (const auto& c : commands_) out += c + "\n";
  return out;
}

}  // namespace crange
