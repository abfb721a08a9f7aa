#pragma once

#include <string>
#include <utility>
#include <vector>

#include "drs/clause.hpp"

namespace drs::referee {

enum class Violation { FreeVariable, SubordinationCycle, Disconnected, UnboundBox };

const char* violation_name(Violation v);

struct ValidationReport {
  bool well_formed = true;
  std::vector<std::pair<Violation, std::string>> violations;

  void add(Violation v, std::string detail) {
    well_formed = false;
    violations.emplace_back(v, std::move(detail));
  }
};

// One edge per `b OP b'` clause: head box -> argument box.
std::vector<std::pair<Variable, Variable>> subordination_graph(const Drs& d);

ValidationReport validate(const Drs& d);

}  // namespace drs::referee
