// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rlab {

enum class Status { Holds, Fails, NotCovered };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Holds: return "Holds";
    case Status::Fails: return "Fails";
    case Status::NotCovered: return "NotCovered";
  }
  return "?";
}

struct Condition {
  std::string name;
  bool satisfied = false;
  bool boundary = false;  // satisfied with equality
};

struct Verdict {
  std::string theorem;
  Status status = Status::NotCovered;
  std::vector<Condition> conditions;
  std::vector<std::pair<std::string, std::string>> params;
  std::string note;

  const Condition* find(const std::string& name) const {
    for (const auto& c : conditions)
      if (c.name == name) return &c;
    return nullptr;
  }
  bool violated(const std::string& name) const {
    const Condition* c = find(name);
    return c != nullptr && !c->satisfied;
  }
  bool all_satisfied() const {
    for (const auto& c : conditions)
      if (!c.satisfied) return false;
    return true;
  }
  Condition& add(std::string name, bool satisfied, bool boundary = false) {
    conditions.push_back({std::move(name), satisfied, boundary && satisfied});
    return conditions.back();
  }
};

// Raised for inputs outside the domain where a statement is formulated.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an iterative numerical method fails to meet its tolerance.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rlab
