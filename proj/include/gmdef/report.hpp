#pragma once
#include <stdexcept>
#include <string>
#include <vector>

namespace gmdef {

// A structural hypothesis of the input model failed (distinct from bad I/O
// or programming errors); the cli maps this to its own exit code.
struct model_error : std::runtime_error {
  explicit model_error(const std::string& what) : std::runtime_error(what) {}
};

// Accumulated verdicts of a validation pass. Every structural check in the
// library records its outcome here instead of silently trusting preconditions.
struct Check {
  std::string name;
  bool pass = true;
  std::string witness;  // short description of the first failure, empty on pass
};

struct Report {
  std::vector<Check> checks;

  bool ok() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  void require(const std::string& name, bool cond, const std::string& witness = "") {
    checks.push_back({name, cond, cond ? std::string() : witness});
  }

  void merge(const Report& r, const std::string& prefix = "") {
    for (auto& c : r.checks)
      checks.push_back({prefix.empty() ? c.name : prefix + "." + c.name, c.pass, c.witness});
  }

  std::string first_failure() const {
    for (auto& c : checks)
      if (!c.pass) return c.witness.empty() ? c.name : c.name + ": " + c.witness;
    return std::string();
  }

  std::string summary() const {
    std::string s;
    for (auto& c : checks) {
      s += c.pass ? "[ok]   " : "[FAIL] ";
      s += c.name;
      if (!c.pass && !c.witness.empty()) s += ": " + c.witness;
      s += "\n";
    }
    return s;
  }
};

}  // namespace gmdef
