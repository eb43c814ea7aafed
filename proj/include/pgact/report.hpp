#ifndef PGACT_REPORT_HPP
#define PGACT_REPORT_HPP

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pgact {

// Input that cannot even be interpreted (parse errors, shape mismatches,
// compositions declared outside the source/target discipline).
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A named hypothesis of an operation does not hold for the given input.
struct PreconditionError : StructuralError {
  using StructuralError::StructuralError;
};

// A constructed object violated an invariant the construction guarantees.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

enum class CheckStatus { pass, fail, vacuous };

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::string witness;   // empty on pass; states the failing datum otherwise
  bool structural = false;
};

// Flat list of named checks.  A check is vacuous when its quantifier ranged
// over an empty set; vacuous checks never fail a report.
class VerificationReport {
 public:
  explicit VerificationReport(std::string subject = "") : subject_(std::move(subject)) {}

  void pass(const std::string& name) { checks_.push_back({name, CheckStatus::pass, "", false}); }
  void vacuous(const std::string& name, const std::string& note = "") {
    checks_.push_back({name, CheckStatus::vacuous, note, false});
  }
  void fail(const std::string& name, const std::string& witness, bool structural = false) {
    checks_.push_back({name, CheckStatus::fail, witness, structural});
  }
  void check(const std::string& name, bool ok, const std::string& witness = "") {
    if (ok)
      pass(name);
    else
      fail(name, witness);
  }
  void merge(const VerificationReport& other, const std::string& prefix = "") {
    for (const auto& c : other.checks_)
      checks_.push_back({prefix.empty() ? c.name : prefix + "/" + c.name, c.status, c.witness, c.structural});
  }

  bool ok() const {
    for (const auto& c : checks_)
      if (c.status == CheckStatus::fail) return false;
    return true;
  }
  bool structural_failure() const {
    for (const auto& c : checks_)
      if (c.status == CheckStatus::fail && c.structural) return true;
    return false;
  }
  const std::string& subject() const { return subject_; }
  const std::vector<Check>& checks() const { return checks_; }

  std::string first_failure() const {
    for (const auto& c : checks_)
      if (c.status == CheckStatus::fail) return c.name + ": " + c.witness;
    return "";
  }

  std::string text() const {
    std::ostringstream os;
    if (!subject_.empty()) os << subject_ << "\n";
    for (const auto& c : checks_) {
      const char* tag = c.status == CheckStatus::pass     ? "[ ok ]"
                        : c.status == CheckStatus::vacuous ? "[ -- ]"
                                                           : "[FAIL]";
      os << "  " << tag << " " << c.name;
      if (!c.witness.empty()) os << "  (" << c.witness << ")";
      os << "\n";
    }
    return os.str();
  }

 private:
  std::string subject_;
  std::vector<Check> checks_;
};

}  // namespace pgact

#endif
