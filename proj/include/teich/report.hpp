#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace teich {

/// Outcome of a property check.  `min_slack` is the smallest value of the
/// checked quantity minus its bound over all samples; error-style checks
/// store the negated error, so in every case the check passes exactly
/// when min_slack >= -tolerance.
struct VerificationReport {
  std::string name;
  std::size_t samples = 0;
  double min_slack = 0.0;
  double tolerance = 0.0;
  std::string witness;  // sample attaining min_slack
  bool pass = false;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> metrics;

  void finalize() { pass = min_slack >= -tolerance; }
};

/// Running minimum with index tie-break, so serial and chunked sweeps agree.
class SlackTracker {
 public:
  void observe(double slack, std::size_t index, std::string witness = {}) {
    ++count_;
    if (!has_ || slack < min_ || (slack == min_ && index < index_)) {
      has_ = true;
      min_ = slack;
      index_ = index;
      witness_ = std::move(witness);
    }
  }
  template <class WitnessFn>
  void observe_lazy(double slack, std::size_t index, WitnessFn&& fn) {
    ++count_;
    if (!has_ || slack < min_ || (slack == min_ && index < index_)) {
      has_ = true;
      min_ = slack;
      index_ = index;
      witness_ = fn();
    }
  }

  std::size_t count() const { return count_; }
  double min() const { return has_ ? min_ : 0.0; }
  const std::string& witness() const { return witness_; }

  VerificationReport report(std::string name, double tolerance) const {
    VerificationReport r;
    r.name = std::move(name);
    r.samples = count_;
    r.min_slack = min();
    r.tolerance = tolerance;
    r.witness = witness_;
    r.finalize();
    return r;
  }

 private:
  bool has_ = false;
  double min_ = 0.0;
  std::size_t index_ = 0;
  std::size_t count_ = 0;
  std::string witness_;
};

}  // namespace teich
