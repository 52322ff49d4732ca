#pragma once

// Named pass/fail checks shared by every verification routine and the CLI.

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "qkcomp/rational.hpp"

namespace qkcomp {

/// Float text at 12 significant digits.
inline std::string format_float(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Rounds to what format_float prints, for emitting JSON numbers.
inline double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_float(x).c_str(), nullptr);
}

struct Check {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

class CheckReport {
 public:
  void add(std::string name, std::string expected, std::string actual, bool pass) {
    checks_.push_back({std::move(name), std::move(expected), std::move(actual), pass});
  }

  void add_exact(std::string name, const Rational& expected, const Rational& actual) {
    add(std::move(name), to_fraction_string(expected), to_fraction_string(actual), expected == actual);
  }

  void add_flag(std::string name, bool ok, std::string detail = {}) {
    add(std::move(name), "true", ok ? "true" : (detail.empty() ? "false" : detail), ok);
  }

  void append(const CheckReport& other, const std::string& prefix = {}) {
    for (const auto& c : other.checks_)
      checks_.push_back({prefix + c.name, c.expected, c.actual, c.pass});
  }

  [[nodiscard]] bool passed() const {
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }

  [[nodiscard]] std::vector<const Check*> failures() const {
    std::vector<const Check*> out;
    for (const auto& c : checks_)
      if (!c.pass) out.push_back(&c);
    return out;
  }

  [[nodiscard]] const std::vector<Check>& checks() const { return checks_; }
  [[nodiscard]] std::size_t size() const { return checks_.size(); }

 private:
  std::vector<Check> checks_;
};

}  // namespace qkcomp
