#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace symuniv {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

// Parses argv, runs one subcommand and writes its artifacts. Returns the
// process exit status: 0 success, 1 domain error, 2 usage error.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

enum class VerifyLevel { quick, full };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::quick;
  std::filesystem::path cache_dir;  // empty: no caching
  unsigned threads = 0;
  std::uint64_t seed = kDefaultSeed;
};

struct CheckResult {
  std::string id;
  std::string name;
  double measured;
  double tolerance;
  bool passed;
  bool informational;  // reported, never fails the suite
  std::string detail;
  double seconds;
};

struct VerifyReport {
  VerifyLevel level;
  std::vector<CheckResult> checks;
  bool passed() const;
  std::vector<std::string> failing() const;
};

VerifyReport verify_suite(const VerifyOptions& options);

}  // namespace symuniv
