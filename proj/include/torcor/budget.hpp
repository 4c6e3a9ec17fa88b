#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace torcor {

inline constexpr const char* kMemoryBudgetEnv = "TORCOR_MEM_BUDGET";
inline constexpr std::uint64_t kDefaultMemoryBudget = std::uint64_t{2} << 30;

/// Upper bound on the bytes a single kernel may allocate for its working set.
struct MemoryBudget {
  std::uint64_t bytes = kDefaultMemoryBudget;

  /// Reads TORCOR_MEM_BUDGET (e.g. "512M", "2G", "1073741824"); 2 GiB when unset.
  static MemoryBudget from_env();

  /// Parses a byte count with an optional K/M/G/T suffix (binary multiples).
  static MemoryBudget parse(std::string_view text);

  /// Throws BudgetExceeded naming `stage` when `required` is over budget.
  void require(std::uint64_t required, const std::string& stage) const;
};

}  // namespace torcor
