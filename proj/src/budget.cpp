#include "torcor/budget.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "torcor/error.hpp"

namespace torcor {

MemoryBudget MemoryBudget::from_env() {
  const char* value = std::getenv(kMemoryBudgetEnv);
  if (value == nullptr || *value == '\0') return {};
  return parse(value);
}

MemoryBudget MemoryBudget::parse(std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr == text.data())
    throw InvalidArgument("cannot parse memory budget '" + std::string(text) + "'");
  const std::string_view suffix(ptr, static_cast<std::size_t>(text.data() + text.size() - ptr));
  unsigned shift = 0;
  if (!suffix.empty()) {
    switch (std::toupper(static_cast<unsigned char>(suffix.front()))) {
      case 'K': shift = 10; break;
      case 'M': shift = 20; break;
      case 'G': shift = 30; break;
      case 'T': shift = 40; break;
      default: throw InvalidArgument("bad memory budget suffix in '" + std::string(text) + "'");
    }
    const auto rest = suffix.substr(1);
    if (!(rest.empty() || rest == "B" || rest == "iB" || rest == "b"))
      throw InvalidArgument("bad memory budget suffix in '" + std::string(text) + "'");
  }
  if (shift > 0 && value > (~std::uint64_t{0} >> shift))
    throw InvalidArgument("memory budget '" + std::string(text) + "' overflows");
  return MemoryBudget{value << shift};
}

void MemoryBudget::require(std::uint64_t required, const std::string& stage) const {
  if (required > bytes) throw BudgetExceeded(stage + " exceeds the memory budget (bytes)", required, bytes);
}

}  // namespace torcor
