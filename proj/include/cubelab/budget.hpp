#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cubelab {

// Exhaustive enumeration is capped by an iteration budget. Exceeding it is an
// error, never a silent fallback to sampling.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, std::uint64_t need, std::uint64_t have)
        : std::runtime_error(what + ": needs " + std::to_string(need) +
                             " iterations, budget is " + std::to_string(have)),
          need_(need),
          have_(have) {}
    std::uint64_t needed() const { return need_; }
    std::uint64_t allowed() const { return have_; }

private:
    std::uint64_t need_;
    std::uint64_t have_;
};

inline constexpr std::uint64_t kDefaultBudget = 1ULL << 24;

inline std::uint64_t default_budget() {
    if (const char* env = std::getenv("CUBELAB_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return kDefaultBudget;
}

inline void check_budget(const std::string& what, std::uint64_t need, std::uint64_t budget) {
    if (need > budget) throw BudgetExceeded(what, need, budget);
}

}  // namespace cubelab
