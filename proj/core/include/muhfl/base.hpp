#pragma once

#include <atomic>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace muhfl {

// Unbounded integers; formulas quantify over all of Z, so literals and
// arithmetic must not overflow.
using Int = boost::multiprecision::cpp_int;

struct Error : std::runtime_error {
  explicit Error(const std::string& m) : std::runtime_error(m) {}
};

struct ParseError : Error {
  using Error::Error;
};
struct TypeError : Error {
  using Error::Error;
};
struct UnboundVariable : TypeError {
  using TypeError::TypeError;
};
struct SortMismatch : TypeError {
  using TypeError::TypeError;
};
struct ArityMismatch : TypeError {
  using TypeError::TypeError;
};
struct NotClosed : Error {
  using Error::Error;
};
struct NotProp : Error {
  using Error::Error;
};
struct NotDisjunctive : Error {
  using Error::Error;
};
struct NotRecursionFree : Error {
  using Error::Error;
};
struct NotNormalized : Error {
  using Error::Error;
};
struct GrammarViolation : Error {
  using Error::Error;
};
struct OrderTooHigh : Error {
  using Error::Error;
};
struct HigherOrderTupleEscape : Error {
  using Error::Error;
};

// Fresh-name supply.  Generated names live in a reserved namespace (they
// contain '$' or '@', which never appear in hand-written identifiers in
// practice); after parsing a file the counter is bumped past any numeric
// suffix seen so regenerated names cannot collide with parsed ones.
class NameSupply {
 public:
  static std::string fresh(const std::string& base) {
    return base + "$" + std::to_string(counter().fetch_add(1));
  }
  static void bump_past(unsigned long n) {
    auto& c = counter();
    unsigned long cur = c.load();
    while (cur <= n && !c.compare_exchange_weak(cur, n + 1)) {
    }
  }
  // Bump past any trailing "$<n>" / "@<n>" suffix of an identifier.
  static void note_name(const std::string& name);

 private:
  static std::atomic<unsigned long>& counter() {
    static std::atomic<unsigned long> c{0};
    return c;
  }
};

inline void NameSupply::note_name(const std::string& name) {
  auto pos = name.find_last_of("$@");
  if (pos == std::string::npos || pos + 1 >= name.size()) return;
  unsigned long v = 0;
  for (size_t i = pos + 1; i < name.size(); ++i) {
    char ch = name[i];
    if (ch < '0' || ch > '9') return;
    v = v * 10 + static_cast<unsigned long>(ch - '0');
  }
  bump_past(v);
}

}  // namespace muhfl
