#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace specmc {

// Machine values are bounded two's-complement integers.  The default width
// is 64 bits; narrower widths wrap in eval().
using Value = std::int64_t;
using Addr = std::int64_t;

inline constexpr int kDefaultValueBits = 64;

// Truncate v to `bits` and sign-extend.
inline Value truncate_value(Value v, int bits) {
  if (bits >= 64) return v;
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  std::uint64_t u = static_cast<std::uint64_t>(v) & mask;
  if (u & (std::uint64_t{1} << (bits - 1))) u |= ~mask;
  return static_cast<Value>(u);
}

// User-facing error: bad input program, unbound name, address outside the
// declared memory image.  Carries an optional source position.
class Diagnostic : public std::runtime_error {
 public:
  explicit Diagnostic(const std::string& msg) : std::runtime_error(msg) {}
  Diagnostic(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", col " +
                           std::to_string(col) + ")"),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_ = 0;
  int col_ = 0;
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace specmc
