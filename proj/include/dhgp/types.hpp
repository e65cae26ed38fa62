#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace dhgp {

// Ids are zero-based and contiguous; they double as offsets-array indices.
using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using PartId = std::uint32_t;
using Weight = double;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input cannot be partitioned under the requested constraints.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken internal invariant (pairing cycle longer than two, etc).
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dhgp
