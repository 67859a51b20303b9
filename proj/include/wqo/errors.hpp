#pragma once

#include <stdexcept>
#include <string>

namespace wqo {

// Input that does not satisfy one of the grammars.
struct parse_error : std::runtime_error {
  std::size_t position;
  parse_error(std::string msg, std::size_t pos)
      : std::runtime_error(std::move(msg)), position(pos) {}
};

// The operation is only defined below a level cutoff (word terms of
// length >= w^3 have no exact decision procedure here).
struct unsupported_level : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A value that should be impossible by construction was produced.
struct invariant_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace wqo
