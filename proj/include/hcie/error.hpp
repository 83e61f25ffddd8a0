#pragma once

#include <stdexcept>
#include <string>

namespace hcie {

/// Error categories; the CLI maps them to exit codes.
enum class errc {
  usage,     ///< bad arguments or an invalid configuration
  io,        ///< filesystem failure
  format,    ///< malformed file contents
  domain,    ///< domain rule violated (dimensions, value ranges, bijectivity)
  stream,    ///< keystream exhausted or too short
  internal,  ///< broken invariant inside the library
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace hcie
