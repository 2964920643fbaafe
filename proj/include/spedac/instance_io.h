// Plain-text instance files:
//
//   SPEDAC 1
//   n m c s t
//   tail head weight        (m lines)
//   arcA arcB penalty       (c lines, 0-based arc indices)
//
// Decimal integers separated by single spaces, LF line endings.

#ifndef SPEDAC_INSTANCE_IO_H_
#define SPEDAC_INSTANCE_IO_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "spedac/core.h"

namespace spedac {

inline constexpr std::string_view kToolVersion = "spedac 0.1.0";

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Throws ParseError for malformed text and InvariantError (naming the rule)
// for well-formed text describing an invalid instance.
Instance ParseInstance(std::string_view text);
std::string RenderInstance(const Instance& instance);

Instance ReadInstanceFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);
std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace spedac

#endif  // SPEDAC_INSTANCE_IO_H_
