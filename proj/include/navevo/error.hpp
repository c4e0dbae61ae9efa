#pragma once

#include <stdexcept>
#include <string>

namespace navevo {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. The message names the source and the offending line.
class ParseError : public Error {
public:
  ParseError(const std::string& source, int line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), source_(source), line_(line) {}

  const std::string& source() const { return source_; }
  int line() const { return line_; }

private:
  std::string source_;
  int line_;
};

}  // namespace navevo
