#ifndef MLCC_ERRORS_HPP_
#define MLCC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mlcc {

/// Bad input data: unparseable files, malformed values, shape mismatches.
class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad caller configuration: invalid arguments, impossible settings.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mlcc

#endif  // MLCC_ERRORS_HPP_
