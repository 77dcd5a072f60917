#pragma once

#include <stdexcept>
#include <string>

namespace nnea {

// usage mistakes: bad config keys or values, malformed CLI input
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// requests that are valid but exceed what this build will attempt
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// files that cannot be opened or do not parse
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nnea
