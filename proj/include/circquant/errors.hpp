#pragma once

#include <stdexcept>
#include <string>

namespace circquant {

/// Invalid user configuration. `field` names the offending input so the CLI
/// can report it.
class config_error : public std::invalid_argument {
 public:
  config_error(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A requested computation is too large to run.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A chordal centroid whose mean resultant vanishes; the direction is undefined.
class degenerate_centroid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace circquant
