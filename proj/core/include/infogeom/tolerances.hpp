#pragma once

#include <map>
#include <string>
#include <string_view>

namespace infogeom {

/// Named, overridable numerical thresholds (`--tol name=value` on the CLI).
///
/// Every name has a default; unknown names are rejected so a typo on the
/// command line cannot silently leave a threshold at its default.
class Tolerances {
 public:
  Tolerances();

  double get(std::string_view name) const;
  void set(std::string_view name, double value);
  bool contains(std::string_view name) const;

  /// Parses "name=value" and applies it. Throws std::invalid_argument.
  void apply_override(std::string_view assignment);

  const std::map<std::string, double, std::less<>>& values() const { return values_; }

 private:
  std::map<std::string, double, std::less<>> values_;
};

}  // namespace infogeom
