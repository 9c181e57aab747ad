#pragma once

#include <stdexcept>
#include <string>

namespace tdosc {

enum class Failure {
  Domain,
  StiffnessFailure,
  DomainEscape,
  ZeroCrossing,
  PhaseUndefined,
  DegenerateBackground,
  NonNormalizable,
  RateSingular,
  TruncationLeak,
};

const char* to_string(Failure f);

/// Raised by the numerical layer. The failure kind lets callers (the CLI in
/// particular) map errors onto exit codes without string matching.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(Failure kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  Failure kind() const noexcept { return kind_; }

 private:
  Failure kind_;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& what)
      : std::runtime_error(what), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }  // 0 when not tied to a file line

 private:
  std::string key_;
  int line_;
};

inline const char* to_string(Failure f) {
  switch (f) {
    case Failure::Domain: return "DomainError";
    case Failure::StiffnessFailure: return "StiffnessFailure";
    case Failure::DomainEscape: return "DomainEscape";
    case Failure::ZeroCrossing: return "ZeroCrossing";
    case Failure::PhaseUndefined: return "PhaseUndefined";
    case Failure::DegenerateBackground: return "DegenerateBackground";
    case Failure::NonNormalizable: return "NonNormalizable";
    case Failure::RateSingular: return "RateSingular";
    case Failure::TruncationLeak: return "TruncationLeak";
  }
  return "UnknownFailure";
}

}  // namespace tdosc
