#pragma once

#include <stdexcept>
#include <string>

namespace tsqw {

/// Evaluation requested exactly at (or numerically on top of) a gap closing.
class GapClosingError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A gapped-phase operation received gapless parameters.
class GaplessInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A gapless-phase operation received parameters in a gapped sub-domain.
class GappedInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class FitRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace tsqw
