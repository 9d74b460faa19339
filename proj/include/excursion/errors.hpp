#pragma once

#include <stdexcept>
#include <string>

namespace excursion {

/// Bad caller input: out-of-range parameters, malformed rasters, bad config.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Config file or flag combination that cannot be interpreted.
struct ConfigError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

/// File could not be opened, or its contents do not follow the declared format.
struct IoError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

/// A covariance model lacks the smoothness an operation needs (e.g. lambda2 for nu <= 1).
struct NonSmoothModel : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

/// Base for failures that come from the numbers rather than from the request.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmbeddingFailure : NumericalError {
  using NumericalError::NumericalError;
};

struct NoExcursionBoundary : NumericalError {
  using NumericalError::NumericalError;
};

struct DegenerateCovariance : NumericalError {
  using NumericalError::NumericalError;
};

struct UndefinedMape : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace excursion
