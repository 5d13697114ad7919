#pragma once

#include <stdexcept>

// Error taxonomy shared across the library. The command-line tool maps
// these onto process exit codes: configuration problems exit 2, data
// problems (manifest or audio) exit 3, insufficient data exits 4.

namespace lexdisc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: bad front-end parameters, unknown registers,
/// malformed command lines or config files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed manifest content. Messages name the offending row.
class ManifestError : public Error {
 public:
  using Error::Error;
};

/// Audio that cannot be decoded under the declared constraints
/// (not mono 16-bit PCM, interval past end of file, rate too low).
class IngestionError : public Error {
 public:
  using Error::Error;
};

/// A caller violated a documented precondition.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Not enough data to produce the requested result, e.g. a paired test
/// over fewer than two speakers or an aggregate over zero scored pairs.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Input that leaves a statistic undefined, e.g. zero-variance
/// differences in a paired t-test.
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace lexdisc
