#pragma once

#include <stdexcept>
#include <string>

namespace pericontact {

// One exception family per pipeline stage; the CLI maps each to a distinct
// exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AssemblyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ReportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pericontact
