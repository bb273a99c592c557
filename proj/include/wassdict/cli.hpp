#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wassdict/diagram.hpp"

namespace wassdict::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kNumericalError = 3,
};

/// Runs one command line. `args` excludes the program name. Results go to
/// files or `out`; diagnostics and progress go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Every `.pd` file of `dir`, sorted by file name. A diagram without a
/// label takes its file stem. Throws DataError if the directory is missing
/// or holds no diagram; parse errors name the offending file.
std::vector<PersistenceDiagram> ingest_ensemble(const std::filesystem::path& dir);

}  // namespace wassdict::cli
