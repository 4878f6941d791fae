#pragma once

#include <iosfwd>

namespace ncsir::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kInvalidConfig = 2,
  kCertificateFailure = 3,
  kDivergence = 4,
  kEnsembleDivergence = 5,
};

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncsir::cli
