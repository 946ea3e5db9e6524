#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nkm::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kUsageError = 2 };

// Entry point of the noisy_kmeans tool. Output files go where --out says;
// without --out the result is written to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nkm::cli
