#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace metaelo::cli {

// Exit statuses: 0 success, 1 validation error, 2 integrity/replay failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIntegrity = 2;

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace metaelo::cli
