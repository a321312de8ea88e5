#pragma once

#include <string>
#include <vector>

namespace topicatlas::cli {

/// Entry point shared by the executable and the tests. Returns the process exit code:
/// 0 success, 1 runtime failure, 2 usage error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args[0] is the program name

}  // namespace topicatlas::cli
