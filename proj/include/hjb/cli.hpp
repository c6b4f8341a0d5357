#ifndef HJB_CLI_HPP
#define HJB_CLI_HPP

#include <string>
#include <vector>

namespace hjb::cli {

/// Entry point behind the hjbgrowth binary. Exit codes: 0 success, 1 a model
/// or certificate check failed, 2 usage/config error.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

} // namespace hjb::cli

#endif
