#ifndef POISSON_MOMENTS_TOOLS_CLI_HPP
#define POISSON_MOMENTS_TOOLS_CLI_HPP

#include "evaluate.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace poisson_moments::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kPrecondition = 3 };

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline constexpr const char* kCsvHeader = "m,a,b,r,method,value,condition,certified_error,elapsed_ns";

void write_csv(std::ostream& out, const std::vector<OutputRecord>& rows);
void write_json(std::ostream& out, const std::vector<OutputRecord>& rows, bool as_array);
void write_text(std::ostream& out, const std::vector<OutputRecord>& rows);

}  // namespace poisson_moments::cli

#endif  // POISSON_MOMENTS_TOOLS_CLI_HPP
