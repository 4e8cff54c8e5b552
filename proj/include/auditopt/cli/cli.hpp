#pragma once

#include <iosfwd>

namespace auditopt::cli {

inline constexpr const char* kToolName = "auditopt";
inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes: 0 success, 2 configuration error, 3 regime or precondition error, 1 anything else.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace auditopt::cli
