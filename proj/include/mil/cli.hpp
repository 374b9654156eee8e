#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mil::cli {

/// Entry point behind the `mil` binary. Arguments exclude the program name.
/// Returns 0 when every requested check passed, 1 when at least one check
/// failed (nonzero residual, |z| above threshold, or a quadrature mismatch),
/// and 2 on usage or parse errors.
int run(std::vector<std::string> args, std::ostream &out, std::ostream &err);

}  // namespace mil::cli
