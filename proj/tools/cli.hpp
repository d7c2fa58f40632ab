#pragma once

#include <iosfwd>

namespace beamforge::cli {

/// Exit status: 0 success, 1 domain error, 2 usage or config error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace beamforge::cli
