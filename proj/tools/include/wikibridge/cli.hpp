#pragma once

#include <ostream>

namespace wikibridge::cli {

// Exit codes: 0 success, 1 violations / query or load failures, 2 usage or I/O error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wikibridge::cli
