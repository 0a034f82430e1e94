#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ifpp/pgm.hpp"

namespace ifpp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCheckFailed = 3;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Deterministic greyscale test image of a coin: a bright disc with a raised
/// rim and relief on a dark background.
GrayImage synthetic_coin(std::size_t size = 64);

}  // namespace ifpp::cli
