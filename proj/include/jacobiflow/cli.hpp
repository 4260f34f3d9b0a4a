#pragma once

/// @file cli.hpp
/// @brief The `jacobiflow` command-line front end.
///
///   jacobiflow geodesic   --model sphere --x0 0,0 --v0 1,0 --t-max 3 --out geo.csv
///   jacobiflow jacobi     --model half-plane --x0 0,1 --v0 1,0 --J0 0,0 --nablaJ0 0,1
///   jacobiflow curvature  --model sphere --x0 0.3,0
///   jacobiflow torsion    --model torsion-demo --beta 0.5 --x0 0,0
///   jacobiflow verify     --suite all --seed 42 --parallel 4
///
/// Every command prints one summary line on stdout.

#include <iosfwd>
#include <string>
#include <vector>

namespace jacobiflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1; // left the domain, integration failure, I/O
inline constexpr int kExitVerifyFailed = 2;
inline constexpr int kExitUsage = 64;

/// `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

int run(int argc, const char *const *argv);

} // namespace jacobiflow::cli
