#pragma once

namespace qrem::cli {

// Exit codes: 0 success, 2 invalid configuration, 3 numerical engine failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitEngine = 3;

int run(int argc, char** argv);

}  // namespace qrem::cli
