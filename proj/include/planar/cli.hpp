#pragma once

// Placeholder; full command set filled in with the modules.

namespace planar::cli {

inline int run(int, char**) { return 2; }

}  // namespace planar::cli
