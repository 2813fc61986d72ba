#pragma once

namespace magtrace {

// Kernel execution policy: every OpenMP kernel keeps a serial reference path.
enum class Execution { serial, parallel };

}  // namespace magtrace
