#pragma once

namespace pnpfv {

/// Selects the OpenMP kernel or its serial reference. Both produce bitwise
/// identical results; the serial path is kept for testing and benchmarks.
enum class Execution { serial, parallel };

}  // namespace pnpfv
