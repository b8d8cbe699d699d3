#pragma once

namespace carleson {

// Execution policy for the data-parallel kernels. `serial` is the reference
// path (plain loops, no spatial index); `parallel` is the OpenMP path.
// Results must agree bit-exactly for max-reductions and to ~1e-12 for sums;
// tests and tools/bench_kernels compare the two.
enum class Exec { serial, parallel };

} // namespace carleson
