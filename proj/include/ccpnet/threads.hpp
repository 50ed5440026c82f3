#pragma once

namespace ccpnet {

// Execution mode for the data-parallel kernels. Every parallel kernel has a
// serial twin that produces identical results; tests compare them and the
// benchmark times them.
enum class Exec { Serial, Parallel };

// Number of workers the parallel kernels will use. Honors CCPNET_THREADS
// when set, otherwise the OpenMP default (1 without OpenMP).
int worker_threads();

// Applies the CCPNET_THREADS cap process-wide. Called once by the CLI.
void apply_thread_cap_from_env();

}  // namespace ccpnet
