#pragma once

namespace longtail {

// Selects between an OpenMP kernel and its serial reference. Both paths
// produce bitwise identical results.
enum class Execution { kSerial, kParallel };

// Caps OpenMP threads; n <= 0 leaves the runtime default.
void SetThreadCount(int n);
int ThreadCount();

}  // namespace longtail
