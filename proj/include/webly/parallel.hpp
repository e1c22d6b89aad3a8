#pragma once

namespace webly {

// n <= 0 restores the machine default. Dynamic team sizing is disabled so the
// same run always uses the same decomposition.
void set_threads(int n);
int max_threads();

}  // namespace webly
