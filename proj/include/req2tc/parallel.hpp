#pragma once

namespace req2tc {

/// Every data-parallel kernel takes this switch. `Serial` is the reference
/// path the tests compare the OpenMP path against; both must produce
/// identical results.
enum class Execution { Serial, Parallel };

}  // namespace req2tc
