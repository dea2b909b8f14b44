#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vsrsynth::cli {

/// Entry point behind the `vsrsynth` executable. `args[0]` is the program
/// name. Returns 0 on success, 1 on processing failure (structured JSON error
/// on `err`), 2 on usage errors. The last line written to `out` on success is
/// a JSON run summary.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vsrsynth::cli
