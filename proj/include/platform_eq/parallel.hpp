#pragma once

#include <optional>

namespace peq {

// Every data-parallel kernel takes an Exec tag. Serial is the reference
// implementation; Parallel must produce bit-identical results.
enum class Exec { Serial, Parallel };

// PLATFORM_EQ_JOBS wins over the requested value; 0 means the OpenMP default.
int resolve_jobs(std::optional<int> requested);
void set_jobs(int jobs);
int max_jobs();

}  // namespace peq
