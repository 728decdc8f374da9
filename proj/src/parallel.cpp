#include "platform_eq/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

#include "platform_eq/model.hpp"

namespace peq {

int resolve_jobs(std::optional<int> requested) {
    if (const char* env = std::getenv("PLATFORM_EQ_JOBS"); env && *env) {
        try {
            std::size_t pos = 0;
            int v = std::stoi(env, &pos);
            if (pos == std::string(env).size() && v >= 0) return v;
        } catch (const std::exception&) {
        }
        throw InvalidArgument(std::string("PLATFORM_EQ_JOBS is not a non-negative integer: ") + env);
    }
    if (requested && *requested < 0) throw InvalidArgument("--jobs must be >= 0");
    return requested.value_or(0);
}

void set_jobs(int jobs) {
    if (jobs > 0) omp_set_num_threads(jobs);
}

int max_jobs() { return omp_get_max_threads(); }

}  // namespace peq
