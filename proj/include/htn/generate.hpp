#pragma once

#include <string>

#include "htn/model.hpp"

namespace htn {

struct GeneratedProblem {
    std::string domain_text;
    std::string problem_text;
};

// Deterministic logistics instance: `cities` road chains of
// `locs_per_city` locations with one truck each, one plane on an
// air-link chain between the cities, and one deliver task per box.
// Solvable by construction; identical bytes for identical arguments.
GeneratedProblem gen_logistics(int boxes, int cities, int locs_per_city, unsigned seed);

}  // namespace htn
