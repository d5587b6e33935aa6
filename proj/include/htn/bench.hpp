#pragma once

#include <string>
#include <vector>

#include "htn/model.hpp"

namespace htn {

struct BenchRow {
    int boxes = 0;
    int cities = 0;
    int locs_per_city = 0;
    std::string engine;
    std::string result;     // solved | no-solution | budget | error
    bool validated = false;
    double wall_seconds = 0.0;
    SearchStats stats;
    int plan_length = 0;
};

struct BenchReport {
    std::vector<BenchRow> rows;  // sorted by the swept size parameter

    std::string to_text() const;
    std::string to_json() const;
};

// Sweeps the box count 1..max_boxes over generated logistics problems
// and runs the named engine ("state" or "plan") on each. A failing row
// is recorded and the sweep continues.
BenchReport run_bench(int max_boxes, int cities, int locs_per_city, unsigned seed,
                      const std::string& engine, const Budget& budget);

}  // namespace htn
