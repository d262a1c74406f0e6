#pragma once
#include <string>
#include <vector>
#include "qjf/partitions.hpp"

namespace qjf {

// shared truncation and fitting knobs for the command-line entry points
struct SuiteConfig {
    int qorder = 12;
    int zorder = 8;
    int xorder = 5;
    int margin = 10;
};

// names of the runnable verification bundles, in display order
const std::vector<std::string>& suite_names();

// run one bundle; the returned checks are sorted by label
JetReport run_suite(const std::string& name, const SuiteConfig& cfg);

}  // namespace qjf
