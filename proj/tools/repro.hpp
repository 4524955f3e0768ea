#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace twistlab::cli {

struct ReproItem {
    std::string id;
    std::string expected;
    std::string actual;
    bool pass = false;
    std::string description;
};

struct ReproOptions {
    /// Corrupt the Cayley table used by the group-verification item.
    bool inject_fault = false;
};

std::vector<ReproItem> run_repro(const ReproOptions& opt);

/// {items: [...], passed, failed}
nlohmann::ordered_json repro_json(const std::vector<ReproItem>& items);

} // namespace twistlab::cli
