#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kisched/graph.hpp"

namespace kisched {

/// Header of a dataset file: '#'-prefixed key=value lines ahead of the records.
struct DatasetMeta {
    std::string family;           // "er" | "ba"
    int n = 0;
    std::string split;            // "train" | "val" | "test"
    std::uint64_t count = 0;
    std::uint64_t master_seed = 0;
    std::vector<double> params;   // p values (er) or m values (ba), cycled per record
};

struct Dataset {
    std::optional<DatasetMeta> meta;
    std::vector<GraphRecord> records;
};

void save_dataset(const Dataset& ds, const std::string& path);
Dataset load_dataset(const std::string& path);

} // namespace kisched
