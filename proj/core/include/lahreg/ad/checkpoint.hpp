#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lahreg::ad {

struct NamedArray {
    std::string name;
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<double> values;
};

// Flat binary container: a little-endian u64 header length, a JSON header
// listing (name, rows, cols, byte offset) per array, then the raw
// little-endian float64 payload.
void save_arrays(const std::string& path, const std::vector<NamedArray>& arrays);
std::vector<NamedArray> load_arrays(const std::string& path);

}  // namespace lahreg::ad
