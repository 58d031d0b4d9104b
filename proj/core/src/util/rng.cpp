#include "lahreg/util/rng.hpp"

namespace lahreg::util {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view tag) {
    return derive_seed(root, fnv1a(tag));
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t salt) {
    SplitMix64 mix(root ^ (salt + 0x9e3779b97f4a7c15ull));
    mix.next();
    return mix.next();
}

}  // namespace lahreg::util
