#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace topicatlas {

// 64-bit FNV-1a; used to pin models to the corpus they were trained on.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string hex64(std::uint64_t value);

}  // namespace topicatlas
