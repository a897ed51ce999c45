#pragma once

#include <cstddef>
#include <cstdint>

namespace hsel {

struct SelectorResult {
    std::size_t chosen = 0;
    std::uint64_t queries = 0;       // counter delta over the call
    std::size_t samples_used = 0;
};

}  // namespace hsel
