// Heap accounting through replaced global operator new/delete. Only linked
// into binaries that measure memory.
#pragma once

#include <cstddef>

namespace tmt::alloc {

std::size_t current() noexcept;
std::size_t peak() noexcept;
// Restarts the high-water mark from the current usage.
void reset_peak() noexcept;

}  // namespace tmt::alloc
