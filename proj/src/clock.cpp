#include "bprobe/clock.hpp"

#include <chrono>
#include <thread>

namespace bprobe {

std::int64_t WallClock::now_ms() const {
    using namespace std::chrono;
    return duration_cast<milliseconds>(steady_clock::now().time_since_epoch())
        .count();
}

void WallClock::sleep_ms(std::int64_t ms) {
    if (ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

} // namespace bprobe
