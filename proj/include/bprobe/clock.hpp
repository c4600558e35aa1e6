#pragma once

#include <atomic>
#include <cstdint>

namespace bprobe {

/// Time source for campaigns and harness services. Simulated mode advances
/// only through explicit sleeps, letting day-scale rate-limit schedules run
/// in milliseconds of wall time.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::int64_t now_ms() const = 0;
    virtual void sleep_ms(std::int64_t ms) = 0;
};

class SimulatedClock final : public Clock {
public:
    explicit SimulatedClock(std::int64_t start_ms = 0) : now_(start_ms) {}

    std::int64_t now_ms() const override { return now_.load(); }

    void sleep_ms(std::int64_t ms) override {
        if (ms > 0) now_ += ms;
    }

    void advance_to(std::int64_t t_ms) {
        std::int64_t cur = now_.load();
        while (t_ms > cur && !now_.compare_exchange_weak(cur, t_ms)) {
        }
    }

private:
    std::atomic<std::int64_t> now_;
};

/// Real time, behind an explicit opt-in flag.
class WallClock final : public Clock {
public:
    std::int64_t now_ms() const override;
    void sleep_ms(std::int64_t ms) override;
};

} // namespace bprobe
