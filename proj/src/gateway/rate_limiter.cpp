#include "bridge/gateway/gateway.hpp"
#include "bridge/util/error.hpp"

#include <thread>

namespace bridge::gateway {

namespace {

class SteadyClock : public Clock {
 public:
  std::chrono::steady_clock::time_point now() const override { return std::chrono::steady_clock::now(); }
  void sleep_until(std::chrono::steady_clock::time_point t) override { std::this_thread::sleep_until(t); }
};

}  // namespace

std::shared_ptr<Clock> system_clock() {
  static auto clock = std::make_shared<SteadyClock>();
  return clock;
}

RateLimiter::RateLimiter(std::size_t limit, std::chrono::milliseconds interval, std::shared_ptr<Clock> clock)
    : limit_(limit), interval_(interval), clock_(std::move(clock)) {
  if (limit_ == 0) throw Error(ErrorKind::Config, "rate limit must allow at least one request");
}

std::chrono::steady_clock::time_point RateLimiter::acquire() {
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    slot = clock_->now();
    if (slots_.size() == limit_) slot = std::max(slot, slots_.front() + interval_);
    if (!slots_.empty()) slot = std::max(slot, slots_.back());
    slots_.push_back(slot);
    if (slots_.size() > limit_) slots_.erase(slots_.begin());
  }
  if (slot > clock_->now()) clock_->sleep_until(slot);
  return slot;
}

}  // namespace bridge::gateway
