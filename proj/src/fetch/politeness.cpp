#include "trackerlink/fetch/politeness.hpp"

#include <algorithm>

namespace trackerlink::fetch {

PolitenessGate::PolitenessGate(PolitenessPolicy policy) : policy_(policy) {
  if (policy_.global_concurrency == 0) policy_.global_concurrency = 1;
}

PolitenessGate::Permit::Permit(Permit&& other) noexcept : gate_(other.gate_), key_(std::move(other.key_)) {
  other.gate_ = nullptr;
}

PolitenessGate::Permit::~Permit() {
  if (gate_) gate_->release(key_);
}

PolitenessGate::Permit PolitenessGate::acquire(const std::string& key) {
  std::unique_lock lock(mu_);
  for (;;) {
    auto lim = key_limits_.find(key);
    const std::size_t limit = lim == key_limits_.end() ? 1 : lim->second;
    auto busy = in_flight_.find(key);
    if ((busy == in_flight_.end() || busy->second < limit) && active_ < policy_.global_concurrency) {
      auto it = last_finished_.find(key);
      const auto ready = it == last_finished_.end() ? Clock::time_point{} : it->second + policy_.per_domain_spacing;
      if (Clock::now() >= ready) break;
      cv_.wait_until(lock, ready);
      continue;
    }
    cv_.wait(lock);
  }
  ++in_flight_[key];
  ++active_;
  return Permit(this, key);
}

void PolitenessGate::set_key_limit(const std::string& key, std::size_t limit) {
  std::lock_guard lock(mu_);
  key_limits_[key] = std::max<std::size_t>(1, limit);
}

void PolitenessGate::release(const std::string& key) {
  {
    std::lock_guard lock(mu_);
    if (--in_flight_[key] == 0) in_flight_.erase(key);
    --active_;
    last_finished_[key] = Clock::now();
  }
  cv_.notify_all();
}

}  // namespace trackerlink::fetch
