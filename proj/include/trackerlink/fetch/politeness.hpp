#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <map>
#include <mutex>
#include <string>

namespace trackerlink::fetch {

struct PolitenessPolicy {
  std::chrono::milliseconds per_domain_spacing{2000};
  std::size_t global_concurrency = 8;
};

/// Admission control shared by every fetcher: one request in flight per
/// registrable domain, a minimum gap between requests to the same domain,
/// and a global cap.
class PolitenessGate {
 public:
  explicit PolitenessGate(PolitenessPolicy policy = {});

  class Permit {
   public:
    Permit(Permit&& other) noexcept;
    Permit& operator=(Permit&&) = delete;
    Permit(const Permit&) = delete;
    ~Permit();

   private:
    friend class PolitenessGate;
    Permit(PolitenessGate* gate, std::string key) : gate_(gate), key_(std::move(key)) {}
    PolitenessGate* gate_;
    std::string key_;
  };

  /// Blocks until a request to `key` may start.
  Permit acquire(const std::string& key);

  /// Allows up to `limit` concurrent requests for one key (the archive gets 2).
  void set_key_limit(const std::string& key, std::size_t limit);

  const PolitenessPolicy& policy() const noexcept { return policy_; }

 private:
  void release(const std::string& key);

  using Clock = std::chrono::steady_clock;
  PolitenessPolicy policy_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::string, std::size_t> in_flight_;
  std::map<std::string, std::size_t> key_limits_;
  std::map<std::string, Clock::time_point> last_finished_;
  std::size_t active_ = 0;
};

}  // namespace trackerlink::fetch
