#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>

namespace sandlab {

/// Concurrent memo table keyed by a 64-bit index. Lookups take a shared lock
/// on one of a fixed number of shards; values are never evicted.
template <class V>
class MemoCache {
public:
    std::optional<V> find(std::uint64_t key) const {
        const Shard& s = shards_[key % kShards];
        std::shared_lock lock(s.mutex);
        auto it = s.map.find(key);
        if (it == s.map.end()) return std::nullopt;
        return it->second;
    }

    void insert(std::uint64_t key, const V& value) {
        Shard& s = shards_[key % kShards];
        std::unique_lock lock(s.mutex);
        s.map.emplace(key, value);
    }

    template <class F>
    V get_or_compute(std::uint64_t key, F&& compute) {
        if (auto hit = find(key)) return *hit;
        V value = compute();
        insert(key, value);
        return value;
    }

private:
    static constexpr std::size_t kShards = 16;

    struct Shard {
        mutable std::shared_mutex mutex;
        std::unordered_map<std::uint64_t, V> map;
    };

    std::array<Shard, kShards> shards_;
};

}  // namespace sandlab
