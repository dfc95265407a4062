#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace odmts {

// Open/closed state of every directed hub-to-hub bus leg. Indexed by hub
// positions 0..H-1; self legs stay closed by construction.
class Design {
public:
    Design() = default;
    explicit Design(int num_hubs) : h_(num_hubs), open_(static_cast<std::size_t>(num_hubs) * num_hubs, 0) {}

    int num_hubs() const { return h_; }

    bool open(int h, int l) const { return open_[idx(h, l)] != 0; }

    void set(int h, int l, bool v) {
        assert(h != l);
        open_[idx(h, l)] = v ? 1 : 0;
    }

    int count_open() const {
        int c = 0;
        for (auto b : open_) c += b;
        return c;
    }

    bool subset_of(const Design& other) const {
        assert(h_ == other.h_);
        for (std::size_t i = 0; i < open_.size(); ++i)
            if (open_[i] && !other.open_[i]) return false;
        return true;
    }

    bool operator==(const Design&) const = default;
    auto operator<=>(const Design&) const = default;

private:
    std::size_t idx(int h, int l) const {
        assert(h >= 0 && h < h_ && l >= 0 && l < h_);
        return static_cast<std::size_t>(h) * h_ + l;
    }

    int h_ = 0;
    std::vector<std::uint8_t> open_;
};

inline bool degree_balanced(const Design& d) {
    const int H = d.num_hubs();
    for (int h = 0; h < H; ++h) {
        int out = 0, in = 0;
        for (int l = 0; l < H; ++l) {
            if (l == h) continue;
            out += d.open(h, l);
            in += d.open(l, h);
        }
        if (out != in) return false;
    }
    return true;
}

// Off-diagonal legs in row-major order define the bit layout of design masks.
inline int leg_count(int num_hubs) { return num_hubs * (num_hubs - 1); }

inline std::pair<int, int> leg_pair(int num_hubs, int leg) {
    assert(leg >= 0 && leg < leg_count(num_hubs));
    int h = leg / (num_hubs - 1);
    int rem = leg % (num_hubs - 1);
    int l = rem < h ? rem : rem + 1;
    return {h, l};
}

inline int leg_position(int num_hubs, int h, int l) {
    assert(h != l);
    return h * (num_hubs - 1) + (l < h ? l : l - 1);
}

inline Design design_from_mask(int num_hubs, std::uint64_t mask) {
    Design d(num_hubs);
    const int legs = leg_count(num_hubs);
    for (int k = 0; k < legs; ++k)
        if (mask >> k & 1) {
            auto [h, l] = leg_pair(num_hubs, k);
            d.set(h, l, true);
        }
    return d;
}

inline std::uint64_t mask_from_design(const Design& d) {
    const int H = d.num_hubs();
    std::uint64_t mask = 0;
    for (int k = 0; k < leg_count(H); ++k) {
        auto [h, l] = leg_pair(H, k);
        if (d.open(h, l)) mask |= std::uint64_t{1} << k;
    }
    return mask;
}

// Every design with in-degree equal to out-degree at each hub, in increasing
// mask order. Exhaustive over 2^(H*(H-1)) subsets, so H is capped.
inline std::vector<std::uint64_t> balanced_design_masks(int num_hubs) {
    const int legs = leg_count(num_hubs);
    if (legs > 30)
        throw std::invalid_argument("balanced_design_masks: too many hubs for exhaustive enumeration ("
                                    + std::to_string(num_hubs) + ")");
    // per-leg degree contribution, checked with small counters
    std::vector<std::uint64_t> out;
    const std::uint64_t total = std::uint64_t{1} << legs;
    std::vector<int> deg(static_cast<std::size_t>(num_hubs), 0);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (int h = 0; h < num_hubs; ++h) deg[h] = 0;
        for (int k = 0; k < legs; ++k)
            if (mask >> k & 1) {
                auto [h, l] = leg_pair(num_hubs, k);
                ++deg[h];
                --deg[l];
            }
        bool ok = true;
        for (int h = 0; h < num_hubs; ++h)
            if (deg[h] != 0) { ok = false; break; }
        if (ok) out.push_back(mask);
    }
    return out;
}

} // namespace odmts
