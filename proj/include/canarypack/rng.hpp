#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace canarypack {

// Deterministic counter-based random stream. The state is a 64-bit key derived
// from (seed, label) plus a draw counter; output i is a SplitMix64-style mix of
// key + i * golden-ratio increment. Only unsigned 64-bit arithmetic is used, so
// identical (seed, label) produce identical sequences on every platform.
//
// Labels carve independent substreams out of one user-facing seed:
//   RngStream(seed, "targets"), rng.substream("shuffle"), rng.substream("trial", i)
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label);

    // Derived stream; independent of this stream's draw position.
    RngStream substream(std::string_view label) const;
    RngStream substream(std::string_view label, std::uint64_t index) const;

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double next_unit();

    // Uniform on {0, ..., n-1}, unbiased via rejection. n must be > 0.
    std::uint64_t next_below(std::uint64_t n);

    // Uniform on {lo, ..., hi} inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi);

    bool next_bernoulli(double p);

    // Index drawn from a discrete distribution given by non-negative weights
    // summing to ~1; any leftover mass falls on the last index.
    std::size_t next_categorical(std::span<const double> probabilities);

    template <typename T>
    void shuffle(std::vector<T>& items) {
        if (items.size() < 2) return;
        for (std::size_t i = items.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(next_below(i + 1));
            std::swap(items[i], items[j]);
        }
    }

    // First k entries of a random permutation of {0, ..., n-1}: a seeded draw
    // without replacement, in draw order.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

    std::uint64_t key() const { return key_; }

private:
    RngStream(std::uint64_t key) : key_(key) {}

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

// 16-hex-digit fingerprint of a seed, for audit trails that must not reveal
// the seed itself in plain form. Not a cryptographic commitment.
std::string seed_digest(std::uint64_t seed);

} // namespace canarypack
