#include "canarypack/rng.hpp"

#include <stdexcept>

namespace canarypack {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t derive_key(std::uint64_t base, std::string_view label) {
    return mix64(mix64(base + kGolden) ^ fnv1a64(label));
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::string_view label)
    : key_(derive_key(seed, label)) {}

RngStream RngStream::substream(std::string_view label) const {
    return RngStream(derive_key(key_, label));
}

RngStream RngStream::substream(std::string_view label, std::uint64_t index) const {
    return RngStream(mix64(derive_key(key_, label) + kGolden * (index + 1)));
}

std::uint64_t RngStream::next_u64() {
    ++counter_;
    return mix64(key_ + kGolden * counter_);
}

double RngStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: n must be positive");
    if ((n & (n - 1)) == 0) return next_u64() & (n - 1);
    // Rejection sampling over the largest multiple of n below 2^64.
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= threshold) return r % n;
    }
}

std::int64_t RngStream::next_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("next_int: empty range");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_below(span));
}

bool RngStream::next_bernoulli(double p) {
    return next_unit() < p;
}

std::size_t RngStream::next_categorical(std::span<const double> probabilities) {
    if (probabilities.empty())
        throw std::invalid_argument("next_categorical: no outcomes");
    double u = next_unit();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < probabilities.size(); ++k) {
        acc += probabilities[k];
        if (u < acc) return k;
    }
    return probabilities.size() - 1;
}

std::vector<std::size_t> RngStream::sample_indices(std::size_t n, std::size_t k) {
    if (k > n) throw std::invalid_argument("sample_indices: k exceeds n");
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<std::size_t> drawn;
    drawn.reserve(k);
    // Partial Fisher-Yates from the front; draw order is part of the contract.
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(next_below(n - i));
        std::swap(pool[i], pool[j]);
        drawn.push_back(pool[i]);
    }
    return drawn;
}

std::string seed_digest(std::uint64_t seed) {
    std::uint64_t d = mix64(seed ^ 0xC0FFEE5EEDF00Dull);
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[d & 0xF];
        d >>= 4;
    }
    return out;
}

} // namespace canarypack
