#include "hawkes_mdl/rng.hpp"

#include <cmath>

namespace hawkes_mdl {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

SeedSpec SeedSpec::child(std::uint64_t index) const {
    SeedSpec out = *this;
    out.path.push_back(index);
    return out;
}

SeedSpec SeedSpec::child(std::initializer_list<std::uint64_t> indices) const {
    SeedSpec out = *this;
    out.path.insert(out.path.end(), indices.begin(), indices.end());
    return out;
}

std::uint64_t SeedSpec::stream_seed() const noexcept {
    std::uint64_t h = mix64(master ^ 0x6a09e667f3bcc909ULL);
    // Length-prefixed so that {1} and {1, 0} never collide by construction.
    h = mix64(h ^ mix64(path.size()));
    for (std::uint64_t p : path) {
        h = mix64(h ^ mix64(p + 0x3c6ef372fe94f82bULL));
    }
    return h;
}

double Rng::uniform() {
    for (;;) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        if (u > 0.0) {
            return u;
        }
    }
}

double Rng::exponential(double rate) { return -std::log(uniform()) / rate; }

std::uint64_t Rng::below(std::uint64_t n) {
    // Lemire's nearly-divisionless rejection method.
    std::uint64_t x = engine_();
    u128 m = static_cast<u128>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        const std::uint64_t threshold = -n % n;
        while (low < threshold) {
            x = engine_();
            m = static_cast<u128>(x) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace hawkes_mdl
