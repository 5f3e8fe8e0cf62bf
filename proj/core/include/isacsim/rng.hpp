#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>

namespace isacsim {

/// Counter-based deterministic random stream (splitmix64 core).
///
/// Streams are derived from an explicit key, so any draw in the simulator is
/// reproducible from (master seed, trial index, draw kind, entity indices)
/// alone, independent of evaluation order and thread scheduling.
class RngStream {
  public:
    RngStream() = default;

    explicit RngStream(std::initializer_list<std::uint64_t> key) {
        for (std::uint64_t w : key) absorb(w);
    }

    void absorb(std::uint64_t w) {
        state_ = mix64(state_ + 0x9e3779b97f4a7c15ULL + w);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (pair cached).
    double normal();

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance);

    /// Unit-modulus symbol with phase uniform on [0, 2pi).
    std::complex<double> unit_symbol();

  private:
    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Draw categories keying the per-quantity substreams.
enum class Draw : std::uint64_t {
    UePlacement = 1,
    TargetPlacement = 2,
    CommNlos = 3,
    Reflection = 4,
    SensingSymbol = 5,
    CommSymbol = 6,
    GatewayNoise = 7,
    MusicNoise = 8,
    KmeansInit = 9,
    SeedEntropy = 10,
};

inline RngStream substream(std::uint64_t master_seed, std::uint64_t trial, Draw kind,
                           std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0,
                           std::uint64_t d = 0) {
    RngStream s;
    s.absorb(master_seed);
    s.absorb(trial);
    s.absorb(static_cast<std::uint64_t>(kind));
    s.absorb(a);
    s.absorb(b);
    s.absorb(c);
    s.absorb(d);
    return s;
}

}  // namespace isacsim
